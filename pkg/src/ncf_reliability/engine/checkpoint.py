"""Parameter checkpoints as self-describing .npz containers."""

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np

from ..exceptions import CheckpointError
from .tensors import Parameter

logger = logging.getLogger(__name__)

META_KEY = "__meta__"
FORMAT_VERSION = 1


def save_tensors(
    path: Path,
    parameters: list[Parameter],
    meta: dict[str, Any],
    buffers: dict[str, np.ndarray] | None = None,
) -> Path:
    """Write every parameter (value and Adam moments), extra buffers and metadata."""
    arrays: dict[str, np.ndarray] = {}
    for param in parameters:
        arrays[param.name] = param.value
        arrays[f"{param.name}@adam_m"] = param.adam_m
        arrays[f"{param.name}@adam_v"] = param.adam_v
    for name, buffer in (buffers or {}).items():
        arrays[f"buffer:{name}"] = buffer

    meta = {**meta, "format_version": FORMAT_VERSION,
            "tensors": {p.name: list(p.shape) for p in parameters}}
    arrays[META_KEY] = np.array(json.dumps(meta, sort_keys=True))

    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)
    logger.info(f"Wrote checkpoint: {path}")
    return path


def read_meta(path: Path) -> dict[str, Any]:
    """Read only the metadata entry of a checkpoint."""
    with _open(path) as archive:
        return json.loads(str(archive[META_KEY]))


def load_tensors(path: Path, parameters: list[Parameter]) -> dict[str, np.ndarray]:
    """Restore parameters in place; returns the stored buffers."""
    with _open(path) as archive:
        for param in parameters:
            for suffix, target in (("", "value"), ("@adam_m", "adam_m"), ("@adam_v", "adam_v")):
                key = f"{param.name}{suffix}"
                if key not in archive.files:
                    raise CheckpointError(f"{path}: missing tensor {key}")
                array = archive[key]
                if array.shape != param.shape:
                    raise CheckpointError(
                        f"{path}: tensor {key} has shape {array.shape}, expected {param.shape}"
                    )
                setattr(param, target, np.ascontiguousarray(array, dtype=np.float64))
            param.zero_grad()
        buffers = {
            key[len("buffer:"):]: archive[key]
            for key in archive.files if key.startswith("buffer:")
        }
    logger.info(f"Loaded checkpoint: {path}")
    return buffers


def _open(path: Path):
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"checkpoint not found: {path}")
    try:
        return np.load(path, allow_pickle=False)
    except (OSError, ValueError) as e:
        raise CheckpointError(f"unreadable checkpoint {path}: {e}") from e
