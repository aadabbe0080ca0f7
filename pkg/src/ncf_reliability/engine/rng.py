"""Seedable random streams."""

from dataclasses import dataclass

import numpy as np

STREAMS = ("init", "shuffle", "dropout")


@dataclass
class RngStreams:
    """Independent generators so that dropout draws never perturb data order."""

    seed: int
    init: np.random.Generator
    shuffle: np.random.Generator
    dropout: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "RngStreams":
        children = np.random.SeedSequence(seed).spawn(len(STREAMS))
        generators = {name: np.random.default_rng(child) for name, child in zip(STREAMS, children)}
        return cls(seed=seed, **generators)


def fold_seeds(seed: int, folds: int) -> list[int]:
    """Derived split seeds for repeated holdout; fold 0 uses `seed` itself."""
    if folds <= 1:
        return [seed]
    extra = np.random.SeedSequence(seed).generate_state(folds - 1, dtype=np.uint32)
    return [seed] + [int(s) for s in extra]
