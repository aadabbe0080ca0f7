"""Custom exceptions for ncf-reliability."""

from typing import Optional


class NCFReliabilityError(Exception):
    """Base exception for all ncf-reliability errors."""

    pass


class ConfigurationError(NCFReliabilityError):
    """Error in configuration or parameters."""

    pass


class DatasetError(NCFReliabilityError):
    """Error reading or validating a rating file."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}"
            location += ": "
        super().__init__(f"{location}{message}")


class EmptyDatasetError(DatasetError):
    """The rating sequence holds no records."""

    def __init__(self, path: Optional[str] = None):
        super().__init__("empty dataset", path=path)


class ShapeError(NCFReliabilityError):
    """Operands have incompatible shapes or out-of-range indices."""

    pass


class NumericalError(NCFReliabilityError):
    """A NaN or infinite value reached a layer boundary."""

    pass


class StateError(NCFReliabilityError):
    """An operation was called out of order (e.g. backward without forward)."""

    pass


class CheckpointError(NCFReliabilityError):
    """Error reading or writing a parameter checkpoint."""

    pass


class UnsupportedModelError(NCFReliabilityError):
    """The requested operation is not defined for this model kind."""

    pass
