from .padic import PrecisionError


class ConfigError(ValueError):
    """Invalid job parameters (p, N, k, precision, ...)."""


class InvariantError(RuntimeError):
    """An internal mathematical invariant failed; indicates a bug, not bad input."""


class RouteDisagreement(InvariantError):
    def __init__(self, index: int, detail: str = ""):
        self.index = index
        super().__init__(f"exponential and quotient routes differ at coefficient {index}{detail}")


__all__ = ["ConfigError", "InvariantError", "PrecisionError", "RouteDisagreement"]
