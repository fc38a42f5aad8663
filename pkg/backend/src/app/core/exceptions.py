from typing import Optional


class LXMixerError(ValueError):
    def __init__(self, detail: str, code: Optional[str] = None):
        super().__init__(detail)
        self.detail = detail
        self.code = code


class DimensionMismatchError(LXMixerError):
    def __init__(self, expected: int, actual: int, what: str = "qubit count"):
        super().__init__(f"{what} mismatch: expected {expected}, got {actual}", code="dimension")
        self.expected = expected
        self.actual = actual


class InvalidPauliError(LXMixerError):
    def __init__(self, detail: str):
        super().__init__(detail, code="pauli")


class FeasibleSetError(LXMixerError):
    def __init__(self, detail: str):
        super().__init__(detail, code="feasible_set")


class EnumerationLimitError(LXMixerError):
    def __init__(self, size: int, limit: int):
        super().__init__(
            f"refusing to enumerate a group with {size} generators (limit {limit})",
            code="enumeration_limit",
        )


class RestrictionError(LXMixerError):
    def __init__(self, detail: str):
        super().__init__(detail, code="restriction")


class SelectionError(LXMixerError):
    def __init__(self, detail: str):
        super().__init__(detail, code="selection")


class LayoutMismatchError(LXMixerError):
    def __init__(self, detail: str):
        super().__init__(detail, code="layout")


class SimulationSizeError(LXMixerError):
    def __init__(self, n: int, limit: int):
        super().__init__(f"{n} qubits exceeds the simulation cap of {limit}", code="simulation_size")


class PlanFormatError(LXMixerError):
    def __init__(self, detail: str):
        super().__init__(detail, code="plan_format")


class ValidationFailedError(LXMixerError):
    def __init__(self, detail: str, max_leakage: Optional[float] = None):
        super().__init__(detail, code="validation")
        self.max_leakage = max_leakage
