"""
Error Handling Utilities

Decorators and validators shared by the command implementations so every
subcommand maps failures to the same exit codes and log lines.
"""

import functools
import logging
from typing import Any, Callable, Dict

from app.core.exceptions import (
    FeasibleSetError,
    LXMixerError,
    SimulationSizeError,
    ValidationFailedError,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_DOMAIN_ERROR = 2
EXIT_UNEXPECTED = 3


def handle_command_errors(operation_name: str = "command"):
    """
    Decorator for cmd_* functions returning an exit code

    Args:
        operation_name: Name of the operation for logging
    """
    def decorator(func: Callable[..., int]) -> Callable[..., int]:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> int:
            try:
                return func(*args, **kwargs)

            except ValidationFailedError as e:
                leakage = f" (max leakage {e.max_leakage:.3e})" if e.max_leakage is not None else ""
                logger.error(f"Validation failed during {operation_name}: {e.detail}{leakage}")
                return EXIT_VALIDATION_FAILED

            except LXMixerError as e:
                logger.error(f"{type(e).__name__} during {operation_name}: {e.detail}")
                return EXIT_DOMAIN_ERROR

            except (OSError, ValueError) as e:
                logger.error(f"Invalid input during {operation_name}: {str(e)}")
                return EXIT_DOMAIN_ERROR

            except Exception as e:
                logger.exception(f"Unexpected error during {operation_name}: {str(e)}")
                return EXIT_UNEXPECTED

        return wrapper
    return decorator


def handle_trial_errors(operation_name: str = "trial"):
    """
    Decorator for per-trial work in batch harnesses
    Returns an error record instead of raising, so one bad trial does not
    abort the sweep
    """
    def decorator(func: Callable) -> Callable:
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)

            except LXMixerError as e:
                logger.warning(f"Failed {operation_name}: {e.detail}")
                return {"error": e.detail, "type": (e.code or "domain").upper()}

            except Exception as e:
                logger.error(f"Unexpected error in {operation_name}: {str(e)}")
                return {"error": str(e), "type": "UNEXPECTED_ERROR"}

        return wrapper
    return decorator


def validate_bitstring(bits: str, n: int = None, parameter_name: str = "state") -> None:
    """
    Raises:
        FeasibleSetError: If bits is not a 0/1 string (of length n when given)
    """
    if not bits or any(c not in "01" for c in bits):
        raise FeasibleSetError(f"{parameter_name} must be a nonempty 0/1 string, got {bits!r}")
    if n is not None and len(bits) != n:
        raise FeasibleSetError(f"{parameter_name} has length {len(bits)}, expected {n}")


def validate_qubit_count(n: int, limit: int = None, parameter_name: str = "n") -> None:
    if n is None or n < 1:
        raise FeasibleSetError(f"{parameter_name} must be a positive qubit count, got {n}")
    if limit is not None and n > limit:
        raise SimulationSizeError(n, limit)


def validate_positive_int(value: int, parameter_name: str) -> None:
    if value is None or value < 1:
        raise LXMixerError(f"{parameter_name} must be a positive integer, got {value}")


class ErrorSummary:
    """Per-type failure counts for batch harnesses"""

    def __init__(self):
        self.errors_by_type: Dict[str, int] = {}
        self.total_errors = 0

    def add_error(self, error_type: str):
        self.errors_by_type[error_type] = self.errors_by_type.get(error_type, 0) + 1
        self.total_errors += 1

    def get_summary(self) -> Dict[str, Any]:
        return {
            "total_errors": self.total_errors,
            "errors_by_type": self.errors_by_type,
            "most_common_error": max(self.errors_by_type.items(), key=lambda x: x[1])[0] if self.errors_by_type else None
        }

    def log_summary(self, operation_name: str = "operation"):
        if self.total_errors > 0:
            logger.warning(f"{operation_name} completed with {self.total_errors} errors: {self.errors_by_type}")
        else:
            logger.info(f"{operation_name} completed successfully with no errors")
