"""Exception hierarchy.

Every error carries a stable ``code`` and renders to the ``{"error", "message"}``
payload the CLI prints on failure.
"""

from typing import Any, Dict, Optional, Sequence


class ApwError(ValueError):
    code = "apw_error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"error": self.code, "message": self.message}
        for key, value in self.details.items():
            if value is not None:
                payload[key] = value
        return payload


class GridAlignmentError(ApwError):
    code = "grid_alignment"

    def __init__(self, axis: int, offset: float, step: float):
        super().__init__(
            f"shift component {offset!r} on axis {axis} is not a multiple of the step {step!r}",
            axis=axis,
        )
        self.axis = axis


class StepMismatchError(ApwError):
    code = "step_mismatch"


class DimensionMismatchError(ApwError):
    code = "dimension_mismatch"


class BasisMismatchError(ApwError):
    code = "basis_mismatch"


class AliasError(ApwError):
    code = "alias"

    def __init__(self, label: Sequence[int], torus_n: int):
        super().__init__(
            f"label {tuple(label)} aliases on a torus grid of size {torus_n} (need |a_i| < {torus_n / 2:g})",
            label=list(label),
            torus_n=torus_n,
        )


class NotApplicableError(ApwError):
    code = "not_applicable"


class BudgetError(ApwError):
    code = "budget"

    def __init__(self, message: str, achievable_tol: float):
        super().__init__(message, achievable_tol=achievable_tol)
        self.achievable_tol = achievable_tol


class SingularFiberError(ApwError):
    code = "singular_fiber"

    def __init__(self, message: str, xi: Optional[Sequence[float]] = None):
        super().__init__(message, xi=None if xi is None else [float(v) for v in xi])
        self.xi = xi


class WindowTooSmallError(ApwError):
    code = "window_too_small"

    def __init__(self, message: str, drift: float, window_radius: int):
        super().__init__(message, drift=drift, window_radius=window_radius)
        self.drift = drift
        self.window_radius = window_radius


class SpecParseError(ApwError):
    code = "parse_error"

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message, line=line, field=field)
        self.line = line
        self.field = field


class SpecValidationError(ApwError):
    code = "validation_error"

    def __init__(self, message: str, invariant: str):
        super().__init__(message, invariant=invariant)
        self.invariant = invariant
