"""Exception types shared across the package."""

from __future__ import annotations


class GcwwError(Exception):
    """Base class for computational errors raised by the library.

    Every subclass carries a short machine-readable ``code`` that the CLI
    reports in its structured JSON error object.
    """

    code = "COMPUTATION_ERROR"

    def __init__(self, message: str, **details: object) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        out = {"code": self.code, "message": self.message}
        if self.details:
            out["details"] = {k: _jsonable(v) for k, v in self.details.items()}
        return out


def _jsonable(value: object) -> object:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return repr(value)


class SingularPointError(GcwwError):
    """The parameter point sits on (or too close to) a singular curve."""

    code = "SINGULAR_POINT"


class StablePointError(GcwwError):
    """An operation that needs an unstable point was handed a stable one."""

    code = "STABLE_POINT"


class SingularSylvesterError(GcwwError):
    """The 4x4 Sylvester matrix is numerically singular."""

    code = "SINGULAR_SYLVESTER"


class RootNotBracketedError(GcwwError):
    """A bisection search found no sign change in its bracket."""

    code = "ROOT_NOT_BRACKETED"


class EigensolverError(GcwwError):
    """The dense eigensolver failed to converge."""

    code = "EIGENSOLVER_FAILED"
