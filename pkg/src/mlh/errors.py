"""Exception hierarchy shared by all modules.

Every error carries a stable ``code`` string used in machine-readable
error records and an ``exit_code`` honoured by the CLI.
"""

from __future__ import annotations


class MLHError(Exception):
    code = "error"
    exit_code = 3

    def record(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DomainError(MLHError, ValueError):
    code = "domain"


class InvariantViolation(MLHError, ValueError):
    code = "invariant_violation"


class NotLightlike(MLHError):
    """Induced Gram matrix has trivial nullspace (hypersurface is non-degenerate)."""

    code = "not_lightlike"


class NotHypersurfaceRank(MLHError):
    """Induced Gram matrix has nullity >= 2."""

    code = "not_hypersurface_rank"


class ScreenConstruction(MLHError):
    code = "screen_construction"


class DegenerateChart(MLHError):
    code = "degenerate_chart"


class PreconditionError(MLHError):
    code = "precondition"


class SchemaError(MLHError):
    code = "schema"
    exit_code = 4
