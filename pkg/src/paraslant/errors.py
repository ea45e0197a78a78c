class GeometryError(ValueError):
    """Base class for failures of the geometric preconditions."""

    code = "GEOMETRY_ERROR"


class SignatureError(GeometryError):
    code = "BAD_SIGNATURE"


class SingularSubspaceError(GeometryError):
    code = "SINGULAR_SUBSPACE"


class SingularTangentError(SingularSubspaceError):
    code = "SINGULAR_TANGENT"


class HullConstructionError(GeometryError):
    code = "HULL_FAILED"


class StructureError(GeometryError):
    """The (g, phi) pair violates the almost para-Hermitian axioms."""

    code = "BAD_STRUCTURE"


class ChartBoundaryError(GeometryError):
    code = "CHART_BOUNDARY"


class NotSlantError(GeometryError):
    code = "NOT_SLANT"


class NearUnitSlantError(GeometryError):
    code = "NEAR_UNIT_INCONSISTENT"


class TotallyRealError(GeometryError):
    code = "TOTALLY_REAL_NO_INDUCED"


class ModelError(GeometryError):
    code = "MODEL_BUILD"
