"""Slant immersions between almost para-Hermitian manifolds: a numerical kit."""
from .errors import GeometryError
from .models import build_example1, build_example2, build_flat_standard, block_sum_model, build_block_sum
from .neutral_linalg import NeutralSpace, Subspace, regular_hull, signature, singularity
from .para_structures import StructureField, integrability_report, nijenhuis, validate_structure
from .slant_analysis import CaseTag, ImmersedSurface, analyze_point, canonical_frame, slant_factor, slant_split

__all__ = [
    "CaseTag",
    "GeometryError",
    "ImmersedSurface",
    "NeutralSpace",
    "StructureField",
    "Subspace",
    "analyze_point",
    "block_sum_model",
    "build_block_sum",
    "build_example1",
    "build_example2",
    "build_flat_standard",
    "canonical_frame",
    "integrability_report",
    "nijenhuis",
    "regular_hull",
    "signature",
    "singularity",
    "slant_factor",
    "slant_split",
    "validate_structure",
]
