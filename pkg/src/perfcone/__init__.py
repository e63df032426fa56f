"""Exact chain complexes on perfect quadratic-form cones."""

from .cone import Face, PerfectCone, faces, pad, reduce, spanning_subset
from .complexes import (
    ChainComplexQ,
    ComplexTriple,
    build_inflation_complex,
    build_matroid_complexes,
    build_perfect_complex,
    build_registry,
    build_voronoi_complex,
    differential_entry,
    exact_triple,
    format_complex,
    parse_complex,
)
from .homology import (
    BettiReport,
    LesResult,
    betti,
    les_solve,
    satake_weight0_column,
    top_weight_table,
    verify_complex,
)
from .matroid import (
    SimpleGraph,
    TURepresentation,
    deflate,
    graphic_cone,
    inflate,
    is_tu,
    matroid_coloops,
    tu_cone,
    zg_coloops,
)
from .quadform import (
    MinimalVectorSet,
    QuadraticForm,
    cone_of_form,
    is_perfect,
    load_form_catalog,
    minimal_vectors,
    principal_form,
    voronoi_neighbor,
)
from .symmetry import (
    ConeTransform,
    Orbit,
    OrbitRegistry,
    automorphisms,
    classify_orbits,
    equivalent,
    is_alternating,
    orientation_sign,
)

__version__ = "0.1.0"

__all__ = [
    "BettiReport",
    "ChainComplexQ",
    "ComplexTriple",
    "ConeTransform",
    "Face",
    "LesResult",
    "MinimalVectorSet",
    "Orbit",
    "OrbitRegistry",
    "PerfectCone",
    "QuadraticForm",
    "SimpleGraph",
    "TURepresentation",
    "automorphisms",
    "betti",
    "build_inflation_complex",
    "build_matroid_complexes",
    "build_perfect_complex",
    "build_registry",
    "build_voronoi_complex",
    "classify_orbits",
    "cone_of_form",
    "deflate",
    "differential_entry",
    "equivalent",
    "exact_triple",
    "faces",
    "format_complex",
    "graphic_cone",
    "inflate",
    "is_alternating",
    "is_perfect",
    "is_tu",
    "les_solve",
    "load_form_catalog",
    "matroid_coloops",
    "minimal_vectors",
    "orientation_sign",
    "pad",
    "parse_complex",
    "principal_form",
    "reduce",
    "satake_weight0_column",
    "spanning_subset",
    "top_weight_table",
    "tu_cone",
    "verify_complex",
    "voronoi_neighbor",
    "zg_coloops",
]
