"""biquant: exact two-parameter quantization of finite-dimensional Lie bialgebras.

Subpackages are organized by pipeline stage: exact polynomial algebra,
admissible-graph enumeration, graph-indexed polydifferential operators, the
bialgebra deformation complex, the big-bracket validator, configuration-space
geometry with Monte-Carlo weights, and the quantization series driver.
"""

__version__ = "0.1.0"

from .bigbracket import BialgebraReport, is_lie_bialgebra
from .geometry import (
    EPS_SCHEDULE,
    MCParams,
    PropagatorCertificate,
    PropagatorParams,
    WeightEstimate,
    richardson,
    verify_propagator,
    weight,
    weight_schedule,
)
from .graphs import AdmissibleGraph, enumerate_graphs
from .gs import d_gs, d_gs1, d_gs2, fraction, hkr, square_components
from .operators import Cochain, StructTensor, compile_graph
from .poly import Monomial, Poly, TensorPoly
from .quantize import (
    AxiomResult,
    StarSeries,
    WeightTable,
    build_costar,
    build_star,
    check_axioms,
    parse_weight_table,
)

__all__ = [
    "AdmissibleGraph",
    "AxiomResult",
    "BialgebraReport",
    "Cochain",
    "EPS_SCHEDULE",
    "MCParams",
    "Monomial",
    "Poly",
    "PropagatorCertificate",
    "PropagatorParams",
    "StarSeries",
    "StructTensor",
    "TensorPoly",
    "WeightEstimate",
    "WeightTable",
    "build_costar",
    "build_star",
    "check_axioms",
    "compile_graph",
    "d_gs",
    "d_gs1",
    "d_gs2",
    "enumerate_graphs",
    "fraction",
    "hkr",
    "is_lie_bialgebra",
    "parse_weight_table",
    "quantize",
    "richardson",
    "square_components",
    "verify_propagator",
    "weight",
    "weight_schedule",
    "__version__",
]
