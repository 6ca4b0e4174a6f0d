"""Traces of exponentiated quadratic boson operators over irreducible subspaces.

Closed forms for su(2), su(3) and su(1,1) two/six-mode realizations, a
determinant-based generating trace with convergence and branch tracking, a
Fock-space oracle, and su(1,1) thermodynamics / work statistics.
"""

import os as _os

# thread caps must be in place before numpy loads its BLAS
_n = _os.environ.get("BOSONTRACE_THREADS")
if _n:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _n)


from .algebra import (
    AlgebraElement,
    AlgebraSpec,
    Group,
    SU2Irrep,
    SU3Irrep,
    SU11Irrep,
    build_algebra,
    element_from_json,
    parse_irrep,
    projector_family,
)
from .errors import (
    BosonTraceError,
    BranchPointError,
    DecompositionSingularError,
    DivergentError,
    NoConvergenceError,
    NotConvergedError,
    QuadratureError,
    SingularMatrixError,
    TruncationTooLargeError,
)
from .fock import oracle_generating, oracle_irrep_trace, su11_ladder_trace
from .numerics import contour_coefficients, gaussian_determinant_formula, gaussian_integral_oracle
from .su11 import (
    GaussFactors,
    ScanGrid,
    bg_convergence,
    bg_radial_integral,
    bg_trace,
    gauss_decompose,
    partition_function,
    scan_zeros,
    work_characteristic,
)
from .trace import (
    Status,
    TraceOutcome,
    conjugation_invariance_check,
    extract_irrep_trace,
    generating_trace,
    irrep_trace,
    irrep_trace_su2,
    irrep_trace_su3,
    irrep_trace_su11,
    series_coefficients,
)

__version__ = "0.1.0"
