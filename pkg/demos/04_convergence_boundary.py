"""Where the trace stops existing: hyperbolic to elliptic along a squeeze family."""
import numpy as np

from bosontrace.algebra import SU11Irrep, build_algebra
from bosontrace.errors import SingularMatrixError
from bosontrace.fock import oracle_irrep_trace
from bosontrace.trace import generating_trace, irrep_trace_su11, spectral_data

su11 = build_algebra("su11")

# x(b) = -(2 K3 + 2 b K1): |eps| < 1 for |b| < 1, |eps| = 1 beyond
print("   b   |eps|    predicate    closed       oracle(300)   oracle err")
for b in [0.5, 0.9, 0.97, 0.99, 1.0, 1.01, 1.1]:
    x = su11.element(K3=-2.0, K1=-2.0 * b)
    eps = abs(spectral_data(x).eps)
    try:
        status = generating_trace(x, 1.0).status.value
    except SingularMatrixError:
        status = "POLE at t=1"
    closed = irrep_trace_su11(x, 1.0)
    o = oracle_irrep_trace(x, SU11Irrep(1.0, 1), 300)
    cv = f"{closed.value.real:.6f}" if closed.value is not None else "   --   "
    print(f"{b:5.2f}  {eps:.4f}  {status:>12}  {cv:>10}  {o.value.real:12.6f}  {o.error:.1e}")
