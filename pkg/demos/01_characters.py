"""Irreducible traces three ways: closed form, Fock-space block, contour extraction."""
import numpy as np

from bosontrace.algebra import SU2Irrep, SU3Irrep, build_algebra, random_element
from bosontrace.fock import oracle_irrep_trace
from bosontrace.trace import extract_irrep_trace, irrep_trace_su2, irrep_trace_su3

rng = np.random.default_rng(0)

# A random complex su(2) element in the Schwinger two-mode realization
su2 = build_algebra("su2")
x = random_element(su2, rng, 2.0)
print("coefficients:", np.round(x.coeffs, 3))

# The Weyl character depends only on the eigenvalue of exp(rho(x)); the oracle
# exponentiates the (2j+1)-dimensional block of Fock states with n1 + n2 = 2j.
for two_j in range(5):
    closed = irrep_trace_su2(x, two_j)
    block = oracle_irrep_trace(x, SU2Irrep(two_j)).value
    contour = extract_irrep_trace(x, SU2Irrep(two_j)).value
    print(f"2j={two_j}: {closed:.10f}  |block - closed| = {abs(block - closed):.1e}  "
          f"|contour - closed| = {abs(contour - closed):.1e}")

# su(3) on six modes: the (p, q) trace is a difference of two product blocks
su3 = build_algebra("su3")
y = random_element(su3, rng, 1.5)
for p, q in [(1, 0), (1, 1), (2, 1)]:
    closed = irrep_trace_su3(y, p, q)
    block = oracle_irrep_trace(y, SU3Irrep(p, q)).value
    print(f"(p,q)=({p},{q}): {closed:.8f}  |block - closed| = {abs(block - closed):.1e}")

# At x = 0 each trace is the dimension
print("dim (2,1):", irrep_trace_su3(su3.zero(), 2, 1).real)
