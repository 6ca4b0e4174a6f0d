"""Two-mode su(1,1) partition function and its poles in complex inverse temperature."""
import numpy as np

from bosontrace.algebra import build_algebra
from bosontrace.su11 import ScanGrid, partition_function, scan_zeros

su11 = build_algebra("su11")
trap = su11.element(K3=2.0)  # a1^dag a1 + a2^dag a2 + 1
squeezed = su11.element(K3=2.0, K1=0.8)

# Sector k = 1/2 holds the states with n1 = n2
for beta in (0.25, 0.5, 1.0, 2.0):
    z = partition_function(0.5, trap, beta)
    print(f"beta={beta}: Z={z:.6f}  1/(2 sinh beta)={1 / (2 * np.sinh(beta)):.6f}  "
          f"squeezed Z={partition_function(0.5, squeezed, beta):.6f}")

# Continuing beta into the complex plane, poles appear where exp(-2 beta) = 1.
# Re(beta) <= 0 is outside the convergence region and is marked DIVERGENT, but
# the meromorphic continuation is still scanned for windings.
res = scan_zeros(ScanGrid(-1, 1, -7, 7, 60, 60), 0.5, hamiltonian=trap)
for c in res.candidates:
    print(f"{c['kind']} near beta = {c['re']:+.2e} {c['im']:+.7f}i  (pi multiple {c['im'] / np.pi:+.6f})")
print(res.summary()["status_counts"])
