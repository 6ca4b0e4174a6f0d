"""Work statistics of a sudden squeeze quench in one su(1,1) sector."""
import numpy as np

from bosontrace.algebra import build_algebra
from bosontrace.su11 import jarzynski_residual, partition_function, work_characteristic

su11 = build_algebra("su11")
h_i = su11.element(K3=2.0)
h_f = su11.element(K3=2.2, K1=0.6)
beta, k = 1.0, 1.0

# chi(u) = Tr[e^{iuH_f} e^{-iuH_i} e^{-beta H_i}] / Z_i from a product of 2x2 matrices
for u in np.linspace(0, 3, 7):
    chi = work_characteristic(k, h_i, h_f, beta, u)
    print(f"u={u:.2f}: chi={chi.value:.6f}  |chi|={abs(chi.value):.6f}  {chi.status.value}")

# <exp(-beta W)> = Z_f / Z_i is chi at u = i beta
z_ratio = partition_function(k, h_f, beta) / partition_function(k, h_i, beta)
print("Z_f/Z_i =", z_ratio, " residual:", jarzynski_residual(k, h_i, h_f, beta))
