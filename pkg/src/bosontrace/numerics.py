"""Matrix functions, definiteness tests, square-root continuation and contour sums."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
import scipy.linalg
from scipy import special

from .algebra import omega
from .errors import BranchPointError, DivergentError, NoConvergenceError, QuadratureError

DELTA_PD = 1e-10
DELTA_BRANCH = 1e-12


# -- matrix functions -------------------------------------------------------


def mat_exp(a: np.ndarray) -> np.ndarray:
    """Matrix exponential (Pade scaling and squaring).

    Raises ``OverflowError`` instead of returning saturated entries.
    """
    a = np.asarray(a, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    with np.errstate(over="ignore", invalid="ignore"):
        e = scipy.linalg.expm(a)
    if not np.all(np.isfinite(e)):
        raise OverflowError(f"matrix exponential overflows (norm {np.linalg.norm(a, 2):.3g})")
    return e


def hermitian_part(b: np.ndarray) -> np.ndarray:
    b = np.asarray(b)
    return (b + b.conj().T) / 2


def definiteness_margin(b: np.ndarray) -> float:
    """Smallest eigenvalue of the hermitian part of ``b``."""
    return float(np.linalg.eigvalsh(hermitian_part(b))[0])


def hermitian_positive_definite(b: np.ndarray, tol: float = DELTA_PD) -> bool:
    """True iff every eigenvalue of ``(B + B^dag)/2`` exceeds ``tol``.

    A Cholesky factorization of the shifted hermitian part decides the clear cases;
    a failed factorization is re-examined with the eigenvalues, since Cholesky can
    break down on matrices that are positive definite to within rounding.
    """
    h = hermitian_part(np.asarray(b, dtype=complex))
    shifted = h - tol * np.eye(h.shape[0])
    try:
        np.linalg.cholesky(shifted)
        return True
    except np.linalg.LinAlgError:
        pass
    return bool(np.linalg.eigvalsh(h)[0] > tol)


# -- square-root continuation -------------------------------------------------


@dataclass
class BranchPath:
    """Record of a square-root continuation along ``s`` in [0, 1]."""

    samples: list = field(default_factory=list)  # (s, f(s), sqrt value)
    min_abs: float = math.inf

    @property
    def steps(self) -> int:
        return max(len(self.samples) - 1, 0)

    @property
    def final_sign(self) -> int:
        """+1 if the continued root equals the principal root at s = 1, else -1."""
        if not self.samples:
            return 1
        _, fv, w = self.samples[-1]
        return 1 if abs(w - cmath.sqrt(fv)) <= abs(w + cmath.sqrt(fv)) else -1


def sqrt_branch_tracked(
    f: Callable[[float], complex],
    reference: complex,
    *,
    min_steps: int = 16,
    max_phase: float = math.pi / 4,
    branch_tol: float = DELTA_BRANCH,
    full_output: bool = False,
):
    """Continue ``sqrt(f(s))`` from ``reference`` at s=0 to s=1.

    Steps are refined until the phase of ``f`` changes by less than ``max_phase``
    (at most pi/2) per step.  Raises :class:`BranchPointError` when ``|f|`` drops
    below ``branch_tol`` anywhere along the way.
    """
    if max_phase >= math.pi / 2:
        raise ValueError("max_phase must stay below pi/2")
    f0 = complex(f(0.0))
    ref = complex(reference)
    if abs(f0) < branch_tol:
        raise BranchPointError("path starts on a zero")
    if abs(ref * ref - f0) > 1e-8 * abs(f0):
        raise ValueError("reference is not a square root of f(0)")
    path = BranchPath(samples=[(0.0, f0, ref)], min_abs=abs(f0))
    s, fs, w = 0.0, f0, ref
    h_max = 1.0 / min_steps
    h = h_max
    while s < 1.0:
        s1 = min(1.0, s + h)
        v = complex(f(s1))
        path.min_abs = min(path.min_abs, abs(v))
        if abs(v) < branch_tol:
            raise BranchPointError(f"|f| = {abs(v):.3g} at s = {s1:.6g}")
        if abs(cmath.phase(v / fs)) > max_phase:
            h /= 2
            if h < 1e-14:
                raise BranchPointError(f"phase of f jumps near s = {s:.6g}")
            continue
        guess = w * cmath.sqrt(v / fs)
        root = cmath.sqrt(v)
        w = root if abs(root - guess) <= abs(root + guess) else -root
        s, fs = s1, v
        path.samples.append((s, fs, w))
        h = min(h_max, 2 * h)
    if full_output:
        return w, path
    return w


def continue_sqrt_along(values: np.ndarray, start: complex, max_phase: float = math.pi / 2) -> np.ndarray:
    """Square roots of a sampled closed or open curve, continued from ``start``.

    ``values[0]`` must equal ``start**2``.  Raises :class:`BranchPointError` if two
    consecutive samples differ in phase by more than ``max_phase``; callers resample.
    """
    values = np.asarray(values, dtype=complex)
    out = np.empty_like(values)
    out[0] = start
    for i in range(1, len(values)):
        ratio = values[i] / values[i - 1]
        if not np.isfinite(ratio) or abs(cmath.phase(ratio)) >= max_phase:
            raise BranchPointError(f"sample {i}: phase step too large for continuation")
        guess = out[i - 1] * cmath.sqrt(ratio)
        root = cmath.sqrt(values[i])
        out[i] = root if abs(root - guess) <= abs(root + guess) else -root
    return out


# -- gaussian integrals -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GaussianForm:
    """Quadratic form of ``exp(-Z B Z^dag / 2)`` with ``Z = (z*, z)``; ``omega B`` symmetric."""

    b: np.ndarray

    def __post_init__(self):
        b = np.array(self.b, dtype=complex)
        n = b.shape[0]
        if b.shape != (n, n) or n % 2:
            raise ValueError("B must be a square matrix of even size")
        ob = omega(n // 2) @ b
        if np.max(np.abs(ob - ob.T)) > 1e-12 * max(1.0, np.max(np.abs(b))):
            raise ValueError("omega B must be symmetric")
        b.setflags(write=False)
        object.__setattr__(self, "b", b)

    @property
    def r(self) -> int:
        return self.b.shape[0] // 2

    @property
    def hermitian_part(self) -> np.ndarray:
        return hermitian_part(self.b)


def gaussian_determinant_formula(form: GaussianForm) -> complex:
    """``det(B) ** -1/2`` with the branch continued from the hermitian part.

    Along ``B(s) = B' + i s B''`` the hermitian part stays ``B'``, so the determinant
    never vanishes when ``B'`` is positive definite.
    """
    bp = form.hermitian_part
    bpp = (form.b - bp) / 1j
    d0 = np.linalg.det(bp).real
    if d0 <= 0 or not hermitian_positive_definite(bp):
        raise DivergentError("hermitian part is not positive definite")
    root = sqrt_branch_tracked(lambda s: np.linalg.det(bp + 1j * s * bpp), math.sqrt(d0))
    return 1 / root


def gaussian_integral_oracle(form: GaussianForm, *, tol: float = 1e-9, max_nodes: int = 1024) -> complex:
    """Quadrature value of ``int d^2z / pi exp(-Z B Z^dag / 2)`` for one mode.

    Tensor Gauss-Legendre rule on ``[-L, L]^2``, node count doubled until two
    successive estimates agree to ``tol``.  ``L`` is chosen so the decay set by the
    hermitian part keeps the discarded tail below 1e-12.
    """
    if form.r != 1:
        raise ValueError("the quadrature oracle is limited to r = 1")
    if not hermitian_positive_definite(form.b):
        raise DivergentError("hermitian part of B is not positive definite")
    mu = definiteness_margin(form.b)
    # Re(Z B Z^dag)/2 >= mu |z|^2
    length = math.sqrt(math.log(1e12) / mu) + 1.0
    b = form.b

    def estimate(n):
        x, w = np.polynomial.legendre.leggauss(n)
        x, w = x * length, w * length
        xx, yy = np.meshgrid(x, x, indexing="ij")
        z = xx + 1j * yy
        zc = z.conj()
        # Z B Z^dag with Z = (z*, z), Z^dag = (z, z*)^T
        q = zc * b[0, 0] * z + zc * b[0, 1] * zc + z * b[1, 0] * z + z * b[1, 1] * zc
        return complex(np.einsum("i,j,ij->", w, w, np.exp(-q / 2))) / math.pi

    n = 64
    prev = estimate(n)
    while n < max_nodes:
        n *= 2
        cur = estimate(n)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise QuadratureError("gaussian quadrature did not settle")


# -- coefficient extraction --------------------------------------------------


def contour_coefficients(
    func: Callable,
    radius: Union[float, Sequence[float]],
    n_range: Union[tuple[int, int], Sequence[tuple[int, int]]],
    *,
    tol: float = 1e-10,
    max_doublings: int = 12,
    full_output: bool = False,
):
    """Taylor/Laurent coefficients of ``func`` from samples on circles.

    ``func`` receives complex arrays (one per variable, meshgrid ``ij`` layout)
    and returns the sampled values.  The number of samples per variable starts at
    ``4 (max|n| + 1)`` and doubles until two successive sets of scaled coefficients
    ``c_n r**n`` agree to ``tol`` relative to their largest magnitude.

    Returns ``{n: c_n}`` with integer keys for one variable and tuple keys otherwise.
    """
    one_var = isinstance(n_range[0], (int, np.integer))
    ranges = [tuple(n_range)] if one_var else [tuple(r) for r in n_range]
    radii = np.broadcast_to(np.asarray(radius, dtype=float), (len(ranges),))
    if np.any(radii <= 0):
        raise ValueError("radius must be positive")
    n0 = max(4 * (max(abs(lo), abs(hi)) + 1) for lo, hi in ranges)

    def scaled(n_samples):
        grids = [rad * np.exp(2j * np.pi * np.arange(n_samples) / n_samples) for rad in radii]
        mesh = np.meshgrid(*grids, indexing="ij")
        vals = np.asarray(func(*mesh), dtype=complex)
        if vals.shape != mesh[0].shape:
            raise ValueError("func must return one value per sample")
        return np.fft.fftn(vals) / n_samples ** len(ranges)

    def pick(a, n_samples):
        out = {}
        idx = [range(lo, hi + 1) for lo, hi in ranges]
        for key in np.ndindex(*[len(i) for i in idx]):
            n = tuple(idx[d][key[d]] for d in range(len(ranges)))
            out[n] = a[tuple(m % n_samples for m in n)]
        return out

    n_samples = n0
    prev = pick(scaled(n_samples), n_samples)
    for _ in range(max_doublings):
        n_samples *= 2
        cur = pick(scaled(n_samples), n_samples)
        scale = max(max(abs(v) for v in cur.values()), 1e-300)
        diff = max(abs(cur[n] - prev[n]) for n in cur)
        if diff <= tol * scale:
            coeffs = {
                (n[0] if one_var else n): complex(v / np.prod(radii ** np.array(n, dtype=float)))
                for n, v in cur.items()
            }
            if full_output:
                return coeffs, {"samples": n_samples, "delta": diff / scale}
            return coeffs
        prev = cur
    raise NoConvergenceError(f"coefficients unsettled after {max_doublings} doublings")


# -- modified Bessel functions -------------------------------------------------

_SERIES_LIMIT = 60.0


def _ie_series(nu: float, x: np.ndarray) -> np.ndarray:
    # sum_n (x/2)^(2n+nu) / (n! Gamma(n+nu+1)), scaled by exp(-x)
    term = np.exp(nu * np.log(x / 2) - special.gammaln(nu + 1) - x)
    total = term.copy()
    q = (x / 2) ** 2
    n = 0
    while True:
        term = term * q / ((n + 1) * (n + nu + 1))
        total += term
        n += 1
        if n > 2 * np.max(x) + 10 and np.all(term <= 1e-17 * total):
            return total


def bessel_ie(nu: float, x) -> np.ndarray:
    """Exponentially scaled ``exp(-x) I_nu(x)`` for real ``nu >= 0``, ``x >= 0``."""
    if nu < 0:
        raise ValueError("order must be nonnegative")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("argument must be nonnegative")
    flat = np.atleast_1d(x).ravel()
    out = np.empty_like(flat)
    zero = flat == 0
    out[zero] = 1.0 if nu == 0 else 0.0
    small = (~zero) & (flat <= _SERIES_LIMIT)
    if np.any(small):
        out[small] = _ie_series(nu, flat[small])
    big = flat > _SERIES_LIMIT
    if np.any(big):
        out[big] = special.ive(nu, flat[big])
    return out.reshape(x.shape) if x.ndim else out[0]


def bessel_i(nu: float, x):
    """Modified Bessel function of the first kind ``I_nu(x)``.

    Power series for ``x <= 60``; the exponentially scaled large-argument branch
    beyond that.
    """
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        return bessel_ie(nu, x) * np.exp(x)


def bessel_ke(nu: float, x) -> np.ndarray:
    """Exponentially scaled ``exp(x) K_nu(x)`` for ``x > 0``."""
    if nu < 0:
        raise ValueError("order must be nonnegative")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("K_nu needs a positive argument")
    return special.kve(nu, x)


def bessel_k(nu: float, x):
    """Modified Bessel function of the second kind ``K_nu(x)``."""
    x = np.asarray(x, dtype=float)
    return bessel_ke(nu, x) * np.exp(-x)
