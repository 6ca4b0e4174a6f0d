"""su(1,1) traces via Gauss factors, and thermodynamic / work-statistics applications."""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import integrate

from .algebra import AlgebraElement, Group, build_algebra, fundamental_rep
from .errors import DecompositionSingularError, DivergentError, QuadratureError
from .numerics import DELTA_PD, bessel_ie, bessel_ke, mat_exp
from .trace import (
    Status,
    TraceOutcome,
    designated_eigenvalue,
    irrep_trace_su11,
    spectral_data,
    su11_closed_form,
)

# rho(K+) = [[0, 1], [0, 0]], rho(K-) = [[0, 0], [-1, 0]], rho(K3) = diag(1/2, -1/2)


@dataclass(frozen=True)
class GaussFactors:
    """``g = exp(lp rho(K+)) exp(l3 rho(K3)) exp(lm rho(K-))``."""

    lp: complex
    l3: complex
    lm: complex

    def matrix(self) -> np.ndarray:
        a = cmath.exp(self.l3 / 2)
        upper = np.array([[1, self.lp], [0, 1]], dtype=complex)
        mid = np.diag([a, 1 / a])
        lower = np.array([[1, 0], [-self.lm, 1]], dtype=complex)
        return upper @ mid @ lower


def _group_matrix(x) -> np.ndarray:
    if isinstance(x, AlgebraElement):
        if x.spec.group is not Group.SU11:
            raise ValueError("expected an su(1,1) element")
        return mat_exp(fundamental_rep(x))
    return np.asarray(x, dtype=complex)


def gauss_decompose(g, *, tol: float = 1e-12) -> GaussFactors:
    """Triangular factorization of a unimodular 2x2 matrix (or of ``exp(rho(x))``).

    Reading off ``g = [[a - lp lm / a, lp / a], [-lm / a, 1 / a]]`` with
    ``a = exp(l3 / 2)`` requires ``g[1, 1] != 0``; ``l3`` uses the principal logarithm.
    """
    g = _group_matrix(g)
    if abs(np.linalg.det(g) - 1) > 1e-8 * max(1.0, np.abs(g).max() ** 2):
        raise ValueError("matrix is not unimodular")
    d = g[1, 1]
    if abs(d) <= tol:
        raise DecompositionSingularError("g[1,1] vanishes; element is outside the Gauss cell")
    return GaussFactors(lp=complex(g[0, 1] / d), l3=complex(-2 * cmath.log(d)), lm=complex(-g[1, 0] / d))


def bg_characteristic_roots(f: GaussFactors) -> tuple[complex, complex]:
    """Roots of ``eps^2 + e^{-l3/2} (lp lm - e^{l3} - 1) eps + 1 = 0``, smaller modulus first."""
    b = cmath.exp(-f.l3 / 2) * (f.lp * f.lm - cmath.exp(f.l3) - 1)
    disc = cmath.sqrt(b * b - 4)
    big = (-b + disc) / 2 if abs(-b + disc) >= abs(-b - disc) else (-b - disc) / 2
    return 1 / big, big


def bg_convergence(f: GaussFactors) -> bool:
    """All four ``Re(2 +- 2 sqrt(lp lm) +- 2 e^{l3/2})`` positive (principal root)."""
    s = cmath.sqrt(f.lp * f.lm)
    a = cmath.exp(f.l3 / 2)
    return all((2 + u * 2 * s + v * 2 * a).real > 0 for u in (1, -1) for v in (1, -1))


def bg_trace(k: float, x, *, tol: float = DELTA_PD) -> TraceOutcome:
    """Trace over the Bargmann-index-``k`` sector from the Gauss-factor quadratic.

    ``x`` is an su(1,1) element or a unimodular 2x2 group matrix.  The root with
    ``|eps| < 1`` is cross-checked against the eigenvalues of the reconstructed
    matrix.  DIVERGENT when the four-condition test fails or ``|eps|`` reaches 1.
    """
    if k <= 0:
        raise ValueError("Bargmann index must be positive")
    f = gauss_decompose(x)
    eps, other = bg_characteristic_roots(f)
    eig = np.linalg.eigvals(f.matrix())
    if np.min(np.abs(eig - eps)) > 1e-8 * max(1.0, abs(other)):
        raise DecompositionSingularError("quadratic root disagrees with the reconstructed spectrum")
    gap = 1 - abs(eps)
    if gap <= 10 * tol or not bg_convergence(f):
        return TraceOutcome(None, Status.DIVERGENT, margin=gap)
    return TraceOutcome(su11_closed_form(eps, k), Status.CONVERGENT, margin=gap)


def bg_radial_integral(k: float, f: GaussFactors, *, tail_tol: float = 1e-10) -> complex:
    """``4 e^{l3/2} int_0^inf r I_0(2 sqrt(lp lm) r) I_{2k-1}(2 e^{l3/2} r) K_{2k-1}(2r) dr``.

    Restricted to real ``lp lm >= 0`` and real positive ``e^{l3/2}``.  Raises
    :class:`DivergentError` when the four-condition test fails and
    :class:`QuadratureError` when the tail cannot be bounded by ``tail_tol``.
    """
    if k < 0.5:
        raise ValueError("radial integral needs k >= 1/2 (nonnegative Bessel order)")
    if not bg_convergence(f):
        raise DivergentError("Bessel integral diverges for these factors")
    pm = f.lp * f.lm
    a = cmath.exp(f.l3 / 2)
    scale = max(1.0, abs(pm), abs(a))
    if abs(pm.imag) > 1e-12 * scale or pm.real < -1e-12 * scale or abs(a.imag) > 1e-12 * scale or a.real <= 0:
        raise ValueError("radial integral is implemented for real lp*lm >= 0 and real e^{l3/2} > 0")
    c = math.sqrt(max(pm.real, 0.0))
    a = a.real
    nu = 2 * k - 1
    rate = 2 * (1 - a - c)

    def integrand(r):
        if r == 0:
            return 0.0
        scaled = bessel_ie(0, 2 * c * r) * bessel_ie(nu, 2 * a * r) * bessel_ke(nu, 2 * r)
        return r * scaled * math.exp(-rate * r)

    # asymptotically the integrand ~ r^(-1/2) e^{-rate r} / (8 pi sqrt(a c)); push R until negligible
    upper = 10.0 / rate
    while integrand(upper) / rate > tail_tol * 1e-3 and upper < 1e6:
        upper *= 1.5
    if integrand(upper) / rate > tail_tol:
        raise QuadratureError("cannot bound the tail of the radial integral")
    breaks = [upper * s for s in (1e-3, 1e-2, 0.1, 0.3)]
    value, err = integrate.quad(integrand, 0, upper, points=breaks, limit=400, epsabs=1e-14, epsrel=1e-12)
    if err > 1e-9 * max(1.0, abs(value)):
        raise QuadratureError(f"radial quadrature error estimate {err:.3g}")
    return 4 * a * value


# -- thermodynamics ------------------------------------------------------------------


def _require_hermitian(h: AlgebraElement):
    if h.spec.group is not Group.SU11:
        raise ValueError("expected an su(1,1) Hamiltonian")
    if np.any(np.abs(h.coeffs.imag) > 0):
        raise ValueError("a Hamiltonian needs real coefficients")


def partition_function(k: float, hamiltonian: AlgebraElement, beta: float) -> float:
    """``Tr_{2k} exp(-beta H)`` for a hermitian su(1,1) Hamiltonian.

    Raises :class:`DivergentError` outside the convergence region (``H`` not
    bounded below, e.g. elliptic or inverted).
    """
    _require_hermitian(hamiltonian)
    out = irrep_trace_su11(-beta * hamiltonian, k)
    if not out.status.has_value:
        raise DivergentError(f"partition function diverges ({out.status.value})")
    z = out.value
    if abs(z.imag) > 1e-10 * max(1.0, abs(z)):
        raise ArithmeticError(f"partition function has imaginary residue {z.imag:.3g}")
    return float(z.real)


def composite_matrix(h_i: AlgebraElement, h_f: AlgebraElement, beta: float, u: complex) -> np.ndarray:
    """``exp(iu rho(H_f)) exp(-iu rho(H_i)) exp(-beta rho(H_i))``."""
    ri, rf = fundamental_rep(h_i), fundamental_rep(h_f)
    return mat_exp(1j * u * rf) @ mat_exp(-1j * u * ri) @ mat_exp(-beta * ri)


def work_characteristic(
    k: float, h_i: AlgebraElement, h_f: AlgebraElement, beta: float, u: complex, *, tol: float = DELTA_PD
) -> TraceOutcome:
    """Characteristic function of work for a sudden quench ``H_i -> H_f``.

    ``chi(u) = Tr_{2k}[e^{iu H_f} e^{-iu H_i} e^{-beta H_i}] / Z_i``.  The composite
    group element is formed in the defining representation and traced with the
    closed form; the status is DIVERGENT where its ``|eps|`` reaches 1.
    """
    _require_hermitian(h_i)
    _require_hermitian(h_f)
    z_i = partition_function(k, h_i, beta)
    g = composite_matrix(h_i, h_f, beta, u)
    eps = designated_eigenvalue(g)
    gap = 1 - abs(eps)
    if gap <= 10 * tol:
        return TraceOutcome(None, Status.DIVERGENT, margin=gap)
    if u == 0:
        return TraceOutcome(1 + 0j, Status.CONVERGENT, margin=gap)
    return TraceOutcome(su11_closed_form(eps, k) / z_i, Status.CONVERGENT, margin=gap)


def jarzynski_residual(k: float, h_i: AlgebraElement, h_f: AlgebraElement, beta: float) -> float:
    """``|chi(i beta) - Z_f / Z_i|``."""
    chi = work_characteristic(k, h_i, h_f, beta, 1j * beta)
    if not chi.status.has_value:
        raise DivergentError("characteristic function diverges at u = i beta")
    return abs(chi.value - partition_function(k, h_f, beta) / partition_function(k, h_i, beta))


# -- zero / pole scans -------------------------------------------------------------------


@dataclass(frozen=True)
class ScanGrid:
    """Rectangle ``[re_min, re_max] x [im_min, im_max]`` sampled at ``n_re x n_im`` nodes."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    n_re: int
    n_im: int
    quantity: str = "partition"  # or "work"

    def __post_init__(self):
        if self.n_re < 2 or self.n_im < 2:
            raise ValueError("need at least two nodes per axis")
        if not all(math.isfinite(v) for v in (self.re_min, self.re_max, self.im_min, self.im_max)):
            raise ValueError("grid bounds must be finite")
        if not (self.re_max > self.re_min and self.im_max > self.im_min):
            raise ValueError("empty grid rectangle")
        if self.quantity not in ("partition", "work"):
            raise ValueError("quantity is 'partition' or 'work'")

    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.linspace(self.re_min, self.re_max, self.n_re), np.linspace(self.im_min, self.im_max, self.n_im)


def partition_continuation(k: float, hamiltonian: AlgebraElement) -> Callable[[complex], tuple]:
    """Meromorphic continuation ``beta -> Z(beta)`` for a hyperbolic Hamiltonian.

    Uses ``eps(beta) = exp(-beta w)`` with ``w`` the positive eigenvalue of
    ``rho(H)``, so ``Z = exp(-2k beta w) / (1 - exp(-2 beta w))`` is analytic away
    from its poles.  Returns ``(value, status)``; status is DIVERGENT for
    ``Re(beta) <= 0`` where the trace itself does not exist.
    """
    _require_hermitian(hamiltonian)
    w2 = -complex(np.linalg.det(fundamental_rep(hamiltonian)))
    if w2.real <= 0:
        raise DivergentError("Hamiltonian is not hyperbolic; no convergent partition function")
    w = math.sqrt(w2.real)

    def z(beta: complex):
        denom = 1 - cmath.exp(-2 * beta * w)
        if abs(denom) < 1e-14:
            return complex("nan"), "SINGULAR"
        val = cmath.exp(-2 * k * beta * w) / denom
        status = Status.CONVERGENT.value if (beta * w).real > 10 * DELTA_PD else Status.DIVERGENT.value
        return val, status

    return z


def work_continuation(k: float, h_i: AlgebraElement, h_f: AlgebraElement, beta: float) -> Callable[[complex], tuple]:
    def chi(u: complex):
        out = work_characteristic(k, h_i, h_f, beta, u)
        if out.status.has_value:
            return out.value, out.status.value
        g = composite_matrix(h_i, h_f, beta, u)
        eps = designated_eigenvalue(g)
        if abs(1 - eps * eps) < 1e-14:
            return complex("nan"), "SINGULAR"
        return su11_closed_form(eps, k) / partition_function(k, h_i, beta), out.status.value

    return chi


def _winding(values: Sequence[complex]) -> Optional[int]:
    """Winding number of a closed sampled loop; None if any sample is not finite."""
    v = np.asarray(values, dtype=complex)
    if not np.all(np.isfinite(v)) or np.any(v == 0):
        return None
    d = np.angle(np.roll(v, -1) / v)
    return int(round(d.sum() / (2 * np.pi)))


def _cell_loop(func, x0, x1, y0, y1, per_edge):
    s = np.linspace(0, 1, per_edge, endpoint=False)
    pts = np.concatenate(
        [x0 + (x1 - x0) * s + 1j * y0, x1 + 1j * (y0 + (y1 - y0) * s), x1 - (x1 - x0) * s + 1j * y1, x0 + 1j * (y1 - (y1 - y0) * s)]
    )
    return [func(p)[0] for p in pts]


def cell_winding(func, x0, x1, y0, y1, per_edge: int = 8) -> Optional[int]:
    """Winding of ``func`` around the rectangle, refining edge sampling until phase steps are small."""
    for _ in range(6):
        vals = _cell_loop(func, x0, x1, y0, y1, per_edge)
        v = np.asarray(vals)
        if not np.all(np.isfinite(v)) or np.any(v == 0):
            return None
        if np.max(np.abs(np.angle(np.roll(v, -1) / v))) < np.pi / 3:
            return _winding(vals)
        per_edge *= 2
    return _winding(vals)


@dataclass
class ScanResult:
    grid: ScanGrid
    rows: list = field(default_factory=list)  # dicts: re, im, status, value_re, value_im, winding
    candidates: list = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["re", "im", "status", "value_re", "value_im", "winding"], lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
        return buf.getvalue()

    def summary(self) -> dict:
        statuses = {}
        for row in self.rows:
            statuses[row["status"]] = statuses.get(row["status"], 0) + 1
        return {
            "grid": {
                "re": [self.grid.re_min, self.grid.re_max],
                "im": [self.grid.im_min, self.grid.im_max],
                "res": [self.grid.n_re, self.grid.n_im],
                "quantity": self.grid.quantity,
            },
            "status_counts": statuses,
            "candidates": self.candidates,
        }


def _refine(func, x0, x1, y0, y1, w, target: float):
    failures = 0
    step = 0
    while max(x1 - x0, y1 - y0) > target and failures < 8:
        # off-centre splits keep a point from sitting on the same dividing line twice
        frac = 0.47 if step % 2 else 0.53
        step += 1
        xm, ym = x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)
        for cx0, cx1, cy0, cy1 in ((x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)):
            if cell_winding(func, cx0, cx1, cy0, cy1) == w:
                x0, x1, y0, y1 = cx0, cx1, cy0, cy1
                failures = 0
                break
        else:
            # the point lies on the current boundary: grow the box slightly and retry
            gx, gy = 0.1 * (x1 - x0), 0.1 * (y1 - y0)
            x0, x1, y0, y1 = x0 - gx, x1 + gx, y0 - gy, y1 + gy
            failures += 1
    return (x0 + x1) / 2, (y0 + y1) / 2, max(x1 - x0, y1 - y0)


def scan_zeros(
    grid: ScanGrid,
    k: float,
    *,
    hamiltonian: Optional[AlgebraElement] = None,
    quench: Optional[tuple] = None,
    refine_to: float = 1e-6,
) -> ScanResult:
    """Locate zeros (winding +1) and poles (winding -1) of Z(beta) or chi(u) on a grid.

    ``hamiltonian`` selects the partition function in complex ``beta``; ``quench``
    ``(H_i, H_f, beta)`` selects the work characteristic function in complex ``u``.
    Every node carries its own status (CONVERGENT / DIVERGENT / SINGULAR); the
    winding column belongs to the cell whose lower-left corner is that node.
    """
    if grid.quantity == "partition":
        if hamiltonian is None:
            raise ValueError("partition scans need a hamiltonian")
        func = partition_continuation(k, hamiltonian)
    else:
        if quench is None:
            raise ValueError("work scans need a quench (H_i, H_f, beta)")
        func = work_continuation(k, *quench)
    xs, ys = grid.nodes()
    vals = np.empty((len(xs), len(ys)), dtype=complex)
    stat = np.empty((len(xs), len(ys)), dtype=object)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            vals[i, j], stat[i, j] = func(complex(x, y))
    result = ScanResult(grid)
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            wnd = 0
            if i + 1 < len(xs) and j + 1 < len(ys):
                corners = [vals[i, j], vals[i + 1, j], vals[i + 1, j + 1], vals[i, j + 1]]
                w4 = _winding(corners)
                steps = np.abs(np.angle(np.roll(corners, -1) / np.asarray(corners))) if w4 is not None else None
                if w4 is None or w4 != 0 or np.max(steps) > np.pi / 2:
                    w = cell_winding(func, x, xs[i + 1], y, ys[j + 1])
                    wnd = 0 if w is None else w
                    if wnd != 0:
                        cx, cy, size = _refine(func, x, xs[i + 1], y, ys[j + 1], w, refine_to)
                        result.candidates.append(
                            {
                                "re": float(cx),
                                "im": float(cy),
                                "winding": int(w),
                                "kind": "zero" if w > 0 else "pole",
                                "cell_size": float(size),
                            }
                        )
            v = vals[i, j]
            if stat[i, j] == "SINGULAR":
                hx = (xs[1] - xs[0]) / 2
                hy = (ys[1] - ys[0]) / 2
                w = cell_winding(func, x - hx, x + hx, y - hy, y + hy)
                if w:
                    result.candidates.append(
                        {"re": float(x), "im": float(y), "winding": int(w), "kind": "zero" if w > 0 else "pole", "cell_size": 0.0}
                    )
            result.rows.append(
                {
                    "re": float(x),
                    "im": float(y),
                    "status": stat[i, j],
                    "value_re": float(v.real) if np.isfinite(v) else "",
                    "value_im": float(v.imag) if np.isfinite(v) else "",
                    "winding": wnd,
                }
            )
    return result


def random_hyperbolic(
    rng: np.random.Generator, eps_max: float = 0.8, eps_min: float = 0.05, imag_scale: float = 0.2
) -> AlgebraElement:
    """Random complex su(1,1) element with ``eps_min <= |eps| <= eps_max`` and a convergent trace."""
    spec = build_algebra(Group.SU11)
    while True:
        a = rng.uniform(0.5, 6.0)
        b, c = rng.uniform(-0.6, 0.6, size=2) * a
        re = np.array([-b, -c, -a])
        im = rng.normal(size=3) * imag_scale
        x = AlgebraElement(spec, re + 1j * im)
        if not eps_min <= abs(spectral_data(x).eps) <= eps_max:
            continue
        if irrep_trace_su11(x, 0.5).status is Status.CONVERGENT:
            return x
