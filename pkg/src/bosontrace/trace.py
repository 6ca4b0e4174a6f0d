"""Determinant trace formula with convergence verdicts, and closed-form irrep traces.

The generating trace of an element ``x`` against a projector family is

    f(t) * {(-1)^r det[exp(2 tau P(t)) exp(2 tau M(x)) - 1]} ** (-1/2)

whose Taylor (compact groups) or Laurent (su(1,1)) coefficients in ``t`` are the
traces over irreducible subspaces.  The square-root branch is fixed by continuation
in ``x`` from an anchor element whose projector series is summable by hand.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from .algebra import (
    AlgebraElement,
    Group,
    ProjectorFamily,
    SeriesKind,
    SU2Irrep,
    SU3Irrep,
    SU11Irrep,
    IrrepLabel,
    element_from_fundamental,
    fundamental_rep,
    omega,
    projector_family,
    quadratic_rep,
    symplectic_rep,
    tau,
)
from .errors import BranchPointError, SingularMatrixError
from .numerics import (
    DELTA_BRANCH,
    DELTA_PD,
    BranchPath,
    contour_coefficients,
    mat_exp,
    sqrt_branch_tracked,
)

DEGENERACY_TOL = 1e-6
SU11_ANCHOR_BETA = 1.0


class Status(str, Enum):
    CONVERGENT = "CONVERGENT"
    MARGINAL = "MARGINAL"
    DIVERGENT = "DIVERGENT"
    BRANCH_FAILURE = "BRANCH_FAILURE"

    @property
    def has_value(self) -> bool:
        return self in (Status.CONVERGENT, Status.MARGINAL)


@dataclass
class TraceOutcome:
    value: Optional[complex]
    status: Status
    branch: Optional[BranchPath] = None
    t_used: Optional[tuple] = None
    margin: Optional[float] = None

    def __post_init__(self):
        if self.value is not None and not self.status.has_value:
            raise ValueError(f"{self.status.value} outcome cannot carry a value")


def status_from_margin(margin: float, tol: float = DELTA_PD) -> Status:
    """CONVERGENT above ``10 tol``, MARGINAL in ``(tol, 10 tol]``, DIVERGENT otherwise."""
    if margin > 10 * tol:
        return Status.CONVERGENT
    if margin > tol:
        return Status.MARGINAL
    return Status.DIVERGENT


# -- symplectic pieces ---------------------------------------------------------


def _as_tuple(t) -> tuple:
    return tuple(complex(v) for v in np.atleast_1d(np.asarray(t, dtype=complex)))


def element_symplectic_exp(elem: AlgebraElement) -> np.ndarray:
    """``exp(2 tau M(x))``."""
    return mat_exp(symplectic_rep(quadratic_rep(elem)))


def convergence_matrix(x_total: np.ndarray) -> np.ndarray:
    """``omega tau (coth(tau A) + omega tau)^-1`` expressed through ``X = exp(2 tau A)``.

    With ``coth(tau A) = (X + 1)(X - 1)^-1`` this equals
    ``omega tau (X - 1) [(X + 1) + omega tau (X - 1)]^-1``, which stays finite when
    ``X - 1`` is singular.  Accepts a stack of matrices.
    """
    x_total = np.asarray(x_total)
    n = x_total.shape[-1]
    j = omega(n // 2) @ tau(n // 2)
    eye = np.eye(n)
    xm = x_total - eye
    rhs = j @ xm
    lhs = x_total + eye + j @ xm
    # G = rhs @ inv(lhs)  <=>  G^T = solve(lhs^T, rhs^T)
    return np.swapaxes(np.linalg.solve(np.swapaxes(lhs, -1, -2), np.swapaxes(rhs, -1, -2)), -1, -2)


def convergence_margin(x_total: np.ndarray) -> np.ndarray:
    """Smallest eigenvalue of the hermitian part of :func:`convergence_matrix`."""
    g = convergence_matrix(x_total)
    h = (g + np.conj(np.swapaxes(g, -1, -2))) / 2
    return np.linalg.eigvalsh(h)[..., 0]


def _det_form(x_total: np.ndarray, r: int) -> np.ndarray:
    n = x_total.shape[-1]
    return (-1) ** r * np.linalg.det(x_total - np.eye(n))


# -- anchors -------------------------------------------------------------------


def anchor_element(spec) -> AlgebraElement:
    """Element at which the branch of the square root is known in closed form."""
    if spec.group is Group.SU11:
        return spec.element(K3=-2 * SU11_ANCHOR_BETA)
    return spec.zero()


def anchor_value(fam: ProjectorFamily, t) -> complex:
    """Projector series summed at the anchor element.

    The anchor is diagonal in the Fock basis, ``x0 = sum_i c_i n_i + c_0``, so the
    series is a product of geometric sums ``e^{c_0} prod_i 1 / (1 - t^{w_i} e^{c_i})``.
    """
    m = fam.mode_factors(t)
    if fam.group is Group.SU11:
        e0 = math.exp(-SU11_ANCHOR_BETA)
        if not np.all(np.abs(m * e0) < 1):
            raise ValueError("t lies outside the anchor's annulus of convergence")
        return complex(e0 * np.prod(1 / (1 - m * e0)))
    if not np.all(np.abs(m) < 1):
        raise ValueError("t lies outside the unit disk of the Taylor family")
    return complex(np.prod(1 / (1 - m)))


# -- generating trace --------------------------------------------------------------


def series_domain_gap(elem: AlgebraElement, t, fam: Optional[ProjectorFamily] = None) -> float:
    """Distance (in log-modulus) of ``t`` inside the domain where the projector series converges.

    Taylor families: ``|t_p| * |eps| < 1`` for every eigenvalue feeding variable ``p``.
    Laurent family: ``|eps| < |t| < 1/|eps|``, empty when ``|eps| = 1``.
    Negative when ``t`` lies outside.
    """
    t = [np.array([v]) for v in _as_tuple(t)]
    return float(_domain_gaps(elem, t)[0])


def _domain_gaps(elem: AlgebraElement, ts: Sequence[np.ndarray]) -> np.ndarray:
    sd = spectral_data(elem)
    a = [np.abs(t) for t in ts]
    with np.errstate(divide="ignore"):
        if elem.spec.group is Group.SU11:
            e = abs(sd.eps)
            if e == 0:
                return np.full(a[0].shape, np.inf)
            return np.minimum(np.log(a[0] / e), np.log(1 / (a[0] * e)))
        if elem.spec.group is Group.SU3:
            return np.minimum(
                -np.log(a[0] * np.max(np.abs(sd.eps))), -np.log(a[1] * np.max(np.abs(sd.inverse)))
            )
        e = max(abs(sd.eps), 1 / abs(sd.eps))
        return -np.log(a[0] * e)


def _tracked_quantity(elem: AlgebraElement, fam: ProjectorFamily, t) -> complex:
    x_total = fam.symplectic_exp(t) @ element_symplectic_exp(elem)
    return complex(_det_form(x_total, elem.spec.r) * fam.f_inverse_square(t))


def generating_trace(
    elem: AlgebraElement,
    t,
    fam: Optional[ProjectorFamily] = None,
    *,
    tol: float = DELTA_PD,
    branch_tol: float = DELTA_BRANCH,
) -> TraceOutcome:
    """Evaluate ``Tr[P(t) exp(x_hat)]`` through the determinant formula at one ``t``.

    The convergence verdict is the positive-definiteness of the hermitian part of
    :func:`convergence_matrix`.  The square root is continued along the straight
    line from :func:`anchor_element` to ``elem`` at fixed ``t``.

    Raises :class:`SingularMatrixError` when ``t`` is a pole (``det[X - 1]`` vanishes).
    """
    spec = elem.spec
    fam = fam or projector_family(spec)
    t = _as_tuple(t)
    if any(v == 0 for v in t):
        raise ValueError("t must be nonzero")
    x_total = fam.symplectic_exp(t) @ element_symplectic_exp(elem)
    d = _det_form(x_total, spec.r)
    if abs(d) < branch_tol:
        raise SingularMatrixError(f"det[exp(2 tau A) - 1] = {abs(d):.3g}; t sits on a pole")
    margin = min(float(convergence_margin(x_total)), series_domain_gap(elem, t, fam))
    status = status_from_margin(margin, tol)
    if not status.has_value:
        return TraceOutcome(None, status, t_used=t, margin=margin)
    x0 = anchor_element(spec)
    ref = 1 / anchor_value(fam, t)
    try:
        root, path = sqrt_branch_tracked(
            lambda s: _tracked_quantity(x0 + s * (elem - x0), fam, t),
            ref,
            branch_tol=branch_tol,
            full_output=True,
        )
    except BranchPointError:
        return TraceOutcome(None, Status.BRANCH_FAILURE, t_used=t, margin=margin)
    return TraceOutcome(1 / root, status, branch=path, t_used=t, margin=margin)


def default_radius(elem: AlgebraElement) -> tuple[float, ...]:
    """Contour radii: the unit circle for su(1,1), ``0.5 / ||exp(rho)||`` per Taylor variable."""
    if elem.spec.group is Group.SU11:
        return (1.0,)
    if elem.spec.group is Group.SU3:
        a, b = fundamental_rep(elem)
        return (0.5 / np.linalg.norm(mat_exp(a), 2), 0.5 / np.linalg.norm(mat_exp(b), 2))
    return (0.5 / np.linalg.norm(mat_exp(fundamental_rep(elem)), 2),)


def _snake_order(shape) -> np.ndarray:
    """Flat indices visiting a grid so that consecutive entries are neighbours."""
    idx = np.arange(int(np.prod(shape))).reshape(shape)
    if len(shape) == 1:
        return idx
    rows = [row if i % 2 == 0 else row[::-1] for i, row in enumerate(idx.reshape(shape[0], -1))]
    return np.concatenate(rows)


def _q_at(elem: AlgebraElement, fam: ProjectorFamily, ts: Sequence[np.ndarray]) -> np.ndarray:
    xm = element_symplectic_exp(elem)
    n = len(ts[0])
    modes = np.ones((n, elem.spec.r), dtype=complex)
    finv2 = np.ones(n, dtype=complex)
    for tp, w, e in zip(ts, fam.weights, fam.f_exponents):
        modes *= tp[:, None] ** w[None, :].astype(float)
        finv2 *= tp ** int(-2 * e)
    diag = np.concatenate([modes, 1 / modes], axis=1)
    return _det_form(diag[:, :, None] * xm[None, :, :], elem.spec.r) * finv2


def _continue_on_grid(elem, fam, ts, q, start, branch_tol, max_phase=math.pi / 4):
    """Continue ``sqrt(q)`` along consecutive samples, subdividing coarse steps.

    Between neighbours the path follows the arc ``t -> |t| e^{i theta}`` (log-linear
    interpolation), so intermediate points stay on the sampled torus.
    """
    out = np.empty_like(q)
    out[0] = start
    for i in range(1, len(q)):
        w = out[i - 1]
        if abs(cmath.phase(q[i] / q[i - 1])) < max_phase:
            guess = w * cmath.sqrt(q[i] / q[i - 1])
        else:
            a = [np.log(tp[i - 1]) for tp in ts]
            b = [np.log(tp[i]) for tp in ts]
            # shortest angular move between neighbours
            b = [bb + 2j * np.pi * round(((aa - bb) / (2j * np.pi)).real) for aa, bb in zip(a, b)]
            m = 8
            while True:
                s = np.linspace(0, 1, m + 1)
                path = [np.exp(aa + s * (bb - aa)) for aa, bb in zip(a, b)]
                qs = _q_at(elem, fam, path)
                if np.min(np.abs(qs)) < branch_tol:
                    raise BranchPointError("continuation path meets a zero")
                steps = np.abs(np.angle(qs[1:] / qs[:-1]))
                if np.max(steps) < max_phase:
                    break
                m *= 4
                if m > 4096:
                    raise BranchPointError("phase varies too fast between samples")
            for j in range(1, len(qs)):
                w = w * cmath.sqrt(qs[j] / qs[j - 1])
            guess = w
        root = cmath.sqrt(q[i])
        out[i] = root if abs(root - guess) <= abs(root + guess) else -root
    return out


@dataclass
class ContourEvaluation:
    values: Optional[np.ndarray]
    status: Status
    min_margin: float
    failing_samples: int = 0


def generating_on_grid(
    elem: AlgebraElement,
    *ts: np.ndarray,
    fam: Optional[ProjectorFamily] = None,
    tol: float = DELTA_PD,
    branch_tol: float = DELTA_BRANCH,
) -> ContourEvaluation:
    """Vectorized generating trace on a sample grid (one array per projector variable).

    The branch is fixed by continuation in ``x`` at the first sample and then carried
    sample to sample along a path visiting neighbouring grid points.  Every sample is
    checked against the convergence predicate; one failure marks the whole grid
    DIVERGENT.
    """
    spec = elem.spec
    fam = fam or projector_family(spec)
    shape = np.broadcast(*ts).shape
    flat = [np.broadcast_to(t, shape).ravel() for t in ts]
    n = len(flat[0])
    xm = element_symplectic_exp(elem)
    modes = np.ones((n, spec.r), dtype=complex)
    for tp, w in zip(flat, fam.weights):
        modes *= tp[:, None] ** w[None, :].astype(float)
    diag = np.concatenate([modes, 1 / modes], axis=1)
    x_total = diag[:, :, None] * xm[None, :, :]
    margins = np.minimum(
        convergence_margin(x_total),
        _domain_gaps(elem, flat),
    )
    min_margin = float(np.min(margins))
    failing = int(np.sum(margins <= tol))
    status = status_from_margin(min_margin, tol)
    if not status.has_value:
        return ContourEvaluation(None, status, min_margin, failing)
    d = _det_form(x_total, spec.r)
    if np.min(np.abs(d)) < branch_tol:
        raise SingularMatrixError("a contour sample sits on a pole")
    finv2 = np.ones(n, dtype=complex)
    for tp, e in zip(flat, fam.f_exponents):
        finv2 *= tp ** int(-2 * e)
    q = d * finv2
    order = _snake_order(shape)
    first = order[0]
    t0 = tuple(tp[first] for tp in flat)
    start = generating_trace(elem, t0, fam, tol=tol, branch_tol=branch_tol)
    if start.status is Status.BRANCH_FAILURE:
        return ContourEvaluation(None, Status.BRANCH_FAILURE, min_margin, failing)
    try:
        roots = _continue_on_grid(elem, fam, [tp[order] for tp in flat], q[order], 1 / start.value, branch_tol)
    except BranchPointError:
        return ContourEvaluation(None, Status.BRANCH_FAILURE, min_margin, failing)
    vals = np.empty(n, dtype=complex)
    vals[order] = 1 / roots
    return ContourEvaluation(vals.reshape(shape), status, min_margin, failing)


@dataclass
class SeriesExtraction:
    coefficients: dict
    status: Status
    radius: tuple
    samples: int = 0
    min_margin: float = math.nan


def series_coefficients(
    elem: AlgebraElement,
    n_range,
    *,
    radius=None,
    fam: Optional[ProjectorFamily] = None,
    tol: float = 1e-10,
) -> SeriesExtraction:
    """Taylor/Laurent coefficients of the generating trace by contour sampling.

    ``n_range`` is ``(lo, hi)`` for one-parameter families and ``((lo, hi), (lo', hi'))``
    for su(3).  Coefficients are keyed by series exponent (tuples for su(3)).
    A single sample failing the convergence predicate makes the extraction DIVERGENT.
    """
    fam = fam or projector_family(elem.spec)
    radius = tuple(np.broadcast_to(radius if radius is not None else default_radius(elem), (fam.n_params,)))
    worst = {"margin": math.inf, "bad": None}

    def func(*ts):
        ev = generating_on_grid(elem, *ts, fam=fam)
        worst["margin"] = min(worst["margin"], ev.min_margin)
        if ev.values is None:
            worst["bad"] = ev.status
            # keep the extractor running on a finite dummy; the verdict is reported below
            return np.zeros(np.broadcast(*ts).shape, dtype=complex)
        return ev.values

    coeffs, info = contour_coefficients(func, radius, n_range, tol=tol, full_output=True)
    if worst["bad"] is not None:
        return SeriesExtraction({}, worst["bad"], radius, info["samples"], worst["margin"])
    return SeriesExtraction(coeffs, status_from_margin(worst["margin"]), radius, info["samples"], worst["margin"])


def extract_irrep_trace(elem: AlgebraElement, label: IrrepLabel, **kwargs) -> TraceOutcome:
    """Per-irrep trace from the generating trace's series coefficients."""
    fam = projector_family(elem.spec)
    if isinstance(label, SU3Irrep):
        hi_p, hi_q = label.p, label.q
        ext = series_coefficients(elem, ((0, hi_p), (0, hi_q)), fam=fam, **kwargs)
        if not ext.status.has_value:
            return TraceOutcome(None, ext.status, t_used=ext.radius, margin=ext.min_margin)
        c = ext.coefficients
        value = c[(label.p, label.q)] - (c[(label.p - 1, label.q - 1)] if min(label.p, label.q) > 0 else 0)
        return TraceOutcome(value, ext.status, t_used=ext.radius, margin=ext.min_margin)
    (n,) = fam.exponent_map(label)
    lo, hi = (0, n) if fam.series_kind is SeriesKind.TAYLOR else (min(n, 0), max(n, 0))
    ext = series_coefficients(elem, (lo, hi), fam=fam, **kwargs)
    if not ext.status.has_value:
        return TraceOutcome(None, ext.status, t_used=ext.radius, margin=ext.min_margin)
    return TraceOutcome(ext.coefficients[n], ext.status, t_used=ext.radius, margin=ext.min_margin)


# -- spectra and closed forms ---------------------------------------------------------


@dataclass
class SpectralData:
    """Eigenvalues of ``exp(rho(x))``.

    For su(2)/su(1,1) ``eps`` is the designated member (``|eps| <= 1``, ties toward
    nonnegative imaginary part) and ``pair == (eps, 1/eps)``.  For su(3) ``eps``
    holds the three eigenvalues of ``exp(rho(x))``; those of ``exp(rho'(x))`` are
    their inverses.
    """

    eps: Union[complex, np.ndarray]
    pair: Optional[tuple] = None
    inverse: Optional[np.ndarray] = None


def designated_eigenvalue(g: np.ndarray) -> complex:
    """Eigenvalue of a unimodular 2x2 matrix with ``|eps| <= 1``."""
    tr = complex(np.trace(g))
    disc = cmath.sqrt(tr * tr - 4 * complex(np.linalg.det(g)))
    big = (tr + disc) / 2 if abs(tr + disc) >= abs(tr - disc) else (tr - disc) / 2
    if big == 0:
        return 0j
    eps = complex(np.linalg.det(g)) / big
    if abs(abs(eps) - abs(big)) < 1e-14 * max(1.0, abs(big)):
        # on the unit circle both roots qualify; prefer Im >= 0
        a, b = sorted([eps, big], key=lambda z: (-z.imag, z.real))
        return a
    return eps


def spectral_data(elem: AlgebraElement) -> SpectralData:
    """Eigenvalues of the exponentiated defining representation."""
    if elem.spec.group is Group.SU3:
        rho, _ = fundamental_rep(elem)
        lam = np.linalg.eigvals(rho)
        eps = np.exp(lam)
        return SpectralData(eps=eps, inverse=1 / eps)
    rho = fundamental_rep(elem)
    lam = cmath.sqrt(-complex(np.linalg.det(rho)))
    a, b = cmath.exp(lam), cmath.exp(-lam)
    if abs(abs(a) - abs(b)) < 1e-14 * max(abs(a), abs(b)):
        eps = a if (a.imag, a.real) >= (b.imag, b.real) else b
    else:
        eps = a if abs(a) < abs(b) else b
    return SpectralData(eps=eps, pair=(eps, 1 / eps))


def weyl_su2(eps: complex, two_j: int) -> complex:
    """``(eps^(2j+1) - eps^-(2j+1)) / (eps - 1/eps)`` with the finite-sum limit near ``eps = +-1``."""
    if abs(eps - 1 / eps) < DEGENERACY_TOL:
        return complex(sum(eps ** (2 * m - two_j) for m in range(two_j + 1)))
    return (eps ** (two_j + 1) - eps ** (-two_j - 1)) / (eps - 1 / eps)


def irrep_trace_su2(elem: AlgebraElement, two_j: int) -> complex:
    """Trace of ``exp(x_hat)`` over the spin-j subspace (Weyl character)."""
    if two_j < 0:
        raise ValueError("2j must be nonnegative")
    return weyl_su2(spectral_data(elem).eps, int(two_j))


def complete_homogeneous(vals: Sequence[complex], kmax: int) -> np.ndarray:
    """``h_0..h_kmax`` of three variables via ``h_k = e1 h_(k-1) - e2 h_(k-2) + e3 h_(k-3)``."""
    a, b, c = vals
    e1, e2, e3 = a + b + c, a * b + b * c + c * a, a * b * c
    h = np.zeros(kmax + 1, dtype=complex)
    h[0] = 1
    for k in range(1, kmax + 1):
        h[k] = e1 * h[k - 1] - (e2 * h[k - 2] if k >= 2 else 0) + (e3 * h[k - 3] if k >= 3 else 0)
    return h


def su3_product_trace(elem: AlgebraElement, p: int, q: int) -> complex:
    """Trace over ``(p,0) (x) (0,q)``: ``h_p(eps) h_q(1/eps)``."""
    sd = spectral_data(elem)
    return complex(complete_homogeneous(sd.eps, p)[p] * complete_homogeneous(sd.inverse, q)[q])


def irrep_trace_su3(elem: AlgebraElement, p: int, q: int) -> complex:
    """Character of the su(3) irrep with Dynkin labels ``(p, q)``."""
    if p < 0 or q < 0:
        raise ValueError("Dynkin labels must be nonnegative")
    sd = spectral_data(elem)
    h = complete_homogeneous(sd.eps, p)
    hb = complete_homogeneous(sd.inverse, q)
    value = h[p] * hb[q]
    if p > 0 and q > 0:
        value -= h[p - 1] * hb[q - 1]
    return complex(value)


def su11_closed_form(eps: complex, k: float) -> complex:
    """``eps^(2k) / (1 - eps^2)`` with the principal power."""
    return cmath.exp(2 * k * cmath.log(eps)) / (1 - eps * eps)


def irrep_trace_su11(
    elem: AlgebraElement, k: float, *, tol: float = DELTA_PD, check_predicate: bool = True, n_check: int = 64
) -> TraceOutcome:
    """Trace over the su(1,1) sector of Bargmann index ``k``.

    DIVERGENT when ``|eps|`` is within the tolerance band of 1, or (with
    ``check_predicate``) when the determinant formula's convergence predicate
    fails anywhere on the unit-circle contour.
    """
    if k <= 0:
        raise ValueError("Bargmann index must be positive")
    eps = spectral_data(elem).eps
    gap = 1 - abs(eps)
    if gap <= 10 * tol:
        return TraceOutcome(None, Status.DIVERGENT, margin=gap)
    margin = gap
    if check_predicate:
        ts = np.exp(2j * np.pi * np.arange(n_check) / n_check)
        fam = projector_family(elem.spec)
        x_total = np.stack([fam.symplectic_exp(t) for t in ts]) @ element_symplectic_exp(elem)
        margin = float(np.min(convergence_margin(x_total)))
        if status_from_margin(margin, tol) is Status.DIVERGENT:
            return TraceOutcome(None, Status.DIVERGENT, margin=margin)
    return TraceOutcome(su11_closed_form(eps, k), status_from_margin(margin, tol), margin=margin)


def irrep_trace(elem: AlgebraElement, label: IrrepLabel) -> TraceOutcome:
    """Closed-form trace over any supported irrep label."""
    if isinstance(label, SU2Irrep):
        return TraceOutcome(irrep_trace_su2(elem, label.two_j), Status.CONVERGENT)
    if isinstance(label, SU3Irrep):
        return TraceOutcome(irrep_trace_su3(elem, label.p, label.q), Status.CONVERGENT)
    return irrep_trace_su11(elem, label.k)


# -- conjugation invariance ------------------------------------------------------------


def conjugate(x: AlgebraElement, s: AlgebraElement) -> AlgebraElement:
    """Element ``exp(-s) x exp(s)`` (adjoint action computed in the defining rep)."""
    rho_x, rho_s = fundamental_rep(x), fundamental_rep(s)
    if x.spec.group is Group.SU3:
        rho_x, rho_s = rho_x[0], rho_s[0]
    g = mat_exp(rho_s)
    return element_from_fundamental(x.spec, np.linalg.solve(g, rho_x @ g))


@dataclass
class InvarianceReport:
    status: str  # "OK" or "SKIPPED"
    deviation: float = math.nan
    det_deviation: float = math.nan
    t_values: list = field(default_factory=list)


def conjugation_invariance_check(x: AlgebraElement, s: AlgebraElement, t_values=None) -> InvarianceReport:
    """Compare the generating trace of ``x`` with that of its conjugate by ``exp(s)``.

    Two comparisons: the determinant with the numerically conjugated symplectic
    matrix ``e^{-2 tau M(s)} e^{2 tau M(x)} e^{2 tau M(s)}``, and the full
    branch-tracked generating trace of the conjugated algebra element.
    Deviations are relative.
    """
    fam = projector_family(x.spec)
    y = conjugate(x, s)
    if t_values is None:
        if x.spec.group is Group.SU11:
            t_values = [1.0, cmath.exp(0.7j), cmath.exp(-2.1j)]
        else:
            rad = tuple(min(a, b) for a, b in zip(default_radius(x), default_radius(y)))
            t_values = [rad, tuple(r * cmath.exp(1.3j) for r in rad)]
    xs = element_symplectic_exp(s)
    xx = element_symplectic_exp(x)
    conj_sym = np.linalg.solve(xs, xx @ xs)
    dev, det_dev = 0.0, 0.0
    for t in t_values:
        a = generating_trace(x, t, fam)
        b = generating_trace(y, t, fam)
        if not (a.status.has_value and b.status.has_value):
            return InvarianceReport("SKIPPED", t_values=list(t_values))
        dev = max(dev, abs(a.value - b.value) / max(1.0, abs(a.value)))
        d1 = _det_form(fam.symplectic_exp(t) @ xx, x.spec.r)
        d2 = _det_form(fam.symplectic_exp(t) @ conj_sym, x.spec.r)
        det_dev = max(det_dev, abs(d1 - d2) / max(1.0, abs(d1)))
    return InvarianceReport("OK", dev, det_dev, list(t_values))
