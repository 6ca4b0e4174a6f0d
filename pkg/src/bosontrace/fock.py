"""Brute-force traces in truncated Fock spaces.

Generators are assembled from explicit ladder-operator products, never from the
closed forms in :mod:`bosontrace.trace`, so the results here serve as ground truth.
su(2) and su(3) generators conserve the relevant particle numbers, so their block
traces are exact once the box holds the block.  su(1,1) pair creation couples every
``m`` of a sector; those traces are truncated and carry an error estimate from a
second run at half the cutoff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.special import gammaln

from .algebra import (
    AlgebraElement,
    AlgebraSpec,
    Group,
    IrrepLabel,
    SU2Irrep,
    SU3Irrep,
    SU11Irrep,
    build_algebra,
)
from .errors import NotConvergedError, TruncationTooLargeError

NNZ_CAP = 10**6


@dataclass(frozen=True)
class FockTruncation:
    """Box ``0 <= n_i <= n_max`` in ``r`` modes with a row-major index."""

    r: int
    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n_max + 1,) * self.r

    @property
    def dimension(self) -> int:
        return (self.n_max + 1) ** self.r

    def index(self, occ: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(occ), self.shape))

    def occupation(self, i: int) -> tuple[int, ...]:
        return tuple(int(v) for v in np.unravel_index(i, self.shape))

    def occupations(self) -> np.ndarray:
        """``(dimension, r)`` array of all occupation vectors in index order."""
        return np.array(np.unravel_index(np.arange(self.dimension), self.shape)).T


@lru_cache(maxsize=16)
def annihilators(trunc: FockTruncation) -> tuple:
    """Sparse ``a_i`` on the box; ``a_i^dag`` is the transpose."""
    d = trunc.n_max + 1
    a1 = sparse.diags(np.sqrt(np.arange(1, d, dtype=float)), 1, format="csr")
    eye = sparse.identity(d, format="csr")
    ops = []
    for i in range(trunc.r):
        op = sparse.identity(1, format="csr")
        for j in range(trunc.r):
            op = sparse.kron(op, a1 if j == i else eye, format="csr")
        ops.append(op)
    return tuple(ops)


def _check_size(trunc: FockTruncation, terms: int, cap: int):
    est = trunc.dimension * max(terms, 1)
    if est > cap:
        raise TruncationTooLargeError(f"about {est} nonzeros per generator exceeds the cap of {cap}")


@lru_cache(maxsize=16)
def _generator_matrices(group: Group, trunc: FockTruncation, cap: int) -> tuple:
    spec = build_algebra(group)
    if trunc.r != spec.r:
        raise ValueError(f"{group.value} needs {spec.r} modes, truncation has {trunc.r}")
    a = annihilators(trunc)
    ad = [op.T.tocsr() for op in a]
    mats = []
    if group is Group.SU11:
        _check_size(trunc, 2, cap)
        num = ad[0] @ a[0] + ad[1] @ a[1]
        eye = sparse.identity(trunc.dimension, format="csr")
        up, down = ad[0] @ ad[1], a[0] @ a[1]
        mats = [(up + down) / 2, (up - down) / 2j, (num + eye) / 2]
    else:
        # Schwinger / Mathur realization: G = a^dag h a
        for h in spec.fund_tables:
            nz = list(zip(*np.nonzero(np.abs(h) > 0)))
            _check_size(trunc, len(nz), cap)
            g = sparse.csr_matrix((trunc.dimension, trunc.dimension), dtype=complex)
            for k, l in nz:
                g = g + h[k, l] * (ad[k] @ a[l])
            mats.append(g)
    return tuple(sparse.csr_matrix(m, dtype=complex) for m in mats)


def build_generator_matrices(spec: AlgebraSpec, trunc: FockTruncation, *, nnz_cap: int = NNZ_CAP) -> list:
    """Sparse matrices of every generator on the truncated box.

    Boundary states (some ``n_i = n_max``) see truncated raising operators; only
    interior matrix elements are faithful.
    """
    return list(_generator_matrices(spec.group, trunc, nnz_cap))


def element_operator(elem: AlgebraElement, trunc: FockTruncation) -> sparse.csr_matrix:
    """``sum_i c_i G_i`` on the box."""
    mats = build_generator_matrices(elem.spec, trunc)
    out = sparse.csr_matrix(mats[0].shape, dtype=complex)
    for c, m in zip(elem.coeffs, mats):
        if c != 0:
            out = out + c * m
    return out


def quadratic_form_operator(m: np.ndarray, trunc: FockTruncation) -> sparse.csr_matrix:
    """``alpha M alpha^T`` with ``alpha = (a, a^dag)`` as a sparse matrix on the box."""
    a = annihilators(trunc)
    alpha = list(a) + [op.T.tocsr() for op in a]
    out = sparse.csr_matrix((trunc.dimension, trunc.dimension), dtype=complex)
    for i, j in zip(*np.nonzero(np.abs(m) > 0)):
        out = out + m[i, j] * (alpha[i] @ alpha[j])
    return out


# -- irreducible blocks ---------------------------------------------------------


@dataclass
class IrrepBasis:
    label: IrrepLabel
    members: list


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def irrep_basis(label: IrrepLabel, n_max: Optional[int] = None) -> IrrepBasis:
    """Fock states spanning the block of ``label``.

    su(3) labels give the ``(p,0) (x) (0,q)`` block (the irrep itself is a difference
    of two such blocks).  su(1,1) sectors are cut at ``n_max``, the per-mode cap.
    """
    if isinstance(label, SU2Irrep):
        members = [(label.two_j - n2, n2) for n2 in range(label.two_j + 1)]
    elif isinstance(label, SU3Irrep):
        members = [a + b for a in _compositions(label.p, 3) for b in _compositions(label.q, 3)]
    else:
        if n_max is None:
            raise ValueError("su(1,1) sectors are infinite; give n_max")
        d = abs(label.weight)
        if abs(2 * label.k - round(2 * label.k)) > 1e-12:
            raise ValueError("the two-mode realization only carries half-integer k")
        members = [(m + d, m) if label.weight >= 0 else (m, m + d) for m in range(n_max - d + 1)]
    return IrrepBasis(label, members)


def _block_expm(elem: AlgebraElement, members: list, n_max: int) -> np.ndarray:
    trunc = FockTruncation(elem.spec.r, n_max)
    op = element_operator(elem, trunc)
    idx = [trunc.index(m) for m in members]
    block = op[idx][:, idx].toarray()
    return scipy.linalg.expm(block)


def block_trace(elem: AlgebraElement, members: list, n_max: int) -> complex:
    """``sum_n <n| exp(x_hat) |n>`` over ``members`` with ``exp`` of the restricted block."""
    if not members:
        return 0j
    return complex(np.trace(_block_expm(elem, members, n_max)))


@dataclass
class OracleResult:
    value: complex
    error: float
    n_max: int


def _su11_sector_trace(elem: AlgebraElement, label: SU11Irrep, n_max: int) -> complex:
    return block_trace(elem, irrep_basis(label, n_max).members, n_max)


def oracle_irrep_trace(
    elem: AlgebraElement, label: IrrepLabel, n_max: Optional[int] = None, *, tol: Optional[float] = None
) -> OracleResult:
    """Trace of ``exp(x_hat)`` over the irreducible subspace ``label``.

    su(2)/su(3): exact block exponentials (the error estimate compares against the
    smallest box holding the block and is zero up to rounding).  su(1,1): truncated
    sector with error ``|T(n_max) - T(n_max / 2)|``; raises :class:`NotConvergedError`
    when that exceeds ``tol``.
    """
    if isinstance(label, SU2Irrep):
        need = max(label.two_j, 1)
        n_max = max(n_max or need, need)
        mem = irrep_basis(label).members
        v = block_trace(elem, mem, n_max)
        err = abs(v - block_trace(elem, mem, need)) if n_max != need else 0.0
        return OracleResult(v, err, n_max)
    if isinstance(label, SU3Irrep):
        need = max(label.p, label.q, 1)
        n_max = max(n_max or need, need)
        v = block_trace(elem, irrep_basis(label).members, n_max)
        if label.p > 0 and label.q > 0:
            v -= block_trace(elem, irrep_basis(SU3Irrep(label.p - 1, label.q - 1)).members, n_max)
        return OracleResult(v, 0.0, n_max)
    if n_max is None:
        raise ValueError("su(1,1) oracle needs n_max")
    v = _su11_sector_trace(elem, label, n_max)
    err = abs(v - _su11_sector_trace(elem, label, n_max // 2))
    if tol is not None and not err <= tol:
        raise NotConvergedError(f"truncation estimate {err:.3g} exceeds {tol:.3g}")
    return OracleResult(v, err, n_max)


def oracle_product_block_trace(elem: AlgebraElement, p: int, q: int) -> complex:
    """su(3) trace over the ``(p,0) (x) (0,q)`` Fock block."""
    return block_trace(elem, irrep_basis(SU3Irrep(p, q)).members, max(p, q, 1))


def oracle_sector_product(
    elems: Sequence[AlgebraElement], label: SU11Irrep, n_max: int, *, tol: Optional[float] = None
) -> OracleResult:
    """Trace of ``exp(x1_hat) exp(x2_hat) ...`` over an su(1,1) sector, truncated."""

    def run(n):
        mem = irrep_basis(label, n).members
        prod_m = np.eye(len(mem), dtype=complex)
        for e in elems:
            prod_m = prod_m @ _block_expm(e, mem, n)
        return complex(np.trace(prod_m))

    v = run(n_max)
    err = abs(v - run(n_max // 2))
    if tol is not None and not err <= tol:
        raise NotConvergedError(f"truncation estimate {err:.3g} exceeds {tol:.3g}")
    return OracleResult(v, err, n_max)


# -- generating functions -------------------------------------------------------------


def oracle_generating(elem: AlgebraElement, t, n_max: int):
    """``sum_n t^(w . n) <n| exp(x_hat) |n>`` summed block by block up to ``n_max``.

    ``t`` may be an array (su(2), su(1,1)) or a pair ``(t, t')`` for su(3); block
    traces are computed once and reused for every ``t``.  For su(3) the two mode
    triples are decoupled, so a ``(p, q)`` block trace is the product of three-mode
    block traces.
    """
    group = elem.spec.group
    if group is Group.SU2:
        t = np.asarray(t, dtype=complex)
        out = np.zeros_like(t)
        for two_j in range(n_max + 1):
            out = out + t**two_j * block_trace(elem, irrep_basis(SU2Irrep(two_j)).members, max(two_j, 1))
        return out
    if group is Group.SU11:
        t = np.asarray(t, dtype=complex)
        out = np.zeros_like(t)
        for d in range(-n_max, n_max + 1):
            label = SU11Irrep((abs(d) + 1) / 2, int(np.sign(d)))
            out = out + t**d * _su11_sector_trace(elem, label, n_max)
        return out
    tp, tq = (np.asarray(v, dtype=complex) for v in t)
    left = [_triple_block_trace(elem, p, 0) for p in range(n_max + 1)]
    right = [_triple_block_trace(elem, q, 1) for q in range(n_max + 1)]
    sp = sum(tp**p * v for p, v in enumerate(left))
    sq = sum(tq**q * v for q, v in enumerate(right))
    return sp * sq


def _triple_block_trace(elem: AlgebraElement, n: int, which: int) -> complex:
    # three-mode subsystem of the su(3) realization; ``which`` selects 3 (0) or 3-bar (1)
    h = np.tensordot(elem.coeffs, elem.spec.fund_tables, axes=1)
    h = h[:3, :3] if which == 0 else h[3:, 3:]
    trunc = FockTruncation(3, max(n, 1))
    a = annihilators(trunc)
    ad = [op.T.tocsr() for op in a]
    op = sparse.csr_matrix((trunc.dimension, trunc.dimension), dtype=complex)
    for k, l in zip(*np.nonzero(np.abs(h) > 0)):
        op = op + h[k, l] * (ad[k] @ a[l])
    idx = [trunc.index(m) for m in _compositions(n, 3)]
    return complex(np.trace(scipy.linalg.expm(op[idx][:, idx].toarray())))


# -- su(1,1) ladder sums ----------------------------------------------------------------


@dataclass
class LadderResult:
    value: complex
    tail: float
    m_max: int


def _ladder_diagonal(k: float, lp: complex, l3: complex, lm: complex, m_max: int) -> np.ndarray:
    # <k,m| e^{lp K+} e^{l3 K3} e^{lm K-} |k,m> =
    #   sum_j (lp lm)^j / (j!)^2 * m!/(m-j)! * G(m+2k)/G(m-j+2k) * e^{l3 (k+m-j)}
    m = np.arange(m_max + 1)[:, None]
    j = np.arange(m_max + 1)[None, :]
    valid = j <= m
    mj = np.where(valid, m - j, 0)
    log_c = (
        gammaln(m + 1) - gammaln(mj + 1) - 2 * gammaln(j + 1) + gammaln(m + 2 * k) - gammaln(mj + 2 * k)
    )
    prod = complex(lp) * complex(lm)
    if prod == 0:
        powers = np.where(j == 0, 0.0, -np.inf).astype(complex)
    else:
        powers = j * np.log(prod)
    expo = log_c + powers + complex(l3) * (k + mj)
    terms = np.where(valid, np.exp(np.where(valid, expo, -np.inf)), 0)
    return terms.sum(axis=1)


def su11_ladder_trace(
    k: float, lp: complex, l3: complex, lm: complex, m_max: int, *, tol: Optional[float] = None
) -> LadderResult:
    """``sum_{m <= m_max} <k,m| e^{lp K+} e^{l3 K3} e^{lm K-} |k,m>`` for real ``k > 0``.

    Matrix elements come from the ladder relations of the discrete series with
    log-gamma coefficients.  ``tail`` is the change against the sum cut at
    ``m_max / 2``; :class:`NotConvergedError` when it exceeds ``tol``.
    """
    if k <= 0:
        raise ValueError("Bargmann index must be positive")
    diag = _ladder_diagonal(k, lp, l3, lm, m_max)
    value = complex(diag.sum())
    tail = abs(complex(diag[m_max // 2 + 1 :].sum()))
    if tol is not None and not tail <= tol:
        raise NotConvergedError(f"ladder tail {tail:.3g} exceeds {tol:.3g}")
    return LadderResult(value, tail, m_max)
