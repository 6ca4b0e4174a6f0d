"""Boson realizations of su(2), su(3) and su(1,1).

Every generator ``x`` is realized as a quadratic form ``alpha M(x) alpha^T`` in the
operator vector ``alpha = (a_1..a_r, a_1^dag..a_r^dag)``.  ``M`` is fixed so that the
symmetrized bilinear reproduces the normal-ordered generator including the c-number
produced by reordering ``a a^dag``.  For a number-conserving one-body operator
``a^dag h a`` this gives ``M = [[0, h^T/2], [h/2, 0]]`` and a c-number ``tr(h)/2``.

Generator order is part of the public contract: coefficient vectors are positional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from ._constants import GELL_MANN, SIGMA


class Group(str, Enum):
    SU2 = "su2"
    SU3 = "su3"
    SU11 = "su11"


class SeriesKind(str, Enum):
    TAYLOR = "taylor"
    LAURENT = "laurent"


def omega(r: int) -> np.ndarray:
    """Exchange form ``[[0, 1], [1, 0]]`` of size 2r."""
    z, e = np.zeros((r, r)), np.eye(r)
    return np.block([[z, e], [e, z]])


def tau(r: int) -> np.ndarray:
    """Symplectic form ``[[0, 1], [-1, 0]]`` of size 2r."""
    z, e = np.zeros((r, r)), np.eye(r)
    return np.block([[z, e], [-e, z]])


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    """Immutable table describing one boson realization.

    ``fund_tables`` holds the defining (2x2) representation for su(2) and su(1,1);
    for su(3) it holds the 6x6 block-diagonal ``rho (+) rho'`` (the 3 and 3-bar).
    """

    group: Group
    r: int
    generators: tuple[str, ...]
    m_tables: np.ndarray
    fund_tables: np.ndarray
    cartan_indices: tuple[int, ...]

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise KeyError(f"{name!r} is not a generator of {self.group.value}") from None

    def element(self, coeffs=None, **named) -> "AlgebraElement":
        """Build an element from a positional vector and/or generator keywords."""
        c = np.zeros(self.n_generators, dtype=complex)
        if coeffs is not None:
            c += np.asarray(coeffs, dtype=complex)
        for name, value in named.items():
            c[self.index(name)] += value
        return AlgebraElement(self, c)

    def zero(self) -> "AlgebraElement":
        return self.element()


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Complexified Lie-algebra element given by its generator coefficients."""

    spec: AlgebraSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.shape[0] != self.spec.n_generators:
            raise ValueError(
                f"{self.spec.group.value} needs {self.spec.n_generators} coefficients, got {c.shape[0]}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if other.spec.group is not self.spec.group:
            raise ValueError("cannot add elements of different algebras")
        return AlgebraElement(self.spec, self.coeffs + other.coeffs)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-1) * other

    def __mul__(self, s) -> "AlgebraElement":
        return AlgebraElement(self.spec, complex(s) * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self) -> "AlgebraElement":
        return (-1) * self

    def to_dict(self) -> dict:
        """JSON-ready form ``{"group": ..., "coeffs": {name: [re, im]}}`` (nonzero entries)."""
        return {
            "group": self.spec.group.value,
            "coeffs": {
                name: [float(c.real), float(c.imag)]
                for name, c in zip(self.spec.generators, self.coeffs)
                if c != 0
            },
        }


def _pair(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ValueError(f"complex numbers are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, (int, float)):
        return complex(v)
    raise ValueError(f"cannot read {v!r} as a complex number")


def element_from_json(data: Union[str, Mapping], group: Union[str, Group, None] = None) -> AlgebraElement:
    """Parse the element wire format.

    Accepts ``{"group": "su2", "coeffs": {"J3": [0, 0.5]}}`` or a bare coefficient
    mapping together with ``group``.  Omitted generators are zero.
    """
    if isinstance(data, str):
        data = json.loads(data)
    data = dict(data)
    if "coeffs" in data:
        group = data.get("group", group)
        coeffs = data["coeffs"]
    else:
        coeffs = data
    if group is None:
        raise ValueError("element JSON needs a group")
    spec = build_algebra(group)
    if not isinstance(coeffs, Mapping):
        raise ValueError("coeffs must be an object mapping generator names to [re, im]")
    return spec.element(**{name: _pair(v) for name, v in coeffs.items()})


def _number_conserving_m(h: np.ndarray) -> np.ndarray:
    r = h.shape[0]
    z = np.zeros((r, r), dtype=complex)
    return np.block([[z, h.T / 2], [h / 2, z]])


def _su11_m_tables() -> np.ndarray:
    # K1 = (a1^+ a2^+ + a1 a2)/2, K2 = (a1^+ a2^+ - a1 a2)/(2i), K3 = (n1 + n2 + 1)/2
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    z = np.zeros((2, 2), dtype=complex)
    e = np.eye(2, dtype=complex)
    k1 = np.block([[x / 4, z], [z, x / 4]])
    k2 = np.block([[-x / 4j, z], [z, x / 4j]])
    k3 = np.block([[z, e / 4], [e / 4, z]])
    return np.array([k1, k2, k3])


@lru_cache(maxsize=None)
def build_algebra(group: Union[str, Group]) -> AlgebraSpec:
    """Return the boson realization table for ``group`` ("su2", "su3" or "su11")."""
    group = Group(group)
    if group is Group.SU2:
        fund = SIGMA / 2
        return AlgebraSpec(
            group=group,
            r=2,
            generators=("J1", "J2", "J3"),
            m_tables=_frozen([_number_conserving_m(h) for h in fund]),
            fund_tables=_frozen(fund),
            cartan_indices=(2,),
        )
    if group is Group.SU3:
        rho = GELL_MANN / 2
        rho_bar = -GELL_MANN.conj() / 2
        z = np.zeros((3, 3), dtype=complex)
        fund = [np.block([[a, z], [z, b]]) for a, b in zip(rho, rho_bar)]
        return AlgebraSpec(
            group=group,
            r=6,
            generators=tuple(f"T{i}" for i in range(1, 9)),
            m_tables=_frozen([_number_conserving_m(h) for h in fund]),
            fund_tables=_frozen(fund),
            cartan_indices=(2, 7),
        )
    fund = np.array([1j * SIGMA[1] / 2, -1j * SIGMA[0] / 2, SIGMA[2] / 2])
    return AlgebraSpec(
        group=group,
        r=2,
        generators=("K1", "K2", "K3"),
        m_tables=_frozen(_su11_m_tables()),
        fund_tables=_frozen(fund),
        cartan_indices=(2,),
    )


def quadratic_rep(elem: AlgebraElement) -> np.ndarray:
    """Symmetric 2r x 2r matrix ``M(x)`` with ``x_hat = alpha M alpha^T``."""
    return np.tensordot(elem.coeffs, elem.spec.m_tables, axes=1)


def symplectic_rep(m: np.ndarray) -> np.ndarray:
    """Symplectic representation ``2 tau M``; its exponential preserves ``tau``."""
    m = np.asarray(m)
    return 2 * tau(m.shape[0] // 2) @ m


def fundamental_rep(elem: AlgebraElement):
    """Defining-representation matrix of ``elem``.

    For su(3) the pair ``(rho(x), rho'(x))`` of the 3 and 3-bar is returned.
    """
    f = np.tensordot(elem.coeffs, elem.spec.fund_tables, axes=1)
    if elem.spec.group is Group.SU3:
        return f[:3, :3], f[3:, 3:]
    return f


def structure_constants(spec: AlgebraSpec) -> np.ndarray:
    """``c[i, j, k]`` with ``[rho_i, rho_j] = sum_k c[i, j, k] rho_k`` (from the fundamental)."""
    basis = spec.fund_tables.reshape(spec.n_generators, -1).T
    n = spec.n_generators
    c = np.zeros((n, n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            comm = spec.fund_tables[i] @ spec.fund_tables[j] - spec.fund_tables[j] @ spec.fund_tables[i]
            sol, *_ = np.linalg.lstsq(basis, comm.reshape(-1), rcond=None)
            c[i, j] = sol
    return c


def commutator_element(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Algebra element ``[x, y]`` expanded with the structure constants."""
    c = structure_constants(x.spec)
    return AlgebraElement(x.spec, np.einsum("i,j,ijk->k", x.coeffs, y.coeffs, c))


def element_from_fundamental(spec: AlgebraSpec, rho: np.ndarray) -> AlgebraElement:
    """Inverse of :func:`fundamental_rep` for su(2)/su(1,1), and for su(3) given the 3-block."""
    tables = spec.fund_tables
    if spec.group is Group.SU3:
        tables = tables[:, :3, :3]
    basis = tables.reshape(spec.n_generators, -1).T
    sol, *_ = np.linalg.lstsq(basis, np.asarray(rho, dtype=complex).reshape(-1), rcond=None)
    return AlgebraElement(spec, sol)


# -- irrep labels -----------------------------------------------------------


@dataclass(frozen=True)
class SU2Irrep:
    two_j: int

    @property
    def dimension(self) -> int:
        return self.two_j + 1

    def __str__(self):
        return f"2j={self.two_j}"


@dataclass(frozen=True)
class SU3Irrep:
    p: int
    q: int

    @property
    def dimension(self) -> int:
        return (self.p + 1) * (self.q + 1) * (self.p + self.q + 2) // 2

    def __str__(self):
        return f"p={self.p},q={self.q}"


@dataclass(frozen=True)
class SU11Irrep:
    """Bargmann index ``k`` and sector sign (+1: n1 > n2, -1: n1 < n2, 0: k = 1/2)."""

    k: float
    sign: int = 1

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError("Bargmann index must be positive")
        if self.sign not in (-1, 0, 1):
            raise ValueError("sector sign must be -1, 0 or +1")

    @property
    def two_k(self) -> float:
        return 2 * self.k

    @property
    def weight(self) -> int:
        """Eigenvalue of ``n1 - n2`` on the sector (half-integer ``k`` only)."""
        d = round(2 * self.k) - 1
        return d if self.sign >= 0 else -d

    def __str__(self):
        s = {1: "+", -1: "-", 0: "0"}[self.sign]
        return f"k={self.k:g},s={s}"


IrrepLabel = Union[SU2Irrep, SU3Irrep, SU11Irrep]


def parse_irrep(group: Union[str, Group], text: str) -> IrrepLabel:
    """Parse ``2j=4``, ``j=2``, ``p=1,q=2``, ``2k=3``, ``k=1.5,s=-`` style labels."""
    group = Group(group)
    fields = {}
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        key, _, value = part.partition("=")
        fields[key.lower()] = value
    try:
        if group is Group.SU2:
            if "2j" in fields:
                return SU2Irrep(int(fields["2j"]))
            return SU2Irrep(int(Fraction(fields["j"]) * 2))
        if group is Group.SU3:
            return SU3Irrep(int(fields["p"]), int(fields["q"]))
        k = float(Fraction(fields["k"])) if "k" in fields else float(fields["2k"]) / 2
        s = fields.get("s", "+")
        sign = {"+": 1, "-": -1, "0": 0, "1": 1, "-1": -1}[s]
        if abs(k - 0.5) < 1e-12:
            sign = 0
        return SU11Irrep(k, sign)
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad {group.value} irrep label {text!r}") from exc


def irrep_to_dict(label: IrrepLabel) -> dict:
    if isinstance(label, SU2Irrep):
        return {"2j": label.two_j}
    if isinstance(label, SU3Irrep):
        return {"p": label.p, "q": label.q}
    return {"k": label.k, "s": label.sign}


# -- projector families -----------------------------------------------------


@dataclass(frozen=True, eq=False)
class ProjectorFamily:
    """Generator of the irreducible-sector projectors.

    ``P(t) = prod_p t_p ** (sum_i weights[p, i] n_i)``; ``f(t) = prod_p t_p ** f_exponents[p]``
    is the scalar left over after writing ``P(t)`` as ``f(t) exp(alpha P alpha^T)``.
    """

    group: Group
    weights: np.ndarray
    f_exponents: tuple[Fraction, ...]
    series_kind: SeriesKind
    label_map: Callable[[tuple[int, ...]], IrrepLabel] = field(repr=False)
    exponent_map: Callable[[IrrepLabel], tuple[int, ...]] = field(repr=False)

    @property
    def n_params(self) -> int:
        return self.weights.shape[0]

    def mode_factors(self, t: Sequence[complex]) -> np.ndarray:
        """Per-mode diagonal of ``P(t)``: ``prod_p t_p ** weights[p, i]``."""
        t = np.atleast_1d(np.asarray(t, dtype=complex))
        out = np.ones(self.weights.shape[1], dtype=complex)
        for tp, w in zip(t, self.weights):
            out = out * tp ** w.astype(float)
        return out

    def f_value(self, t: Sequence[complex]) -> complex:
        """``f(t)`` with principal powers."""
        t = np.atleast_1d(np.asarray(t, dtype=complex))
        return complex(np.prod([tp ** float(e) for tp, e in zip(t, self.f_exponents)]))

    def f_inverse_square(self, t: Sequence[complex]) -> complex:
        """``f(t) ** -2``; always an integer power, so single valued."""
        t = np.atleast_1d(np.asarray(t, dtype=complex))
        return complex(np.prod([tp ** int(-2 * e) for tp, e in zip(t, self.f_exponents)]))

    def matrix(self, t: Sequence[complex]) -> np.ndarray:
        """Symmetric ``P(t)`` (principal logarithm of each ``t_p``)."""
        t = np.atleast_1d(np.asarray(t, dtype=complex))
        lw = sum(np.log(tp) * w for tp, w in zip(t, self.weights))
        return _number_conserving_m(np.diag(lw))

    def symplectic_exp(self, t: Sequence[complex]) -> np.ndarray:
        """``exp(2 tau P(t))`` built from integer powers, free of logarithm branches."""
        d = self.mode_factors(t)
        return np.diag(np.concatenate([d, 1 / d]))


def _su2_label(n):
    return SU2Irrep(int(n[0]))


def _su2_exp(label):
    return (label.two_j,)


def _su3_label(n):
    return SU3Irrep(int(n[0]), int(n[1]))


def _su3_exp(label):
    return (label.p, label.q)


def _su11_label(n):
    (e,) = n
    k = (abs(int(e)) + 1) / 2
    return SU11Irrep(k, int(np.sign(e)))


def _su11_exp(label):
    return (label.weight,)


def projector_family(spec: AlgebraSpec) -> ProjectorFamily:
    """Projector generating family for the realization ``spec``.

    The scalar ``f`` is derived from the c-number of the symmetrized weighted number
    operator, ``f = prod_p t_p ** (-sum_i w_pi / 2)``.
    """
    if spec.group is Group.SU2:
        w = np.array([[1, 1]])
        kind, lab, exp = SeriesKind.TAYLOR, _su2_label, _su2_exp
    elif spec.group is Group.SU3:
        w = np.array([[1, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1]])
        kind, lab, exp = SeriesKind.TAYLOR, _su3_label, _su3_exp
    else:
        w = np.array([[1, -1]])
        kind, lab, exp = SeriesKind.LAURENT, _su11_label, _su11_exp
    w.setflags(write=False)
    f_exp = tuple(-Fraction(int(row.sum()), 2) for row in w)
    return ProjectorFamily(spec.group, w, f_exp, kind, lab, exp)


def random_element(spec: AlgebraSpec, rng: np.random.Generator, max_norm: float = 3.0) -> AlgebraElement:
    """Complex element with coefficient norm uniform in ``[0, max_norm]``."""
    z = rng.normal(size=spec.n_generators) + 1j * rng.normal(size=spec.n_generators)
    return AlgebraElement(spec, z / np.linalg.norm(z) * rng.uniform(0, max_norm))
