import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bosontrace.algebra import AlgebraElement, Group, SU2Irrep, SU3Irrep, SU11Irrep, build_algebra, random_element
from bosontrace.errors import SingularMatrixError
from bosontrace.su11 import random_hyperbolic
from bosontrace.trace import (
    Status,
    TraceOutcome,
    conjugation_invariance_check,
    element_symplectic_exp,
    extract_irrep_trace,
    generating_on_grid,
    generating_trace,
    irrep_trace,
    irrep_trace_su2,
    irrep_trace_su3,
    irrep_trace_su11,
    series_coefficients,
    spectral_data,
)
from conftest import rel_close

SU2, SU3, SU11 = (build_algebra(g) for g in Group)

# frozen from the Fock-space oracle (block exponentials; n_max=300 for su11)
X2 = SU2.element(J1=0.3 + 0.2j, J2=-0.5 + 0.1j, J3=0.7 - 0.4j)
X2_SPIN32 = 5.579429871718483 - 1.6508691995563785j
X3 = SU3.element(T1=0.2 + 0.1j, T3=0.4 - 0.3j, T5=-0.1 + 0.2j, T8=0.5 + 0.2j)
X3_21 = 16.500569684205136 - 0.3413155360904319j
X11 = SU11.element(K1=-0.4 + 0.05j, K2=0.2, K3=-1.6 + 0.1j)
X11_K32 = 0.12529926184085313 + 0.02042424117490759j


def test_outcome_refuses_value_on_divergence():
    with pytest.raises(ValueError):
        TraceOutcome(1.0, Status.DIVERGENT)
    assert TraceOutcome(None, Status.DIVERGENT).value is None


def test_generating_su2_origin():
    out = generating_trace(SU2.zero(), 0.5)
    assert out.status is Status.CONVERGENT
    assert abs(out.value - 4) < 1e-12


def test_generating_su2_origin_complex_t():
    for t in (0.3j, -0.4 + 0.1j, 0.2 * cmath.exp(2.5j)):
        assert abs(generating_trace(SU2.zero(), t).value - (1 - t) ** -2) < 1e-12


def test_generating_su3_origin():
    t, tp = 0.3, 0.2 + 0.1j
    out = generating_trace(SU3.zero(), (t, tp))
    assert abs(out.value - (1 - t) ** -3 * (1 - tp) ** -3) < 1e-12


def test_generating_su11_diagonal_on_unit_circle():
    beta = math.log(2)
    x = SU11.element(K3=-2 * beta)
    for phi in np.linspace(0, 2 * np.pi, 7, endpoint=False):
        t = cmath.exp(1j * phi)
        out = generating_trace(x, t)
        assert out.status is Status.CONVERGENT
        assert abs(out.value - (-t / ((t - 0.5) * (t - 2)))) < 1e-12


def test_generating_su11_elliptic_divergent():
    out = generating_trace(SU11.element(K3=0.8j), 1.0)
    assert out.status is Status.DIVERGENT and out.value is None
    assert irrep_trace_su11(SU11.element(K3=0.8j), 1.0).status is Status.DIVERGENT


def test_generating_pole_reported():
    x = SU11.element(K3=-2 * math.log(2))
    with pytest.raises(SingularMatrixError):
        generating_trace(x, 0.5)


def test_grid_matches_pointwise():
    x = random_hyperbolic(np.random.default_rng(3))
    ts = np.exp(2j * np.pi * np.arange(12) / 12)
    ev = generating_on_grid(x, ts)
    for t, v in zip(ts, ev.values):
        assert abs(v - generating_trace(x, t).value) < 1e-12 * max(1, abs(v))


def test_spectral_examples():
    assert spectral_data(SU2.zero()).eps == 1
    sd = spectral_data(SU11.element(K3=-2 * math.log(2)))
    assert abs(sd.eps - 0.5) < 1e-15 and abs(sd.pair[1] - 2) < 1e-14
    x = SU3.element(T3=0.4, T8=-0.7j)
    sd = spectral_data(x)
    rho = np.diag([0.2 - 0.7j / (2 * math.sqrt(3)), -0.2 - 0.7j / (2 * math.sqrt(3)), 0.7j / math.sqrt(3)])
    assert np.allclose(np.sort_complex(sd.eps), np.sort_complex(np.exp(np.diag(rho))))
    assert abs(np.prod(sd.eps) - 1) < 1e-12


@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False), min_size=3, max_size=3))
def test_su2_pair_product_is_one(c):
    sd = spectral_data(AlgebraElement(SU2, c))
    assert abs(sd.pair[0] * sd.pair[1] - 1) < 1e-10
    assert abs(sd.eps) <= 1 + 1e-12


@given(st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False), min_size=8, max_size=8))
def test_su3_eigenvalue_product_is_one(c):
    assert abs(np.prod(spectral_data(AlgebraElement(SU3, c)).eps) - 1) < 1e-10


def test_su2_examples():
    for two_j in range(7):
        assert irrep_trace_su2(SU2.zero(), two_j) == pytest.approx(two_j + 1)
    beta = 2 * math.log(2)  # e^{-beta/2} = 1/2
    assert irrep_trace_su2(SU2.element(J3=-beta), 2) == pytest.approx(5.25, abs=1e-12)
    assert abs(irrep_trace_su2(X2, 3) - X2_SPIN32) < 1e-12


def test_su2_degenerate_limit_is_continuous():
    for two_j in (1, 4, 9):
        a = irrep_trace_su2(SU2.element(J3=1e-7j), two_j)
        b = irrep_trace_su2(SU2.element(J3=3e-6j), two_j)
        assert abs(a - (two_j + 1)) < 1e-9 and abs(b - (two_j + 1)) < 1e-9


def test_su3_examples():
    assert irrep_trace_su3(SU3.zero(), 1, 1) == pytest.approx(8)
    for p in range(5):
        assert irrep_trace_su3(SU3.zero(), p, 0) == pytest.approx((p + 1) * (p + 2) / 2)
    for p in range(4):
        for q in range(4):
            dim = (p + 1) * (q + 1) * (p + q + 2) / 2
            assert irrep_trace_su3(SU3.zero(), p, q) == pytest.approx(dim)
    assert abs(irrep_trace_su3(X3, 2, 1) - X3_21) < 1e-12


def test_su11_examples():
    x = SU11.element(K3=-2 * math.log(2))
    assert irrep_trace_su11(x, 0.5).value == pytest.approx(2 / 3, abs=1e-14)
    assert irrep_trace_su11(x, 1.0).value == pytest.approx(1 / 3, abs=1e-14)
    assert abs(irrep_trace_su11(X11, 1.5).value - X11_K32) < 1e-12
    assert irrep_trace(X11, SU11Irrep(1.5, -1)).value == irrep_trace_su11(X11, 1.5).value


def test_su11_inverted_oscillator_divergent():
    # +2 beta K3 has |eps| < 1 for the inverse eigenvalue but the trace diverges
    out = irrep_trace_su11(SU11.element(K3=2.0), 0.5)
    assert out.status is Status.DIVERGENT


def test_divergence_boundary_flip():
    def x(b):
        return SU11.element(K3=-2.0, K1=-2.0 * b)

    for b in (0.0, 0.5, 0.95):
        assert irrep_trace_su11(x(b), 1.0).status is Status.CONVERGENT
        assert generating_trace(x(b), 1.0).status is Status.CONVERGENT
    for b in (1.05, 1.5):
        assert irrep_trace_su11(x(b), 1.0).status is Status.DIVERGENT
        assert generating_trace(x(b), 1.0).status is Status.DIVERGENT


@given(st.lists(st.floats(-2, 2), min_size=3, max_size=3))
def test_su2_hermitian_traces_are_positive(c):
    x = AlgebraElement(SU2, np.array(c, dtype=complex))
    for two_j in range(6):
        v = irrep_trace_su2(x, two_j)
        assert abs(v.imag) < 1e-10 * abs(v) and v.real > 0


@given(st.floats(0.2, 3), st.floats(-0.9, 0.9), st.floats(-0.9, 0.9))
def test_su11_hermitian_traces_are_positive(a, b, c):
    scale = math.hypot(b, c)
    if scale >= 0.95:
        return
    x = SU11.element(K3=-a, K1=-a * b, K2=-a * c)
    for k in (0.5, 1.0, 1.25, 2.0):
        v = irrep_trace_su11(x, k).value
        assert abs(v.imag) < 1e-10 * abs(v) and v.real > 0


def test_symplectic_exp_unimodular(spec, rng):
    for _ in range(5):
        d = np.linalg.det(element_symplectic_exp(random_element(spec, rng, 2.0)))
        assert abs(d - 1) < 1e-10


def test_conjugation_trivial():
    rep = conjugation_invariance_check(X2, SU2.zero())
    assert rep.status == "OK" and rep.deviation < 1e-15


def test_conjugation_su2(rng):
    for _ in range(3):
        rep = conjugation_invariance_check(random_element(SU2, rng), random_element(SU2, rng, 1.0))
        assert rep.status == "OK" and rep.deviation < 1e-9 and rep.det_deviation < 1e-9


def test_conjugation_su11_small_k1():
    rep = conjugation_invariance_check(SU11.element(K3=-2 * 0.8), SU11.element(K1=0.1))
    assert rep.status == "OK" and rep.deviation < 1e-8


def test_extraction_su2():
    ext = series_coefficients(X2, (0, 6))
    for n in range(7):
        assert rel_close(ext.coefficients[n], irrep_trace_su2(X2, n), 1e-9)


def test_extraction_su11_both_signs():
    x = random_hyperbolic(np.random.default_rng(5))
    ext = series_coefficients(x, (-6, 6))
    for n in range(-6, 7):
        k = (abs(n) + 1) / 2
        assert rel_close(ext.coefficients[n], irrep_trace_su11(x, k).value, 1e-9)


def test_extraction_su3_irrep():
    out = extract_irrep_trace(X3, SU3Irrep(2, 1))
    assert out.status is Status.CONVERGENT
    assert rel_close(out.value, X3_21, 1e-9)


def test_extraction_divergent_element():
    out = extract_irrep_trace(SU11.element(K3=0.5j, K1=0.1), SU11Irrep(1.0, 1))
    assert out.status is Status.DIVERGENT and out.value is None


def test_extraction_su2_label():
    out = extract_irrep_trace(X2, SU2Irrep(3))
    assert rel_close(out.value, X2_SPIN32, 1e-9)
