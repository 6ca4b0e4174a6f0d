import math

import numpy as np
import pytest

from bosontrace.algebra import Group, SU2Irrep, SU3Irrep, SU11Irrep, build_algebra, random_element, structure_constants
from bosontrace.errors import NotConvergedError, TruncationTooLargeError
from bosontrace.fock import (
    FockTruncation,
    build_generator_matrices,
    element_operator,
    irrep_basis,
    oracle_generating,
    oracle_irrep_trace,
    oracle_product_block_trace,
    oracle_sector_product,
    su11_ladder_trace,
)
from bosontrace.su11 import gauss_decompose, random_hyperbolic
from bosontrace.trace import irrep_trace_su3, irrep_trace_su11, spectral_data, complete_homogeneous

SU2, SU3, SU11 = (build_algebra(g) for g in Group)
# frozen from the ladder sum at m_max = 800
LADDER_037 = 1.2622216283716066 + 0.06916756221758778j


def test_truncation_index_round_trip():
    tr = FockTruncation(3, 4)
    assert tr.dimension == 125
    for i in (0, 17, 124):
        assert tr.index(tr.occupation(i)) == i


def test_j3_on_fock_state():
    tr = FockTruncation(2, 3)
    j3 = build_generator_matrices(SU2, tr)[2]
    v = np.zeros(tr.dimension)
    v[tr.index((1, 0))] = 1
    assert np.allclose(j3 @ v, 0.5 * v)


def test_su11_ladder_commutator():
    tr = FockTruncation(2, 8)
    k1, k2, k3 = build_generator_matrices(SU11, tr)
    kp, km = k1 + 1j * k2, k1 - 1j * k2
    comm = (kp @ km - km @ kp).toarray()
    interior = np.all(tr.occupations() < 7, axis=1)
    idx = np.ix_(interior, interior)
    assert np.allclose(comm[idx], -2 * k3.toarray()[idx], atol=1e-12)


@pytest.mark.parametrize("group", list(Group), ids=lambda g: g.value)
def test_generator_structure_constants(group):
    spec = build_algebra(group)
    n_max = 6 if group is not Group.SU3 else 2
    tr = FockTruncation(spec.r, n_max)
    gens = [g.toarray() for g in build_generator_matrices(spec, tr)]
    f = structure_constants(spec)
    interior = np.all(tr.occupations() < n_max - 1, axis=1)
    idx = np.ix_(interior, interior)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            lhs = gens[i] @ gens[j] - gens[j] @ gens[i]
            rhs = sum(f[i, j, k] * gens[k] for k in range(len(gens)))
            assert np.max(np.abs((lhs - rhs)[idx])) < 1e-12


def test_hermitian_generators(spec):
    n_max = 4 if spec.group is not Group.SU3 else 1
    for g in build_generator_matrices(spec, FockTruncation(spec.r, n_max)):
        d = g.toarray()
        assert np.allclose(d, d.conj().T, atol=1e-12)


def test_size_cap():
    with pytest.raises(TruncationTooLargeError):
        build_generator_matrices(SU3, FockTruncation(6, 12), nnz_cap=10**5)


def test_irrep_bases():
    assert all(sum(m) == 4 for m in irrep_basis(SU2Irrep(4)).members)
    assert all(sum(m[:3]) == 2 and sum(m[3:]) == 1 for m in irrep_basis(SU3Irrep(2, 1)).members)
    mem = irrep_basis(SU11Irrep(1.5, -1), 10).members
    assert all(m[0] - m[1] == -2 for m in mem)
    assert [min(m) for m in mem] == list(range(len(mem)))
    with pytest.raises(ValueError):
        irrep_basis(SU11Irrep(0.37, 1), 10)


def test_oracle_examples():
    assert oracle_irrep_trace(SU2.zero(), SU2Irrep(4)).value == pytest.approx(5)
    x = SU11.element(K3=-2 * math.log(2))
    assert abs(oracle_irrep_trace(x, SU11Irrep(0.5, 0), 60).value - 2 / 3) < 1e-9


def test_oracle_su3_cartan_block(rng):
    x = build_algebra("su3").element(T3=0.3 + 0.2j, T8=-0.6 + 0.1j)
    h = complete_homogeneous(spectral_data(x).eps, 2)
    assert abs(oracle_irrep_trace(x, SU3Irrep(2, 0)).value - h[2]) < 1e-10
    y = random_element(SU3, rng, 1.5)
    diff = oracle_product_block_trace(y, 2, 1) - oracle_product_block_trace(y, 1, 0)
    assert abs(diff - irrep_trace_su3(y, 2, 1)) < 1e-10 * max(1, abs(diff))


def test_oracle_generating():
    assert abs(oracle_generating(SU2.zero(), 0.5, 60) - 4) < 1e-12
    v = oracle_generating(SU3.zero(), (0.3, 0.3), 60)
    assert abs(v - 0.7**-6) < 1e-10


def test_oracle_generating_su11_unit_circle():
    from bosontrace.trace import generating_trace

    x = random_hyperbolic(np.random.default_rng(11), eps_max=0.6)
    ts = np.exp(1j * np.array([0.0, 1.1, 2.9, -2.0]))
    vals = oracle_generating(x, ts, 120)
    for t, v in zip(ts, vals):
        assert abs(v - generating_trace(x, t).value) < 1e-6


def test_su11_truncation_sweep():
    x = random_hyperbolic(np.random.default_rng(7), eps_max=0.7, eps_min=0.6)
    errs = []
    for n in (40, 80, 160):
        o = oracle_irrep_trace(x, SU11Irrep(1.5, 1), n)
        errs.append(abs(o.value - irrep_trace_su11(x, 1.5).value))
    assert errs[-1] < 1e-6
    assert errs[1] <= errs[0] / 10 or errs[0] < 1e-12


def test_su11_oracle_tolerance_flag():
    x = random_hyperbolic(np.random.default_rng(7), eps_max=0.8, eps_min=0.75)
    with pytest.raises(NotConvergedError):
        oracle_irrep_trace(x, SU11Irrep(1.0, 1), 10, tol=1e-12)


def test_sector_product_identity():
    x = random_hyperbolic(np.random.default_rng(2))
    half = x * 0.5
    prod = oracle_sector_product([half, half], SU11Irrep(1.0, -1), 120)
    assert abs(prod.value - oracle_irrep_trace(x, SU11Irrep(1.0, -1), 120).value) < 1e-10


def test_ladder_examples():
    beta = 0.4
    for k in (0.37, 1.0, 2.5):
        v = su11_ladder_trace(k, 0, -2 * beta, 0, 300).value
        assert abs(v - math.exp(-2 * beta * k) / (1 - math.exp(-2 * beta))) < 1e-12
    assert abs(su11_ladder_trace(0.37, -0.12 + 0.03j, -0.9 + 0.05j, -0.1 - 0.02j, 800).value - LADDER_037) < 1e-12


def test_ladder_doubling():
    x = random_hyperbolic(np.random.default_rng(4), eps_max=0.8, eps_min=0.7)
    f = gauss_decompose(x)
    a = su11_ladder_trace(1.25, f.lp, f.l3, f.lm, 400).value
    b = su11_ladder_trace(1.25, f.lp, f.l3, f.lm, 800).value
    assert abs(a - b) < 1e-8
    with pytest.raises(NotConvergedError):
        su11_ladder_trace(1.25, f.lp, f.l3, f.lm, 8, tol=1e-12)


def test_element_operator_linear(rng):
    tr = FockTruncation(2, 4)
    x, y = random_element(SU2, rng), random_element(SU2, rng)
    lhs = element_operator(x + 2 * y, tr).toarray()
    rhs = element_operator(x, tr).toarray() + 2 * element_operator(y, tr).toarray()
    assert np.allclose(lhs, rhs)
