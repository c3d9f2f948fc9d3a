import itertools
import math

import numpy as np
import pytest

from opideal.ideals import PreconditionError, classify_case, includes, member, preceq
from opideal.sequences import PowerLogFamily
from opideal.snorms import INF, LorentzIndex, catalog, lorentz_norm
from opideal.spectra import characteristic_numbers
from opideal.topology_lab import (
    CatalogMember,
    SeparationExperiment,
    analytic_tail_sup,
    bounded_coincidence,
    build_catalog,
    hardy_value,
    interior_families,
    needapprox_demo,
    ordering_consistency,
    random_contraction,
    run_separation,
    separation_pairs,
    transfer_constant,
)

L = LorentzIndex
CATALOG = catalog()
ORDERED = [i for i in CATALOG if i.is_approximable and (i.p, i.q) != (1, INF)]
COMPACTS = L(INF, INF, True)

# brute-force scan at dim 10^4: the running minimum is attained at the last
# index by the (alpha, 1/q + 1.5) family against the (1/2, 0) witness
COMPACTS_HS_FINAL = 0.011787791270652416


# -- catalogue ---------------------------------------------------------------------


@pytest.mark.parametrize("idx", CATALOG, ids=str)
def test_interior_families_are_members(idx):
    for f in interior_families(idx):
        assert member(f, idx).member


def test_catalog_member_row_col_norms(rng):
    for m in build_catalog(L(2, 2), seed=3, dim_hint=16):
        T = m.matrix(40)
        rows, cols = m.row_col_norms(40)
        np.testing.assert_allclose(rows, np.linalg.norm(T, axis=1), rtol=1e-12)
        np.testing.assert_allclose(cols, np.linalg.norm(T, axis=0), rtol=1e-12)
        # conjugation keeps the characteristic numbers
        np.testing.assert_allclose(characteristic_numbers(T).values, m.diagonal(40), atol=1e-12)


# -- separation ---------------------------------------------------------------------


def test_compacts_vs_hilbert_schmidt():
    e = SeparationExperiment.build(COMPACTS, L(2, 2), 10**4)
    assert (e.witness.a, e.witness.b) == (0.5, 0.0)
    r = run_separation(e)
    assert r.path == "diagonal" and r.verdict
    np.testing.assert_allclose(r.i_side_values, 1.0, atol=1e-9)
    assert r.j_side_min_curve[-1] == pytest.approx(COMPACTS_HS_FINAL, rel=1e-12)
    n = np.array([10**4 - 1])
    direct = max(float(f.terms(n)[0] / e.witness.terms(n)[0]) for f in interior_families(L(2, 2)))
    assert r.j_side_min_curve[-1] == pytest.approx(direct, rel=1e-12)


def test_single_log_decorated_compact_stays_above_threshold():
    # K = diag((n+1)^{-1/2} / log(n+e)) on its own gives 1/log(n+e) on the
    # J side, which is still 0.1086 at n = 10^4 - 1
    assert 1 / math.log(10**4 - 1 + math.e) == pytest.approx(0.10857, abs=1e-5)


@pytest.mark.parametrize("I, J", separation_pairs(), ids=lambda i: str(i))
def test_strict_pairs_separate(I, J):
    r = run_separation(SeparationExperiment.build(I, J, 10**4))
    np.testing.assert_allclose(r.i_side_values, 1.0, atol=1e-9)
    assert np.all(np.diff(r.j_side_min_curve) <= 0)
    assert r.verdict, r.j_side_min_curve[-1]


def test_separation_pair_count():
    assert len(separation_pairs()) == 36


@pytest.mark.parametrize(
    "I, J", [(x, y) for x in CATALOG for y in CATALOG if not includes(x, y)], ids=lambda i: str(i)
)
def test_i_side_constant_on_all_non_inclusions(I, J):
    r = run_separation(SeparationExperiment.build(I, J, 500))
    np.testing.assert_allclose(r.i_side_values, 1.0, atol=1e-9)


@pytest.mark.parametrize("I, J", [(COMPACTS, L(2, 2)), (L(3, 1), L(1.5, 2)), (L(2, INF, True), L(2, 2))], ids=str)
def test_matrix_and_diagonal_paths_agree(I, J):
    e = SeparationExperiment.build(I, J, 48, seed=5)
    a, b = run_separation(e, path="matrix"), run_separation(e, path="diagonal")
    np.testing.assert_allclose(a.i_side_values, b.i_side_values, rtol=1e-9)
    np.testing.assert_allclose(a.j_side_values, b.j_side_values, rtol=1e-9)


def test_dimension_one_is_vacuous():
    r = run_separation(SeparationExperiment.build(COMPACTS, L(2, 2), 1))
    assert r.i_side_values.tolist() == pytest.approx([1.0]) and not r.verdict


def test_separation_needs_non_inclusion():
    with pytest.raises(PreconditionError):
        SeparationExperiment.build(L(2, 2), COMPACTS, 10)


def test_separation_rejects_unknown_path():
    with pytest.raises(ValueError):
        run_separation(SeparationExperiment.build(COMPACTS, L(2, 2), 10), path="fast")


# -- ordering ---------------------------------------------------------------------------


def _factorable_pairs():
    out = []
    for I, J in itertools.product(ORDERED, repeat=2):
        if I == J or not preceq(I, J):
            continue
        try:
            out.append((I, J, classify_case(I, J)))
        except PreconditionError:
            pass
    return out


def test_hardy_value_special_cases(rng):
    v = np.sort(rng.uniform(size=20))[::-1]
    assert hardy_value(v, L(1, 1)) == pytest.approx(v.sum())
    assert hardy_value(v, COMPACTS) == pytest.approx(v[0])
    assert hardy_value(v, L(2, 2)) == pytest.approx(np.linalg.norm(v))
    with pytest.raises(PreconditionError):
        hardy_value(v, L(1, INF, True))


def test_random_contraction(rng):
    x = random_contraction(30, rng)
    assert characteristic_numbers(x)[0] < 1


def test_transfer_constant_rejects_unknown_case():
    with pytest.raises(ValueError):
        transfer_constant(np.ones(3), L(2, 1), L(2, 2), "V")


@pytest.mark.parametrize("I, J, case", _factorable_pairs(), ids=str)
def test_ordering_consistency(I, J, case):
    f = interior_families(I)[2]
    rep = ordering_consistency(f, I, J, dim=128, trials=100, seed=0)
    assert rep.case == case
    assert np.isfinite(rep.constant) and rep.constant > 0
    assert rep.holds, float(np.max(rep.ratios))


# -- approximability -------------------------------------------------------------------


def test_needapprox():
    rep = needapprox_demo(64)
    assert rep.floor_at(32) == pytest.approx(0.19076736136657674, rel=1e-12)
    assert rep.floor_at(32) >= 0.08
    np.testing.assert_allclose(rep.strong_curve[:-1], 1 / (np.arange(63) + 2), rtol=1e-15)
    assert rep.strong_curve[-1] == 0 and rep.seminorm_curve[-1] == 0
    # the untruncated tail sits higher still and does not tend to 0
    assert np.all(rep.analytic_tail[:-1] >= rep.seminorm_curve[:-1] * (1 - 1e-12))
    assert rep.analytic_tail[32] > 0.8


def test_needapprox_floor_is_a_direct_sum():
    # tail (1/34, ..., 1/64): sup over m of sigma_m / log m
    tail = 1 / np.arange(34, 65)
    sigma = np.cumsum(tail)
    m = np.arange(1, tail.size + 1)
    assert np.max(sigma[1:] / np.log(m[1:])) == pytest.approx(0.19076736136657674, rel=1e-12)


def test_analytic_tail_monotone_in_n():
    vals = [analytic_tail_sup(n) for n in (0, 10, 100, 1000)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


# -- bounded-set coincidence ------------------------------------------------------------------


def test_truncation_net_hilbert_schmidt_identical():
    r = bounded_coincidence(L(2, 2), dim=64, net_size=8)
    np.testing.assert_array_equal(r.hs_curve, r.idx_curve)
    assert r.joint and r.hs_converges


def test_scalar_net_linear():
    r = bounded_coincidence(L(3, 1), dim=32, net_size=10, net="scalar")
    k = np.arange(1, 11)
    np.testing.assert_allclose(r.hs_curve, 1 / k, rtol=1e-9)
    np.testing.assert_allclose(r.idx_curve, 1 / k, rtol=1e-9)
    assert r.hs_crossing == r.idx_crossing == 9


def test_unitary_net_does_not_converge():
    r = bounded_coincidence(L(1, 1), dim=32, net_size=6, net="unitary")
    assert not r.hs_converges and not r.idx_converges
    assert np.all(r.hs_curve > 0.5)


def test_coincidence_requires_approximable():
    with pytest.raises(PreconditionError):
        bounded_coincidence(L(2, INF), dim=16)
    with pytest.raises(ValueError):
        bounded_coincidence(L(2, 2), dim=16, net="spiral")


def test_coincidence_deterministic():
    a = bounded_coincidence(L(1, 1), dim=32, net_size=5, seed=7)
    b = bounded_coincidence(L(1, 1), dim=32, net_size=5, seed=7)
    assert a.to_dict() == b.to_dict()


def test_unit_catalog_normalized():
    from opideal.topology_lab import _unit_catalog

    for K in _unit_catalog(L(3, 1), 32, 0, 3):
        assert lorentz_norm(characteristic_numbers(K), L(3, 1)) == pytest.approx(1.0)


def test_catalog_member_identity_rotation():
    m = CatalogMember(PowerLogFamily(1, 1, 0))
    np.testing.assert_array_equal(m.matrix(3), np.diag([1, 0.5, 1 / 3]))
