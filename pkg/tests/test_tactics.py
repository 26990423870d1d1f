import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from princerank.core import DEFAULT_PARAMS, PowerStructure
from princerank.corpus import corpus_get
from princerank.scenarios import materialize
from princerank.tactics import (
    DROP,
    KEEP,
    NEGATIVE,
    NEUTRAL,
    POSITIVE,
    DiscretePattern,
    NoRelation,
    SizeLimit,
    best_response,
    canonical_triad_relations,
    edge_sustainable,
    enumerate_patterns,
    enumerate_triads,
    latent_tension,
    project_column,
    restance,
    structural_ideal,
    structure_from_signs,
    triad_id,
    triad_structure,
    weight_pattern,
)
from princerank.valuation import princerank

from conftest import random_discrete_structure
from oracles import equal_split_column, matrix_from_columns, naive_princerank, triad_orbits


SLOT_SIGNS = (NEUTRAL, POSITIVE, NEGATIVE)


# --- patterns ---------------------------------------------------------------

@pytest.mark.parametrize("n, count", [(1, 1), (2, 3), (3, 9), (5, 81)])
def test_pattern_counts(n, count):
    assert len(enumerate_patterns(n)) == count


def test_pattern_order():
    got = [p.signs for p in enumerate_patterns(3, owner=1)]
    assert got[:4] == [(0, 0, 0), (0, 0, 1), (0, 0, -1), (1, 0, 0)]
    assert got[-1] == (-1, 0, -1)


def test_pattern_cap(monkeypatch):
    with pytest.raises(SizeLimit):
        enumerate_patterns(4, cap=26)
    monkeypatch.setenv("PRINCERANK_CAP", "8")
    with pytest.raises(SizeLimit):
        enumerate_patterns(3)


def test_pattern_self_must_be_neutral():
    with pytest.raises(ValueError):
        DiscretePattern(0, (1, 0))


def test_weight_all_neutral():
    np.testing.assert_array_equal(weight_pattern(DiscretePattern(1, (0, 0, 0)), 0.9), [0, 1, 0])


def test_weight_two_active():
    col = weight_pattern(DiscretePattern(0, (0, 1, 1)), 0.9)
    np.testing.assert_allclose(col, [0.9, 0.05, 0.05], atol=1e-15)
    col = weight_pattern(DiscretePattern(0, (0, 1, -1)), 0.9)
    np.testing.assert_allclose(col, [0.9, 0.05, -0.05], atol=1e-15)


@given(st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, n - 1), st.lists(st.sampled_from((0, 1, -1)), min_size=n, max_size=n))),
    st.floats(0.01, 1.0))
def test_weighted_pattern_norm(args, rho):
    n, owner, signs = args
    signs[owner] = 0
    p = DiscretePattern(owner, tuple(signs))
    col = weight_pattern(p, rho)
    assert abs(np.abs(col).sum() - 1) <= 1e-12
    assert col[owner] >= 0
    assert project_column(col, owner) == p or rho == 1.0


def test_restance_reweights_actor_only():
    ps = structure_from_signs([1, 1, 1], [[0, 1, 0], [1, 0, 0], [0, 0, 0]], 0.9)
    alt = restance(ps, 0, 2, NEGATIVE, 0.9)
    np.testing.assert_allclose(alt.tactics[:, 0], [0.9, 0.05, -0.05])
    np.testing.assert_array_equal(alt.tactics[:, 1:], ps.tactics[:, 1:])


# --- best response ------------------------------------------------------------

def test_best_response_two_agents_brute_force():
    # opponent gives to focal; check all three of focal's options by hand
    ps = PowerStructure(np.array([1.0, 2.0]), np.array([[1.0, 0.1], [0.0, 0.9]]))
    out = best_response(ps, 0, DEFAULT_PARAMS)
    values = []
    for sign in SLOT_SIGNS:
        col = equal_split_column([0, sign], 0, 0.9)
        T = matrix_from_columns([col, [0.1, 0.9]])
        values.append(naive_princerank([1.0, 2.0], T, DEFAULT_PARAMS)[0])
    k = int(np.argmax(values))
    assert out.best.signs == (0, SLOT_SIGNS[k])
    assert out.value == pytest.approx(values[k], abs=1e-9)
    assert out.evaluated == 3



def test_best_response_dead_focal():
    ps = PowerStructure(np.array([0.0, 1.0, 1.0]), np.eye(3))
    out = best_response(ps, 0, DEFAULT_PARAMS)
    assert out.best.signs == (0, 0, 0)
    assert out.value == 0.0


def test_best_response_three_agents_exhaustive(rng):
    for _ in range(5):
        ps = random_discrete_structure(rng, 3)
        out = best_response(ps, 1, DEFAULT_PARAMS)
        for p in enumerate_patterns(3, owner=1):
            alt = ps.with_column(1, weight_pattern(p, 0.9))
            assert out.value >= princerank(alt, DEFAULT_PARAMS)[1] - 1e-9
        # value is the solo recomputation of the winner
        assert out.value == princerank(out.structure, DEFAULT_PARAMS)[1]


def test_best_response_beats_current(rng):
    for _ in range(5):
        ps = random_discrete_structure(rng, 4)
        assert best_response(ps, 2, DEFAULT_PARAMS).value >= princerank(ps, DEFAULT_PARAMS)[2] - 1e-9


def test_best_response_focal_range():
    with pytest.raises(IndexError):
        best_response(PowerStructure.neutral([1.0]), 3, DEFAULT_PARAMS)


# --- structural ideal ---------------------------------------------------------

def test_ideal_two_agents_double_loop():
    best = -1.0
    for a, b in itertools.product(SLOT_SIGNS, repeat=2):
        cols = [equal_split_column([0, a], 0, 0.9), equal_split_column([b, 0], 1, 0.9)]
        best = max(best, naive_princerank([1.0, 1.0], matrix_from_columns(cols), DEFAULT_PARAMS)[0])
    out = structural_ideal(2, 0, DEFAULT_PARAMS, method="exhaustive")
    assert out.evaluated == 9
    assert out.value == pytest.approx(best, abs=1e-9)


def test_ideal_value_recomputes():
    out = structural_ideal(3, 0, DEFAULT_PARAMS, method="exhaustive")
    assert out.value == princerank(PowerStructure(np.ones(3), out.best), DEFAULT_PARAMS)[0]
    assert out.evaluated == 729


def test_ideal_others_constructive():
    for delta in (0.9, 0.3):
        T = structural_ideal(3, 0, DEFAULT_PARAMS.replace(delta=delta), method="exhaustive").best
        assert T[0, 1] > 0 and T[0, 2] > 0


def test_ideal_short_horizon_does_not_reciprocate():
    T = structural_ideal(3, 0, DEFAULT_PARAMS.replace(delta=0.3), method="exhaustive").best
    assert T[1, 0] <= 0 and T[2, 0] <= 0


def test_ideal_patient_agent_reciprocates_at_high_discount():
    # reciprocation shows up once the agent is patient enough
    T = structural_ideal(3, 0, DEFAULT_PARAMS.replace(delta=0.95), method="exhaustive").best
    assert T[1, 0] > 0 and T[2, 0] > 0


@pytest.mark.parametrize("delta", [0.3, 0.6, 0.9])
def test_hill_climb_matches_exhaustive_small(delta):
    p = DEFAULT_PARAMS.replace(delta=delta)
    ex = structural_ideal(3, 0, p, method="exhaustive")
    hc = structural_ideal(3, 0, p, method="hill-climb")
    assert hc.value <= ex.value + 1e-12
    assert hc.value == pytest.approx(ex.value, abs=1e-12)
    assert hc.seed == 0 and ex.seed is None


def test_hill_climb_deterministic():
    a = structural_ideal(4, 1, DEFAULT_PARAMS, method="hill-climb", restarts=4, seed=7)
    b = structural_ideal(4, 1, DEFAULT_PARAMS, method="hill-climb", restarts=4, seed=7)
    assert a.value == b.value
    np.testing.assert_array_equal(a.best, b.best)


def test_ideal_exhaustive_cap():
    with pytest.raises(SizeLimit):
        structural_ideal(4, 0, DEFAULT_PARAMS, method="exhaustive", cap=3**11)
    assert structural_ideal(4, 0, DEFAULT_PARAMS, method="auto", cap=3**11, restarts=2).method == "hill-climb"


def test_ideal_bad_method():
    with pytest.raises(ValueError):
        structural_ideal(2, 0, DEFAULT_PARAMS, method="annealing")


# --- triads -------------------------------------------------------------------

def test_eighteen_triads():
    assert len(enumerate_triads()) == 18
    assert len(canonical_triad_relations()) == 18


def test_triads_match_orbit_oracle():
    def key(t):
        return frozenset({t, (t[1], t[0], t[2])})

    assert {key(t) for t in canonical_triad_relations()} == {key(t) for t in triad_orbits()}


def test_no_two_triads_swap_equivalent():
    structures = enumerate_triads()
    for a, b in itertools.combinations(structures, 2):
        assert not np.array_equal(a.permuted([0, 2, 1]).tactics, b.tactics)
        assert not np.array_equal(a.tactics, b.tactics)


def test_all_neutral_triad_included():
    assert any(np.array_equal(ps.tactics, np.eye(3)) for ps in enumerate_triads())


def test_swapped_triples_collapse():
    rels = canonical_triad_relations()
    assert ((1, -1, 0) in rels) != ((-1, 1, 0) in rels)


def test_triad_structure_reciprocal():
    ps = triad_structure((1, -1, 0), 0.9)
    signs = np.sign(ps.tactics)
    np.testing.assert_array_equal(signs - np.diag(np.diag(signs)), (signs - np.diag(np.diag(signs))).T)
    assert triad_id((1, -1, 0)) == "triad:+-0"


# --- latent tension -----------------------------------------------------------

def bipolar(pole_a, pole_b=3.0):
    ps = materialize(corpus_get("latent-tension/equal-neutral"))
    s = ps.sizes.copy()
    s[0], s[3] = pole_a, pole_b
    return ps.with_sizes(s)


def test_single_agent_no_tension():
    assert latent_tension(PowerStructure.neutral([2.0]), DEFAULT_PARAMS) == []


def test_equal_poles_do_not_fight():
    rows = latent_tension(bipolar(3.0), DEFAULT_PARAMS, mode="fight")
    assert not [r for r in rows if {r[0], r[1]} == {0, 3}]


def test_larger_pole_instigates():
    rows = latent_tension(bipolar(4.5), DEFAULT_PARAMS, mode="fight")
    pole_rows = [r for r in rows if {r[0], r[1]} == {0, 3}]
    assert [(i, j) for i, j, _ in pole_rows] == [(0, 3)]
    assert pole_rows[0][2] > 0


def test_unilateral_mode_ignores_the_counterpart():
    # one-sided aggression pays off even between equal poles, because the
    # victim's stance is frozen within the evaluation
    rows = latent_tension(bipolar(3.0), DEFAULT_PARAMS)
    assert {(0, 3), (3, 0)} <= {(i, j) for i, j, _ in rows}


def test_tension_gains_are_recomputable(rng):
    ps = random_discrete_structure(rng, 4)
    base = princerank(ps, DEFAULT_PARAMS)
    for i, j, gain in latent_tension(ps, DEFAULT_PARAMS):
        alt = restance(ps, i, j, NEGATIVE, 0.9)
        assert gain == pytest.approx(princerank(alt, DEFAULT_PARAMS)[i] - base[i], abs=1e-12)
        assert gain > 0


@pytest.mark.parametrize("mode", ["unilateral", "fight"])
@given(st.integers(2, 4), st.floats(0.2, 5.0))
def test_tension_symmetric_when_neutral(mode, n, size):
    rows = latent_tension(PowerStructure.neutral([size] * n), DEFAULT_PARAMS, mode=mode)
    found = {(i, j): g for i, j, g in rows}
    for (i, j), g in found.items():
        assert found.get((j, i)) == pytest.approx(g, abs=1e-12)


def test_tension_sorted():
    rows = latent_tension(bipolar(4.5), DEFAULT_PARAMS)
    keys = [(-g, i, j) for i, j, g in rows]
    assert keys == sorted(keys)


def test_tension_bad_mode():
    with pytest.raises(ValueError):
        latent_tension(bipolar(3.0), DEFAULT_PARAMS, mode="war")


# --- edge sustainability ----------------------------------------------------------

def isolated_pair(col0, col1):
    return PowerStructure(np.ones(2), np.column_stack([col0, col1]))


def two_agent_oracle(ps, agent, dropped_cols):
    base = naive_princerank(ps.sizes.tolist(), ps.tactics.tolist(), DEFAULT_PARAMS)[agent]
    alt = naive_princerank(ps.sizes.tolist(), matrix_from_columns(dropped_cols), DEFAULT_PARAMS)[agent]
    return DROP if alt > base else KEEP


def test_one_sided_gift():
    ps = isolated_pair([0.9, 0.1], [0.0, 1.0])
    verdict = edge_sustainable(ps, 0, 1, DEFAULT_PARAMS)
    assert verdict[0] == DROP
    assert verdict[0] == two_agent_oracle(ps, 0, [[1.0, 0.0], [0.0, 1.0]])
    assert verdict[1] == KEEP  # the receiver has no stance to drop


def test_mutual_pair_reciprocal_mode_keeps():
    ps = isolated_pair([0.9, 0.1], [0.1, 0.9])
    assert edge_sustainable(ps, 0, 1, DEFAULT_PARAMS, mode="reciprocal") == {0: KEEP, 1: KEEP}


def test_mutual_pair_unilateral_matches_oracle():
    ps = isolated_pair([0.9, 0.1], [0.1, 0.9])
    verdict = edge_sustainable(ps, 0, 1, DEFAULT_PARAMS)
    assert verdict[0] == two_agent_oracle(ps, 0, [[1.0, 0.0], [0.1, 0.9]])
    assert verdict[1] == two_agent_oracle(ps, 1, [[0.9, 0.1], [0.0, 1.0]])
    # with the partner's gift guaranteed, pocketing it beats giving back
    assert verdict == {0: DROP, 1: DROP}


def test_mutual_pair_kept_by_patient_agents():
    ps = isolated_pair([0.9, 0.1], [0.1, 0.9])
    assert edge_sustainable(ps, 0, 1, DEFAULT_PARAMS.replace(alpha=3.0)) == {0: KEEP, 1: KEEP}


def test_mutual_fight_dropped():
    ps = isolated_pair([0.9, -0.1], [-0.1, 0.9])
    assert edge_sustainable(ps, 0, 1, DEFAULT_PARAMS, mode="reciprocal") == {0: DROP, 1: DROP}


def test_no_relation():
    with pytest.raises(NoRelation):
        edge_sustainable(PowerStructure.neutral([1.0, 1.0]), 0, 1, DEFAULT_PARAMS)
    with pytest.raises(ValueError):
        edge_sustainable(PowerStructure.neutral([1.0, 1.0]), 0, 0, DEFAULT_PARAMS)
