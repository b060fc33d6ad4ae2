"""Finite topologies: enumeration, envelopes, separation, insertion, blocks."""

import random
from fractions import Fraction

import pytest

from normlab.errors import BoundExceeded, PreconditionViolation
from normlab.finite_space import (
    FiniteFunc,
    FiniteSpace,
    Infeasible,
    NotSeparable,
    block_indicators,
    enumerate_preorders,
    enumerate_spaces,
    enumerate_spaces_bruteforce,
    envelopes,
    indicator,
    insert_finite,
    is_lsc,
    is_normal,
    is_usc,
    replay_block_trace,
    separate,
    urysohn,
)

SIERPINSKI = FiniteSpace.from_sets(2, [[], [0], [0, 1]])

NON_NORMAL = FiniteSpace.from_sets(3, [[], [0], [0, 1], [0, 2], [0, 1, 2]])


def test_space_validation():
    with pytest.raises(PreconditionViolation):
        FiniteSpace.from_sets(2, [[], [0]])  # missing full set
    with pytest.raises(PreconditionViolation):
        FiniteSpace.from_sets(3, [[], [0], [1], [0, 1, 2]])  # no union


def test_topology_counts():
    assert sum(1 for _ in enumerate_spaces(1)) == 1
    assert sum(1 for _ in enumerate_spaces(2)) == 4
    assert sum(1 for _ in enumerate_spaces(3)) == 29
    assert sum(1 for _ in enumerate_spaces(4)) == 355


def test_enumeration_matches_bruteforce_oracle():
    for n in (1, 2, 3):
        fast = {s.opens for s in enumerate_spaces(n)}
        slow = {s.opens for s in enumerate_spaces_bruteforce(n)}
        assert fast == slow


def test_enumeration_bound():
    with pytest.raises(BoundExceeded):
        list(enumerate_spaces(6))


def test_preorders_are_reflexive_transitive():
    for rows in enumerate_preorders(3):
        for i in range(3):
            assert rows[i] & (1 << i)
            for j in range(3):
                if rows[i] & (1 << j):
                    assert rows[j] | rows[i] == rows[i]


def test_envelopes_on_sierpinski():
    # point 1's only neighborhood is the whole space
    f = FiniteFunc(SIERPINSKI, [2, 0])
    upper, lower = envelopes(SIERPINSKI, f)
    assert upper.values == (Fraction(2), Fraction(2))
    assert lower.values == (Fraction(2), Fraction(0))
    assert is_usc(SIERPINSKI, upper)
    assert is_lsc(SIERPINSKI, lower)
    assert not is_usc(SIERPINSKI, f) or not is_lsc(SIERPINSKI, f)


def test_envelope_idempotent_and_ordered():
    rng = random.Random(7)
    for space in enumerate_spaces(3):
        f = FiniteFunc(space, [Fraction(rng.randint(-4, 4), rng.randint(1, 5))
                               for _ in range(3)])
        upper, lower = envelopes(space, f)
        assert lower.le(f) and f.le(upper)
        u2, _ = envelopes(space, upper)
        _, l2 = envelopes(space, lower)
        assert u2.eq_pointwise(upper)
        assert l2.eq_pointwise(lower)


def test_normality_and_separation():
    ok, _ = is_normal(FiniteSpace.discrete(3))
    assert ok
    ok, witness = is_normal(NON_NORMAL)
    assert not ok
    assert isinstance(witness, NotSeparable)
    res = separate(NON_NORMAL, witness.c, witness.d)
    assert isinstance(res, NotSeparable)


def test_urysohn_witness_and_refusal():
    space = FiniteSpace.discrete(3)
    h = urysohn(space, {0}, {2})
    assert h.values == (Fraction(0), Fraction(0), Fraction(1))
    # indiscrete-like component: single component meets both sets
    chain = FiniteSpace.from_sets(2, [[], [0], [0, 1]])
    res = urysohn(chain, {1}, ())
    assert isinstance(res, FiniteFunc)
    connected = FiniteSpace.indiscrete(2)
    with pytest.raises(PreconditionViolation):
        urysohn(connected, {0}, {1})  # {0} is not closed here


def test_urysohn_inseparable_component():
    # closed singletons {1}, {2} share the component of the non-normal space
    assert isinstance(urysohn(NON_NORMAL, {1}, {2}), NotSeparable)


def test_insert_finite_feasible_and_not():
    space = FiniteSpace.discrete(2)
    f = FiniteFunc(space, [0, 2])
    g = FiniteFunc(space, [1, 3])
    h = insert_finite(space, f, g)
    assert f.le(h) and h.le(g)
    # on the indiscrete space everything is one component
    ind = FiniteSpace.indiscrete(2)
    f2 = FiniteFunc(ind, [0, 0])
    g2 = FiniteFunc(ind, [1, 1])
    h2 = insert_finite(ind, f2, g2)
    assert isinstance(h2, FiniteFunc)
    sier = SIERPINSKI
    fs = FiniteFunc(sier, [1, 1])
    gs = FiniteFunc(sier, [1, 1])
    assert isinstance(insert_finite(sier, fs, gs), FiniteFunc)


def test_insert_finite_infeasible_component():
    # usc f <= lsc g on the non-normal space, yet max f > min g on the
    # single component, so no continuous function fits between
    f = FiniteFunc(NON_NORMAL, [0, 1, 0])
    g = FiniteFunc(NON_NORMAL, [1, 1, 0])
    assert is_usc(NON_NORMAL, f) and is_lsc(NON_NORMAL, g) and f.le(g)
    result = insert_finite(NON_NORMAL, f, g)
    assert isinstance(result, Infeasible)
    assert result.max_f == 1 and result.min_g == 0


def test_indicator_masks_and_iterables():
    space = FiniteSpace.discrete(3)
    assert indicator(space, 0b101).values == (Fraction(1), Fraction(0), Fraction(1))
    assert indicator(space, [0, 2]).values == (Fraction(1), Fraction(0), Fraction(1))


def test_block_indicators_exact_partition():
    rng = random.Random(3)
    space = FiniteSpace.discrete(5)
    gens = [FiniteFunc(space, [Fraction(rng.randint(-3, 3), rng.randint(1, 4))
                               for _ in range(5)]) for _ in range(2)]
    indicators, traces = block_indicators(space, gens)
    sig = [tuple(g.values[x] for g in gens) for x in range(5)]
    blocks = [sorted(t["block"]) for t in traces]
    covered = sorted(x for b in blocks for x in b)
    assert covered == list(range(5))
    for chi, trace in zip(indicators, traces):
        block = set(trace["block"])
        for x in range(5):
            assert chi.values[x] == (1 if x in block else 0)
        rebuilt = replay_block_trace(space, gens, trace)
        assert rebuilt.eq_pointwise(chi)


def test_block_indicators_separating_gives_singletons():
    space = FiniteSpace.discrete(4)
    gens = [FiniteFunc(space, [0, 1, 2, 3])]
    indicators, traces = block_indicators(space, gens)
    assert sorted(t["block"] for t in traces) == [[0], [1], [2], [3]]
    for chi in indicators:
        assert chi.is_zero_one_valued()
        assert sum(chi.values) == 1
