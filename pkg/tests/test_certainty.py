import pytest
from hypothesis import given, strategies as st

from pretence.certainty import (
    UNDECIDED,
    Adjudication,
    Certainty,
    CertaintyError,
    adjudicate,
    combine,
)

CERTAIN = Certainty.CERTAIN
PRESUMED = Certainty.PRESUMED
SUGGESTED = Certainty.SUGGESTED
POSSIBLE = Certainty.POSSIBLE


class TestCombine:
    def test_min_rule(self):
        assert combine(PRESUMED, [CERTAIN, CERTAIN]) == PRESUMED

    def test_weak_antecedent_dominates(self):
        assert combine(CERTAIN, [PRESUMED, SUGGESTED]) == SUGGESTED

    def test_empty_antecedents(self):
        assert combine(POSSIBLE, []) == POSSIBLE

    def test_rejects_undecided(self):
        with pytest.raises(CertaintyError):
            combine(UNDECIDED, [CERTAIN])
        with pytest.raises(CertaintyError):
            combine(CERTAIN, [UNDECIDED])


class TestAdjudicate:
    def test_order_forced(self):
        assert adjudicate(PRESUMED, SUGGESTED) == Adjudication.KEEP_FOR

    def test_swapped(self):
        assert adjudicate(SUGGESTED, PRESUMED) == Adjudication.KEEP_AGAINST

    def test_tie(self):
        assert adjudicate(PRESUMED, PRESUMED) == Adjudication.BOTH_UNDECIDED

    def test_rejects_undecided(self):
        with pytest.raises(CertaintyError):
            adjudicate(UNDECIDED, PRESUMED)


def test_total_order():
    assert CERTAIN > PRESUMED > SUGGESTED > POSSIBLE
    assert sorted(Certainty, reverse=True) == [CERTAIN, PRESUMED, SUGGESTED, POSSIBLE]


def test_keywords_roundtrip():
    for c in Certainty:
        assert Certainty.from_keyword(c.keyword) is c
    with pytest.raises(CertaintyError):
        Certainty.from_keyword("undecided")


levels = st.sampled_from(list(Certainty))


@given(levels, st.lists(levels, max_size=5))
def test_combine_is_order_independent(rule, ants):
    assert combine(rule, ants) == combine(rule, list(reversed(ants)))
    assert combine(rule, ants) == combine(rule, sorted(ants))


@given(levels, st.lists(levels, min_size=1, max_size=5))
def test_combine_associative_over_list(rule, ants):
    folded = combine(rule, ants)
    stepwise = rule
    for a in ants:
        stepwise = combine(stepwise, [a])
    assert folded == stepwise


@given(levels, st.lists(levels, max_size=5))
def test_combine_never_exceeds_inputs(rule, ants):
    out = combine(rule, ants)
    assert out <= rule
    assert all(out <= a for a in ants)


@given(levels, levels)
def test_adjudicate_antisymmetric(f, a):
    forward = adjudicate(f, a)
    backward = adjudicate(a, f)
    flipped = {
        Adjudication.KEEP_FOR: Adjudication.KEEP_AGAINST,
        Adjudication.KEEP_AGAINST: Adjudication.KEEP_FOR,
        Adjudication.BOTH_UNDECIDED: Adjudication.BOTH_UNDECIDED,
    }
    assert backward == flipped[forward]
