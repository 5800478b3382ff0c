"""Qualitative certainty levels and their combination/adjudication algebra.

Four annotatable levels form a total order::

    certain > presumed > suggested > possible

``certain`` is reserved for seeded premises and pretence-internal literal
assertions. A fifth, out-of-band marker ``undecided`` exists only as a
conflict outcome: it never annotates rules or facts and never feeds
inference, which is why :func:`combine` rejects it outright.
"""

from __future__ import annotations

import functools
from enum import Enum
from typing import Iterable


class CertaintyError(ValueError):
    """Raised when a non-annotatable value reaches the certainty algebra."""


@functools.total_ordering
class Certainty(Enum):
    POSSIBLE = "possible"
    SUGGESTED = "suggested"
    PRESUMED = "presumed"
    CERTAIN = "certain"

    @property
    def rank(self) -> int:
        return _RANKS[self]

    def __lt__(self, other: object):
        if not isinstance(other, Certainty):
            return NotImplemented
        return self.rank < other.rank

    @property
    def keyword(self) -> str:
        return self.value

    @classmethod
    def from_keyword(cls, word: str) -> "Certainty":
        try:
            return cls(word)
        except ValueError:
            raise CertaintyError(f"unknown certainty level {word!r}") from None

    def __str__(self) -> str:
        return self.value


_RANKS = {
    Certainty.POSSIBLE: 0,
    Certainty.SUGGESTED: 1,
    Certainty.PRESUMED: 2,
    Certainty.CERTAIN: 3,
}

CERTAINTY_KEYWORDS = tuple(c.value for c in Certainty)


class _Undecided:
    """Singleton marker for a conflicted outcome; unusable in inference."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "undecided"

    def __str__(self) -> str:
        return "undecided"


UNDECIDED = _Undecided()


class Adjudication(Enum):
    KEEP_FOR = "keep_for"
    KEEP_AGAINST = "keep_against"
    BOTH_UNDECIDED = "both_undecided"


def _check(value, where: str) -> Certainty:
    if not isinstance(value, Certainty):
        raise CertaintyError(f"{where} must be an annotatable certainty, got {value!r}")
    return value


def combine(rule_certainty: Certainty, antecedent_certainties: Iterable[Certainty]) -> Certainty:
    """Weakest link: the minimum of the rule's certainty and every premise's.

    Commutative and associative in the antecedent list. Conflicted
    (``undecided``) inputs are an error; such propositions must never feed
    inference.
    """
    result = _check(rule_certainty, "rule certainty")
    for c in antecedent_certainties:
        c = _check(c, "antecedent certainty")
        if c < result:
            result = c
    return result


def adjudicate(for_certainty: Certainty, against_certainty: Certainty) -> Adjudication:
    """Strictly greater certainty wins; an exact tie leaves both undecided."""
    f = _check(for_certainty, "for certainty")
    a = _check(against_certainty, "against certainty")
    if f > a:
        return Adjudication.KEEP_FOR
    if a > f:
        return Adjudication.KEEP_AGAINST
    return Adjudication.BOTH_UNDECIDED
