"""Symbolic terms, propositions, substitutions, and unification.

Everything here is an immutable value; all operations are pure functions,
so terms and substitutions can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Union


@dataclass(frozen=True)
class Atom:
    """A constant symbol, e.g. ``question1``."""

    name: str


@dataclass(frozen=True)
class Var:
    """A logic variable; written ``?name`` in surface syntax."""

    name: str


@dataclass(frozen=True)
class Compound:
    """A functor applied to one or more terms, e.g. ``(contest verdict1)``."""

    functor: str
    args: tuple["Term", ...]

    def __post_init__(self) -> None:
        # Arity-0 applications are represented as Atom, never Compound.
        if not self.args:
            raise ValueError("compound terms need at least one argument")


Term = Union[Atom, Var, Compound]


@dataclass(frozen=True)
class Proposition:
    """A possibly negated predicate application over terms.

    Negation is a single flag, so double negation cannot be represented,
    let alone stored.
    """

    predicate: str
    args: tuple[Term, ...] = ()
    negated: bool = False

    def negate(self) -> "Proposition":
        return Proposition(self.predicate, self.args, not self.negated)

    def positive(self) -> "Proposition":
        return Proposition(self.predicate, self.args, False)


def term_text(t: Term) -> str:
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, Var):
        return "?" + t.name
    return "(" + " ".join([t.functor] + [term_text(a) for a in t.args]) + ")"


def prop_text(p: Proposition) -> str:
    inner = "(" + " ".join([p.predicate] + [term_text(a) for a in p.args]) + ")"
    return f"(not {inner})" if p.negated else inner


def term_depth(t: Term) -> int:
    if isinstance(t, Compound):
        return 1 + max(term_depth(a) for a in t.args)
    return 1


def prop_depth(p: Proposition) -> int:
    return 1 + max((term_depth(a) for a in p.args), default=0)


def iter_vars(x: Union[Term, Proposition]) -> Iterator[Var]:
    if isinstance(x, Proposition):
        for a in x.args:
            yield from iter_vars(a)
    elif isinstance(x, Var):
        yield x
    elif isinstance(x, Compound):
        for a in x.args:
            yield from iter_vars(a)


def vars_of(x: Union[Term, Proposition]) -> set[Var]:
    return set(iter_vars(x))


def is_ground(x: Union[Term, Proposition]) -> bool:
    return next(iter_vars(x), None) is None


def iter_atoms(x: Union[Term, Proposition]) -> Iterator[str]:
    """Yield the names of all constant symbols occurring in ``x``."""
    if isinstance(x, Proposition):
        for a in x.args:
            yield from iter_atoms(a)
    elif isinstance(x, Atom):
        yield x.name
    elif isinstance(x, Compound):
        for a in x.args:
            yield from iter_atoms(a)


def occurs_in(v: Var, t: Term) -> bool:
    if isinstance(t, Var):
        return t == v
    if isinstance(t, Compound):
        return any(occurs_in(v, a) for a in t.args)
    return False


def _subst_one(t: Term, v: Var, replacement: Term) -> Term:
    if isinstance(t, Var):
        return replacement if t == v else t
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(_subst_one(a, v, replacement) for a in t.args))
    return t


@dataclass(frozen=True)
class Substitution:
    """An idempotent mapping from variables to terms.

    ``bind`` keeps the mapping idempotent and refuses cyclic bindings
    (occurs check), so applying a substitution twice is always the same
    as applying it once and no substitution can build an infinite term.
    """

    bindings: dict[Var, Term] = field(default_factory=dict)

    def __post_init__(self) -> None:
        # Defensive copy; the dict must never be mutated afterwards.
        object.__setattr__(self, "bindings", dict(self.bindings))

    def __len__(self) -> int:
        return len(self.bindings)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Substitution) and self.bindings == other.bindings

    def __hash__(self) -> int:
        return hash(frozenset(self.bindings.items()))

    def __repr__(self) -> str:
        items = ", ".join(
            f"?{v.name} -> {term_text(t)}" for v, t in self.bindings.items()
        )
        return "{" + items + "}"

    def get(self, v: Var) -> Optional[Term]:
        return self.bindings.get(v)

    def apply(self, x):
        """Apply to a Term or Proposition; variables outside the domain stay."""
        if isinstance(x, Proposition):
            return Proposition(
                x.predicate, tuple(self.apply(a) for a in x.args), x.negated
            )
        if isinstance(x, Var):
            return self.bindings.get(x, x)
        if isinstance(x, Compound):
            return Compound(x.functor, tuple(self.apply(a) for a in x.args))
        return x

    def bind(self, v: Var, t: Term) -> Optional["Substitution"]:
        """Extend with ``v -> t``; None if the occurs check fails."""
        t = self.apply(t)
        if t == v:
            return self
        if occurs_in(v, t):
            return None
        updated = {w: _subst_one(old, v, t) for w, old in self.bindings.items()}
        updated[v] = t
        return Substitution(updated)

    def restrict(self, variables: set[Var]) -> "Substitution":
        return Substitution({v: t for v, t in self.bindings.items() if v in variables})


EMPTY_SUBSTITUTION = Substitution()


def unify(a: Term, b: Term, under: Optional[Substitution] = None) -> Optional[Substitution]:
    """Most general unifier of two terms extending ``under``, or None.

    The occurs check is always on: a successful unifier never produces a
    cyclic term.
    """
    s = under if under is not None else EMPTY_SUBSTITUTION
    a = s.apply(a)
    b = s.apply(b)
    if a == b:
        return s
    if isinstance(a, Var):
        return s.bind(a, b)
    if isinstance(b, Var):
        return s.bind(b, a)
    if isinstance(a, Compound) and isinstance(b, Compound):
        if a.functor != b.functor or len(a.args) != len(b.args):
            return None
        for x, y in zip(a.args, b.args):
            s = unify(x, y, s)
            if s is None:
                return None
        return s
    return None


def unify_props(
    p: Proposition, q: Proposition, under: Optional[Substitution] = None
) -> Optional[Substitution]:
    """Unify two propositions; negation flag, predicate, and arity must agree."""
    if p.negated != q.negated or p.predicate != q.predicate or len(p.args) != len(q.args):
        return None
    s = under if under is not None else EMPTY_SUBSTITUTION
    for x, y in zip(p.args, q.args):
        s = unify(x, y, s)
        if s is None:
            return None
    return s


def rename_apart(x, suffix: str):
    """Rename every variable ``?v`` to ``?v_<suffix>``.

    Alpha-equivalent to the input; with fresh suffixes the variable sets of
    successive renamings are pairwise disjoint. Works on terms and
    propositions; ground inputs come back identical.
    """
    if isinstance(x, Proposition):
        return Proposition(
            x.predicate, tuple(rename_apart(a, suffix) for a in x.args), x.negated
        )
    if isinstance(x, Var):
        return Var(f"{x.name}_{suffix}")
    if isinstance(x, Compound):
        return Compound(x.functor, tuple(rename_apart(a, suffix) for a in x.args))
    return x
