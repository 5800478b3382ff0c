import pytest
from hypothesis import given, strategies as st

from pretence.terms import (
    Atom,
    Compound,
    Proposition,
    Substitution,
    Var,
    is_ground,
    prop_text,
    rename_apart,
    term_depth,
    term_text,
    unify,
    unify_props,
    vars_of,
)


def f(*args):
    return Compound("f", args)


X, Y = Var("x"), Var("y")
A, B = Atom("a"), Atom("b")


class TestUnify:
    def test_single_binding_forced(self):
        s = unify(f(X, A), f(B, A))
        assert s is not None
        assert s.get(X) == B

    def test_occurs_check(self):
        assert unify(X, f(X)) is None

    def test_inconsistent_bindings(self):
        assert unify(f(X, X), f(A, B)) is None

    def test_atom_mismatch(self):
        assert unify(A, B) is None

    def test_functor_and_arity_mismatch(self):
        assert unify(f(A), Compound("g", (A,))) is None
        assert unify(f(A), f(A, A)) is None

    def test_extends_given_substitution(self):
        base = Substitution().bind(X, A)
        s = unify(f(X, Y), f(A, B), base)
        assert s is not None
        assert s.get(X) == A and s.get(Y) == B
        assert unify(f(X, Y), f(B, B), base) is None

    def test_var_to_var(self):
        s = unify(X, Y)
        assert s is not None
        assert s.apply(X) == s.apply(Y)


class TestApply:
    def test_replaces_bound_variable(self):
        s = Substitution({X: B})
        assert s.apply(f(X, A)) == f(B, A)

    def test_empty_is_identity(self):
        t = f(X, Compound("g", (A, Y)))
        assert Substitution().apply(t) == t

    def test_unbound_variables_survive(self):
        s = Substitution({X: Compound("g", (A,))})
        assert s.apply(f(X, Y)) == f(Compound("g", (A,)), Y)

    def test_applies_inside_propositions(self):
        s = Substitution({X: A})
        p = Proposition("p", (X, B), negated=True)
        assert s.apply(p) == Proposition("p", (A, B), negated=True)


class TestRenameApart:
    def test_suffixes_variables(self):
        assert rename_apart(f(X), "r1") == f(Var("x_r1"))

    def test_distinct_suffixes_disjoint(self):
        t = f(X, Y)
        first = vars_of(rename_apart(t, "r1"))
        second = vars_of(rename_apart(t, "r2"))
        assert first.isdisjoint(second)

    def test_ground_terms_untouched(self):
        t = f(A, Compound("g", (B,)))
        assert rename_apart(t, "r9") == t


class TestSubstitution:
    def test_bind_keeps_idempotence(self):
        s = Substitution().bind(X, f(Y))
        s = s.bind(Y, A)
        t = f(X, Y)
        assert s.apply(t) == s.apply(s.apply(t))

    def test_bind_occurs_check(self):
        assert Substitution().bind(X, f(X)) is None

    def test_self_binding_is_noop(self):
        s = Substitution()
        assert s.bind(X, X) is s


# -- property tests ---------------------------------------------------------

_atoms = st.sampled_from([Atom(n) for n in "abcde"])
_vars = st.sampled_from([Var(n) for n in "uvwxyz"])


def _terms(depth):
    if depth <= 1:
        return _atoms | _vars
    return st.deferred(
        lambda: _atoms
        | _vars
        | st.builds(
            Compound,
            st.sampled_from(["f", "g"]),
            st.lists(_terms(depth - 1), min_size=1, max_size=3).map(tuple),
        )
    )


terms5 = _terms(5)


@given(terms5, terms5)
def test_unify_soundness(a, b):
    s = unify(a, b)
    if s is not None:
        assert s.apply(a) == s.apply(b)


@given(terms5, terms5)
def test_unify_symmetry(a, b):
    left = unify(a, b)
    right = unify(b, a)
    assert (left is None) == (right is None)
    if left is not None:
        # The two unifiers agree up to renaming: each maps a and b to
        # alpha-equivalent terms.
        la, ra = left.apply(a), right.apply(a)
        assert _alpha_equal(la, ra)


def _alpha_equal(a, b, mapping=None):
    if mapping is None:
        mapping = {}
    if isinstance(a, Var) and isinstance(b, Var):
        if a in mapping:
            return mapping[a] == b
        if b in mapping.values():
            return False
        mapping[a] = b
        return True
    if isinstance(a, Atom) and isinstance(b, Atom):
        return a == b
    if isinstance(a, Compound) and isinstance(b, Compound):
        return (
            a.functor == b.functor
            and len(a.args) == len(b.args)
            and all(_alpha_equal(x, y, mapping) for x, y in zip(a.args, b.args))
        )
    return False


@given(terms5)
def test_unify_with_self_binds_nothing_new(t):
    s = unify(t, t)
    assert s is not None
    assert s.apply(t) == t


@given(terms5, terms5)
def test_no_infinite_terms(a, b):
    # Depth-bounded expansion: repeated application stabilizes, so no
    # returned substitution can describe a cyclic term.
    s = unify(a, b)
    if s is not None:
        once = s.apply(a)
        assert s.apply(once) == once
        assert term_depth(once) <= term_depth(a) + term_depth(b) + 8


@given(terms5, terms5, terms5)
def test_substitutions_idempotent(a, b, probe):
    s = unify(a, b)
    if s is not None:
        assert s.apply(probe) == s.apply(s.apply(probe))


def test_compound_requires_args():
    with pytest.raises(ValueError):
        Compound("f", ())


def test_prop_text_roundtrip_forms():
    p = Proposition("sees", (Atom("critique"), Compound("state", (Atom("x1"),))))
    assert prop_text(p) == "(sees critique (state x1))"
    assert prop_text(p.negate()) == "(not (sees critique (state x1)))"
    assert term_text(Var("q")) == "?q"


def test_unify_props_respects_negation():
    p = Proposition("p", (X,))
    assert unify_props(p, Proposition("p", (A,), negated=True)) is None
    s = unify_props(p.negate(), Proposition("p", (A,), negated=True))
    assert s is not None and s.get(X) == A


def test_is_ground():
    assert is_ground(f(A, B))
    assert not is_ground(f(A, X))
