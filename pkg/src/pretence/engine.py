"""The inference core: within-space forward saturation, bidirectional
conversion across space boundaries, certainty-based conflict resolution,
goal-directed proof, and whole-scenario execution.

Execution is deterministic: rules apply in declaration order, stores are
scanned in insertion order, and skolem naming uses per-run counters, so
identical inputs produce identical traces and stores.

One Engine instance owns one space tree and runs once; the KnowledgeBase it
reads is immutable, so any number of runs over the same KB may execute
concurrently in separate engines.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence, Union

from .certainty import UNDECIDED, Adjudication, Certainty, adjudicate, combine
from .kb import (
    RESERVED_SPACE,
    ConversionRule,
    KnowledgeBase,
    Rule,
    Scenario,
    SpaceDecl,
)
from .spaces import (
    MetaphorPretence,
    Provenance,
    Reality,
    SimulationPretence,
    Space,
    SpaceError,
    SpaceKind,
    SpaceTree,
    StoredProposition,
)
from .terms import (
    Atom,
    Compound,
    Proposition,
    Substitution,
    Var,
    is_ground,
    iter_atoms,
    prop_depth,
    prop_text,
    unify_props,
    vars_of,
)

EMPTY = Substitution()


class LimitExceeded(RuntimeError):
    """A resource limit tripped; names the limit that did."""

    def __init__(self, limit: str, message: str):
        super().__init__(f"{limit}: {message}")
        self.limit = limit


@dataclass(frozen=True)
class EngineLimits:
    """Termination guarantees for a run.

    ``max_skolems_per_rule`` caps how many times one rule may introduce
    skolem constants for the same antecedent binding; the default of one
    makes existential firing idempotent. ``max_rounds = 0`` is accepted and
    trips immediately, which is occasionally useful to probe the limit
    machinery itself.
    """

    max_rounds: int = 8
    max_term_depth: int = 8
    max_skolems_per_rule: int = 1
    max_store_size: int = 10000

    def __post_init__(self) -> None:
        if self.max_rounds < 0:
            raise ValueError("max_rounds must be >= 0")
        for name in ("max_term_depth", "max_skolems_per_rule", "max_store_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")


@dataclass
class TraceStep:
    """One derivation event.

    ``kind`` is one of create_space, seed, rule_fire, skolem, convert_out,
    convert_in, conflict. ``space`` is the space the operation ran on;
    ``target`` is where the output landed (the parent for convert_out and
    create_space, the space itself otherwise). ``stored`` references the
    affected store entry so renderers can report its final defeat status.
    """

    step_id: int
    kind: str
    space: str
    rule: Optional[str] = None
    inputs: tuple[int, ...] = ()
    output: Optional[int] = None
    certainty: Optional[object] = None  # Certainty | UNDECIDED | None
    prop: Optional[Proposition] = None
    target: Optional[str] = None
    stored: Optional[StoredProposition] = None


Derivation = list[TraceStep]


@dataclass(frozen=True)
class QueryAnswer:
    space: str
    pattern: Proposition
    stored: StoredProposition
    bindings: Substitution


@dataclass(frozen=True)
class Verdict:
    space: str
    prop: Proposition
    required: Certainty
    passed: bool
    found: Optional[Certainty]


@dataclass(frozen=True)
class ProofAnswer:
    bindings: Substitution
    certainty: Certainty
    steps: tuple[str, ...]
    defeated: bool = False


@dataclass
class RunResult:
    kb: KnowledgeBase
    scenario: Scenario
    limits: EngineLimits
    tree: SpaceTree
    trace: Derivation
    query_answers: list[list[QueryAnswer]]
    verdicts: list[Verdict]
    rounds: int

    @property
    def conflicts(self) -> int:
        return sum(1 for s in self.trace if s.kind == "conflict")

    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


def trace_of(result: RunResult) -> Derivation:
    """The ordered derivation trace of a completed run."""
    return result.trace


def _canon_prop(p: Proposition) -> str:
    """Render with variables renamed in order of appearance, for cycle keys."""
    mapping: dict[Var, str] = {}

    def ct(t) -> str:
        if isinstance(t, Var):
            if t not in mapping:
                mapping[t] = f"?v{len(mapping)}"
            return mapping[t]
        if isinstance(t, Atom):
            return t.name
        return "(" + " ".join([t.functor] + [ct(a) for a in t.args]) + ")"

    body = "(" + " ".join([p.predicate] + [ct(a) for a in p.args]) + ")"
    return f"(not {body})" if p.negated else body


class Engine:
    """One inference run over one space tree.

    Build spaces and seed them by hand for fine-grained use, or call
    :meth:`run` with a scenario for the full pipeline. An engine that has
    created any space can no longer start a scenario run.
    """

    def __init__(self, kb: KnowledgeBase, limits: Optional[EngineLimits] = None):
        self.kb = kb
        self.limits = limits or EngineLimits()
        self.tree = SpaceTree()
        self.trace: Derivation = []
        self._used_atoms: set[str] = set()
        self._skolem_counters: dict[str, int] = {}
        self._skolem_fired: dict[tuple[str, tuple[int, ...]], int] = {}
        self._declared_actives: Optional[set[str]] = None
        self._dirty = False
        self._register_kb_atoms()

    # ------------------------------------------------------------------
    # bookkeeping

    def _register_kb_atoms(self) -> None:
        for r in self.kb.rules:
            for p in r.antecedents + (r.consequent,):
                self._used_atoms.update(iter_atoms(p))
        for c in self.kb.conversions:
            self._used_atoms.update(iter_atoms(c.vehicle_pattern))
            self._used_atoms.update(iter_atoms(c.tenor_pattern))
        for f in self.kb.facts:
            self._used_atoms.update(iter_atoms(f.prop))

    def _register_scenario_atoms(self, scenario: Scenario) -> None:
        # Only seeds can put constants into stores; queries and expectations
        # merely observe, so their atoms must not shift skolem numbering
        # (an expectation may legitimately name the skolem it awaits).
        for seed in scenario.seeds:
            self._used_atoms.update(iter_atoms(seed.prop))

    def _fresh_atom(self, base: str) -> str:
        n = self._skolem_counters.get(base, 1)
        while f"{base}{n}" in self._used_atoms:
            n += 1
        name = f"{base}{n}"
        self._skolem_counters[base] = n + 1
        self._used_atoms.add(name)
        return name

    def _emit(self, **kw) -> TraceStep:
        step = TraceStep(step_id=len(self.trace) + 1, **kw)
        self.trace.append(step)
        return step

    def _literalized(self, space: Space) -> set[str]:
        return self.tree.literalized_domains(space, self.kb, self._declared_actives)

    # ------------------------------------------------------------------
    # space construction and assertion

    def create_space(
        self, id: str, kind: SpaceKind, parent: Optional[Union[str, Space]] = None
    ) -> Space:
        space = self.tree.create_space(id, kind, parent)
        self._dirty = True
        self._emit(
            kind="create_space",
            space=id,
            target=space.parent.id if space.parent else None,
        )
        return space

    def _assert(
        self,
        space: Space,
        prop: Proposition,
        certainty: Certainty,
        provenance: Provenance,
        *,
        kind: str,
        rule: Optional[str] = None,
        inputs: tuple[int, ...] = (),
        step_space: Optional[str] = None,
    ) -> tuple[StoredProposition, bool, bool]:
        if prop_depth(prop) > self.limits.max_term_depth:
            raise LimitExceeded(
                "max_term_depth",
                f"{prop_text(prop)} exceeds depth {self.limits.max_term_depth} in {space.id}",
            )
        stored, created, upgraded = self.tree.assert_prop(space, prop, certainty, provenance)
        if created and len(space.store) > self.limits.max_store_size:
            raise LimitExceeded(
                "max_store_size",
                f"store of {space.id} exceeds {self.limits.max_store_size} propositions",
            )
        if created or upgraded:
            self._dirty = True
            self._used_atoms.update(iter_atoms(prop))
            self._emit(
                kind=kind,
                space=step_space if step_space is not None else space.id,
                rule=rule,
                inputs=inputs,
                output=stored.id,
                certainty=certainty,
                prop=prop,
                target=space.id,
                stored=stored,
            )
        return stored, created, upgraded

    def seed(self, space: Union[str, Space], prop: Proposition, certainty: Certainty) -> StoredProposition:
        """Assert a premise directly into a space, as a scenario seed would."""
        if isinstance(space, str):
            space = self.tree[space]
        stored, _, _ = self._assert(space, prop, certainty, Provenance.seed(), kind="seed")
        return stored

    # ------------------------------------------------------------------
    # forward saturation

    def _match_antecedents(
        self, antecedents: Sequence[Proposition], snapshot: Sequence[StoredProposition]
    ) -> Iterator[tuple[Substitution, tuple[int, ...], tuple[Certainty, ...]]]:
        def rec(i: int, subst: Substitution, ids: tuple[int, ...], certs: tuple[Certainty, ...]):
            if i == len(antecedents):
                yield subst, ids, certs
                return
            for sp in snapshot:
                if sp.defeated:
                    continue
                s2 = unify_props(antecedents[i], sp.prop, subst)
                if s2 is not None:
                    yield from rec(i + 1, s2, ids + (sp.id,), certs + (sp.certainty,))

        yield from rec(0, EMPTY, (), ())

    def saturate(self, space: Union[str, Space]) -> int:
        """Forward closure of one space under the domain-applicable rules.

        Rules fire in declaration order over bindings enumerated in store
        insertion order. Existential consequents introduce one skolem
        constant per variable per distinct antecedent binding and are never
        re-fired for a binding already used. Returns the number of new
        propositions (certainty upgrades count as changes but not as new).
        """
        if isinstance(space, str):
            space = self.tree[space]
        lits = self._literalized(space)
        new_count = 0
        while True:
            pass_changed = False
            for rule in self.kb.rules:
                if rule.domain not in lits:
                    continue
                snapshot = list(space.store)
                for subst, ids, certs in self._match_antecedents(rule.antecedents, snapshot):
                    certainty = combine(rule.certainty, certs)
                    if rule.existentials:
                        key = (rule.name, ids)
                        if self._skolem_fired.get(key, 0) >= self.limits.max_skolems_per_rule:
                            continue
                        self._skolem_fired[key] = self._skolem_fired.get(key, 0) + 1
                        for v in rule.existentials:
                            bound = subst.bind(v, Atom(self._fresh_atom(v.name)))
                            assert bound is not None
                            subst = bound
                        prop = subst.apply(rule.consequent)
                        _, created, upgraded = self._assert(
                            space,
                            prop,
                            certainty,
                            Provenance.skolem(rule.name, ids),
                            kind="skolem",
                            rule=rule.name,
                            inputs=ids,
                        )
                    else:
                        prop = subst.apply(rule.consequent)
                        _, created, upgraded = self._assert(
                            space,
                            prop,
                            certainty,
                            Provenance.rule_fire(rule.name, ids),
                            kind="rule_fire",
                            rule=rule.name,
                            inputs=ids,
                        )
                    if created:
                        new_count += 1
                    if created or upgraded:
                        pass_changed = True
            if not pass_changed:
                break
        return new_count

    # ------------------------------------------------------------------
    # conversion across one boundary

    def _cocoon(self, space: Union[str, Space]) -> Space:
        if isinstance(space, str):
            space = self.tree[space]
        if isinstance(space.kind, Reality):
            raise SpaceError("reality is not a cocoon; nothing to convert across")
        if not isinstance(space.kind, MetaphorPretence):
            raise SpaceError(f"space {space.id!r} is not a metaphor-pretence cocoon")
        return space

    def map_out(self, space: Union[str, Space]) -> int:
        """Map every convertible proposition of a cocoon into its parent.

        A proposition transfers only through a conversion rule of the
        cocoon's metaphor whose vehicle pattern it matches; everything else
        stays behind. That filtering is the point: only connotations cross.
        """
        space = self._cocoon(space)
        metaphor = self.kb.metaphor(space.kind.metaphor)
        parent = space.parent
        assert parent is not None
        count = 0
        for sp in list(space.store):
            if sp.defeated:
                continue
            for conv in metaphor.conversions:
                s = unify_props(sp.prop, conv.vehicle_pattern)
                if s is None:
                    continue
                out = s.apply(conv.tenor_pattern)
                certainty = combine(conv.certainty, [sp.certainty])
                _, created, _ = self._assert(
                    parent,
                    out,
                    certainty,
                    Provenance.converted(conv.name, space.id, sp.id),
                    kind="convert_out",
                    rule=conv.name,
                    inputs=(sp.id,),
                    step_space=space.id,
                )
                if created:
                    count += 1
        return count

    def map_in(self, space: Union[str, Space], stored: StoredProposition) -> int:
        """Transfer one parent proposition into a cocoon, tenor to vehicle.

        The mirror image of :meth:`map_out`; invoked only on explicit
        request (scenario encodings seed cocoons directly) and by
        goal-directed proof.
        """
        space = self._cocoon(space)
        parent = space.parent
        assert parent is not None
        if stored.defeated:
            raise SpaceError("defeated propositions cannot be mapped in")
        metaphor = self.kb.metaphor(space.kind.metaphor)
        count = 0
        for conv in metaphor.conversions:
            s = unify_props(stored.prop, conv.tenor_pattern)
            if s is None:
                continue
            inside = s.apply(conv.vehicle_pattern)
            certainty = combine(conv.certainty, [stored.certainty])
            _, created, _ = self._assert(
                space,
                inside,
                certainty,
                Provenance.converted(conv.name, parent.id, stored.id),
                kind="convert_in",
                rule=conv.name,
                inputs=(stored.id,),
            )
            if created:
                count += 1
        return count

    # ------------------------------------------------------------------
    # conflict resolution

    def resolve_conflicts(self, space: Union[str, Space]) -> int:
        """Adjudicate every {P, not P} pair held by this single space.

        The stronger side wins and the loser is marked defeated; an exact
        tie defeats both (rendered ``undecided`` in traces). Flags are
        recomputed from scratch each pass, so a proposition defeated in a
        tie is rescued if a later, stronger derivation upgrades it.
        Cross-space pairs are never examined.
        """
        if isinstance(space, str):
            space = self.tree[space]
        desired: dict[int, bool] = {sp.id: False for sp in space.store}
        events: list[tuple[StoredProposition, StoredProposition, object]] = []
        for sp in space.store:
            if sp.prop.negated:
                continue
            neg = space.index.get(sp.prop.negate())
            if neg is None:
                continue
            outcome = adjudicate(sp.certainty, neg.certainty)
            if outcome is Adjudication.KEEP_FOR:
                desired[neg.id] = True
                step_certainty: object = sp.certainty
            elif outcome is Adjudication.KEEP_AGAINST:
                desired[sp.id] = True
                step_certainty = neg.certainty
            else:
                desired[sp.id] = True
                desired[neg.id] = True
                step_certainty = UNDECIDED
            events.append((sp, neg, step_certainty))
        count = 0
        for sp, neg, step_certainty in events:
            if sp.defeated != desired[sp.id] or neg.defeated != desired[neg.id]:
                count += 1
                self._dirty = True
                self._emit(
                    kind="conflict",
                    space=space.id,
                    inputs=(sp.id, neg.id),
                    certainty=step_certainty,
                    target=space.id,
                )
        for sp in space.store:
            sp.defeated = desired[sp.id]
        return count

    # ------------------------------------------------------------------
    # whole-scenario execution

    def run(self, scenario: Scenario) -> RunResult:
        """Execute a scenario to its global fixpoint.

        Spaces are created and seeded at their first visit, deepest first
        (ties in declaration order), and each visit saturates, resolves
        conflicts, then maps out; reality is seeded, saturated, and
        resolved at the end of every round. Creating a nested space first
        creates any missing ancestors, so a chain appears root-first. The
        run aborts with a resource error if no fixpoint is reached within
        ``max_rounds``.
        """
        if self.tree.spaces:
            raise RuntimeError("this engine already holds spaces; use a fresh one per run")
        for decl in scenario.spaces:
            if decl.metaphor not in {m.name for m in self.kb.metaphors}:
                raise SpaceError(f"scenario space {decl.name!r} uses unknown metaphor {decl.metaphor!r}")
        self._register_scenario_atoms(scenario)
        self._declared_actives = {s.metaphor for s in scenario.spaces}
        reality = self.create_space(RESERVED_SPACE, Reality(), None)
        order = sorted(
            range(len(scenario.spaces)),
            key=lambda i: (-scenario.depth_of(scenario.spaces[i].name), i),
        )
        seeded: set[str] = set()
        rounds = 0
        converged = False
        for _ in range(self.limits.max_rounds):
            rounds += 1
            self._dirty = False
            for i in order:
                decl = scenario.spaces[i]
                if decl.name not in self.tree:
                    self._realize_chain(decl.name, scenario)
                space = self.tree[decl.name]
                if decl.name not in seeded:
                    self._apply_seeds(decl.name, scenario)
                    seeded.add(decl.name)
                self.saturate(space)
                self.resolve_conflicts(space)
                self.map_out(space)
            if RESERVED_SPACE not in seeded:
                for fact in self.kb.facts:
                    self._assert(reality, fact.prop, fact.certainty, Provenance.seed(), kind="seed")
                self._apply_seeds(RESERVED_SPACE, scenario)
                seeded.add(RESERVED_SPACE)
            self.saturate(reality)
            self.resolve_conflicts(reality)
            if not self._dirty:
                converged = True
                break
        if not converged:
            raise LimitExceeded(
                "max_rounds",
                f"no fixpoint within {self.limits.max_rounds} rounds",
            )
        answers = [self._answer_query(q.space, q.pattern) for q in scenario.queries]
        verdicts = [self._check_expectation(e) for e in scenario.expectations]
        return RunResult(
            kb=self.kb,
            scenario=scenario,
            limits=self.limits,
            tree=self.tree,
            trace=self.trace,
            query_answers=answers,
            verdicts=verdicts,
            rounds=rounds,
        )

    def prepare(self, scenario: Scenario) -> None:
        """Build and seed a scenario's spaces without running inference.

        Useful for goal-directed proof straight from the premises; spaces
        appear in declaration order (ancestors first) and every seed and
        knowledge-base fact is asserted.
        """
        if self.tree.spaces:
            raise RuntimeError("this engine already holds spaces; use a fresh one per run")
        self._register_scenario_atoms(scenario)
        self._declared_actives = {s.metaphor for s in scenario.spaces}
        reality = self.create_space(RESERVED_SPACE, Reality(), None)
        for fact in self.kb.facts:
            self._assert(reality, fact.prop, fact.certainty, Provenance.seed(), kind="seed")
        for decl in scenario.spaces:
            if decl.name not in self.tree:
                self._realize_chain(decl.name, scenario)
        for seed in scenario.seeds:
            self._assert(
                self.tree[seed.space], seed.prop, seed.certainty, Provenance.seed(), kind="seed"
            )

    def _realize_chain(self, name: str, scenario: Scenario) -> None:
        chain: list[SpaceDecl] = []
        cur = name
        while cur != RESERVED_SPACE and cur not in self.tree:
            decl = scenario.space(cur)
            chain.append(decl)
            cur = decl.parent
        for decl in reversed(chain):
            self.create_space(decl.name, MetaphorPretence(decl.metaphor), decl.parent)

    def _apply_seeds(self, space_id: str, scenario: Scenario) -> None:
        space = self.tree[space_id]
        for seed in scenario.seeds:
            if seed.space == space_id:
                self._assert(space, seed.prop, seed.certainty, Provenance.seed(), kind="seed")

    def _answer_query(self, space_id: str, pattern: Proposition) -> list[QueryAnswer]:
        space = self.tree[space_id]
        pattern_vars = vars_of(pattern)
        out: list[QueryAnswer] = []
        for sp in space.store:
            s = unify_props(pattern, sp.prop)
            if s is not None:
                out.append(QueryAnswer(space_id, pattern, sp, s.restrict(pattern_vars)))
        return out

    def _check_expectation(self, e) -> Verdict:
        space = self.tree[e.space]
        found = space.index.get(e.prop)
        if found is None:
            return Verdict(e.space, e.prop, e.certainty, False, None)
        passed = (not found.defeated) and found.certainty >= e.certainty
        return Verdict(e.space, e.prop, e.certainty, passed, found.certainty)

    # ------------------------------------------------------------------
    # goal-directed proof

    def prove(
        self,
        goal: Proposition,
        space: Union[str, Space] = RESERVED_SPACE,
        max_answers: Optional[int] = None,
    ) -> list[ProofAnswer]:
        """Depth-bounded backward chaining from a goal pattern.

        A goal is proved by a live stored proposition, by a
        domain-applicable rule whose antecedents are proved recursively, or
        through a conversion rule across one space boundary: child-side
        origins mirror map_out everywhere, and a single inward hop (the
        map_in direction) is allowed for the immediate goal when it targets
        a cocoon. Existential rules never backward-chain; their skolemized
        conclusions are proved from the store. A proof whose ground goal
        sits defeated in the target space is quarantined: it is reported
        flagged but never counts as success, which keeps prove in exact
        agreement with the forward fixpoint on ground reality goals.
        """
        if isinstance(space, str):
            space = self.tree[space]
        depth = max(16, 4 * self.limits.max_rounds)
        counter = itertools.count(1)
        goal_vars = vars_of(goal)
        answers: list[ProofAnswer] = []
        seen: set[tuple[str, Certainty]] = set()
        for s, cert, steps in self._prove(goal, space, EMPTY, depth, counter, (), True):
            instance = s.apply(goal)
            if is_ground(instance):
                stored = space.index.get(instance)
                if stored is not None and stored.defeated:
                    continue
            key = (_canon_prop(instance), cert)
            if key in seen:
                continue
            seen.add(key)
            answers.append(ProofAnswer(s.restrict(goal_vars), cert, tuple(steps)))
            if max_answers is not None and len(answers) >= max_answers:
                return answers
        for sp in space.store:
            if not sp.defeated:
                continue
            s = unify_props(goal, sp.prop)
            if s is not None:
                answers.append(
                    ProofAnswer(
                        s.restrict(goal_vars),
                        sp.certainty,
                        (f"defeated #{sp.id} in {space.id}",),
                        defeated=True,
                    )
                )
        return answers

    def _defeated_instance(self, space: Space, prop: Proposition) -> bool:
        if not is_ground(prop):
            return False
        stored = space.index.get(prop)
        return stored is not None and stored.defeated

    def _prove(
        self,
        goal: Proposition,
        space: Space,
        subst: Substitution,
        depth: int,
        counter,
        stack: tuple,
        allow_inward: bool,
    ) -> Iterator[tuple[Substitution, Certainty, list[str]]]:
        if depth <= 0:
            return
        current = subst.apply(goal)
        key = (space.id, _canon_prop(current))
        if key in stack:
            return
        stack = stack + (key,)
        for sp in space.store:
            if sp.defeated:
                continue
            s2 = unify_props(goal, sp.prop, subst)
            if s2 is not None:
                yield s2, sp.certainty, [f"stored #{sp.id} in {space.id}"]
        lits = self._literalized(space)
        for rule in self.kb.rules:
            if rule.domain not in lits or rule.existentials:
                continue
            r = rule.rename_apart(f"g{next(counter)}")
            s2 = unify_props(goal, r.consequent, subst)
            if s2 is None:
                continue
            for s3, certs, steps in self._prove_all(r.antecedents, space, s2, depth - 1, counter, stack):
                if self._defeated_instance(space, s3.apply(goal)):
                    continue
                yield s3, combine(rule.certainty, certs), [f"rule {rule.name} in {space.id}"] + steps
        for child in space.children:
            if not isinstance(child.kind, MetaphorPretence):
                continue
            for conv in self.kb.metaphor(child.kind.metaphor).conversions:
                suffix = f"g{next(counter)}"
                tenor = _rename_prop(conv.tenor_pattern, suffix)
                vehicle = _rename_prop(conv.vehicle_pattern, suffix)
                s2 = unify_props(goal, tenor, subst)
                if s2 is None:
                    continue
                for s3, c3, steps in self._prove(vehicle, child, s2, depth - 1, counter, stack, False):
                    if self._defeated_instance(space, s3.apply(goal)):
                        continue
                    yield s3, combine(conv.certainty, [c3]), [
                        f"convert {conv.name} out of {child.id}"
                    ] + steps
        if allow_inward and isinstance(space.kind, MetaphorPretence):
            parent = space.parent
            assert parent is not None
            for conv in self.kb.metaphor(space.kind.metaphor).conversions:
                suffix = f"g{next(counter)}"
                tenor = _rename_prop(conv.tenor_pattern, suffix)
                vehicle = _rename_prop(conv.vehicle_pattern, suffix)
                s2 = unify_props(goal, vehicle, subst)
                if s2 is None:
                    continue
                for s3, c3, steps in self._prove(tenor, parent, s2, depth - 1, counter, stack, False):
                    yield s3, combine(conv.certainty, [c3]), [
                        f"convert {conv.name} in from {parent.id}"
                    ] + steps

    def _prove_all(
        self,
        antecedents: Sequence[Proposition],
        space: Space,
        subst: Substitution,
        depth: int,
        counter,
        stack: tuple,
    ) -> Iterator[tuple[Substitution, tuple[Certainty, ...], list[str]]]:
        if not antecedents:
            yield subst, (), []
            return
        head, rest = antecedents[0], antecedents[1:]
        for s2, c2, steps in self._prove(head, space, subst, depth, counter, stack, False):
            for s3, certs, more in self._prove_all(rest, space, s2, depth, counter, stack):
                yield s3, (c2,) + certs, steps + more


def _rename_prop(p: Proposition, suffix: str) -> Proposition:
    from .terms import rename_apart

    return rename_apart(p, suffix)


def run_scenario(
    kb: KnowledgeBase, scenario: Scenario, limits: Optional[EngineLimits] = None
) -> RunResult:
    """Run one scenario against a knowledge base with a fresh engine."""
    return Engine(kb, limits).run(scenario)
