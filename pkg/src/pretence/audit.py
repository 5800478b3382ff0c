"""Invariant audits over completed runs.

``audit_result`` re-checks, from the trace alone plus the knowledge base,
the structural guarantees every run must uphold: dense ordered step ids,
provenance that only points backwards, no reads or writes across
non-adjacent spaces, conversion filtering that really matched, certainty
that never increases along a derivation, and conflict steps confined to
one space. It returns a list of violation descriptions; an empty list
means the run is clean. Test suites run it over every corpus and fuzz
trace.
"""

from __future__ import annotations

from typing import Optional

from .certainty import UNDECIDED, Certainty, combine
from .engine import RunResult
from .kb import RESERVED_SPACE
from .terms import prop_text, unify_props


def audit_result(result: RunResult) -> list[str]:
    problems: list[str] = []
    kb = result.kb
    rules = {r.name: r for r in kb.rules}
    conversions = {c.name: c for c in kb.conversions}

    parent_of: dict[str, Optional[str]] = {}
    created_at: dict[int, int] = {}  # stored id -> step id of first creation
    space_of: dict[int, str] = {}
    prop_of: dict[int, object] = {}
    final_certainty: dict[int, Certainty] = {}

    for i, step in enumerate(result.trace, start=1):
        if step.step_id != i:
            problems.append(f"step ids not dense at #{step.step_id} (expected {i})")

    for step in result.trace:
        if step.kind == "create_space":
            parent_of[step.space] = step.target
            continue
        for input_id in step.inputs:
            if input_id not in created_at:
                problems.append(
                    f"step #{step.step_id} reads stored #{input_id} before any step created it"
                )
        if step.output is not None:
            landed = step.target or step.space
            if step.output not in created_at:
                created_at[step.output] = step.step_id
                space_of[step.output] = landed
                prop_of[step.output] = step.prop
            elif space_of[step.output] != landed:
                problems.append(
                    f"step #{step.step_id} re-derives stored #{step.output} in a different space"
                )
            if step.stored is not None:
                final_certainty[step.output] = step.stored.certainty

    def adjacent_ok(step, input_space: str, output_space: str) -> bool:
        if step.kind in ("rule_fire", "skolem", "conflict"):
            return input_space == output_space
        if step.kind == "convert_out":
            return parent_of.get(input_space) == output_space
        if step.kind == "convert_in":
            return parent_of.get(output_space) == input_space
        return True

    for step in result.trace:
        if step.kind in ("create_space", "seed"):
            continue
        if step.kind == "conflict":
            if len(step.inputs) != 2:
                problems.append(f"conflict step #{step.step_id} lacks a pair")
                continue
            a, b = step.inputs
            if space_of.get(a) != space_of.get(b) or space_of.get(a) != step.space:
                problems.append(
                    f"conflict step #{step.step_id} adjudicates across spaces"
                )
            pa, pb = prop_of.get(a), prop_of.get(b)
            if pa is None or pb is None or pa.negate() != pb:
                problems.append(
                    f"conflict step #{step.step_id} pairs non-complementary propositions"
                )
            continue
        output_space = step.target or step.space
        for input_id in step.inputs:
            input_space = space_of.get(input_id)
            if input_space is None:
                continue
            if step.kind in ("rule_fire", "skolem") and input_space != step.space:
                problems.append(
                    f"step #{step.step_id} ({step.kind}) uses a premise from {input_space}, "
                    f"not its own space {step.space}"
                )
            if step.kind == "convert_out" and not (
                input_space == step.space and parent_of.get(step.space) == output_space
            ):
                problems.append(
                    f"step #{step.step_id} convert_out does not cross exactly one boundary upward"
                )
            if step.kind == "convert_in" and not (
                output_space == step.space and parent_of.get(step.space) == input_space
            ):
                problems.append(
                    f"step #{step.step_id} convert_in does not cross exactly one boundary downward"
                )

        # Certainty never increases along a derivation. Inputs may have been
        # upgraded since they were used, so their final certainty bounds the
        # at-use certainty from above.
        if step.kind in ("rule_fire", "skolem", "convert_out", "convert_in"):
            source = rules.get(step.rule) or conversions.get(step.rule)
            if source is None:
                problems.append(f"step #{step.step_id} names unknown rule {step.rule!r}")
                continue
            input_certs = [final_certainty[i] for i in step.inputs if i in final_certainty]
            bound = combine(source.certainty, input_certs)
            if not isinstance(step.certainty, Certainty) or step.certainty > bound:
                problems.append(
                    f"step #{step.step_id} concludes at {step.certainty} above the "
                    f"weakest-link bound {bound.keyword}"
                )

        # Filter soundness: a converted proposition really matched its pattern.
        if step.kind in ("convert_out", "convert_in") and step.inputs:
            conv = conversions.get(step.rule)
            source_prop = prop_of.get(step.inputs[0])
            if conv is not None and source_prop is not None:
                pattern = (
                    conv.vehicle_pattern if step.kind == "convert_out" else conv.tenor_pattern
                )
                if unify_props(source_prop, pattern) is None:
                    problems.append(
                        f"step #{step.step_id} converted {prop_text(source_prop)} "
                        f"without matching {step.rule!r}"
                    )

    # Every stored proposition in the final tree has a creating step.
    for space in result.tree.spaces.values():
        for sp in space.store:
            if sp.id not in created_at:
                problems.append(
                    f"stored #{sp.id} in {space.id} has no creating trace step"
                )
            elif space_of.get(sp.id) != space.id:
                problems.append(
                    f"stored #{sp.id} lives in {space.id} but was created in {space_of.get(sp.id)}"
                )
    return problems
