"""Render a derivation trace as text, JSON, or Graphviz dot.

All three renderings are pure functions of the trace; the text and JSON
forms of one run contain the same steps in the same order.
"""

from __future__ import annotations

import json
from typing import Optional

from .certainty import UNDECIDED, Certainty
from .engine import Derivation, TraceStep
from .terms import prop_text

TRACE_FORMATS = ("text", "json", "dot")


def _certainty_text(c) -> Optional[str]:
    if c is None:
        return None
    if isinstance(c, Certainty):
        return c.keyword
    return str(c)  # UNDECIDED


def render_trace(trace: Derivation, format: str = "text") -> str:
    if format == "text":
        return render_text(trace)
    if format == "json":
        return render_json(trace)
    if format == "dot":
        return render_dot(trace)
    raise ValueError(f"unknown trace format {format!r}")


def render_text(trace: Derivation) -> str:
    lines = []
    for s in trace:
        ids = ",".join(str(i) for i in s.inputs)
        out = s.output if s.output is not None else "-"
        cert = _certainty_text(s.certainty) or "-"
        rule = s.rule or "-"
        lines.append(
            f"#{s.step_id} {s.kind} space={s.space} rule={rule} in=[{ids}] out={out} cert={cert}"
        )
    return "\n".join(lines) + ("\n" if lines else "")


def render_json(trace: Derivation) -> str:
    steps = []
    for s in trace:
        steps.append(
            {
                "step_id": s.step_id,
                "kind": s.kind,
                "space": s.space,
                "rule": s.rule,
                "inputs": list(s.inputs),
                "output_prop": prop_text(s.prop) if s.prop is not None else None,
                "certainty": _certainty_text(s.certainty),
                "defeated": bool(s.stored.defeated) if s.stored is not None else False,
            }
        )
    return json.dumps({"steps": steps}, indent=2)


def render_dot(trace: Derivation) -> str:
    """Stored propositions as nodes, provenance as edges, spaces as nested
    cluster subgraphs mirroring the cocoon tree."""
    parents: dict[str, Optional[str]] = {}
    children: dict[str, list[str]] = {}
    nodes: dict[int, tuple[str, str]] = {}  # id -> (space, label)
    edges: list[tuple[int, int, str, str]] = []  # from, to, label, style
    for s in trace:
        if s.kind == "create_space":
            parents[s.space] = s.target
            children.setdefault(s.target, []).append(s.space) if s.target else None
            children.setdefault(s.space, [])
        elif s.kind == "conflict":
            if len(s.inputs) == 2:
                edges.append((s.inputs[0], s.inputs[1], "conflict", "dashed"))
        elif s.output is not None:
            landed = s.target or s.space
            if s.output not in nodes and s.prop is not None:
                defeated = s.stored.defeated if s.stored is not None else False
                cert = s.stored.certainty.keyword if s.stored is not None else _certainty_text(s.certainty)
                mark = " [defeated]" if defeated else ""
                nodes[s.output] = (landed, f"{prop_text(s.prop)}\\n{cert}{mark}")
            label = s.rule or s.kind
            for i in s.inputs:
                edges.append((i, s.output, label, "solid"))

    by_space: dict[str, list[int]] = {}
    for nid, (space, _) in nodes.items():
        by_space.setdefault(space, []).append(nid)

    out = ["digraph derivation {", "  rankdir=LR;", "  node [shape=box, fontsize=10];"]

    def emit_space(space: str, indent: str) -> None:
        out.append(f'{indent}subgraph "cluster_{space}" {{')
        out.append(f'{indent}  label="{space}";')
        for nid in by_space.get(space, ()):  # insertion order
            sp, label = nodes[nid]
            out.append(f'{indent}  n{nid} [label="{label}"];')
        for child in children.get(space, ()):  # creation order
            emit_space(child, indent + "  ")
        out.append(f"{indent}}}")

    roots = [s for s, p in parents.items() if p is None]
    for root in roots:
        emit_space(root, "  ")
    for frm, to, label, style in edges:
        out.append(f'  n{frm} -> n{to} [label="{label}", style={style}];')
    out.append("}")
    return "\n".join(out) + "\n"
