"""Shared test utilities."""

from pretence import KnowledgeBase, Metaphor


def without_conversion(kb: KnowledgeBase, name: str) -> KnowledgeBase:
    """A copy of ``kb`` with one conversion rule deleted."""
    metaphors = tuple(
        Metaphor(
            m.name,
            m.vehicle_domains,
            m.tenor_domain,
            tuple(c for c in m.conversions if c.name != name),
        )
        for m in kb.metaphors
    )
    return KnowledgeBase(kb.domains, metaphors, kb.rules, kb.facts, kb.positions)


def without_rule(kb: KnowledgeBase, name: str) -> KnowledgeBase:
    """A copy of ``kb`` with one rule deleted."""
    return KnowledgeBase(
        kb.domains,
        kb.metaphors,
        tuple(r for r in kb.rules if r.name != name),
        kb.facts,
        kb.positions,
    )


def store_map(space):
    """Live propositions of a space as {prop: certainty}."""
    return {sp.prop: sp.certainty for sp in space.store if not sp.defeated}
