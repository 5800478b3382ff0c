"""The tree of reasoning spaces and their proposition stores.

Reality sits at the root; metaphor-pretence cocoons hang beneath it, as
siblings when two metaphors apply independently and as a chain when one
vehicle is itself re-metaphorized. Cocoons do not inherit parent facts:
everything in a cocoon arrives by seeding or by inward conversion, which is
what makes conversion rules genuine filters.

A space tree belongs to one engine run and is mutated only by it; once the
run completes the tree is treated as frozen and may be shared for
inspection and rendering.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .certainty import Certainty
from .kb import KnowledgeBase, RESERVED_SPACE
from .terms import Proposition, is_ground, prop_text


class SpaceError(ValueError):
    pass


@dataclass(frozen=True)
class Reality:
    pass


@dataclass(frozen=True)
class MetaphorPretence:
    metaphor: str


@dataclass(frozen=True)
class SimulationPretence:
    """A space modeling another agent's beliefs.

    Constructible for format compatibility; the engine gives it no special
    behavior (rules visible to its parent apply, nothing maps in or out).
    """

    agent: str


SpaceKind = Union[Reality, MetaphorPretence, SimulationPretence]


@dataclass(frozen=True)
class Provenance:
    kind: str  # "seed" | "rule" | "converted" | "skolem"
    rule: Optional[str] = None
    conversion: Optional[str] = None
    premises: tuple[int, ...] = ()
    source_space: Optional[str] = None
    source_id: Optional[int] = None

    @classmethod
    def seed(cls) -> "Provenance":
        return cls("seed")

    @classmethod
    def rule_fire(cls, rule: str, premises: tuple[int, ...]) -> "Provenance":
        return cls("rule", rule=rule, premises=premises)

    @classmethod
    def converted(cls, conversion: str, source_space: str, source_id: int) -> "Provenance":
        return cls(
            "converted",
            conversion=conversion,
            source_space=source_space,
            source_id=source_id,
            premises=(source_id,),
        )

    @classmethod
    def skolem(cls, rule: str, premises: tuple[int, ...]) -> "Provenance":
        return cls("skolem", rule=rule, premises=premises)


@dataclass(eq=False)
class StoredProposition:
    """A ground proposition held by one space, with provenance and defeat."""

    id: int
    prop: Proposition
    certainty: Certainty
    provenance: Provenance
    defeated: bool = False

    def __repr__(self) -> str:
        flag = " defeated" if self.defeated else ""
        return f"<#{self.id} {prop_text(self.prop)} @{self.certainty}{flag}>"


class Space:
    """One node in the pretence tree: an insertion-ordered proposition store."""

    def __init__(self, id: str, kind: SpaceKind, parent: Optional["Space"]):
        self.id = id
        self.kind = kind
        self.parent = parent
        self.children: list[Space] = []
        self.store: list[StoredProposition] = []
        self.index: dict[Proposition, StoredProposition] = {}
        self.depth = 0 if parent is None else parent.depth + 1

    def __repr__(self) -> str:
        return f"<space {self.id} ({len(self.store)} propositions)>"

    def find(self, prop: Proposition) -> Optional[StoredProposition]:
        return self.index.get(prop)

    def live(self) -> Iterable[StoredProposition]:
        return (sp for sp in self.store if not sp.defeated)


class SpaceTree:
    """Registry of spaces for one run; creation order is preserved."""

    def __init__(self) -> None:
        self.spaces: dict[str, Space] = {}
        self._next_id = 1

    # -- structure ------------------------------------------------------

    @property
    def reality(self) -> Space:
        return self.spaces[RESERVED_SPACE]

    def __contains__(self, space_id: str) -> bool:
        return space_id in self.spaces

    def __getitem__(self, space_id: str) -> Space:
        return self.spaces[space_id]

    def create_space(
        self, id: str, kind: SpaceKind, parent: Optional[Union[str, Space]] = None
    ) -> Space:
        """Create and register a space.

        Exactly one Reality space is allowed per tree, it has no parent,
        and every other space has one; parents are fixed at creation, so
        the registry is a tree by construction.
        """
        if id in self.spaces:
            raise SpaceError(f"duplicate space id {id!r}")
        parent_space: Optional[Space]
        if isinstance(parent, str):
            if parent not in self.spaces:
                raise SpaceError(f"unknown parent space {parent!r}")
            parent_space = self.spaces[parent]
        else:
            parent_space = parent
        if isinstance(kind, Reality):
            if parent_space is not None:
                raise SpaceError("the reality space cannot have a parent")
            if any(isinstance(s.kind, Reality) for s in self.spaces.values()):
                raise SpaceError("a run has exactly one reality space")
        else:
            if parent_space is None:
                raise SpaceError(f"space {id!r} needs a parent")
        space = Space(id, kind, parent_space)
        self.spaces[id] = space
        if parent_space is not None:
            parent_space.children.append(space)
        return space

    # -- store ----------------------------------------------------------

    def assert_prop(
        self,
        space: Union[str, Space],
        prop: Proposition,
        certainty: Certainty,
        provenance: Provenance,
    ) -> tuple[StoredProposition, bool, bool]:
        """Add a ground proposition to a space's store.

        Returns (stored, created, upgraded). Re-deriving an existing
        proposition upgrades its certainty to the maximum of old and new;
        the first provenance is kept on the stored value and every
        derivation event stays visible in the run trace.
        """
        if isinstance(space, str):
            space = self.spaces[space]
        if not is_ground(prop):
            raise SpaceError(f"cannot store non-ground proposition {prop_text(prop)}")
        existing = space.index.get(prop)
        if existing is not None:
            if certainty > existing.certainty:
                existing.certainty = certainty
                return existing, False, True
            return existing, False, False
        stored = StoredProposition(self._next_id, prop, certainty, provenance)
        self._next_id += 1
        space.store.append(stored)
        space.index[prop] = stored
        return stored, True, False

    def find_stored(self, stored_id: int) -> Optional[tuple[Space, StoredProposition]]:
        for space in self.spaces.values():
            for sp in space.store:
                if sp.id == stored_id:
                    return space, sp
        return None

    # -- domain visibility -----------------------------------------------

    def active_metaphors(self) -> set[str]:
        return {
            s.kind.metaphor
            for s in self.spaces.values()
            if isinstance(s.kind, MetaphorPretence)
        }

    def literalized_domains(
        self,
        space: Union[str, Space],
        kb: KnowledgeBase,
        active_metaphors: Optional[set[str]] = None,
    ) -> set[str]:
        """Domains whose vocabulary is literally true inside a space.

        Reality literalizes every declared domain except those claimed as a
        vehicle by an active metaphor. A metaphor cocoon adds its own
        vehicle domains on top of whatever its parent literalizes, so inner
        cocoons of a serial chain may still use outer vocabulary. A
        simulation cocoon is transparent: it sees what its parent sees.

        ``active_metaphors`` defaults to the metaphors of the cocoons
        present in this tree; an engine run pins it to the scenario's
        declared set so visibility does not depend on creation order.
        """
        if isinstance(space, str):
            space = self.spaces[space]
        if active_metaphors is None:
            active_metaphors = self.active_metaphors()
        if isinstance(space.kind, Reality):
            claimed: set[str] = set()
            for m in kb.metaphors:
                if m.name in active_metaphors:
                    claimed.update(m.vehicle_domains)
            return {d.name for d in kb.domains} - claimed
        assert space.parent is not None
        inherited = self.literalized_domains(space.parent, kb, active_metaphors)
        if isinstance(space.kind, MetaphorPretence):
            metaphor = kb.metaphor(space.kind.metaphor)
            return set(metaphor.vehicle_domains) | inherited
        return inherited
