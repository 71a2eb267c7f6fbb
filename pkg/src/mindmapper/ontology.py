"""Concept hierarchy: sense mapping, tree distances, ancestry and visuality.

The ontology is a forest of concepts (the historical-figures fixture has the
three roots Work, Personal Life, Political Life). Each concept carries a
MAP-LEX set of sense ids, an Is-Visual flag and an optional attribute kind.
A virtual super-root joins the roots so cross-root distances stay finite;
crossing it costs two extra hops.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass

VIRTUAL_ROOT = "__root__"
VIRTUAL_ROOT_NAME = "General"


class OntologyError(ValueError):
    pass


@dataclass(frozen=True)
class Concept:
    id: str
    name: str
    parent: str | None
    map_lex: frozenset[str]
    is_visual: bool = False
    attribute_kind: str | None = None


class Ontology:
    """Immutable after construction; distance queries memoize under a lock."""

    def __init__(self, concepts: dict[str, Concept]):
        self.concepts = concepts
        self.roots = [c.id for c in concepts.values() if c.parent is None]
        self._children: dict[str, list[str]] = {cid: [] for cid in concepts}
        for concept in concepts.values():
            if concept.parent is not None:
                self._children[concept.parent].append(concept.id)
        self._sense_to_concept: dict[str, str] = {}
        for concept in concepts.values():
            for sense in concept.map_lex:
                self._sense_to_concept[sense] = concept.id
        self._depth: dict[str, int] = {}
        self._root_of: dict[str, str] = {}
        for root in self.roots:
            stack = [(root, 0)]
            while stack:
                cid, depth = stack.pop()
                self._depth[cid] = depth
                self._root_of[cid] = root
                stack.extend((ch, depth + 1) for ch in self._children[cid])
        self._distance_memo: dict[tuple[str, str], float] = {}
        self._memo_lock = threading.Lock()

    def concept(self, concept_id: str) -> Concept:
        try:
            return self.concepts[concept_id]
        except KeyError:
            raise OntologyError(f"unknown concept '{concept_id}'") from None

    def display_name(self, concept_id: str) -> str:
        if concept_id == VIRTUAL_ROOT:
            return VIRTUAL_ROOT_NAME
        return self.concept(concept_id).name

    def concept_of_sense(self, sense: str) -> str | None:
        return self._sense_to_concept.get(sense)

    def attribute_kind_of_sense(self, sense: str) -> str | None:
        cid = self.concept_of_sense(sense)
        return self.concepts[cid].attribute_kind if cid else None

    def is_visual(self, concept_id: str | None) -> bool:
        if concept_id is None or concept_id == VIRTUAL_ROOT:
            return False
        return self.concept(concept_id).is_visual

    def depth(self, concept_id: str) -> int:
        if concept_id == VIRTUAL_ROOT:
            return -1
        self.concept(concept_id)
        return self._depth[concept_id]

    def ancestors(self, concept_id: str) -> list[str]:
        """Path from the concept up to (and including) its root."""
        path = []
        cur: str | None = self.concept(concept_id).id
        while cur is not None:
            path.append(cur)
            cur = self.concepts[cur].parent
        return path

    def has_ancestor_named(self, concept_id: str | None, names: frozenset[str] | set[str]) -> bool:
        if concept_id is None or concept_id == VIRTUAL_ROOT:
            return False
        lowered = {n.lower() for n in names}
        return any(self.concepts[a].name.lower() in lowered for a in self.ancestors(concept_id))

    def lowest_common_ancestor(self, a: str, b: str) -> str | None:
        """LCA within the forest; None when the concepts sit under different roots."""
        if a == VIRTUAL_ROOT or b == VIRTUAL_ROOT:
            return None
        self.concept(a), self.concept(b)
        if self._root_of[a] != self._root_of[b]:
            return None
        da, db = self._depth[a], self._depth[b]
        while da > db:
            a = self.concepts[a].parent
            da -= 1
        while db > da:
            b = self.concepts[b].parent
            db -= 1
        while a != b:
            a = self.concepts[a].parent
            b = self.concepts[b].parent
        return a

    def lca_augmented(self, a: str, b: str) -> str:
        """LCA in the super-rooted tree; VIRTUAL_ROOT for cross-root pairs."""
        if a == VIRTUAL_ROOT or b == VIRTUAL_ROOT:
            return VIRTUAL_ROOT
        return self.lowest_common_ancestor(a, b) or VIRTUAL_ROOT

    def lca_of_set(self, concept_ids) -> str:
        ids = list(concept_ids)
        if not ids:
            return VIRTUAL_ROOT
        acc = ids[0]
        for cid in ids[1:]:
            acc = self.lca_augmented(acc, cid)
        return acc

    def concept_distance(self, a: str, b: str, use_super_root: bool = True) -> float:
        """Shortest undirected path length through the hierarchy.

        Cross-root paths go through the virtual super-root (two extra hops)
        unless use_super_root is off, in which case they are math.inf.
        """
        for cid in (a, b):
            if cid != VIRTUAL_ROOT:
                self.concept(cid)
        if a == b:
            return 0
        if not use_super_root and self._crosses_root(a, b):
            return math.inf
        key = (a, b) if a <= b else (b, a)
        with self._memo_lock:
            cached = self._distance_memo.get(key)
        if cached is not None:
            return cached
        dist = self._distance_uncached(a, b)
        with self._memo_lock:
            self._distance_memo[key] = dist
        return dist

    def _crosses_root(self, a: str, b: str) -> bool:
        if a == VIRTUAL_ROOT or b == VIRTUAL_ROOT:
            return True
        return self._root_of[a] != self._root_of[b]

    def _distance_uncached(self, a: str, b: str) -> float:
        if a == VIRTUAL_ROOT and b == VIRTUAL_ROOT:
            return 0
        if a == VIRTUAL_ROOT:
            return self.depth(b) + 1
        if b == VIRTUAL_ROOT:
            return self.depth(a) + 1
        self.concept(a), self.concept(b)
        if self._root_of[a] == self._root_of[b]:
            lca = self.lowest_common_ancestor(a, b)
            return self._depth[a] + self._depth[b] - 2 * self._depth[lca]
        return self._depth[a] + self._depth[b] + 2


def load_ontology(data: bytes | str) -> Ontology:
    """Load from the JSON concept-table format and check all invariants."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise OntologyError(f"malformed ontology file: {exc}") from exc
    if not isinstance(raw, list):
        raise OntologyError("ontology file must be an array of concepts")

    concepts: dict[str, Concept] = {}
    sense_owner: dict[str, str] = {}
    for entry in raw:
        cid = entry.get("id")
        if not cid:
            raise OntologyError("concept missing 'id'")
        if cid in concepts:
            raise OntologyError(f"duplicate concept id '{cid}'")
        if cid == VIRTUAL_ROOT:
            raise OntologyError(f"'{VIRTUAL_ROOT}' is reserved")
        for sense in entry.get("map_lex", ()):
            if sense in sense_owner:
                raise OntologyError(
                    f"sense '{sense}' mapped by both '{sense_owner[sense]}' and '{cid}'"
                )
            sense_owner[sense] = cid
        concepts[cid] = Concept(
            id=cid,
            name=entry.get("name", cid),
            parent=entry.get("parent"),
            map_lex=frozenset(entry.get("map_lex", ())),
            is_visual=bool(entry.get("is_visual", False)),
            attribute_kind=entry.get("attribute_kind"),
        )

    for concept in concepts.values():
        if concept.parent is not None and concept.parent not in concepts:
            raise OntologyError(
                f"concept '{concept.id}' has unknown parent '{concept.parent}'"
            )

    # Parent links must form a forest: walking up from any concept terminates.
    for concept in concepts.values():
        seen = [concept.id]
        cur = concept.parent
        while cur is not None:
            if cur in seen:
                cycle = seen[seen.index(cur):] + [cur]
                raise OntologyError(f"cycle in ontology: {' -> '.join(cycle)}")
            seen.append(cur)
            cur = concepts[cur].parent

    ontology = Ontology(concepts)
    if not ontology.roots:
        raise OntologyError("ontology has no root concepts")
    return ontology
