"""Detailed meaning representation: frames, relations, and SEPT-to-graph rules.

The graph holds entity frames (nouns) and action frames (verbs) connected by
case-role relations (entity -> action), and domain/temporal relations
(action -> action). Generation walks each statement tree and dispatches on
grammar labels through a rule table; anaphors link to existing frames and
never create new ones.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .ontology import Ontology
from .sept import SeptDocument, SeptNode, NOUN_LABELS, resolve_referent

KIND_CASE_ROLE = "case_role"
KIND_DOMAIN = "domain"
KIND_TEMPORAL = "temporal"

CASE_ROLE_SUBTYPES = ("Agent", "Theme", "Location", "Time", "Instrument", "Possession")
DOMAIN_SUBTYPES = ("Reason", "Result", "Condition", "Conjunction")
TEMPORAL_SUBTYPES = ("Before", "After", "Simultaneous")

_SUBTYPES_BY_KIND = {
    KIND_CASE_ROLE: CASE_ROLE_SUBTYPES,
    KIND_DOMAIN: DOMAIN_SUBTYPES,
    KIND_TEMPORAL: TEMPORAL_SUBTYPES,
}

BE_TOKENS = frozenset({"be", "is", "am", "are", "was", "were", "been", "being"})


class DmrError(ValueError):
    pass


@dataclass
class EntityFrame:
    id: str
    surface: str
    sense: str | None = None
    concept: str | None = None
    attributes: list[tuple[str, str]] = field(default_factory=list)

    kind = "entity"


@dataclass
class ActionFrame:
    id: str
    surface: str
    sense: str | None = None
    concept: str | None = None

    kind = "action"


Frame = EntityFrame | ActionFrame


@dataclass(frozen=True)
class Relation:
    id: str
    kind: str
    subtype: str
    source: str
    target: str


@dataclass
class DmrGraph:
    frames: dict[str, Frame] = field(default_factory=dict)
    relations: list[Relation] = field(default_factory=list)
    diagnostics: list[str] = field(default_factory=list)

    def entity_ids(self) -> list[str]:
        return [fid for fid, f in self.frames.items() if f.kind == "entity"]

    def action_ids(self) -> list[str]:
        return [fid for fid, f in self.frames.items() if f.kind == "action"]

    def relations_of(self, frame_id: str) -> list[Relation]:
        return [r for r in self.relations if frame_id in (r.source, r.target)]

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {fid: set() for fid in self.frames}
        for rel in self.relations:
            adj[rel.source].add(rel.target)
            adj[rel.target].add(rel.source)
        return adj

    def connected_components(self) -> list[set[str]]:
        adj = self.adjacency()
        seen: set[str] = set()
        components = []
        for fid in self.frames:
            if fid in seen:
                continue
            comp = set()
            stack = [fid]
            while stack:
                cur = stack.pop()
                if cur in comp:
                    continue
                comp.add(cur)
                stack.extend(adj[cur] - comp)
            seen |= comp
            components.append(comp)
        return components

    def validate(self) -> None:
        """Exhaustive endpoint/kind constraint check."""
        for rel in self.relations:
            src = self.frames.get(rel.source)
            dst = self.frames.get(rel.target)
            if src is None or dst is None:
                raise DmrError(f"relation {rel.id} references a missing frame")
            if rel.subtype not in _SUBTYPES_BY_KIND.get(rel.kind, ()):
                raise DmrError(f"relation {rel.id}: unknown {rel.kind} subtype '{rel.subtype}'")
            if rel.kind == KIND_CASE_ROLE:
                if not (src.kind == "entity" and dst.kind == "action"):
                    raise DmrError(
                        f"case-role {rel.id} must connect entity -> action "
                        f"(got {src.kind} -> {dst.kind})"
                    )
            else:
                if not (src.kind == "action" and dst.kind == "action"):
                    raise DmrError(
                        f"{rel.kind} relation {rel.id} must connect two actions"
                    )

    def to_json(self) -> str:
        """Stable export used by golden tests: frames then relations, ordered."""
        frames = []
        for fid in sorted(self.frames):
            f = self.frames[fid]
            entry = {"id": f.id, "kind": f.kind, "surface": f.surface,
                     "sense": f.sense, "concept": f.concept}
            if f.kind == "entity":
                entry["attributes"] = [list(a) for a in f.attributes]
            frames.append(entry)
        relations = [
            {"id": r.id, "kind": r.kind, "subtype": r.subtype,
             "source": r.source, "target": r.target}
            for r in sorted(self.relations, key=lambda r: (r.kind, r.subtype, r.source, r.target, r.id))
        ]
        return json.dumps({"frames": frames, "relations": relations},
                          sort_keys=True, indent=1)

    def triples(self) -> set[tuple[str, str, str]]:
        """(kind:subtype, from-surface, to-surface) set, for golden comparisons."""
        return {
            (f"{r.kind}:{r.subtype}",
             self.frames[r.source].surface,
             self.frames[r.target].surface)
            for r in self.relations
        }


@dataclass(frozen=True)
class HandlerConfig:
    """Tunables for the builtin rule set; the subtype inventory stays configurable."""

    place_concept_names: frozenset[str] = frozenset({"Place", "Location"})
    time_concept_names: frozenset[str] = frozenset({"Time", "Date"})
    fallback_pp_subtype: str = "Location"
    instrument_preps: frozenset[str] = frozenset({"with", "by"})
    possession_preps: frozenset[str] = frozenset({"of"})
    location_preps: frozenset[str] = frozenset({"in", "at", "on"})
    connectors: tuple[tuple[str, str, str], ...] = (
        ("because", KIND_DOMAIN, "Reason"),
        ("so that", KIND_DOMAIN, "Result"),
        ("so", KIND_DOMAIN, "Result"),
        ("if", KIND_DOMAIN, "Condition"),
        ("and", KIND_DOMAIN, "Conjunction"),
        ("before", KIND_TEMPORAL, "Before"),
        ("after", KIND_TEMPORAL, "After"),
        ("while", KIND_TEMPORAL, "Simultaneous"),
    )

    def connector(self, token: str) -> tuple[str, str] | None:
        token = token.lower()
        for word, kind, subtype in self.connectors:
            if token == word:
                return kind, subtype
        return None


class RuleTable:
    """Maps grammar-pattern keys (node labels) to handler callables."""

    def __init__(self, handlers: dict | None = None):
        self._handlers: dict = dict(handlers or {})

    def register(self, key: str, handler) -> None:
        if key in self._handlers:
            raise DmrError(f"duplicate rule key '{key}'")
        self._handlers[key] = handler

    def lookup(self, key: str):
        return self._handlers.get(key)

    def keys(self) -> list[str]:
        return sorted(self._handlers)


def sense_lemma(sense: str | None, fallback: str) -> str:
    """Display lemma: the text before '%' in a WordNet-style sense key."""
    if sense and "%" in sense:
        head = sense.split("%", 1)[0]
        if head:
            return head
    return fallback


class DmrBuilder:
    """Accumulates frames and relations while statements are traversed.

    Shared across statements so anaphora links and (surface, sense) merging
    see earlier frames.
    """

    def __init__(self, doc: SeptDocument, onto: Ontology, rules: RuleTable,
                 cfg: HandlerConfig):
        self.doc = doc
        self.onto = onto
        self.rules = rules
        self.cfg = cfg
        self.graph = DmrGraph()
        self.sept = None
        self._entity_by_key: dict[tuple[str, str | None], str] = {}
        self._frame_of_terminal: dict[str, str] = {}
        self._rel_counter = 0

    # -- frame creation -------------------------------------------------

    def _frame_id(self, prefix: str, terminal: SeptNode) -> str:
        coords = self.doc.coordinates_of(terminal.id)
        if coords is None:
            raise DmrError(f"terminal '{terminal.id}' has no coordinates")
        return f"{prefix}{coords[0]}_{coords[1]}"

    def entity_for_terminal(self, terminal: SeptNode,
                            attributes: list[tuple[str, str]] | None = None) -> EntityFrame:
        """Create or merge an entity frame for a noun terminal."""
        surface = terminal.token
        key = (surface, terminal.sense)
        if key in self._entity_by_key:
            frame = self.graph.frames[self._entity_by_key[key]]
            for attr in attributes or []:
                if attr not in frame.attributes:
                    frame.attributes.append(attr)
        else:
            frame = EntityFrame(
                id=self._frame_id("e", terminal),
                surface=surface,
                sense=terminal.sense,
                concept=self.onto.concept_of_sense(terminal.sense) if terminal.sense else None,
                attributes=list(attributes or []),
            )
            self.graph.frames[frame.id] = frame
            self._entity_by_key[key] = frame.id
        self._frame_of_terminal[terminal.id] = frame.id
        return frame

    def new_action(self, terminal: SeptNode, surface: str) -> ActionFrame:
        frame = ActionFrame(
            id=self._frame_id("a", terminal),
            surface=surface,
            sense=terminal.sense,
            concept=self.onto.concept_of_sense(terminal.sense) if terminal.sense else None,
        )
        self.graph.frames[frame.id] = frame
        self._frame_of_terminal[terminal.id] = frame.id
        return frame

    def relate(self, kind: str, subtype: str, source: Frame, target: Frame) -> None:
        self._rel_counter += 1
        self.graph.relations.append(
            Relation(id=f"r{self._rel_counter}", kind=kind, subtype=subtype,
                     source=source.id, target=target.id)
        )

    def diag(self, message: str) -> None:
        self.graph.diagnostics.append(message)

    # -- tree helpers ----------------------------------------------------

    def node(self, node_id: str) -> SeptNode:
        return self.sept.nodes[node_id]

    def children(self, node: SeptNode) -> list[SeptNode]:
        return [self.node(cid) for cid in node.children]


def fill_frames_and_relations(node: SeptNode, acc: DmrBuilder):
    """Dispatch on the node's grammar key; recurse when no rule matches.

    A handler consumes the whole subtree. Handler failure skips the subtree
    and records a diagnostic rather than aborting the document.
    """
    handler = acc.rules.lookup(node.label)
    if handler is not None:
        try:
            handler(node, acc)
        except Exception as exc:  # noqa: BLE001 - malformed subtree is data, not a bug
            acc.diag(f"statement {acc.sept.index}: subtree '{node.id}' skipped ({exc})")
        return acc
    for child in acc.children(node):
        fill_frames_and_relations(child, acc)
    return acc


# -- builtin handlers ----------------------------------------------------


def _resolve_pronoun(node: SeptNode, acc: DmrBuilder) -> EntityFrame:
    """Anaphor: link to the referent's frame; only dangling pronouns stand alone."""
    target = resolve_referent(acc.doc, node)
    if target is not None:
        existing = acc._frame_of_terminal.get(target.id)
        if existing is not None:
            frame = acc.graph.frames[existing]
            acc._frame_of_terminal[node.id] = frame.id
            return frame
        return acc.entity_for_terminal(target)
    return acc.entity_for_terminal(node)


def _entity_from_np(np_node: SeptNode, acc: DmrBuilder):
    """Build (entity frame, possessor frames) from an NP subtree."""
    terminals = [acc.node(cid) for cid in np_node.children]
    possessors: list[EntityFrame] = []
    head = None
    attributes: list[tuple[str, str]] = []
    pronoun = None
    for t in terminals:
        if not t.is_terminal:
            continue
        if t.label in NOUN_LABELS:
            head = t
        elif t.label == "PRP":
            pronoun = t
        elif t.label == "PRP$":
            if t.referent is not None:
                possessors.append(_resolve_pronoun(t, acc))
        elif t.label == "JJ":
            kind = acc.onto.attribute_kind_of_sense(t.sense) if t.sense else None
            attributes.append((kind or "other", t.token.lower()))
    if head is not None:
        frame = acc.entity_for_terminal(head, attributes)
        return frame, possessors
    if pronoun is not None:
        return _resolve_pronoun(pronoun, acc), possessors
    return None, possessors


def _handle_np(node: SeptNode, acc: DmrBuilder):
    frame, _ = _entity_from_np(node, acc)
    if frame is None:
        acc.diag(f"statement {acc.sept.index}: NP '{node.id}' has no head noun")
    return frame


def _handle_pp(pp_node: SeptNode, action: ActionFrame, acc: DmrBuilder) -> None:
    cfg = acc.cfg
    prep = None
    entity = None
    for child in acc.children(pp_node):
        if child.is_terminal and child.label == "IN":
            prep = child.token.lower()
        elif child.label == "NP":
            entity, _ = _entity_from_np(child, acc)
    if entity is None:
        return
    if entity.concept and acc.onto.has_ancestor_named(entity.concept, cfg.time_concept_names):
        subtype = "Time"
    elif prep in cfg.location_preps and entity.concept and \
            acc.onto.has_ancestor_named(entity.concept, cfg.place_concept_names):
        subtype = "Location"
    elif prep in cfg.instrument_preps:
        subtype = "Instrument"
    elif prep in cfg.possession_preps:
        subtype = "Possession"
    else:
        subtype = cfg.fallback_pp_subtype
    acc.relate(KIND_CASE_ROLE, subtype, entity, action)


def _handle_vp(vp_node: SeptNode, acc: DmrBuilder,
               subject: EntityFrame | None = None,
               possessors: list[EntityFrame] | None = None) -> ActionFrame | None:
    kids = acc.children(vp_node)
    # Last VB* terminal is the head: auxiliaries precede the main verb
    # ("was born", "has written"); a lone copula is its own head.
    verbs = [k for k in kids if k.is_terminal and k.label.startswith("VB")]
    verb = verbs[-1] if verbs else None
    if verb is None:
        acc.diag(f"statement {acc.sept.index}: VP '{vp_node.id}' has no verb")
        return None
    object_nps = [k for k in kids if k.label == "NP"]
    pps = [k for k in kids if k.label == "PP"]
    predicate_jj = next((k for k in kids if k.is_terminal and k.label == "JJ"), None)

    lemma = sense_lemma(verb.sense, verb.token.lower())
    # Copulas carry the predicate adjective as a surface qualifier: "be(hungry)".
    if verb.token.lower() in BE_TOKENS and predicate_jj is not None and not object_nps:
        surface = f"{lemma}({predicate_jj.token.lower()})"
    else:
        surface = lemma
    action = acc.new_action(verb, surface)

    if subject is not None:
        acc.relate(KIND_CASE_ROLE, "Agent", subject, action)
    for possessor in possessors or []:
        acc.relate(KIND_CASE_ROLE, "Possession", possessor, action)
    for np in object_nps:
        obj, obj_poss = _entity_from_np(np, acc)
        if obj is not None:
            acc.relate(KIND_CASE_ROLE, "Theme", obj, action)
        for possessor in obj_poss:
            acc.relate(KIND_CASE_ROLE, "Possession", possessor, action)
    for pp in pps:
        _handle_pp(pp, action, acc)
    return action


def _handle_sentence(node: SeptNode, acc: DmrBuilder) -> ActionFrame | None:
    kids = acc.children(node)

    # Compound: clause + connector + clause, e.g. "DS because DS".
    if len(kids) == 3 and kids[1].is_terminal and \
            kids[0].label in ("S", "DS") and kids[2].label in ("S", "DS"):
        mapping = acc.cfg.connector(kids[1].token)
        if mapping is not None:
            kind, subtype = mapping
            first = _handle_sentence(kids[0], acc)
            second = _handle_sentence(kids[2], acc)
            if first is not None and second is not None:
                acc.relate(kind, subtype, first, second)
            return first

    np = next((k for k in kids if k.label == "NP"), None)
    vp = next((k for k in kids if k.label == "VP"), None)
    if vp is not None:
        subject, possessors = (None, [])
        if np is not None:
            subject, possessors = _entity_from_np(np, acc)
        return _handle_vp(vp, acc, subject, possessors)

    for child in kids:
        fill_frames_and_relations(child, acc)
    return None


def _handle_bare_vp(node: SeptNode, acc: DmrBuilder):
    return _handle_vp(node, acc)


def builtin_handlers(cfg: HandlerConfig | None = None) -> RuleTable:
    """The default rule set: clauses, NPs, VPs, PPs via the clause handlers."""
    table = RuleTable()
    table.register("S", _handle_sentence)
    table.register("DS", _handle_sentence)
    table.register("NP", _handle_np)
    table.register("VP", _handle_bare_vp)
    return table


def generate_dmr(doc: SeptDocument, onto: Ontology,
                 rules: RuleTable | None = None,
                 handler_cfg: HandlerConfig | None = None) -> DmrGraph:
    """Convert a validated document into its meaning graph.

    Statements that match no rule contribute nothing and leave a diagnostic;
    same-surface same-sense nouns merge into one frame; anaphors link.
    """
    cfg = handler_cfg or HandlerConfig()
    acc = DmrBuilder(doc, onto, rules or builtin_handlers(cfg), cfg)
    for sept in doc.septs:
        acc.sept = sept
        frames_before = len(acc.graph.frames)
        rels_before = len(acc.graph.relations)
        fill_frames_and_relations(sept.node(sept.root), acc)
        if len(acc.graph.frames) == frames_before and len(acc.graph.relations) == rels_before:
            acc.diag(f"statement {sept.index} ignored: no matching rules")
    acc.graph.validate()
    components = acc.graph.connected_components()
    if len(components) > 1:
        acc.diag(f"graph has {len(components)} connected components; keeping all")
    return acc.graph
