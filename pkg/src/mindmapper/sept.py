"""SEPT document ingestion: parsing, validation and referent resolution.

A SEPT (semantically enriched parse tree) is one sentence's constituency
tree whose terminals carry a surface token, an optional sense id and an
optional anaphora referent given as a 1-based (statement, word) pair.
Documents arrive as UTF-8 JSON; this module never runs any NLP itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

NOUN_LABELS = frozenset({"NN", "NNS", "NNP", "NNPS"})
PRONOUN_LABELS = frozenset({"PRP", "PRP$"})
NOUN_FAMILY = NOUN_LABELS | PRONOUN_LABELS


class SeptError(ValueError):
    """Base error for SEPT ingestion."""


class SeptParseError(SeptError):
    """Malformed document syntax; carries line/offset when known."""

    def __init__(self, message, line=None, offset=None):
        super().__init__(message)
        self.line = line
        self.offset = offset


class SeptValidationError(SeptError):
    """Well-formed syntax but the document violates an invariant."""


@dataclass(frozen=True)
class SeptNode:
    id: str
    label: str
    children: tuple[str, ...] = ()
    token: str | None = None
    sense: str | None = None
    referent: tuple[int, int] | None = None

    @property
    def is_terminal(self) -> bool:
        return self.token is not None


@dataclass(frozen=True)
class Sept:
    """One statement: a rooted tree of SeptNodes plus its 1-based index."""

    index: int
    root: str
    nodes: dict[str, SeptNode]
    terminal_ids: tuple[str, ...] = field(default=())

    def node(self, node_id: str) -> SeptNode:
        return self.nodes[node_id]


@dataclass(frozen=True)
class SeptDocument:
    septs: tuple[Sept, ...]
    source_text: str | None = None

    def sept(self, statement_index: int) -> Sept:
        try:
            return self.septs[statement_index - 1]
        except IndexError:
            raise SeptValidationError(f"no statement with index {statement_index}")

    def terminal_at(self, statement_index: int, word_index: int) -> SeptNode | None:
        if not 1 <= statement_index <= len(self.septs):
            return None
        sept = self.septs[statement_index - 1]
        if not 1 <= word_index <= len(sept.terminal_ids):
            return None
        return sept.node(sept.terminal_ids[word_index - 1])

    def find_node(self, node_id: str) -> SeptNode | None:
        for sept in self.septs:
            node = sept.nodes.get(node_id)
            if node is not None:
                return node
        return None

    def coordinates_of(self, node_id: str) -> tuple[int, int] | None:
        """(statement, word) of a terminal node id, or None."""
        for sept in self.septs:
            if node_id in sept.nodes:
                try:
                    return sept.index, sept.terminal_ids.index(node_id) + 1
                except ValueError:
                    return None
        return None


def _terminal_order(root: str, nodes: dict[str, SeptNode]) -> tuple[str, ...]:
    order: list[str] = []
    stack = [root]
    while stack:
        node = nodes[stack.pop()]
        if node.is_terminal:
            order.append(node.id)
        else:
            stack.extend(reversed(node.children))
    return tuple(order)


def _build_sept(raw: dict, position: int) -> Sept:
    for key in ("index", "root", "nodes"):
        if key not in raw:
            raise SeptValidationError(f"sept #{position}: missing '{key}'")
    index = raw["index"]
    if index != position:
        raise SeptValidationError(
            f"statement indices must be 1..N contiguous; found {index} at position {position}"
        )
    nodes: dict[str, SeptNode] = {}
    for entry in raw["nodes"]:
        if "id" not in entry or "label" not in entry:
            raise SeptValidationError(f"statement {index}: node missing id/label")
        node_id = entry["id"]
        if node_id in nodes:
            raise SeptValidationError(f"statement {index}: duplicate node id '{node_id}'")
        referent = entry.get("referent")
        if referent is not None:
            if not (isinstance(referent, (list, tuple)) and len(referent) == 2):
                raise SeptValidationError(
                    f"statement {index}: node '{node_id}' referent must be a [statement, word] pair"
                )
            referent = (int(referent[0]), int(referent[1]))
        node = SeptNode(
            id=node_id,
            label=entry["label"],
            children=tuple(entry.get("children", ())),
            token=entry.get("token"),
            sense=entry.get("sense"),
            referent=referent,
        )
        has_children = bool(node.children)
        if has_children == (node.token is not None):
            raise SeptValidationError(
                f"statement {index}: node '{node_id}' must be either internal (children) "
                "or terminal (token), not both or neither"
            )
        if not node.is_terminal and (node.sense is not None or node.referent is not None):
            raise SeptValidationError(
                f"statement {index}: sense/referent only allowed on terminals ('{node_id}')"
            )
        nodes[node_id] = node

    root = raw["root"]
    if root not in nodes:
        raise SeptValidationError(f"statement {index}: root '{root}' not found")

    # Tree shape: every node except the root has exactly one parent, no cycles,
    # and everything is reachable from the root.
    parent_count: dict[str, int] = {nid: 0 for nid in nodes}
    for node in nodes.values():
        for child in node.children:
            if child not in nodes:
                raise SeptValidationError(
                    f"statement {index}: node '{node.id}' references unknown child '{child}'"
                )
            parent_count[child] += 1
            if parent_count[child] > 1:
                raise SeptValidationError(
                    f"statement {index}: node '{child}' has two parents"
                )
    if parent_count[root] != 0:
        raise SeptValidationError(f"statement {index}: root '{root}' has a parent")
    reachable = set()
    stack = [root]
    while stack:
        nid = stack.pop()
        if nid in reachable:
            raise SeptValidationError(f"statement {index}: cycle through '{nid}'")
        reachable.add(nid)
        stack.extend(nodes[nid].children)
    if reachable != set(nodes):
        missing = sorted(set(nodes) - reachable)
        raise SeptValidationError(
            f"statement {index}: nodes not reachable from root: {missing}"
        )

    return Sept(index=index, root=root, nodes=nodes,
                terminal_ids=_terminal_order(root, nodes))


def _validate_referents(doc: SeptDocument) -> None:
    # Referent targets must exist, be in the noun family, and chains must be acyclic.
    links: dict[str, str] = {}
    for sept in doc.septs:
        for word, node_id in enumerate(sept.terminal_ids, start=1):
            node = sept.node(node_id)
            if node.referent is None:
                continue
            target = doc.terminal_at(*node.referent)
            if target is None:
                raise SeptValidationError(
                    f"statement {sept.index} word {word}: dangling referent "
                    f"({node.referent[0]}, {node.referent[1]})"
                )
            if target.label not in NOUN_FAMILY:
                raise SeptValidationError(
                    f"statement {sept.index} word {word}: referent "
                    f"({node.referent[0]}, {node.referent[1]}) points at non-noun "
                    f"'{target.label}'"
                )
            links[node.id] = target.id
    for start in links:
        seen = {start}
        cur = start
        while cur in links:
            cur = links[cur]
            if cur in seen:
                raise SeptValidationError(f"referent cycle through node '{cur}'")
            seen.add(cur)
    # Node ids are document-unique so referent links are unambiguous.
    all_ids: set[str] = set()
    for sept in doc.septs:
        overlap = all_ids & set(sept.nodes)
        if overlap:
            raise SeptValidationError(f"duplicate node id across statements: {sorted(overlap)}")
        all_ids |= set(sept.nodes)


def parse_sept_document(data: bytes | str) -> SeptDocument:
    """Parse and validate a SEPT document from its JSON interchange form."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SeptParseError(
            f"malformed SEPT document: {exc.msg} at line {exc.lineno} column {exc.colno}",
            line=exc.lineno,
            offset=exc.colno,
        ) from exc
    if not isinstance(raw, dict) or "septs" not in raw:
        raise SeptParseError("document must be an object with a 'septs' array")
    septs = tuple(
        _build_sept(entry, position)
        for position, entry in enumerate(raw["septs"], start=1)
    )
    doc = SeptDocument(septs=septs, source_text=raw.get("source_text"))
    _validate_referents(doc)
    return doc


def serialize_sept_document(doc: SeptDocument) -> bytes:
    """Canonical JSON form; parse(serialize(doc)) is structurally equal to doc."""
    payload = {
        "septs": [
            {
                "index": sept.index,
                "root": sept.root,
                "nodes": [
                    _node_dict(sept.nodes[nid])
                    for nid in sorted(sept.nodes)
                ],
            }
            for sept in doc.septs
        ],
    }
    if doc.source_text is not None:
        payload["source_text"] = doc.source_text
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _node_dict(node: SeptNode) -> dict:
    out: dict = {"id": node.id, "label": node.label}
    if node.children:
        out["children"] = list(node.children)
    if node.token is not None:
        out["token"] = node.token
    if node.sense is not None:
        out["sense"] = node.sense
    if node.referent is not None:
        out["referent"] = list(node.referent)
    return out


def resolve_referent(doc: SeptDocument, node: SeptNode) -> SeptNode | None:
    """Follow a node's referent chain to its final noun terminal.

    Returns None when the node has no referent. Chains were proven acyclic at
    parse time; the hop bound is a belt-and-braces guard.
    """
    if node.referent is None:
        return None
    max_hops = sum(len(s.terminal_ids) for s in doc.septs)
    current = node
    for _ in range(max_hops):
        target = doc.terminal_at(*current.referent)
        if target is None:  # unreachable post-validation
            raise SeptValidationError(
                f"dangling referent ({current.referent[0]}, {current.referent[1]})"
            )
        if target.referent is None:
            return target
        current = target
    raise SeptValidationError("referent chain exceeded terminal count")
