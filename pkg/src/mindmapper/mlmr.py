"""Multilevel meaning representation: recursive summarization and sessions.

The root holds the most abstract MR; every group frame links to either a
child node (already computed) or an unexpanded region. A region is only
summarized further while that actually changes it structurally, the depth
budget allows, and the region is big enough to be worth abstracting.
Sessions walk the tree interactively with a navigation stack.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .dmr import DmrGraph
from .mrsa import DmrRegion, MrsaConfig, SummarizedMr, region_mr, summarize
from .ontology import Ontology


class MlmrError(ValueError):
    pass


@dataclass(frozen=True)
class MlmrConfig:
    mrsa: MrsaConfig = field(default_factory=MrsaConfig)
    max_depth: int = 10
    min_region: int = 4


@dataclass
class MlmrNode:
    mr: DmrGraph
    depth: int
    group_links: dict[str, "MlmrNode | DmrRegion"] = field(default_factory=dict)
    summary: SummarizedMr | None = None
    source_mr: DmrGraph | None = None
    label: str = "root"

    @property
    def group_ids(self) -> set[str]:
        return set(self.group_links)

    @property
    def main_ids(self) -> set[str]:
        return self.summary.main_frames if self.summary else set()

    def is_leaf(self) -> bool:
        return not self.group_links


def _structure_key(mr: DmrGraph, group_count: int) -> tuple:
    return (len(mr.frames), group_count,
            tuple(sorted(Counter(r.kind for r in mr.relations).items())))


def _changed_by_summary(mr: DmrGraph, summary: SummarizedMr) -> bool:
    return _structure_key(mr, 0) != _structure_key(summary.parent, len(summary.group_frames))


def _node_from_summary(mr: DmrGraph, summary: SummarizedMr, depth: int,
                       onto: Ontology, cfg: MlmrConfig, lazy: bool,
                       label: str) -> MlmrNode:
    node = MlmrNode(mr=summary.parent, depth=depth, summary=summary,
                    source_mr=mr, label=label)
    for gid in sorted(summary.regions):
        region = summary.regions[gid]
        if lazy:
            node.group_links[gid] = region
        else:
            node.group_links[gid] = _child_from_region(
                mr, region, depth + 1, onto, cfg, lazy,
                label=summary.parent.frames[gid].surface)
    return node


def _child_from_region(source_mr: DmrGraph, region: DmrRegion, depth: int,
                       onto: Ontology, cfg: MlmrConfig, lazy: bool,
                       label: str) -> MlmrNode:
    child_mr = region_mr(source_mr, region)
    if depth >= cfg.max_depth or len(child_mr.frames) <= cfg.min_region:
        return MlmrNode(mr=child_mr, depth=depth, label=label)
    summary = summarize(child_mr, onto, cfg.mrsa)
    if not _changed_by_summary(child_mr, summary):
        return MlmrNode(mr=child_mr, depth=depth, label=label)
    return _node_from_summary(child_mr, summary, depth, onto, cfg, lazy, label)


def build_mlmr(dmr: DmrGraph, onto: Ontology, cfg: MlmrConfig | None = None,
               lazy: bool = False) -> MlmrNode:
    """Summarize the DMR into the root node; eager builds recurse into every
    region, lazy builds leave regions unexpanded for sessions to materialize."""
    cfg = cfg or MlmrConfig()
    if not dmr.frames:
        raise MlmrError("cannot build an MLMR from an empty DMR")
    summary = summarize(dmr, onto, cfg.mrsa)
    return _node_from_summary(dmr, summary, 0, onto, cfg, lazy, label="root")


def iter_nodes(root: MlmrNode):
    """Depth-first over materialized nodes, yielding (path, node)."""
    stack: list[tuple[tuple[str, ...], MlmrNode]] = [((), root)]
    while stack:
        path, node = stack.pop()
        yield path, node
        for gid in sorted(node.group_links, reverse=True):
            child = node.group_links[gid]
            if isinstance(child, MlmrNode):
                stack.append((path + (gid,), child))


def export_tree(root: MlmrNode) -> dict:
    """Structured export: per-node MR dump plus group links, recursively.

    Unexpanded regions (lazy trees) export as their frame/relation id sets.
    """
    import json as _json

    node_dump = {
        "label": root.label,
        "depth": root.depth,
        "mr": _json.loads(root.mr.to_json()),
        "groups": {},
    }
    for gid in sorted(root.group_links):
        link = root.group_links[gid]
        if isinstance(link, MlmrNode):
            node_dump["groups"][gid] = export_tree(link)
        else:
            node_dump["groups"][gid] = {
                "unexpanded": {
                    "frames": sorted(link.frame_ids),
                    "relations": sorted(link.relation_ids),
                }
            }
    if root.summary is not None:
        node_dump["main_frames"] = sorted(root.summary.main_frames)
    return node_dump


class Session:
    """Single-user interactive walk over an MLMR; lazily materializes children."""

    def __init__(self, root: MlmrNode, onto: Ontology, cfg: MlmrConfig):
        self._onto = onto
        self._cfg = cfg
        self._stack: list[MlmrNode] = [root]

    @property
    def root(self) -> MlmrNode:
        return self._stack[0]

    @property
    def depth(self) -> int:
        return len(self._stack)

    def current(self) -> MlmrNode:
        return self._stack[-1]

    def path(self) -> list[str]:
        """Group-frame ids from the root to the current node."""
        ids = []
        for parent, child in zip(self._stack, self._stack[1:]):
            for gid, link in parent.group_links.items():
                if link is child:
                    ids.append(gid)
                    break
        return ids

    def materialize(self, node: MlmrNode, group_id: str) -> MlmrNode:
        link = node.group_links.get(group_id)
        if link is None:
            raise MlmrError(f"'{group_id}' is not a group frame of the current level")
        if isinstance(link, DmrRegion):
            child = _child_from_region(node.source_mr, link, node.depth + 1,
                                       self._onto, self._cfg, lazy=True,
                                       label=node.mr.frames[group_id].surface)
            node.group_links[group_id] = child
            return child
        return link

    def expand(self, group_id: str) -> DmrGraph:
        child = self.materialize(self.current(), group_id)
        self._stack.append(child)
        return child.mr

    def go_back(self) -> DmrGraph:
        if len(self._stack) < 2:
            raise MlmrError("already at root")
        self._stack.pop()
        return self.current().mr


def open_session(dmr: DmrGraph, onto: Ontology, cfg: MlmrConfig | None = None) -> Session:
    cfg = cfg or MlmrConfig()
    return Session(build_mlmr(dmr, onto, cfg, lazy=True), onto, cfg)
