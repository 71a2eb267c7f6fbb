"""Meaning-representation summarization.

Three phases: weight assignment (entity weights from incident relation
constants, action weights from neighbor weights via a fixed-point iteration),
weight-based partitioning (1-D k-means++ with Ray-Turi validity to pick K,
highest-center cluster = main frames), and concept-based partitioning
(agglomerative merging over ontology distance down to a group threshold).
The result is a parent MR whose group frames point at regions of the input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType

import numpy as np

from .dmr import (
    ActionFrame,
    DmrGraph,
    EntityFrame,
    Frame,
    KIND_CASE_ROLE,
    Relation,
)
from .ontology import Ontology


class MrsaError(ValueError):
    pass


_DEFAULT_CASE_ROLE = MappingProxyType({
    "Agent": 10.0, "Theme": 8.0, "Possession": 6.0,
    "Instrument": 5.0, "Location": 5.0, "Time": 4.0,
})
_DEFAULT_DOMAIN = MappingProxyType({
    "Reason": 7.0, "Result": 7.0, "Condition": 6.0, "Conjunction": 4.0,
})
_DEFAULT_TEMPORAL = MappingProxyType({
    "Before": 3.0, "After": 3.0, "Simultaneous": 3.0,
})


def _ratios(weights) -> dict[str, float]:
    return {k: v / 10.0 for k, v in weights.items()}


@dataclass(frozen=True)
class WeightConfig:
    """Per-subtype relation constants (entity weighting) and ratios (action weighting)."""

    case_role: dict = field(default_factory=lambda: dict(_DEFAULT_CASE_ROLE))
    domain: dict = field(default_factory=lambda: dict(_DEFAULT_DOMAIN))
    temporal: dict = field(default_factory=lambda: dict(_DEFAULT_TEMPORAL))
    case_role_ratio: dict | None = None
    domain_ratio: dict | None = None
    temporal_ratio: dict | None = None
    tolerance: float = 1e-6
    max_iterations: int = 100

    def __post_init__(self):
        for name, table in (("case_role", self.case_role), ("domain", self.domain),
                            ("temporal", self.temporal)):
            for subtype, value in table.items():
                if value <= 0:
                    raise MrsaError(f"{name} weight for '{subtype}' must be > 0")
        if self.tolerance <= 0:
            raise MrsaError("tolerance must be > 0")

    def weight(self, kind: str, subtype: str) -> float:
        table = {"case_role": self.case_role, "domain": self.domain,
                 "temporal": self.temporal}[kind]
        return table[subtype]

    def ratio(self, kind: str, subtype: str) -> float:
        explicit = {"case_role": self.case_role_ratio, "domain": self.domain_ratio,
                    "temporal": self.temporal_ratio}[kind]
        if explicit is not None and subtype in explicit:
            return explicit[subtype]
        return _ratios({"case_role": self.case_role, "domain": self.domain,
                        "temporal": self.temporal}[kind])[subtype]

    def scaled(self, factor: float) -> "WeightConfig":
        return replace(
            self,
            case_role={k: v * factor for k, v in self.case_role.items()},
            domain={k: v * factor for k, v in self.domain.items()},
            temporal={k: v * factor for k, v in self.temporal.items()},
        )


@dataclass(frozen=True)
class MrsaConfig:
    weights: WeightConfig = field(default_factory=WeightConfig)
    g_th: int = 6
    kmeans_seeds: int = 10
    max_k: int = 6
    seed: int = 0


# -- weight assignment -----------------------------------------------------


def assign_entity_weights(mr: DmrGraph, cfg: WeightConfig) -> dict[str, float]:
    """Entity weight = sum of the constants of its incident relations."""
    weights = {fid: 0.0 for fid in mr.entity_ids()}
    for rel in mr.relations:
        w = cfg.weight(rel.kind, rel.subtype)
        for endpoint in (rel.source, rel.target):
            if endpoint in weights:
                weights[endpoint] += w
    return weights


def assign_action_weights(mr: DmrGraph, entity_weights: dict[str, float],
                          cfg: WeightConfig) -> dict[str, float]:
    """Action weight = ratio-weighted sum of neighbor weights.

    Entity neighbors contribute their fixed weights; action neighbors couple
    the system, solved by fixed-point iteration from zero until the largest
    change drops below the tolerance (or the iteration budget runs out, in
    which case the last iterate is returned with a diagnostic).
    """
    actions = mr.action_ids()
    fixed = {aid: 0.0 for aid in actions}
    coupling: dict[str, list[tuple[float, str]]] = {aid: [] for aid in actions}
    for rel in mr.relations:
        ratio = cfg.ratio(rel.kind, rel.subtype)
        for this, other in ((rel.source, rel.target), (rel.target, rel.source)):
            if this not in fixed:
                continue
            if other in entity_weights:
                fixed[this] += ratio * entity_weights[other]
            else:
                coupling[this].append((ratio, other))

    weights = {aid: 0.0 for aid in actions}
    if not any(coupling.values()):
        return {aid: fixed[aid] for aid in actions}
    for _ in range(cfg.max_iterations):
        delta = 0.0
        new_weights = {}
        for aid in actions:
            value = fixed[aid] + sum(r * weights[other] for r, other in coupling[aid])
            delta = max(delta, abs(value - weights[aid]))
            new_weights[aid] = value
        weights = new_weights
        if delta < cfg.tolerance:
            return weights
    mr.diagnostics.append(
        f"action weights did not converge within {cfg.max_iterations} iterations "
        f"(last delta {delta:.3g})"
    )
    return weights


# -- weight-based partitioning ----------------------------------------------


def _kmeanspp_seed(values: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(values)
    centers = [values[rng.integers(n)]]
    for _ in range(1, k):
        d2 = np.min((values[:, None] - np.asarray(centers)[None, :]) ** 2, axis=1)
        total = d2.sum()
        if total <= 0.0:
            centers.append(values[rng.integers(n)])
            continue
        centers.append(values[rng.choice(n, p=d2 / total)])
    return np.asarray(centers, dtype=float)


def cluster_1d(values, k: int, seed: int) -> tuple[list[int], list[float]]:
    """K-means++ seeding then Lloyd iterations on 1-D values.

    Ties assign to the lower-indexed center; an emptied cluster is re-seeded
    at the point farthest from its nearest center. Returns (labels, centers).
    """
    values = list(values)
    if k < 1 or k > len(values):
        raise MrsaError(f"k={k} out of range for {len(values)} values")
    x = np.asarray(values, dtype=float)
    rng = np.random.default_rng(seed)
    centers = _kmeanspp_seed(x, k, rng)

    labels = np.zeros(len(x), dtype=int)
    for _ in range(200):
        d2 = (x[:, None] - centers[None, :]) ** 2
        new_labels = np.argmin(d2, axis=1)  # argmin takes the first (lowest-index) minimum
        reseeded = False
        for c in range(k):
            members = x[new_labels == c]
            if len(members) == 0:
                nearest = np.min(d2, axis=1)
                far = int(np.argmax(nearest))
                centers[c] = x[far]
                reseeded = True
            else:
                centers[c] = members.mean()
        if not reseeded and np.array_equal(new_labels, labels):
            labels = new_labels
            break
        labels = new_labels
    return labels.tolist(), centers.tolist()


def kmeans_cost(values, labels, centers) -> float:
    return float(sum((v - centers[l]) ** 2 for v, l in zip(values, labels)))


def ray_turi(values, labels, centers) -> tuple[float, float]:
    """(intra, inter): mean within-cluster squared distance and the minimum
    squared gap between distinct nonempty cluster centers."""
    intra = kmeans_cost(values, labels, centers) / len(values)
    used = sorted({l for l in labels})
    inter = math.inf
    for i, a in enumerate(used):
        for b in used[i + 1:]:
            inter = min(inter, (centers[a] - centers[b]) ** 2)
    return intra, inter


def select_main_frames(entity_weights: dict[str, float],
                       cfg: MrsaConfig | None = None,
                       return_k: bool = False):
    """Pick the main entity frames: cluster the 1-D weights with the best K
    per Ray-Turi validity (minimum intra/inter), keep the highest-center
    cluster. With return_k the chosen cluster count comes back too."""
    cfg = cfg or MrsaConfig()
    if not entity_weights:
        raise MrsaError("select_main_frames needs at least one entity frame")
    ids = sorted(entity_weights)
    values = [entity_weights[fid] for fid in ids]
    n = len(values)
    if n == 1:
        return ({ids[0]}, 1) if return_k else {ids[0]}
    distinct = len(set(values))
    if distinct == 1:
        return (set(ids), 1) if return_k else set(ids)

    best_ratio = math.inf
    best = None
    best_k = 1
    for k in range(2, min(cfg.max_k, n, distinct) + 1):
        chosen = None
        chosen_cost = math.inf
        for attempt in range(cfg.kmeans_seeds):
            seed = cfg.seed + 7919 * k + attempt
            labels, centers = cluster_1d(values, k, seed)
            cost = kmeans_cost(values, labels, centers)
            if cost < chosen_cost:
                chosen_cost = cost
                chosen = (labels, centers)
        labels, centers = chosen
        intra, inter = ray_turi(values, labels, centers)
        if not math.isfinite(inter) or inter <= 0.0:
            continue
        ratio = intra / inter
        if ratio < best_ratio:
            best_ratio = ratio
            best = (labels, centers)
            best_k = k
    if best is None:
        return (set(ids), 1) if return_k else set(ids)
    labels, centers = best
    used = sorted({l for l in labels})
    top = max(used, key=lambda c: centers[c])
    mains = {fid for fid, label in zip(ids, labels) if label == top}
    return (mains, best_k) if return_k else mains


# -- concept-based partitioning ----------------------------------------------


def _closest_concept_pair(onto: Ontology, concepts_a, concepts_b):
    """Single-linkage distance between two concept sets plus the witness pair."""
    best_dist = math.inf
    witness = None
    for ca in concepts_a:
        for cb in concepts_b:
            dist = onto.concept_distance(ca, cb)
            pair = (ca, cb) if ca <= cb else (cb, ca)
            if dist < best_dist or (dist == best_dist and pair < witness):
                best_dist = dist
                witness = pair
    return best_dist, witness


def concept_partition(frames, onto: Ontology, g_th: int = 6) -> list[tuple[str | None, list[str]]]:
    """Agglomerative grouping of frames by ontology concept.

    Step 1 merges frames of the exact same concept; then the two groups whose
    member concepts are closest in the ontology (single linkage) merge
    repeatedly until the group count reaches g_th. Frames without a concept
    stay singletons. Ties break on the lexicographically smallest sorted
    (concept id, concept id) witness pair, then on the groups' smallest
    member frame ids. Multi-member groups are labeled by the LCA of their
    members' concepts.
    """
    entries = sorted(((f.id, f.concept) for f in frames), key=lambda e: e[0])
    groups: list[dict] = []
    by_concept: dict[str, int] = {}
    for fid, concept in entries:
        if concept is not None and concept in by_concept:
            groups[by_concept[concept]]["members"].append(fid)
        else:
            groups.append({"members": [fid],
                           "concepts": [concept] if concept is not None else []})
            if concept is not None:
                by_concept[concept] = len(groups) - 1

    while len(groups) > g_th:
        best = None
        for i in range(len(groups)):
            if not groups[i]["concepts"]:
                continue
            for j in range(i + 1, len(groups)):
                if not groups[j]["concepts"]:
                    continue
                dist, witness = _closest_concept_pair(
                    onto, groups[i]["concepts"], groups[j]["concepts"])
                members = tuple(sorted((min(groups[i]["members"]), min(groups[j]["members"]))))
                key = (dist, witness, members)
                if best is None or key < best[0]:
                    best = (key, i, j)
        if best is None:
            break
        _, i, j = best
        merged = {
            "members": sorted(groups[i]["members"] + groups[j]["members"]),
            "concepts": sorted(set(groups[i]["concepts"]) | set(groups[j]["concepts"])),
        }
        groups = [g for idx, g in enumerate(groups) if idx not in (i, j)]
        groups.append(merged)

    result = []
    for g in groups:
        label = onto.lca_of_set(g["concepts"]) if g["concepts"] else None
        result.append((label, sorted(g["members"])))
    result.sort(key=lambda item: item[1][0])
    return result


# -- summarization ------------------------------------------------------------


@dataclass(frozen=True)
class DmrRegion:
    """The subset of the source MR a group frame abstracts."""

    frame_ids: frozenset[str]
    relation_ids: frozenset[str]


@dataclass
class SummarizedMr:
    parent: DmrGraph
    group_frames: set[str]
    regions: dict[str, DmrRegion]
    main_frames: set[str]


def region_mr(source: DmrGraph, region: DmrRegion) -> DmrGraph:
    """Child MR induced on exactly the region's frames."""
    frames = {fid: source.frames[fid] for fid in sorted(region.frame_ids)}
    relations = [r for r in source.relations
                 if r.id in region.relation_ids
                 and r.source in region.frame_ids and r.target in region.frame_ids]
    return DmrGraph(frames=frames, relations=relations)


def _bfs_distances(adj: dict[str, set[str]], start: str) -> dict[str, int]:
    dist = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for nb in adj[node]:
                if nb not in dist:
                    dist[nb] = dist[node] + 1
                    nxt.append(nb)
        frontier = nxt
    return dist


def summarize(mr: DmrGraph, onto: Ontology, cfg: MrsaConfig | None = None) -> SummarizedMr:
    """Build the parent MR: main entity frames kept, surrounding actions
    concept-grouped into new action frames, pass-through actions keeping their
    (grouped) entities, every group frame linked to its source region."""
    cfg = cfg or MrsaConfig()
    if not mr.frames:
        raise MrsaError("cannot summarize an empty meaning representation")

    entity_weights = assign_entity_weights(mr, cfg.weights)
    action_weights = assign_action_weights(mr, entity_weights, cfg.weights)
    if not entity_weights:
        parent = DmrGraph(frames=dict(mr.frames), relations=list(mr.relations))
        return SummarizedMr(parent=parent, group_frames=set(), regions={}, main_frames=set())

    mains = select_main_frames(entity_weights, cfg)
    adj = mr.adjacency()

    # Anchor every action to one main frame: adjacent main with the highest
    # weight, else nearest main by hops; unreachable actions pass through.
    anchor: dict[str, str | None] = {}
    bfs_from_main = {m: _bfs_distances(adj, m) for m in sorted(mains)}
    for aid in sorted(mr.action_ids()):
        adjacent = [m for m in mains if m in adj[aid]]
        if adjacent:
            anchor[aid] = max(adjacent, key=lambda m: (entity_weights[m], m))
            continue
        reachable = [(bfs_from_main[m][aid], -entity_weights[m], m)
                     for m in bfs_from_main if aid in bfs_from_main[m]]
        anchor[aid] = min(reachable)[2] if reachable else None

    # Per main frame, concept-partition its anchored actions.
    action_groups: list[dict] = []   # {main, label, members}
    grouped_action: dict[str, int] = {}
    passthrough_actions: set[str] = set()
    for m in sorted(mains):
        anchored = [mr.frames[aid] for aid in sorted(anchor) if anchor[aid] == m]
        if not anchored:
            continue
        for label, members in concept_partition(anchored, onto, cfg.g_th):
            if len(members) > 1:
                idx = len(action_groups)
                action_groups.append({"main": m, "label": label, "members": members})
                for aid in members:
                    grouped_action[aid] = idx
            else:
                passthrough_actions.add(members[0])
    passthrough_actions |= {aid for aid, m in anchor.items() if m is None}

    # Assign non-main entities: into an adjacent action group's region when
    # possible, else to their strongest pass-through action for entity grouping.
    entity_assignment: dict[str, tuple[str, object]] = {}
    for eid in sorted(mr.entity_ids()):
        if eid in mains:
            continue
        adjacent_actions = sorted(a for a in adj[eid] if a in anchor)
        grouped = [a for a in adjacent_actions if a in grouped_action]
        passthru = [a for a in adjacent_actions if a in passthrough_actions]
        if grouped:
            pick = max(grouped, key=lambda a: (action_weights.get(a, 0.0), a))
            entity_assignment[eid] = ("group", grouped_action[pick])
        elif passthru:
            pick = max(passthru, key=lambda a: (action_weights.get(a, 0.0), a))
            entity_assignment[eid] = ("action", pick)
        else:
            entity_assignment[eid] = ("passthrough", None)

    # Group the entities around each pass-through action.
    entity_groups: list[dict] = []   # {action, label, members}
    grouped_entity: dict[str, int] = {}
    passthrough_entities: set[str] = set()
    for aid in sorted(passthrough_actions):
        assigned = [mr.frames[eid] for eid, (where, ref) in sorted(entity_assignment.items())
                    if where == "action" and ref == aid]
        if not assigned:
            continue
        for label, members in concept_partition(assigned, onto, cfg.g_th):
            if len(members) > 1:
                idx = len(entity_groups)
                entity_groups.append({"action": aid, "label": label, "members": members})
                for eid in members:
                    grouped_entity[eid] = idx
            else:
                passthrough_entities.add(members[0])
    passthrough_entities |= {eid for eid, (where, _) in entity_assignment.items()
                             if where == "passthrough"}

    # Materialize group frames with deterministic ids and concept-name surfaces.
    parent = DmrGraph()
    group_ids: set[str] = set()
    regions: dict[str, DmrRegion] = {}
    mapping: dict[str, str] = {}

    for m in sorted(mains):
        parent.frames[m] = mr.frames[m]
        mapping[m] = m
    for aid in sorted(passthrough_actions):
        parent.frames[aid] = mr.frames[aid]
        mapping[aid] = aid
    for eid in sorted(passthrough_entities):
        parent.frames[eid] = mr.frames[eid]
        mapping[eid] = eid

    counter = 0
    region_frames: dict[str, set[str]] = {}
    for group in sorted(action_groups, key=lambda g: g["members"][0]):
        counter += 1
        gid = f"g{counter}_{group['label'] or 'misc'}"
        label = group["label"]
        frame = ActionFrame(id=gid, surface=onto.display_name(label) if label else "group",
                            sense=None, concept=label)
        parent.frames[gid] = frame
        group_ids.add(gid)
        members = set(group["members"])
        members |= {eid for eid, (where, ref) in entity_assignment.items()
                    if where == "group" and action_groups[ref] is group}
        region_frames[gid] = members
        for fid in members:
            mapping[fid] = gid
    for group in sorted(entity_groups, key=lambda g: g["members"][0]):
        counter += 1
        gid = f"g{counter}_{group['label'] or 'misc'}"
        label = group["label"]
        frame = EntityFrame(id=gid, surface=onto.display_name(label) if label else "group",
                            sense=None, concept=label)
        parent.frames[gid] = frame
        group_ids.add(gid)
        region_frames[gid] = set(group["members"])
        for fid in group["members"]:
            mapping[fid] = gid

    # Parent relations: remap endpoints, drop self-loops and kind violations,
    # dedupe identical mapped edges.
    seen: set[tuple[str, str, str, str]] = set()
    rel_counter = 0
    for rel in mr.relations:
        src = mapping[rel.source]
        dst = mapping[rel.target]
        if src == dst:
            continue
        src_kind = parent.frames[src].kind
        dst_kind = parent.frames[dst].kind
        if rel.kind == KIND_CASE_ROLE:
            if not (src_kind == "entity" and dst_kind == "action"):
                continue
        else:
            if not (src_kind == "action" and dst_kind == "action"):
                continue
        key = (rel.kind, rel.subtype, src, dst)
        if key in seen:
            continue
        seen.add(key)
        rel_counter += 1
        parent.relations.append(Relation(id=f"pr{rel_counter}", kind=rel.kind,
                                         subtype=rel.subtype, source=src, target=dst))

    # Regions: member frames plus induced relations (endpoints within the
    # region or touching a main frame).
    for gid, members in region_frames.items():
        allowed = members | mains
        rel_ids = frozenset(
            r.id for r in mr.relations
            if r.source in allowed and r.target in allowed
            and (r.source in members or r.target in members)
        )
        regions[gid] = DmrRegion(frame_ids=frozenset(members), relation_ids=rel_ids)

    parent.validate()
    return SummarizedMr(parent=parent, group_frames=group_ids,
                        regions=regions, main_frames=set(mains))
