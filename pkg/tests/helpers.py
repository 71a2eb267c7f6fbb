"""Shared test builders: random meaning graphs and tiny hand-made ones."""

from __future__ import annotations

import numpy as np

from mindmapper.dmr import (
    ActionFrame,
    CASE_ROLE_SUBTYPES,
    DOMAIN_SUBTYPES,
    DmrGraph,
    EntityFrame,
    KIND_CASE_ROLE,
    KIND_DOMAIN,
    KIND_TEMPORAL,
    Relation,
    TEMPORAL_SUBTYPES,
)


def make_mr(entities, actions, relations) -> DmrGraph:
    """entities: [(id, surface)], actions: [(id, surface)],
    relations: [(kind, subtype, source, target)]."""
    graph = DmrGraph()
    for eid, surface in entities:
        graph.frames[eid] = EntityFrame(id=eid, surface=surface)
    for aid, surface in actions:
        graph.frames[aid] = ActionFrame(id=aid, surface=surface)
    for i, (kind, subtype, src, dst) in enumerate(relations, start=1):
        graph.relations.append(Relation(id=f"r{i}", kind=kind, subtype=subtype,
                                        source=src, target=dst))
    graph.validate()
    return graph


def random_mr(rng: np.random.Generator, max_frames: int = 30,
              concepts=None, action_action_degree: int = 2) -> DmrGraph:
    """Random well-formed MR. Domain/temporal degree per action stays small so
    the action-weight fixed point is a contraction under default ratios."""
    n_entities = int(rng.integers(1, max(2, max_frames * 2 // 3)))
    n_actions = int(rng.integers(1, max(2, max_frames - n_entities)))
    graph = DmrGraph()
    for i in range(n_entities):
        concept = None
        if concepts is not None and rng.random() < 0.8:
            concept = concepts[int(rng.integers(len(concepts)))]
        graph.frames[f"e{i}"] = EntityFrame(id=f"e{i}", surface=f"entity{i}",
                                            concept=concept)
    for i in range(n_actions):
        concept = None
        if concepts is not None and rng.random() < 0.8:
            concept = concepts[int(rng.integers(len(concepts)))]
        graph.frames[f"a{i}"] = ActionFrame(id=f"a{i}", surface=f"action{i}",
                                            concept=concept)

    rel_id = 0
    relations = []

    def add(kind, subtype, src, dst):
        nonlocal rel_id
        rel_id += 1
        relations.append(Relation(id=f"r{rel_id}", kind=kind, subtype=subtype,
                                  source=src, target=dst))

    for i in range(n_actions):
        # every action gets at least one case role so the graph hangs together
        for _ in range(int(rng.integers(1, 4))):
            e = int(rng.integers(n_entities))
            subtype = CASE_ROLE_SUBTYPES[int(rng.integers(len(CASE_ROLE_SUBTYPES)))]
            add(KIND_CASE_ROLE, subtype, f"e{e}", f"a{i}")

    aa_budget = {i: action_action_degree for i in range(n_actions)}
    for i in range(n_actions):
        for j in range(i + 1, n_actions):
            if aa_budget[i] > 0 and aa_budget[j] > 0 and rng.random() < 0.25:
                if rng.random() < 0.5:
                    subtype = DOMAIN_SUBTYPES[int(rng.integers(len(DOMAIN_SUBTYPES)))]
                    add(KIND_DOMAIN, subtype, f"a{i}", f"a{j}")
                else:
                    subtype = TEMPORAL_SUBTYPES[int(rng.integers(len(TEMPORAL_SUBTYPES)))]
                    add(KIND_TEMPORAL, subtype, f"a{i}", f"a{j}")
                aa_budget[i] -= 1
                aa_budget[j] -= 1

    graph.relations = relations
    graph.validate()
    return graph


def random_layout_instance(rng: np.random.Generator, n: int = 6):
    """(nodes, edges, rects dict) for a random connected-ish graph."""
    from mindmapper.layout import NodeRect

    nodes = [f"n{i}" for i in range(n)]
    edges = []
    for i in range(1, n):
        j = int(rng.integers(i))
        edges.append((nodes[i], nodes[j]))
    for _ in range(n // 2):
        i, j = rng.choice(n, size=2, replace=False)
        if (nodes[i], nodes[j]) not in edges and (nodes[j], nodes[i]) not in edges:
            edges.append((nodes[int(i)], nodes[int(j)]))
    rects = {node: NodeRect(width=float(rng.integers(20, 120)),
                            height=float(rng.integers(20, 60)))
             for node in nodes}
    return nodes, edges, rects
