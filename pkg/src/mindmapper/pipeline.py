"""End-to-end glue: meaning graph -> images -> layout -> scene/SVG.

Shared by the CLI and the HTTP service so both produce identical bytes for
identical inputs and seeds.
"""

from __future__ import annotations

import zlib

from .config import EngineConfig
from .dmr import DmrGraph
from .imagery import (
    ImageCache,
    ImageRef,
    ManifestProvider,
    QueryConfig,
    display_size_class,
    fetch_image,
    generate_cc_query,
    generate_direct_query,
)
from .layout import LayoutConfig, LayoutResult, minimize_layout
from .mrsa import assign_action_weights, assign_entity_weights
from .ontology import Ontology
from .render import Scene, build_scene, node_rects


def frame_weights(mr: DmrGraph, cfg) -> dict[str, float]:
    entity = assign_entity_weights(mr, cfg.weights)
    action = assign_action_weights(mr, entity, cfg.weights)
    return {**entity, **action}


def prepare_images(mr: DmrGraph, onto: Ontology, qcfg: QueryConfig,
                   provider, cache: ImageCache | None = None,
                   weights: dict[str, float] | None = None,
                   ) -> tuple[dict[str, ImageRef], dict[str, str]]:
    """Fetch one image per visual frame; returns (images, size classes)."""
    images: dict[str, ImageRef] = {}
    classes: dict[str, str] = {}
    if provider is None:
        return images, classes
    for fid in sorted(mr.frames):
        frame = mr.frames[fid]
        if not onto.is_visual(frame.concept):
            continue
        if qcfg.mode == "cc" and weights is not None:
            query = generate_cc_query(frame, mr, weights, qcfg, onto)
        else:
            query = generate_direct_query(frame, onto)
        classes[fid] = display_size_class(frame, mr, qcfg)
        images[fid] = fetch_image(provider, query, qcfg.type_filter,
                                  qcfg.size_mode, cache)
    return images, classes


def mr_edges(mr: DmrGraph) -> list[tuple[str, str]]:
    seen = set()
    edges = []
    for rel in mr.relations:
        key = tuple(sorted((rel.source, rel.target)))
        if key in seen or rel.source == rel.target:
            continue
        seen.add(key)
        edges.append((rel.source, rel.target))
    return edges


def seed_for_path(base_seed: int, path: tuple[str, ...]) -> int:
    return (base_seed + zlib.crc32("/".join(path).encode("utf-8"))) % (2 ** 31)


def layout_mr(mr: DmrGraph, rects, lcfg: LayoutConfig) -> LayoutResult:
    nodes = sorted(mr.frames)
    return minimize_layout(nodes, mr_edges(mr), rects, lcfg)


def scene_for_mr(mr: DmrGraph, onto: Ontology, cfg: EngineConfig, provider,
                 cache: ImageCache | None = None,
                 group_ids: frozenset[str] | set[str] = frozenset(),
                 main_ids: frozenset[str] | set[str] = frozenset(),
                 path: tuple[str, ...] = ()) -> Scene:
    """Deterministic scene for one MR; the layout seed derives from the node's
    path so every tree node is stable across runs and sessions."""
    weights = frame_weights(mr, cfg.mrsa) if cfg.query.mode == "cc" else None
    images, classes = prepare_images(mr, onto, cfg.query, provider, cache, weights)
    rects = node_rects(mr, images, classes)
    lcfg = LayoutConfig(
        l=cfg.layout.l, D=cfg.layout.D, restarts=cfg.layout.restarts,
        max_iterations=cfg.layout.max_iterations,
        gradient_tolerance=cfg.layout.gradient_tolerance,
        seed=seed_for_path(cfg.layout.seed, path),
    )
    layout = layout_mr(mr, rects, lcfg)
    return build_scene(mr, layout, images, group_ids=group_ids,
                       main_ids=main_ids, size_classes=classes)


def make_provider(cfg: EngineConfig):
    """Manifest provider when configured, else the HTTP provider when its
    endpoint is exported, else no images."""
    import os

    from .imagery import HttpImageProvider

    if cfg.manifest_path:
        return ManifestProvider(cfg.manifest_path)
    if os.environ.get("MINDMAPPER_IMAGE_ENDPOINT"):
        return HttpImageProvider()
    return None


def make_cache(cfg: EngineConfig) -> ImageCache | None:
    return ImageCache(cfg.cache_dir) if cfg.cache_dir else None
