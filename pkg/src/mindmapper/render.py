"""Scene assembly and deterministic SVG rendering.

A Scene is the machine-readable layer between the engine and any frontend:
laid-out nodes (with rects, optional images, group markers) plus labeled
edges. The SVG renderer is byte-deterministic: elements are ordered by frame
id, edges are drawn beneath nodes, coordinates are fixed-precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

from .dmr import DmrGraph, Frame
from .imagery import SIZE_MEDIUM, ImageRef
from .layout import LayoutResult, NodeRect

SMALL_PX = 64
MEDIUM_PX = 128
CHAR_WIDTH_PX = 10
TEXT_HEIGHT_PX = 24


class RenderError(ValueError):
    pass


@dataclass(frozen=True)
class SceneNode:
    frame_id: str
    kind: str
    label: str
    x: float
    y: float
    width: float
    height: float
    is_group: bool = False
    is_main: bool = False
    image: ImageRef | None = None

    def to_dict(self) -> dict:
        out = {
            "frame_id": self.frame_id, "kind": self.kind, "label": self.label,
            "x": round(self.x, 3), "y": round(self.y, 3),
            "width": self.width, "height": self.height,
            "is_group": self.is_group, "is_main": self.is_main,
        }
        if self.image is not None:
            out["image"] = self.image.to_dict()
        return out


@dataclass(frozen=True)
class SceneEdge:
    source: str
    target: str
    kind: str
    label: str

    def to_dict(self) -> dict:
        return {"source": self.source, "target": self.target,
                "kind": self.kind, "label": self.label}


@dataclass(frozen=True)
class Scene:
    nodes: tuple[SceneNode, ...]
    edges: tuple[SceneEdge, ...]

    def to_dict(self) -> dict:
        return {"nodes": [n.to_dict() for n in self.nodes],
                "edges": [e.to_dict() for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def frame_label(frame: Frame) -> str:
    attributes = getattr(frame, "attributes", [])
    if attributes:
        return " ".join([value for _, value in attributes] + [frame.surface])
    return frame.surface


def node_rects(mr: DmrGraph, images: dict[str, ImageRef],
               size_classes: dict[str, str] | None = None) -> dict[str, NodeRect]:
    """Rects shared by layout and scene: image nodes use their size class,
    text nodes grow with their label."""
    size_classes = size_classes or {}
    rects = {}
    for fid, frame in mr.frames.items():
        image = images.get(fid)
        if image is not None and not image.missing:
            side = MEDIUM_PX if size_classes.get(fid) == SIZE_MEDIUM else SMALL_PX
            rects[fid] = NodeRect(width=side, height=side)
        else:
            label = frame_label(frame)
            rects[fid] = NodeRect(width=max(1, len(label)) * CHAR_WIDTH_PX,
                                  height=TEXT_HEIGHT_PX)
    return rects


def build_scene(mr: DmrGraph, layout: LayoutResult, images: dict[str, ImageRef],
                group_ids: set[str] | frozenset[str] = frozenset(),
                main_ids: set[str] | frozenset[str] = frozenset(),
                size_classes: dict[str, str] | None = None) -> Scene:
    """Bind frames to their layout positions; missing-image frames fall back
    to labeled shapes, group frames carry the expandable marker."""
    rects = node_rects(mr, images, size_classes)
    nodes = []
    for fid in sorted(mr.frames):
        if fid not in layout.positions:
            raise RenderError(f"layout is missing a position for frame '{fid}'")
        frame = mr.frames[fid]
        x, y = layout.positions[fid]
        rect = rects[fid]
        image = images.get(fid)
        if image is not None and image.missing:
            image = None
        nodes.append(SceneNode(
            frame_id=fid, kind=frame.kind, label=frame_label(frame),
            x=x, y=y, width=rect.width, height=rect.height,
            is_group=fid in group_ids, is_main=fid in main_ids,
            image=image,
        ))
    edges = []
    for rel in sorted(mr.relations, key=lambda r: (r.source, r.target, r.kind, r.subtype)):
        edges.append(SceneEdge(source=rel.source, target=rel.target,
                               kind=rel.kind, label=rel.subtype))
    return Scene(nodes=tuple(nodes), edges=tuple(edges))


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def render_svg(scene: Scene) -> bytes:
    """Deterministic SVG 1.1: stable ordering, edges under nodes, relation
    labels at edge midpoints, group frames marked expandable."""
    positions = {n.frame_id: (n.x, n.y) for n in scene.nodes}
    if scene.nodes:
        min_x = min(n.x - n.width / 2 for n in scene.nodes) - 20
        min_y = min(n.y - n.height / 2 for n in scene.nodes) - 20
        max_x = max(n.x + n.width / 2 for n in scene.nodes) + 20
        max_y = max(n.y + n.height / 2 for n in scene.nodes) + 20
    else:
        min_x = min_y = 0.0
        max_x = max_y = 100.0

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(min_x)} {_fmt(min_y)} {_fmt(max_x - min_x)} {_fmt(max_y - min_y)}">',
        '<g class="edges" stroke="#888" fill="none">',
    ]
    for edge in scene.edges:
        x1, y1 = positions[edge.source]
        x2, y2 = positions[edge.target]
        lines.append(
            f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}"/>'
        )
        lines.append(
            f'<text x="{_fmt((x1 + x2) / 2)}" y="{_fmt((y1 + y2) / 2)}" '
            f'font-size="9" fill="#666" stroke="none" text-anchor="middle">'
            f'{escape(edge.label)}</text>'
        )
    lines.append('</g>')
    lines.append('<g class="nodes">')
    for node in scene.nodes:
        left = node.x - node.width / 2
        top = node.y - node.height / 2
        attrs = f'data-frame-id={quoteattr(node.frame_id)} data-kind={quoteattr(node.kind)}'
        if node.is_group:
            attrs += ' data-group="true"'
        if node.is_main:
            attrs += ' data-main="true"'
        lines.append(f'<g {attrs}>')
        stroke_dash = ' stroke-dasharray="6 3"' if node.is_group else ''
        fill = "#dbeafe" if node.kind == "entity" else "#dcfce7"
        if node.image is not None:
            lines.append(
                f'<image href={quoteattr(node.image.path)} x="{_fmt(left)}" y="{_fmt(top)}" '
                f'width="{_fmt(node.width)}" height="{_fmt(node.height)}"/>'
            )
            lines.append(
                f'<rect x="{_fmt(left)}" y="{_fmt(top)}" width="{_fmt(node.width)}" '
                f'height="{_fmt(node.height)}" fill="none" stroke="#333"{stroke_dash}/>'
            )
            lines.append(
                f'<text x="{_fmt(node.x)}" y="{_fmt(top + node.height + 12)}" '
                f'font-size="11" text-anchor="middle">{escape(node.label)}</text>'
            )
        else:
            lines.append(
                f'<rect x="{_fmt(left)}" y="{_fmt(top)}" width="{_fmt(node.width)}" '
                f'height="{_fmt(node.height)}" rx="6" fill="{fill}" stroke="#333"{stroke_dash}/>'
            )
            lines.append(
                f'<text x="{_fmt(node.x)}" y="{_fmt(node.y + 4)}" font-size="12" '
                f'text-anchor="middle">{escape(node.label)}</text>'
            )
        if node.is_group:
            lines.append(
                f'<text x="{_fmt(left + node.width - 6)}" y="{_fmt(top + 12)}" '
                f'font-size="12" text-anchor="middle" fill="#1d4ed8">+</text>'
            )
        lines.append('</g>')
    lines.append('</g>')
    lines.append('</svg>')
    return ("\n".join(lines) + "\n").encode("utf-8")
