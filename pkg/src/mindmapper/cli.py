"""Command-line driver.

`mindmapper generate` converts a SEPT document into MindMap SVG output,
either single level (straight from the DMR) or multilevel (one SVG per tree
node plus a tree index). `mindmapper serve` runs the HTTP service.

Image retrieval uses the manifest provider from the config file when set,
else the generic HTTP provider when MINDMAPPER_IMAGE_ENDPOINT (and optionally
MINDMAPPER_IMAGE_API_KEY) is exported, else no images.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .config import EngineConfig, load_config
from .dmr import generate_dmr
from .mlmr import build_mlmr, export_tree, iter_nodes
from .ontology import load_ontology
from .pipeline import make_cache, make_provider, scene_for_mr
from .render import render_svg
from .sept import parse_sept_document


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mindmapper",
        description="Generate interactive multilevel MindMaps from SEPT documents.",
        epilog="Environment: MINDMAPPER_IMAGE_ENDPOINT / MINDMAPPER_IMAGE_API_KEY "
               "select the HTTP image provider when no manifest is configured.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="render a SEPT document to SVG")
    gen.add_argument("--sept", required=True, help="SEPT document file")
    gen.add_argument("--ontology", required=True, help="ontology file")
    gen.add_argument("--config", help="engine config file (JSON)")
    gen.add_argument("--mode", choices=("single", "multi"), default="multi")
    gen.add_argument("--image-type", choices=("all", "clipart", "lineart"), default="all")
    gen.add_argument("--size", choices=("all", "auto", "small"), default="all")
    gen.add_argument("--cc", action="store_true", help="concept-combination queries")
    gen.add_argument("--out", default="out", help="output directory")
    gen.add_argument("--seed", type=int, default=None, help="rng seed")

    srv = sub.add_parser("serve", help="run the HTTP service")
    srv.add_argument("--ontology", required=True)
    srv.add_argument("--config", help="engine config file (JSON)")
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--port", type=int, default=8645)
    srv.add_argument("--store", default=".sessions", help="session store directory")
    return parser


def _engine_config(args) -> EngineConfig:
    cfg = load_config(args.config) if args.config else EngineConfig()
    query = dataclasses.replace(
        cfg.query,
        type_filter=args.image_type,
        size_mode=args.size,
        mode="cc" if args.cc else cfg.query.mode,
    )
    cfg = dataclasses.replace(cfg, query=query)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    return cfg


def cli_generate(args) -> int:
    try:
        doc = parse_sept_document(Path(args.sept).read_bytes())
        onto = load_ontology(Path(args.ontology).read_bytes())
        cfg = _engine_config(args)
        provider = make_provider(cfg)
        cache = make_cache(cfg)
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)

        dmr = generate_dmr(doc, onto)
        for note in dmr.diagnostics:
            print(f"note: {note}", file=sys.stderr)

        if args.mode == "single":
            scene = scene_for_mr(dmr, onto, cfg, provider, cache, path=("single",))
            svg_path = out / "mindmap.svg"
            svg_path.write_bytes(render_svg(scene))
            print(svg_path)
            return 0

        root = build_mlmr(dmr, onto, cfg.mlmr)
        index = {"mode": "multi", "seed": cfg.seed, "nodes": []}
        for path, node in iter_nodes(root):
            scene = scene_for_mr(node.mr, onto, cfg, provider, cache,
                                 group_ids=node.group_ids,
                                 main_ids=node.main_ids, path=path)
            name = "node_root" + "".join(f"_{gid}" for gid in path) + ".svg"
            (out / name).write_bytes(render_svg(scene))
            index["nodes"].append({
                "path": list(path),
                "label": node.label,
                "depth": node.depth,
                "svg": name,
                "frames": sorted(node.mr.frames),
                "groups": sorted(node.group_ids),
            })
        index_path = out / "tree.json"
        index_path.write_text(json.dumps(index, sort_keys=True, indent=1),
                              encoding="utf-8")
        (out / "mlmr.json").write_text(
            json.dumps(export_tree(root), sort_keys=True, indent=1),
            encoding="utf-8")
        print(index_path)
        return 0
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1


def cli_serve(args) -> int:
    import uvicorn

    from .service import create_app

    cfg = load_config(args.config) if args.config else EngineConfig()
    app = create_app(ontology_path=args.ontology, config=cfg, store_dir=args.store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "generate":
        return cli_generate(args)
    return cli_serve(args)


if __name__ == "__main__":
    sys.exit(main())
