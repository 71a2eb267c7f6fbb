"""Engine configuration: one file/dict drives weights, grouping, layout,
queries and image retrieval for the CLI and the service."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from .imagery import QueryConfig
from .layout import LayoutConfig
from .mlmr import MlmrConfig
from .mrsa import MrsaConfig, WeightConfig


@dataclass(frozen=True)
class EngineConfig:
    mlmr: MlmrConfig = field(default_factory=MlmrConfig)
    layout: LayoutConfig = field(default_factory=LayoutConfig)
    query: QueryConfig = field(default_factory=QueryConfig)
    manifest_path: str | None = None
    cache_dir: str | None = None
    seed: int = 0

    @property
    def mrsa(self) -> MrsaConfig:
        return self.mlmr.mrsa

    def with_seed(self, seed: int) -> "EngineConfig":
        mrsa = replace(self.mlmr.mrsa, seed=seed)
        return replace(self, seed=seed,
                       mlmr=replace(self.mlmr, mrsa=mrsa),
                       layout=replace(self.layout, seed=seed))


def _weight_config(raw: dict) -> WeightConfig:
    kwargs = {}
    for key in ("case_role", "domain", "temporal"):
        if key in raw:
            kwargs[key] = {k: float(v) for k, v in raw[key].items()}
    ratios = raw.get("ratios", {})
    for key in ("case_role", "domain", "temporal"):
        if key in ratios:
            kwargs[f"{key}_ratio"] = {k: float(v) for k, v in ratios[key].items()}
    if "tolerance" in raw:
        kwargs["tolerance"] = float(raw["tolerance"])
    if "max_iterations" in raw:
        kwargs["max_iterations"] = int(raw["max_iterations"])
    return WeightConfig(**kwargs)


def config_from_dict(raw: dict) -> EngineConfig:
    weights = _weight_config(raw.get("weights", {}))
    mrsa = MrsaConfig(
        weights=weights,
        g_th=int(raw.get("g_th", 6)),
        kmeans_seeds=int(raw.get("kmeans_seeds", 10)),
        max_k=int(raw.get("max_k", 6)),
        seed=int(raw.get("seed", 0)),
    )
    mlmr = MlmrConfig(
        mrsa=mrsa,
        max_depth=int(raw.get("max_depth", 10)),
        min_region=int(raw.get("min_region", 4)),
    )
    layout_raw = raw.get("layout", {})
    layout = LayoutConfig(
        l=float(layout_raw.get("l", 50.0)),
        D=float(layout_raw.get("D", 600.0)),
        restarts=int(layout_raw.get("restarts", 10)),
        max_iterations=int(layout_raw.get("max_iterations", 2000)),
        gradient_tolerance=float(layout_raw.get("gradient_tolerance", 1e-5)),
        seed=int(raw.get("seed", 0)),
    )
    query_raw = raw.get("query", {})
    query = QueryConfig(
        mode=query_raw.get("mode", "direct"),
        th=float(query_raw.get("th", 6.0)),
        type_filter=query_raw.get("type_filter", "all"),
        size_mode=query_raw.get("size_mode", "all"),
        auto_relation_threshold=int(query_raw.get("auto_relation_threshold", 6)),
    )
    images_raw = raw.get("images", {})
    return EngineConfig(
        mlmr=mlmr,
        layout=layout,
        query=query,
        manifest_path=images_raw.get("manifest"),
        cache_dir=images_raw.get("cache_dir"),
        seed=int(raw.get("seed", 0)),
    )


def load_config(path: str | Path) -> EngineConfig:
    with open(path, encoding="utf-8") as fh:
        return config_from_dict(json.load(fh))
