"""Image queries and retrieval for visual frames.

Direct queries are the frame's attributes (size, color, then the rest)
followed by its surface; concept-combination queries prepend the names of
strictly more important entity frames within two hops. Retrieval goes
through a pluggable provider (deterministic local manifest by default, a
generic HTTP client otherwise) behind an on-disk cache keyed by
(query, type filter, size mode).
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .dmr import DmrGraph, Frame
from .ontology import Ontology

_ATTRIBUTE_ORDER = {"size": 0, "color": 1}
SIZE_SMALL = "small"
SIZE_MEDIUM = "medium"


class ImageryError(ValueError):
    pass


class ProviderError(ImageryError):
    """Provider unreachable or misbehaving; retrying later may succeed."""


@dataclass(frozen=True)
class QueryConfig:
    mode: str = "direct"              # "direct" | "cc"
    th: float = 6.0                   # relative-importance threshold
    type_filter: str = "all"          # "all" | "clipart" | "lineart"
    size_mode: str = "all"            # "all" | "auto" | "small"
    auto_relation_threshold: int = 6
    max_context: int = 2

    def __post_init__(self):
        if self.th <= 0:
            raise ImageryError("relative-importance threshold must be > 0")


@dataclass(frozen=True)
class ImageRef:
    query: str
    path: str
    width: int
    height: int
    provider: str
    missing: bool = False

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ImageryError("image dimensions must be > 0")

    def to_dict(self) -> dict:
        return {"query": self.query, "path": self.path, "width": self.width,
                "height": self.height, "provider": self.provider,
                "missing": self.missing}


def missing_image(query: str, provider: str) -> ImageRef:
    return ImageRef(query=query, path="", width=64, height=64,
                    provider=provider, missing=True)


def generate_direct_query(frame: Frame, onto: Ontology) -> str:
    """Canonical query: attribute values ordered (size, color, other) then the
    surface, space-joined and lowercased."""
    if not onto.is_visual(frame.concept):
        raise ImageryError(f"frame '{frame.id}' is not visual")
    attributes = getattr(frame, "attributes", [])
    ordered = sorted(
        ((kind, value) for kind, value in attributes),
        key=lambda kv: (_ATTRIBUTE_ORDER.get(kv[0], 2), kv[1]),
    )
    parts = [value.lower() for _, value in ordered] + [frame.surface.lower()]
    return " ".join(parts)


def _within_two_hops(mr: DmrGraph, start: str) -> set[str]:
    adj = mr.adjacency()
    first = adj[start]
    second = set()
    for mid in first:
        second |= adj[mid]
    return (first | second) - {start}


def generate_cc_query(frame: Frame, mr: DmrGraph, weights: dict[str, float],
                      cfg: QueryConfig, onto: Ontology) -> str:
    """Concept combination: prepend the surfaces of entity frames within two
    edges that dominate this frame by more than the threshold, strongest
    first, at most max_context names."""
    direct = generate_direct_query(frame, onto)
    own = weights.get(frame.id, 0.0)
    candidates = []
    for other in _within_two_hops(mr, frame.id):
        if mr.frames[other].kind != "entity":
            continue
        w = weights.get(other, 0.0)
        if own > 0 and w / own > cfg.th:
            candidates.append((w, other))
    candidates.sort(key=lambda item: (-item[0], item[1]))
    context = []
    for _, other in candidates[:cfg.max_context]:
        name = mr.frames[other].surface.lower()
        if name not in context and name not in direct.split():
            context.append(name)
    return " ".join(context + [direct]) if context else direct


def auto_size(frame: Frame, mr: DmrGraph, threshold: int = 6) -> str:
    """Medium when the frame has more incident relations than the threshold."""
    count = sum(1 for r in mr.relations if frame.id in (r.source, r.target))
    return SIZE_MEDIUM if count > threshold else SIZE_SMALL


def display_size_class(frame: Frame, mr: DmrGraph, cfg: QueryConfig) -> str:
    if cfg.size_mode == "small":
        return SIZE_SMALL
    if cfg.size_mode == "auto":
        return auto_size(frame, mr, cfg.auto_relation_threshold)
    return SIZE_MEDIUM


# -- providers ---------------------------------------------------------------


class ManifestProvider:
    """Deterministic local provider: a JSON map from query string to an image
    path (or {path, width, height} entry)."""

    name = "manifest"

    def __init__(self, manifest: dict | str | Path):
        if isinstance(manifest, (str, Path)):
            with open(manifest, encoding="utf-8") as fh:
                manifest = json.load(fh)
        self._entries = manifest

    def search(self, query: str, type_filter: str, size_mode: str) -> ImageRef | None:
        entry = self._entries.get(query)
        if entry is None:
            return None
        if isinstance(entry, str):
            entry = {"path": entry}
        default = 128 if size_mode in ("all", SIZE_MEDIUM) else 64
        return ImageRef(
            query=query,
            path=entry["path"],
            width=int(entry.get("width", default)),
            height=int(entry.get("height", default)),
            provider=self.name,
        )


class HttpImageProvider:
    """Generic HTTP image-search client.

    Endpoint and API key come from the environment (MINDMAPPER_IMAGE_ENDPOINT,
    MINDMAPPER_IMAGE_API_KEY) unless passed explicitly. The response is
    expected to be JSON with a "results" array of {url, width, height}.
    """

    name = "http"

    def __init__(self, endpoint: str | None = None, api_key: str | None = None,
                 timeout: float = 10.0):
        self.endpoint = endpoint or os.environ.get("MINDMAPPER_IMAGE_ENDPOINT")
        self.api_key = api_key or os.environ.get("MINDMAPPER_IMAGE_API_KEY")
        self.timeout = timeout
        if not self.endpoint:
            raise ProviderError(
                "no image endpoint configured (set MINDMAPPER_IMAGE_ENDPOINT)"
            )

    def search(self, query: str, type_filter: str, size_mode: str) -> ImageRef | None:
        import requests

        params = {"q": query, "type": type_filter, "size": size_mode}
        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            response = requests.get(self.endpoint, params=params,
                                    headers=headers, timeout=self.timeout)
            response.raise_for_status()
            payload = response.json()
        except requests.RequestException as exc:
            raise ProviderError(
                f"image provider unreachable ({exc}); retry once connectivity is back"
            ) from exc
        results = payload.get("results", [])
        if not results:
            return None
        first = results[0]
        return ImageRef(query=query, path=first["url"],
                        width=int(first.get("width", 128)),
                        height=int(first.get("height", 128)),
                        provider=self.name)


# -- cache -------------------------------------------------------------------


class ImageCache:
    """On-disk cache: one JSON record per (query, type, size) key.

    Keys are the triple itself; the hash only names files. Writes go through
    a temp file and an atomic rename.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._index_path = self.directory / "index.json"

    @staticmethod
    def _key(query: str, type_filter: str, size_mode: str) -> str:
        return json.dumps([query, type_filter, size_mode])

    def _record_path(self, key: str) -> Path:
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
        return self.directory / f"{digest}.json"

    def get(self, query: str, type_filter: str, size_mode: str) -> ImageRef | None:
        path = self._record_path(self._key(query, type_filter, size_mode))
        if not path.exists():
            return None
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return ImageRef(**raw["image"])

    def put(self, query: str, type_filter: str, size_mode: str, image: ImageRef) -> None:
        key = self._key(query, type_filter, size_mode)
        record = {"key": [query, type_filter, size_mode], "image": image.to_dict()}
        self._atomic_write(self._record_path(key), record)
        index = {}
        if self._index_path.exists():
            with open(self._index_path, encoding="utf-8") as fh:
                index = json.load(fh)
        index[key] = self._record_path(key).name
        self._atomic_write(self._index_path, index)

    def _atomic_write(self, path: Path, payload: dict) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, sort_keys=True)
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)


def fetch_image(provider, query: str, type_filter: str = "all",
                size_mode: str = "all", cache: ImageCache | None = None) -> ImageRef:
    """First provider result for the query, honoring the filters; cache hits
    bypass the provider, zero results yield a missing placeholder."""
    if cache is not None:
        hit = cache.get(query, type_filter, size_mode)
        if hit is not None:
            return hit
    result = provider.search(query, type_filter, size_mode)
    if result is None:
        result = missing_image(query, getattr(provider, "name", "unknown"))
    if cache is not None:
        cache.put(query, type_filter, size_mode, result)
    return result
