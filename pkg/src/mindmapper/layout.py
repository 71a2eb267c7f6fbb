"""Spring-model layout with rectangle-aware rest lengths.

Every node pair gets a spring whose rest length is the edge length for
adjacent pairs and a diameter-normalized shortest-path length otherwise,
plus half the sum of the two node-rectangle diameters so boxes cannot
overlap at rest. The energy is minimized by steepest descent with
backtracking line search, restarted from several random seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class LayoutConfig:
    l: float = 50.0           # desired length of directly connected nodes
    D: float = 600.0          # drawing diameter
    restarts: int = 10
    max_iterations: int = 2000
    # Adjacent springs have stiffness 1/l^2, so their gradients are ~1e-4
    # scale; the tolerance has to sit below that to resolve rest lengths.
    gradient_tolerance: float = 1e-5
    seed: int = 0
    track_history: bool = False

    def __post_init__(self):
        if self.l <= 0 or self.D <= self.l or self.restarts < 1:
            raise LayoutError("need l > 0, D > l and restarts >= 1")


@dataclass(frozen=True)
class NodeRect:
    width: float
    height: float

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise LayoutError("rect dimensions must be > 0")

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, self.height)


@dataclass(frozen=True)
class LayoutResult:
    positions: dict[str, tuple[float, float]]
    cost: float
    restart_index: int
    history: tuple[tuple[float, ...], ...] = ()


def all_pairs_shortest_paths(nodes, edges) -> np.ndarray:
    """Floyd-Warshall hop counts over unit-weight undirected edges;
    math.inf marks disconnected pairs."""
    index = {node: i for i, node in enumerate(nodes)}
    n = len(index)
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for a, b in edges:
        i, j = index[a], index[b]
        if i != j:
            dist[i, j] = dist[j, i] = 1.0
    for k in range(n):
        via = dist[:, k][:, None] + dist[k, :][None, :]
        np.minimum(dist, via, out=dist)
    return dist


def _adjacency_matrix(nodes, edges) -> np.ndarray:
    index = {node: i for i, node in enumerate(nodes)}
    n = len(index)
    adj = np.zeros((n, n), dtype=bool)
    for a, b in edges:
        i, j = index[a], index[b]
        if i != j:
            adj[i, j] = adj[j, i] = True
    return adj


def desired_lengths(nodes, edges, rects, cfg: LayoutConfig) -> np.ndarray:
    """Rest-length matrix: l for edges, D*d/diameter for connected non-edges,
    D for disconnected pairs; every pair additionally gets (M_i + M_j)/2."""
    nodes = list(nodes)
    dist = all_pairs_shortest_paths(nodes, edges)
    adj = _adjacency_matrix(nodes, edges)
    n = len(nodes)
    finite = np.isfinite(dist) & ~np.eye(n, dtype=bool)
    diameter = dist[finite].max() if finite.any() else 1.0
    if diameter <= 0:
        diameter = 1.0

    lengths = np.full((n, n), cfg.D)
    lengths[finite] = cfg.D * dist[finite] / diameter
    lengths[adj] = cfg.l

    radii = np.array([rects[node].diameter / 2.0 if node in rects else 0.0
                      for node in nodes])
    lengths += radii[:, None] + radii[None, :]
    np.fill_diagonal(lengths, 0.0)
    return lengths


def stiffness_matrix(nodes, edges, cfg: LayoutConfig) -> np.ndarray:
    """K_ij = 1/(d*_ij)^2 with d* = l on edges and the hop count otherwise;
    disconnected pairs use one hop past the diameter so their spring stays weak."""
    nodes = list(nodes)
    dist = all_pairs_shortest_paths(nodes, edges)
    adj = _adjacency_matrix(nodes, edges)
    n = len(nodes)
    finite = np.isfinite(dist) & ~np.eye(n, dtype=bool)
    diameter = dist[finite].max() if finite.any() else 1.0

    d_star = np.where(np.isfinite(dist), dist, diameter + 1.0)
    d_star[adj] = cfg.l
    with np.errstate(divide="ignore"):
        stiffness = 1.0 / (d_star ** 2)
    np.fill_diagonal(stiffness, 0.0)
    return stiffness


def spring_energy(positions: np.ndarray, lengths: np.ndarray,
                  stiffness: np.ndarray) -> float:
    """E = sum over i<j of K_ij * (dx^2 + dy^2 + l^2 - 2 l r)."""
    diff = positions[:, None, :] - positions[None, :, :]
    r2 = (diff ** 2).sum(axis=2)
    r = np.sqrt(r2)
    terms = stiffness * (r2 + lengths ** 2 - 2.0 * lengths * r)
    iu = np.triu_indices(len(positions), k=1)
    return float(terms[iu].sum())


def _separated(positions: np.ndarray) -> np.ndarray:
    """Deterministically nudge exactly coincident pairs apart by 1e-6."""
    diff = positions[:, None, :] - positions[None, :, :]
    r = np.sqrt((diff ** 2).sum(axis=2))
    n = len(positions)
    coincident = (r == 0.0) & ~np.eye(n, dtype=bool)
    if not coincident.any():
        return positions
    adjusted = positions.copy()
    for _ in range(n):
        rows, cols = np.nonzero(coincident)
        if len(rows) == 0:
            break
        for i, j in zip(rows, cols):
            if i < j:
                adjusted[j] = adjusted[j] + np.array([1e-6 * (j + 1), 1e-6])
        diff = adjusted[:, None, :] - adjusted[None, :, :]
        r = np.sqrt((diff ** 2).sum(axis=2))
        coincident = (r == 0.0) & ~np.eye(n, dtype=bool)
    return adjusted


def spring_gradient(positions: np.ndarray, lengths: np.ndarray,
                    stiffness: np.ndarray) -> np.ndarray:
    """Analytic gradient: dE/dp_i = sum_j 2 K_ij (1 - l_ij/r_ij) (p_i - p_j).

    The sqrt term is not differentiable for coincident nodes, so those are
    jittered apart before differentiating.
    """
    positions = _separated(np.asarray(positions, dtype=float))
    n = len(positions)
    diff = positions[:, None, :] - positions[None, :, :]
    r = np.sqrt((diff ** 2).sum(axis=2))
    np.fill_diagonal(r, 1.0)  # avoid 0/0 on the diagonal; weights there are zero anyway
    weight = 2.0 * stiffness * (1.0 - lengths / r)
    np.fill_diagonal(weight, 0.0)
    return weight.sum(axis=1)[:, None] * positions - weight @ positions


def minimize_layout(nodes, edges, rects, cfg: LayoutConfig | None = None) -> LayoutResult:
    """Multi-start gradient descent with Armijo backtracking; returns the
    minimum-cost restart, re-centered onto the canvas."""
    cfg = cfg or LayoutConfig()
    nodes = list(nodes)
    n = len(nodes)
    if n == 0:
        return LayoutResult(positions={}, cost=0.0, restart_index=0)
    lengths = desired_lengths(nodes, edges, rects, cfg)
    stiffness = stiffness_matrix(nodes, edges, cfg)

    best_positions = None
    best_cost = math.inf
    best_restart = 0
    histories: list[tuple[float, ...]] = []

    for restart in range(cfg.restarts):
        rng = np.random.default_rng([cfg.seed, restart])
        pos = rng.uniform(0.0, cfg.D, size=(n, 2))
        energy = spring_energy(pos, lengths, stiffness)
        history = [energy]
        step = 1.0
        stalled = 0
        for _ in range(cfg.max_iterations):
            grad = spring_gradient(pos, lengths, stiffness)
            grad_norm2 = float((grad ** 2).sum())
            if math.sqrt(grad_norm2) < cfg.gradient_tolerance:
                break
            t = step * 2.0
            accepted = False
            for _ in range(60):
                candidate = pos - t * grad
                cand_energy = spring_energy(candidate, lengths, stiffness)
                if cand_energy <= energy - 1e-4 * t * grad_norm2:
                    accepted = True
                    break
                t *= 0.5
            if not accepted:
                break
            improvement = energy - cand_energy
            pos = candidate
            energy = cand_energy
            step = t
            history.append(energy)
            # plateau: successive accepted steps that barely move the energy
            stalled = stalled + 1 if improvement < 1e-10 * (1.0 + abs(energy)) else 0
            if stalled >= 3:
                break
        if cfg.track_history:
            histories.append(tuple(history))
        if energy < best_cost:
            best_cost = energy
            best_positions = pos
            best_restart = restart

    # Translation invariance allows re-centering onto the canvas.
    center = (best_positions.min(axis=0) + best_positions.max(axis=0)) / 2.0
    best_positions = best_positions - center + np.array([cfg.D / 2.0, cfg.D / 2.0])
    positions = {node: (float(x), float(y))
                 for node, (x, y) in zip(nodes, best_positions)}
    if not all(math.isfinite(v) for xy in positions.values() for v in xy):
        raise LayoutError("layout produced non-finite positions")
    return LayoutResult(positions=positions, cost=best_cost,
                        restart_index=best_restart, history=tuple(histories))
