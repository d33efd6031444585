"""Outward and inward breadth-first search and in-neighbourhood growth.

Outward BFS follows edges tail to head and computes dist(root, u);
inward BFS follows edges head to tail and computes dist(u, root).
Both collapse parallel edges during discovery (neighbourhood layers are
vertex sets) and explore first-in first-out, enqueueing the newly
discovered neighbours of each explored vertex in increasing vertex order,
so the discovery sequence is reproducible.

Unreached vertices carry distance sentinel -1 in arrays; serializers
render it as the string "inf".
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graph import Digraph

UNREACHED = -1


def default_layer_threshold(n: int) -> int:
    """Default in-layer size threshold: ceil(ln^4 n)."""
    return max(1, math.ceil(math.log(max(n, 2)) ** 4))


def default_size_cap(n: int) -> int:
    """Default cumulative in-neighbourhood cap: ceil(ln^7 n)."""
    return max(1, math.ceil(math.log(max(n, 2)) ** 7))


@dataclass(frozen=True)
class BfsResult:
    """Distance layers and BFS tree from one root.

    ``dist[u]`` is the directed distance (root to u for outward runs,
    u to root for inward runs) or -1 when unreached.  ``order`` lists the
    discovered vertices in discovery sequence; ``parent`` gives each
    discovered vertex's BFS-tree parent (-1 for the root).
    """

    root: int
    direction: str  # "outward" | "inward"
    dist: np.ndarray
    parent: np.ndarray
    order: np.ndarray
    layers: list[np.ndarray] = field(repr=False)

    def distance(self, u: int) -> int | float:
        d = int(self.dist[u])
        return math.inf if d == UNREACHED else d

    def layer_sizes(self) -> np.ndarray:
        return np.array([layer.size for layer in self.layers], dtype=np.int64)

    def reached_count(self) -> int:
        return int(self.order.size)

    def to_json(self) -> str:
        return json.dumps(
            {
                "root": self.root + 1,
                "direction": self.direction,
                "layers": [(layer + 1).tolist() for layer in self.layers],
            },
            separators=(",", ":"),
        )


@dataclass(frozen=True)
class GrowthProfile:
    """In-layer sizes d_0, d_1, ..., d_K and their running totals."""

    root: int
    sizes: np.ndarray
    cumulative: np.ndarray

    def to_csv(self) -> str:
        lines = ["k,d_k,cum_k"]
        for k, (s, c) in enumerate(zip(self.sizes, self.cumulative)):
            lines.append(f"{k},{s},{c}")
        return "\n".join(lines) + "\n"


def _layers_from(dist: np.ndarray, order: np.ndarray) -> list[np.ndarray]:
    if order.size == 0:
        return []
    depths = dist[order]
    bounds = np.searchsorted(depths, np.arange(depths[-1] + 2))
    return [order[bounds[k] : bounds[k + 1]] for k in range(depths[-1] + 1)]


def _run_bfs(
    g: Digraph, v: int, direction: str, max_depth: int | None, target: int = -1
) -> BfsResult:
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range for n={g.n}")
    if direction == "outward":
        indptr, indices = g.out_csr()
        sort_children = True
    else:
        indptr, indices = g.in_csr()
        sort_children = False
    indptr32, indices32 = _kernels.as_csr32(indptr, indices)
    depth_arg = -1 if max_depth is None else int(max_depth)
    dist, parent, order, count = _kernels.bfs_structured(
        indptr32, indices32, v, depth_arg, sort_children, target
    )
    order = order[:count].copy()
    return BfsResult(
        root=v,
        direction=direction,
        dist=dist,
        parent=parent,
        order=order,
        layers=_layers_from(dist, order),
    )


def obfs(g: Digraph, v: int, max_depth: int | None = None) -> BfsResult:
    """Breadth-first search along edge direction; dist[u] = dist(v, u)."""
    return _run_bfs(g, v, "outward", max_depth)


def ibfs(g: Digraph, v: int, max_depth: int | None = None) -> BfsResult:
    """Breadth-first search against edge direction; dist[u] = dist(u, v)."""
    return _run_bfs(g, v, "inward", max_depth)


def _capped_in_layers(g: Digraph, v: int, threshold: int, size_cap: int, kmax: int):
    indptr, indices = _kernels.as_csr32(*g.in_csr())
    return _kernels.in_layers_capped(indptr, indices, v, threshold, size_cap, kmax)


def k0(g: Digraph, v: int, threshold: int | None = None) -> int:
    """First depth k where the in-layer size leaves the window (0, threshold).

    With d_0 = 1 the result is >= 1 unless threshold == 1.  Always finite:
    layers either die out or eventually reach any fixed threshold.
    """
    if threshold is None:
        threshold = default_layer_threshold(g.n)
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    sizes, status, _, _ = _capped_in_layers(g, v, threshold, g.n + 1, -1)
    # the capped search stops exactly at the first empty or big layer
    assert status in (_kernels.LAYERS_DEAD, _kernels.LAYERS_HIT)
    return len(sizes) - 1


def k1(g: Digraph, v: int, threshold: int | None = None) -> int | None:
    """First depth k with in-layer size >= threshold, or None if layers die."""
    if threshold is None:
        threshold = default_layer_threshold(g.n)
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    sizes, status, _, _ = _capped_in_layers(g, v, threshold, g.n + 1, -1)
    if status == _kernels.LAYERS_HIT:
        return len(sizes) - 1
    return None


def in_growth_profile(g: Digraph, v: int, kmax: int) -> GrowthProfile:
    """Exact in-layer sizes d_0 .. d_kmax (zeros after the layers die)."""
    if kmax < 0:
        raise ValueError(f"kmax must be >= 0, got {kmax}")
    sizes, _, _, _ = _capped_in_layers(g, v, g.n + 1, g.n + 1, kmax)
    padded = np.zeros(kmax + 1, dtype=np.int64)
    padded[: len(sizes)] = sizes
    return GrowthProfile(root=v, sizes=padded, cumulative=np.cumsum(padded))


def in_neighbourhood(g: Digraph, v: int, k: int) -> np.ndarray:
    """Vertices at distance <= k to v (the depth-k maze around v)."""
    _, _, maze, cum = _capped_in_layers(g, v, g.n + 1, g.n + 1, k)
    return np.sort(maze[:cum].astype(np.int64))
