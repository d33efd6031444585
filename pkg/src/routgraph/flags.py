"""Detection of narrow slippery towers.

A vertex sits on top of a tower when its in-neighbourhood stays thin for
many levels (the layer-size threshold is only reached at depth k1 >= k_star),
the whole explored region is small, and it forms a tree, so a walker
trying to climb it faces r-1 wrong turns at every level.  Such vertices
realize the smallest stationary mass and stretch the diameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .branching import solve_constants
from .exploration import default_layer_threshold, default_size_cap
from .graph import Digraph
from .structure import SccDecomposition


@dataclass(frozen=True)
class FlagParams:
    """Tower-detection parameters.

    k_star is the minimum qualifying depth ceil((eta_r - eps/2) * log_r n);
    the layer threshold defaults to ceil(ln^4 n) and the cumulative size
    cap to ceil(ln^7 n).  Both are exposed because the asymptotic defaults
    are far outside their intended regime at bench scales (ln^4 n is a
    quarter of n at n = 2^16), where a caller-chosen threshold is the only
    way to observe towers at all.
    """

    epsilon: float
    k_star: int
    threshold: int
    size_cap: int

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.k_star < 1:
            raise ValueError(
                f"k_star must be >= 1 (epsilon too large?), got {self.k_star}"
            )
        if self.threshold < 1 or self.size_cap < 1:
            raise ValueError("threshold and size_cap must be >= 1")

    @classmethod
    def for_graph(
        cls,
        n: int,
        r: int,
        epsilon: float = 0.2,
        eta: float | None = None,
        threshold: int | None = None,
        size_cap: int | None = None,
    ) -> "FlagParams":
        if eta is None:
            eta = solve_constants(r).eta_r
        k_star = math.ceil((eta - epsilon / 2.0) * math.log(n) / math.log(r))
        return cls(
            epsilon=epsilon,
            k_star=k_star,
            threshold=threshold if threshold is not None else default_layer_threshold(n),
            size_cap=size_cap if size_cap is not None else default_size_cap(n),
        )


@dataclass(frozen=True)
class FlagReport:
    vertex: int
    is_flag: bool
    k1: int | None  # None when the layers die or the scan overflows the cap
    maze_size: int  # |N^-_{<=k1}| (or the explored size at early exit)
    is_tree: bool
    in_d0: bool | None  # None when no decomposition was supplied
    params: FlagParams

    def to_csv_fields(self, n: int, r: int, seed: int) -> list[str]:
        return [
            str(n),
            str(r),
            str(seed),
            str(self.vertex + 1),
            "inf" if self.k1 is None else str(self.k1),
            str(self.maze_size),
            str(int(self.is_tree)),
            str(int(self.is_flag)),
        ]


FLAGS_CSV_HEADER = "n,r,seed,vertex,k1,maze_size,is_tree,is_flag"


def _in_d0(dec: SccDecomposition | None, v: int) -> bool | None:
    if dec is None:
        return None
    return bool(dec.comp_id[v] == dec.d0)


def is_flag(
    g: Digraph, v: int, p: FlagParams, dec: SccDecomposition | None = None
) -> FlagReport:
    """Single-vertex tower test.

    Runs the capped layered in-search; qualification needs the threshold
    hit at depth k1 in [k_star, inf), cumulative size within the cap, and
    the induced subgraph on the explored set to be a tree: exactly
    size - 1 edges counting multiplicities, i.e. nothing beyond the
    search-tree edges (any parallel or extra edge disqualifies).
    """
    rev_indptr, rev_indices = _kernels.as_csr32(*g.in_csr())
    sizes, status, maze, cum = _kernels.in_layers_capped(
        rev_indptr, rev_indices, v, p.threshold, p.size_cap, -1
    )
    if status == _kernels.LAYERS_HIT:
        k1 = len(sizes) - 1
    else:
        k1 = None
    mask = np.zeros(g.n, dtype=bool)
    mask[maze] = True
    edges = int(_kernels.induced_edge_count(g.heads, g.r, maze, mask))
    tree = edges == cum - 1
    flag = (
        k1 is not None and k1 >= p.k_star and cum <= p.size_cap and tree
    )
    return FlagReport(
        vertex=v,
        is_flag=bool(flag),
        k1=k1,
        maze_size=int(cum),
        is_tree=bool(tree),
        in_d0=_in_d0(dec, v),
        params=p,
    )


def find_flags(
    g: Digraph, p: FlagParams, dec: SccDecomposition | None = None
) -> list[FlagReport]:
    """Scan every vertex and return reports for the towers found.

    Each per-vertex scan stops as soon as the cumulative explored size
    exceeds the cap, a layer reaches the threshold, or the layers die, so
    the cost per vertex stays proportional to the explored region.  The
    scan itself runs in the compiled parallel kernel.
    """
    rev_indptr, rev_indices = _kernels.as_csr32(*g.in_csr())
    k1_arr, cum_arr, tree_arr, flag_arr = _kernels.flag_scan(
        rev_indptr,
        rev_indices,
        g.heads,
        g.r,
        p.threshold,
        p.size_cap,
        p.k_star,
        min(g.n, 64),
    )
    reports = []
    for v in np.flatnonzero(flag_arr):
        v = int(v)
        reports.append(
            FlagReport(
                vertex=v,
                is_flag=True,
                k1=int(k1_arr[v]),
                maze_size=int(cum_arr[v]),
                is_tree=bool(tree_arr[v]),
                in_d0=_in_d0(dec, v),
                params=p,
            )
        )
    return reports
