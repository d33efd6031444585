"""Exact directed diameters and single-pair distances.

The diameter is the maximum over all ordered pairs of the finite directed
distances, computed by running a BFS from every source (no estimation:
the value itself is the target quantity).  The per-source sweep is the
parallel axis; the reduction is a deterministic max with a lexicographic
witness, so worker scheduling never changes the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import Digraph, induced_csr


@dataclass(frozen=True)
class DiameterReport:
    value: int
    witness: tuple[int, int]  # lexicographically smallest attaining (u, v)
    restricted_to: np.ndarray | None
    normalized: float  # value / log_r(n), n the ambient vertex count

    def to_csv_fields(self) -> list[str]:
        return [str(self.value), f"{self.normalized:.12g}"]


def _normalize(value: int, n: int, r: int) -> float:
    if n <= 1 or r <= 1:
        return math.nan
    return value / (math.log(n) / math.log(r))


def _sweep(indptr: np.ndarray, indices: np.ndarray) -> tuple[int, int, int]:
    """(max finite distance, min attaining source, its min attaining target).

    Small graphs run one BFS per source.  Larger ones use the bit-parallel
    block sweep for the value and re-run plain BFS over the single block
    that attains it to pin down the lexicographic witness.
    """
    indptr32, indices32 = _kernels.as_csr32(indptr, indices)
    n = indptr.shape[0] - 1
    if n <= 2048:
        ecc, far = _kernels.ecc_sweep(indptr32, indices32, min(n, 64))
        value = int(ecc.max())
        u = int(np.flatnonzero(ecc == value)[0])
        return value, u, int(far[u])
    best = _kernels.max_distance_blocks(indptr32, indices32)
    value = int(best.max())
    blk = int(np.flatnonzero(best == value)[0])
    base = blk * 64
    sources = np.arange(base, min(base + 64, n), dtype=np.int32)
    ecc, far = _kernels.ecc_for_sources(indptr32, indices32, sources)
    idx = int(np.flatnonzero(ecc == value)[0])
    return value, base + idx, int(far[idx])


def diameter(g: Digraph) -> DiameterReport:
    """Maximum finite directed distance over all ordered pairs.

    When no pair of distinct vertices is connected the value is 0 and the
    witness degenerates to (0, 0).
    """
    indptr, indices = g.out_csr()
    value, u, v = _sweep(indptr, indices)
    return DiameterReport(
        value=value,
        witness=(u, v),
        restricted_to=None,
        normalized=_normalize(value, g.n, g.r),
    )


def diameter_restricted(g: Digraph, s: np.ndarray) -> DiameterReport:
    """Diameter of the induced subgraph D[s] (distances within s only)."""
    indptr, indices, members = induced_csr(g, s)
    value, u, v = _sweep(indptr, indices)
    return DiameterReport(
        value=value,
        witness=(int(members[u]), int(members[v])),
        restricted_to=members,
        normalized=_normalize(value, g.n, g.r),
    )


def sample_distance(g: Digraph, u: int, v: int) -> int | float:
    """Directed distance from u to v, or math.inf when unreachable."""
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise ValueError(f"vertex pair ({u}, {v}) out of range for n={g.n}")
    if u == v:
        return 0
    indptr32, indices32 = _kernels.as_csr32(*g.out_csr())
    dist, _, _, _ = _kernels.bfs_structured(indptr32, indices32, u, -1, False, v)
    d = int(dist[v])
    return math.inf if d < 0 else d


def trivial_lower_bound(n: int, r: int) -> int:
    """ceil(log_r(n-1)): r-out regularity caps how fast balls can grow."""
    if n <= 2 or r <= 1:
        return 0
    return math.ceil(math.log(n - 1) / math.log(r) - 1e-12)
