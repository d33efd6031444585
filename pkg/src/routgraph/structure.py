"""Strongly connected components, the giant component, and its period.

The decomposition itself is delegated to scipy's compiled csgraph routine
(iterative, so cycle-like graphs at n = 10^6 cannot blow the stack).  The
largest component is selected with a deterministic tie-break: among the
components of maximal size, take the one whose smallest vertex is
smallest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from . import _kernels
from .graph import Digraph, induced_csr


@dataclass(frozen=True)
class SccDecomposition:
    comp_id: np.ndarray  # per-vertex component index
    comp_sizes: np.ndarray  # size per component index
    d0: int  # index of the selected largest component
    attractive: bool  # every vertex has a path into D0
    period: int  # gcd of cycle lengths within D0 (1 = aperiodic)

    @property
    def d0_size(self) -> int:
        return int(self.comp_sizes[self.d0])

    def d0_members(self) -> np.ndarray:
        return np.flatnonzero(self.comp_id == self.d0).astype(np.int64)

    def to_json(self) -> str:
        return json.dumps(
            {
                "sizes": self.comp_sizes.tolist(),
                "d0_size": self.d0_size,
                "attractive": self.attractive,
                "period": self.period,
            },
            separators=(",", ":"),
        )


def _adjacency_matrix(g: Digraph) -> sp.csr_matrix:
    tails = np.repeat(np.arange(g.n, dtype=np.int64), g.r)
    data = np.ones(g.n * g.r, dtype=np.int8)
    return sp.csr_matrix((data, (tails, g.heads)), shape=(g.n, g.n))


def scc_decompose(g: Digraph) -> SccDecomposition:
    """Full decomposition with giant-component selection.

    Also records whether the selected component is attractive and its
    period, since both are one cheap pass once the components are known.
    """
    n_comp, comp_id = csgraph.connected_components(
        _adjacency_matrix(g), directed=True, connection="strong"
    )
    comp_id = comp_id.astype(np.int64)
    comp_sizes = np.bincount(comp_id, minlength=n_comp)
    # smallest vertex per component = first occurrence in vertex order
    _, first_vertex = np.unique(comp_id, return_index=True)
    max_size = comp_sizes.max()
    candidates = np.flatnonzero(comp_sizes == max_size)
    d0 = int(candidates[np.argmin(first_vertex[candidates])])
    dec = SccDecomposition(
        comp_id=comp_id,
        comp_sizes=comp_sizes,
        d0=d0,
        attractive=False,
        period=0,
    )
    attractive = is_attractive(g, dec)
    per = period(g, dec)
    return SccDecomposition(
        comp_id=comp_id,
        comp_sizes=comp_sizes,
        d0=d0,
        attractive=attractive,
        period=per,
    )


def is_attractive(g: Digraph, dec: SccDecomposition) -> bool:
    """True iff every vertex has a directed path into the D0 component.

    Checked by one reverse-direction reachability sweep from D0; when
    true, no edge leaves D0 (D0 is a maximal SCC, so an edge out could
    never come back).
    """
    indptr, indices = _kernels.as_csr32(*g.in_csr())
    members = dec.d0_members().astype(np.int32)
    seen = _kernels.reach_from(indptr, indices, members)
    return bool(seen.all())


def period(g: Digraph, dec: SccDecomposition) -> int:
    """Gcd of cycle lengths within D0; 1 means aperiodic.

    Uses BFS levels from one D0 vertex inside the induced subgraph: every
    induced edge (u, w) contributes gcd term |level(u) + 1 - level(w)|.
    A singleton D0 with no self-loop has no cycles at all; we report 1
    (the walk restricted to it is degenerate either way).
    """
    members = dec.d0_members()
    if members.size == 0:
        raise ValueError("D0 is empty")
    indptr, indices, members = induced_csr(g, members)
    if indices.size == 0:
        return 1
    indptr32, indices32 = _kernels.as_csr32(indptr, indices)
    dist, _, _, _ = _kernels.bfs_structured(indptr32, indices32, 0, -1, False, -1)
    level = dist.astype(np.int64)
    tails = np.repeat(np.arange(members.size), np.diff(indptr))
    terms = np.abs(level[tails] + 1 - level[indices])
    return int(np.gcd.reduce(terms))


def giant_fraction(dec: SccDecomposition, n: int) -> float:
    """|D0| / n, the quantity that converges to the survival constant."""
    return dec.d0_size / n
