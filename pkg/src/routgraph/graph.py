"""Random r-out regular directed multigraphs.

A graph on n vertices where every vertex has exactly r out-edges whose
heads are iid uniform over the vertex set.  Loops and parallel edges are
kept: edge multiplicities drive the random-walk transition weights, so
they must survive generation.

Vertices are 0-based everywhere in the API.  Serializers translate to
1-based ids, which is the convention used in all human-facing output.
"""

from __future__ import annotations

import json
import threading

import numpy as np

from .rng import check_seed, make_generator

DEFAULT_SIMPLE_RETRY_CAP = 10**6


class Digraph:
    """Immutable r-out regular directed multigraph in flat adjacency form.

    ``heads`` is a length n*r integer array; entry ``i*r + j`` is the head
    of the j-th edge out of vertex i.  The constant out-degree makes the
    layout CSR with uniform stride r: edge lookup is O(1) and BFS scans
    are contiguous.  The array is frozen after construction; a reverse
    (in-edge) index is built lazily on first use and cached.
    """

    __slots__ = ("n", "r", "heads", "_rev", "_rev_lock")

    def __init__(self, n: int, r: int, heads: np.ndarray):
        heads = np.ascontiguousarray(heads, dtype=np.int64)
        if n < 1 or r < 1:
            raise ValueError(f"need n >= 1 and r >= 1, got n={n}, r={r}")
        if heads.shape != (n * r,):
            raise ValueError(f"heads must have shape ({n * r},), got {heads.shape}")
        if heads.size and (heads.min() < 0 or heads.max() >= n):
            raise ValueError("heads contain an invalid vertex id")
        heads.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "heads", heads)
        object.__setattr__(self, "_rev", None)
        object.__setattr__(self, "_rev_lock", threading.Lock())

    def __setattr__(self, name, value):
        raise AttributeError("Digraph is immutable")

    def __repr__(self):
        return f"Digraph(n={self.n}, r={self.r})"

    def __eq__(self, other):
        if not isinstance(other, Digraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.r == other.r
            and np.array_equal(self.heads, other.heads)
        )

    def __hash__(self):
        return hash((self.n, self.r, self.heads.tobytes()))

    def out_edges(self, v: int) -> np.ndarray:
        """Heads of the r edges leaving v, in slot order (read-only view)."""
        return self.heads[v * self.r : (v + 1) * self.r]

    def out_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) view of the forward adjacency."""
        indptr = np.arange(self.n + 1, dtype=np.int64) * self.r
        return indptr, self.heads

    def in_csr(self) -> tuple[np.ndarray, np.ndarray]:
        """(indptr, indices) of the reverse adjacency, built once and cached.

        For each vertex v the slice lists the tails of edges into v in
        ascending tail order, one entry per parallel edge.  Thread-safe:
        concurrent first calls build the index exactly once.
        """
        rev = self._rev
        if rev is not None:
            return rev
        with self._rev_lock:
            if self._rev is None:
                order = np.argsort(self.heads, kind="stable")
                tails = (order // self.r).astype(np.int64)
                counts = np.bincount(self.heads, minlength=self.n)
                indptr = np.zeros(self.n + 1, dtype=np.int64)
                np.cumsum(counts, out=indptr[1:])
                tails.setflags(write=False)
                indptr.setflags(write=False)
                object.__setattr__(self, "_rev", (indptr, tails))
        return self._rev


def generate(n: int, r: int, seed: int) -> Digraph:
    """Draw a random r-out regular multigraph on n vertices.

    The n*r heads are independent uniform draws over the n vertices,
    taken in (vertex, slot) lexicographic order from a PCG64 stream, so
    a given (n, r, seed) always reproduces the same graph byte for byte.
    """
    if n < 1 or r < 1:
        raise ValueError(f"need n >= 1 and r >= 1, got n={n}, r={r}")
    check_seed(seed)
    rng = make_generator(seed)
    heads = rng.integers(0, n, size=n * r, dtype=np.int64)
    return Digraph(n, r, heads)


def _is_simple(n: int, r: int, heads: np.ndarray) -> bool:
    rows = heads.reshape(n, r)
    if np.any(rows == np.arange(n, dtype=np.int64)[:, None]):
        return False
    srt = np.sort(rows, axis=1)
    return not np.any(srt[:, 1:] == srt[:, :-1])


def generate_simple(
    n: int, r: int, seed: int, retry_cap: int = DEFAULT_SIMPLE_RETRY_CAP
) -> Digraph:
    """Rejection-sample until the graph has no loops and no parallel edges.

    Conditioning the uniform multigraph on simplicity gives exactly the
    uniform simple r-out digraph, so plain rejection is distribution-exact.
    The acceptance rate is bounded away from zero for fixed r (it decays
    like exp(-Theta(r^2)) in r, not in n), so the retry cap only guards
    pathological parameters.
    """
    if n <= r:
        raise ValueError(f"a simple r-out digraph needs n > r, got n={n}, r={r}")
    check_seed(seed)
    rng = make_generator(seed)
    for _ in range(retry_cap):
        heads = rng.integers(0, n, size=n * r, dtype=np.int64)
        if _is_simple(n, r, heads):
            return Digraph(n, r, heads)
    raise RuntimeError(
        f"generate_simple(n={n}, r={r}): no simple draw in {retry_cap} attempts"
    )


def loop_vertices(g: Digraph) -> set[int]:
    """Vertices all of whose r out-edges are self-loops."""
    rows = g.heads.reshape(g.n, g.r)
    all_self = np.all(rows == np.arange(g.n, dtype=np.int64)[:, None], axis=1)
    return set(np.flatnonzero(all_self).tolist())


def induced_csr(
    g: Digraph, members: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """CSR adjacency of the subgraph induced by ``members``.

    Returns (indptr, indices, members_sorted) with indices in local ids
    (positions within the sorted member array).  Parallel edges are kept.
    """
    members = np.unique(np.asarray(members, dtype=np.int64))
    if members.size == 0:
        raise ValueError("induced subgraph needs a nonempty vertex set")
    if members[0] < 0 or members[-1] >= g.n:
        raise ValueError("member vertex id out of range")
    mask = np.zeros(g.n, dtype=bool)
    mask[members] = True
    local = np.full(g.n, -1, dtype=np.int64)
    local[members] = np.arange(members.size)
    rows = g.heads.reshape(g.n, g.r)[members]
    keep = mask[rows]
    indptr = np.zeros(members.size + 1, dtype=np.int64)
    np.cumsum(keep.sum(axis=1), out=indptr[1:])
    indices = local[rows[keep]]
    return indptr, indices, members


# -- serialization (1-based vertex ids in both formats) ----------------------


def to_text(g: Digraph) -> str:
    """Edge-list text: header line ``n=<n> r=<r>``, then ``i: h1 ... hr``."""
    lines = [f"n={g.n} r={g.r}"]
    rows = g.heads.reshape(g.n, g.r)
    for i in range(g.n):
        lines.append(f"{i + 1}: " + " ".join(str(h + 1) for h in rows[i]))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Digraph:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty graph text")
    header = dict(part.split("=") for part in lines[0].split())
    n, r = int(header["n"]), int(header["r"])
    heads = np.empty(n * r, dtype=np.int64)
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} vertex lines, got {len(lines) - 1}")
    for ln in lines[1:]:
        label, rest = ln.split(":", 1)
        i = int(label) - 1
        vals = [int(tok) - 1 for tok in rest.split()]
        if len(vals) != r:
            raise ValueError(f"vertex {i + 1}: expected {r} heads, got {len(vals)}")
        heads[i * r : (i + 1) * r] = vals
    return Digraph(n, r, heads)


def to_json(g: Digraph) -> str:
    return json.dumps(
        {"n": g.n, "r": g.r, "heads": (g.heads + 1).tolist()}, separators=(",", ":")
    )


def from_json(text: str) -> Digraph:
    obj = json.loads(text)
    heads = np.asarray(obj["heads"], dtype=np.int64) - 1
    return Digraph(int(obj["n"]), int(obj["r"]), heads)
