"""Compiled BFS kernels shared by the exploration, structure, metrics and
flag-scan code paths.

All kernels operate on CSR adjacency given as (indptr, indices) int32
arrays; vertex counts are assumed to satisfy n * max_degree < 2^31.
Queue-based searches use the textbook array queue; bulk sweeps reuse a
per-chunk stamp array instead of clearing a visited array per source.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

# stop reasons for the capped layered search
LAYERS_DEAD = 0  # a layer came up empty
LAYERS_HIT = 1  # a layer reached the size threshold
LAYERS_OVERFLOW = 2  # cumulative size exceeded the cap
LAYERS_DEPTH = 3  # depth limit reached


def as_csr32(indptr, indices):
    return (
        np.ascontiguousarray(indptr, dtype=np.int32),
        np.ascontiguousarray(indices, dtype=np.int32),
    )


@njit(cache=True)
def bfs_structured(indptr, indices, src, max_depth, sort_children, target):
    """FIFO BFS recording distances, tree parents and discovery order.

    Newly discovered neighbours of each explored vertex are enqueued in
    increasing vertex order (``sort_children`` toggles an insertion sort of
    the adjacency slice; reverse-CSR slices are already ascending).  Parallel
    edges are collapsed by the visited check.  ``max_depth`` < 0 means
    unbounded; ``target`` >= 0 stops the search once that vertex is found.

    Returns (dist, parent, order, count): int32 arrays with -1 for
    unreached / no parent, and the number of discovered vertices.
    """
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, np.int32)
    parent = np.full(n, -1, np.int32)
    order = np.empty(n, np.int32)
    queue = np.empty(n, np.int32)
    buf = np.empty(64, np.int32)

    dist[src] = 0
    order[0] = src
    queue[0] = src
    count = 1
    qhead = 0
    qtail = 1
    if src == target:
        return dist, parent, order, count
    while qhead < qtail:
        u = queue[qhead]
        qhead += 1
        du = dist[u] + 1
        if max_depth >= 0 and du > max_depth:
            continue
        lo = indptr[u]
        hi = indptr[u + 1]
        deg = hi - lo
        if sort_children:
            if deg > buf.shape[0]:
                buf = np.empty(deg, np.int32)
            for t in range(deg):
                buf[t] = indices[lo + t]
            for a in range(1, deg):
                key = buf[a]
                b = a - 1
                while b >= 0 and buf[b] > key:
                    buf[b + 1] = buf[b]
                    b -= 1
                buf[b + 1] = key
            for t in range(deg):
                w = buf[t]
                if dist[w] < 0:
                    dist[w] = du
                    parent[w] = u
                    order[count] = w
                    queue[qtail] = w
                    qtail += 1
                    count += 1
                    if w == target:
                        return dist, parent, order, count
        else:
            for e in range(lo, hi):
                w = indices[e]
                if dist[w] < 0:
                    dist[w] = du
                    parent[w] = u
                    order[count] = w
                    queue[qtail] = w
                    qtail += 1
                    count += 1
                    if w == target:
                        return dist, parent, order, count
    return dist, parent, order, count


@njit(cache=True)
def reach_from(indptr, indices, sources):
    """Vertices reachable from any of ``sources`` (including themselves)."""
    n = indptr.shape[0] - 1
    seen = np.zeros(n, np.bool_)
    queue = np.empty(n, np.int32)
    qtail = 0
    for i in range(sources.shape[0]):
        s = sources[i]
        if not seen[s]:
            seen[s] = True
            queue[qtail] = s
            qtail += 1
    qhead = 0
    while qhead < qtail:
        u = queue[qhead]
        qhead += 1
        for e in range(indptr[u], indptr[u + 1]):
            w = indices[e]
            if not seen[w]:
                seen[w] = True
                queue[qtail] = w
                qtail += 1
    return seen


@njit(cache=True, parallel=True)
def ecc_sweep(indptr, indices, nchunks):
    """Per-source BFS eccentricities over finite distances, in parallel.

    For each source s, ``ecc[s]`` is the largest finite distance from s and
    ``far[s]`` the smallest vertex attaining it (the source itself when
    nothing else is reachable).  Sources are split into chunks so each
    worker reuses one stamp array instead of clearing per source.
    """
    n = indptr.shape[0] - 1
    ecc = np.zeros(n, np.int32)
    far = np.zeros(n, np.int32)
    for c in prange(nchunks):
        lo_s = c * n // nchunks
        hi_s = (c + 1) * n // nchunks
        if hi_s <= lo_s:
            continue
        stamp = np.full(n, -1, np.int32)
        dist = np.zeros(n, np.int32)
        queue = np.empty(n, np.int32)
        for s in range(lo_s, hi_s):
            stamp[s] = s
            dist[s] = 0
            queue[0] = s
            qhead = 0
            qtail = 1
            best = 0
            best_t = s
            while qhead < qtail:
                u = queue[qhead]
                qhead += 1
                du = dist[u] + 1
                for e in range(indptr[u], indptr[u + 1]):
                    w = indices[e]
                    if stamp[w] != s:
                        stamp[w] = s
                        dist[w] = du
                        queue[qtail] = w
                        qtail += 1
                        if du > best:
                            best = du
                            best_t = w
                        elif du == best and w < best_t:
                            best_t = w
            ecc[s] = best
            far[s] = best_t
    return ecc, far


@njit(cache=True, parallel=True)
def max_distance_blocks(indptr, indices):
    """Largest finite distance per 64-source block, bit-parallel.

    Sources are processed 64 at a time: each vertex carries a uint64 mask
    of the block's sources that have reached it.  One level advances every
    frontier vertex's mask along its out-edges; a vertex re-enters the
    frontier whenever new sources reach it.  Returns, per block, the last
    level at which any source discovered any new vertex (= the max finite
    distance from that block's sources).
    """
    n = indptr.shape[0] - 1
    nblocks = (n + 63) // 64
    best = np.zeros(nblocks, np.int32)
    for blk in prange(nblocks):
        base = blk * 64
        width = min(64, n - base)
        reached = np.zeros(n, np.uint64)
        cur_bits = np.zeros(n, np.uint64)
        nxt_bits = np.zeros(n, np.uint64)
        cur_list = np.empty(n, np.int32)
        nxt_list = np.empty(n, np.int32)
        in_nxt = np.zeros(n, np.bool_)
        cur_count = 0
        for b in range(width):
            v = base + b
            bit = np.uint64(1) << np.uint64(b)
            reached[v] |= bit
            if cur_bits[v] == 0:
                cur_list[cur_count] = v
                cur_count += 1
            cur_bits[v] |= bit
        level = 0
        best_level = 0
        while cur_count > 0:
            level += 1
            nxt_count = 0
            for i in range(cur_count):
                u = cur_list[i]
                fbits = cur_bits[u]
                for e in range(indptr[u], indptr[u + 1]):
                    w = indices[e]
                    if not in_nxt[w]:
                        in_nxt[w] = True
                        nxt_list[nxt_count] = w
                        nxt_count += 1
                        nxt_bits[w] = fbits
                    else:
                        nxt_bits[w] |= fbits
                cur_bits[u] = 0
            cur_count = 0
            for i in range(nxt_count):
                w = nxt_list[i]
                new = nxt_bits[w] & ~reached[w]
                nxt_bits[w] = 0
                in_nxt[w] = False
                if new != 0:
                    reached[w] |= new
                    cur_bits[w] = new
                    cur_list[cur_count] = w
                    cur_count += 1
            if cur_count > 0:
                best_level = level
        best[blk] = best_level
    return best


@njit(cache=True)
def ecc_for_sources(indptr, indices, sources):
    """Eccentricity and smallest farthest vertex for an explicit source list."""
    n = indptr.shape[0] - 1
    m = sources.shape[0]
    ecc = np.zeros(m, np.int32)
    far = np.zeros(m, np.int32)
    stamp = np.full(n, -1, np.int32)
    dist = np.zeros(n, np.int32)
    queue = np.empty(n, np.int32)
    for si in range(m):
        s = sources[si]
        stamp[s] = si
        dist[s] = 0
        queue[0] = s
        qhead = 0
        qtail = 1
        best = 0
        best_t = s
        while qhead < qtail:
            u = queue[qhead]
            qhead += 1
            du = dist[u] + 1
            for e in range(indptr[u], indptr[u + 1]):
                w = indices[e]
                if stamp[w] != si:
                    stamp[w] = si
                    dist[w] = du
                    queue[qtail] = w
                    qtail += 1
                    if du > best:
                        best = du
                        best_t = w
                    elif du == best and w < best_t:
                        best_t = w
        ecc[si] = best
        far[si] = best_t
    return ecc, far


@njit(cache=True)
def in_layers_capped(rev_indptr, rev_indices, src, threshold, size_cap, kmax):
    """Layer sizes of the in-neighbourhood of ``src`` with early stopping.

    Grows layers d_0=1, d_1, ... and stops at the first of: an empty layer
    (DEAD), a layer of size >= threshold (HIT), cumulative size above
    ``size_cap`` (OVERFLOW, checked after the layer is complete), or depth
    ``kmax`` (DEPTH; pass kmax < 0 for unbounded).

    Returns (sizes, status, maze, cum): recorded layer sizes including the
    stopping layer, the stop reason, the discovered vertex set in discovery
    order, and its total size.
    """
    n = rev_indptr.shape[0] - 1
    seen = np.zeros(n, np.bool_)
    maze = np.empty(n, np.int32)
    sizes = np.empty(n + 2, np.int64)

    seen[src] = True
    maze[0] = src
    cum = 1
    sizes[0] = 1
    depth = 0
    if threshold <= 1:
        return sizes[:1], LAYERS_HIT, maze[:1], cum
    if kmax == 0:
        return sizes[:1], LAYERS_DEPTH, maze[:1], cum
    layer_lo = 0
    layer_hi = 1
    while True:
        nxt = cum
        for qi in range(layer_lo, layer_hi):
            u = maze[qi]
            for e in range(rev_indptr[u], rev_indptr[u + 1]):
                w = rev_indices[e]
                if not seen[w]:
                    seen[w] = True
                    maze[nxt] = w
                    nxt += 1
        s = nxt - cum
        depth += 1
        sizes[depth] = s
        layer_lo = cum
        layer_hi = nxt
        cum = nxt
        if s == 0:
            return sizes[: depth + 1], LAYERS_DEAD, maze[:cum], cum
        if s >= threshold:
            return sizes[: depth + 1], LAYERS_HIT, maze[:cum], cum
        if cum > size_cap:
            return sizes[: depth + 1], LAYERS_OVERFLOW, maze[:cum], cum
        if kmax >= 0 and depth >= kmax:
            return sizes[: depth + 1], LAYERS_DEPTH, maze[:cum], cum


@njit(cache=True)
def induced_edge_count(heads, r, members, member_mask):
    """Edges (with multiplicity) of the subgraph induced by ``members``."""
    count = 0
    for i in range(members.shape[0]):
        u = members[i]
        base = u * r
        for j in range(r):
            if member_mask[heads[base + j]]:
                count += 1
    return count


@njit(cache=True, parallel=True)
def flag_scan(rev_indptr, rev_indices, heads, r, threshold, size_cap, k_star, nchunks):
    """Scan every vertex for the slippery-tower pattern.

    For each vertex: run the capped layered in-search; a vertex qualifies
    when the threshold is hit at depth k1 >= k_star, the cumulative size
    stays within ``size_cap``, and the induced subgraph on the discovered
    set is a tree (exactly size-1 edges, counting multiplicities).

    Returns (k1, cum, tree, flag): k1 < 0 encodes "never reaches the
    threshold"; ``tree`` is only evaluated for vertices whose scan hit the
    threshold within the cap, and is False otherwise.
    """
    n = rev_indptr.shape[0] - 1
    k1_arr = np.full(n, -1, np.int64)
    cum_arr = np.zeros(n, np.int64)
    tree_arr = np.zeros(n, np.bool_)
    flag_arr = np.zeros(n, np.bool_)
    for c in prange(nchunks):
        lo_s = c * n // nchunks
        hi_s = (c + 1) * n // nchunks
        if hi_s <= lo_s:
            continue
        stamp = np.full(n, -1, np.int32)
        maze = np.empty(n, np.int32)
        for v in range(lo_s, hi_s):
            stamp[v] = v
            maze[0] = v
            cum = 1
            depth = 0
            layer_lo = 0
            layer_hi = 1
            status = LAYERS_HIT if threshold <= 1 else -1
            while status < 0:
                nxt = cum
                for qi in range(layer_lo, layer_hi):
                    u = maze[qi]
                    for e in range(rev_indptr[u], rev_indptr[u + 1]):
                        w = rev_indices[e]
                        if stamp[w] != v:
                            stamp[w] = v
                            maze[nxt] = w
                            nxt += 1
                s = nxt - cum
                depth += 1
                layer_lo = cum
                layer_hi = nxt
                cum = nxt
                if s == 0:
                    status = LAYERS_DEAD
                elif s >= threshold:
                    status = LAYERS_HIT
                elif cum > size_cap:
                    status = LAYERS_OVERFLOW
            cum_arr[v] = cum
            if status == LAYERS_HIT:
                k1_arr[v] = depth
                edge_count = 0
                for i in range(cum):
                    u = maze[i]
                    base = u * r
                    for j in range(r):
                        if stamp[heads[base + j]] == v:
                            edge_count += 1
                tree = edge_count == cum - 1
                tree_arr[v] = tree
                flag_arr[v] = tree and depth >= k_star and cum <= size_cap
    return k1_arr, cum_arr, tree_arr, flag_arr
