"""Stationary distribution of the simple random walk on the giant component,
its extremes, maze hardness, and the two extremal-bound validators.

The walk picks one of its r out-edges uniformly, so transition weights are
edge multiplicities divided by r (a vertex with two parallel edges to w
moves to w with probability 2/r, not 1/r).  All solvers work on the D0
component and require it to be attractive, which guarantees no transition
leaves the support.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exploration import ibfs
from .graph import Digraph
from .rng import derive_seed, make_generator
from .structure import SccDecomposition

DEFAULT_POWER_TOL = 1e-12
DEFAULT_POWER_MAX_ITER = 10**6
DEFAULT_DIRECT_CAP = 2000
DEFAULT_ESCAPE_STATE_CAP = 10**4
DEFAULT_WALK_STEP_BUDGET = 10**9


@dataclass(frozen=True)
class StationaryProfile:
    """The stationary vector on D0 with its extremes and solver telemetry."""

    n: int  # ambient vertex count (basis of the exponents)
    support: np.ndarray  # D0 vertex ids, ascending
    pi: np.ndarray  # probabilities aligned with support
    residual: float  # l1 norm of pi P - pi against the plain operator
    iterations: int
    converged: bool

    @property
    def pi_max(self) -> float:
        return float(self.pi.max())

    @property
    def pi_min(self) -> float:
        return float(self.pi.min())

    @property
    def argmax(self) -> int:
        return int(self.support[int(np.argmax(self.pi))])

    @property
    def argmin(self) -> int:
        return int(self.support[int(np.argmin(self.pi))])

    @property
    def exp_max(self) -> float:
        """-log_n(pi_max)."""
        return -math.log(self.pi_max) / math.log(self.n)

    @property
    def exp_min(self) -> float:
        """-log_n(pi_min)."""
        return -math.log(self.pi_min) / math.log(self.n)

    def probability_of(self, v: int) -> float:
        """pi(v) for a global vertex id; 0 for vertices outside D0."""
        idx = np.searchsorted(self.support, v)
        if idx < self.support.size and self.support[idx] == v:
            return float(self.pi[idx])
        return 0.0

    def to_csv_fields(self) -> list[str]:
        return [
            f"{self.pi_max:.12g}",
            f"{self.pi_min:.12g}",
            f"{self.exp_max:.12g}",
            f"{self.exp_min:.12g}",
            f"{self.residual:.12g}",
            str(self.iterations),
        ]


def _require_closed_d0(g: Digraph, dec: SccDecomposition) -> np.ndarray:
    if not dec.attractive:
        raise ValueError(
            "walk support is only well-defined when D0 is attractive "
            "(otherwise transitions exit the component)"
        )
    return dec.d0_members()


def transition_row(g: Digraph, dec: SccDecomposition, v: int) -> dict[int, float]:
    """Transition distribution out of v: multiplicity / r per head."""
    members = _require_closed_d0(g, dec)
    if dec.comp_id[v] != dec.d0:
        raise ValueError(f"vertex {v} is not in D0")
    del members
    row: dict[int, float] = {}
    for w in g.out_edges(v):
        w = int(w)
        if dec.comp_id[w] != dec.d0:
            raise ValueError(
                f"edge {v}->{w} leaves D0; attractivity check should forbid this"
            )
        row[w] = row.get(w, 0.0) + 1.0 / g.r
    return row


def _transition_transpose(g: Digraph, members: np.ndarray) -> sp.csr_matrix:
    """Column-stochastic operator T with T[w, u] = multiplicity(u, w) / r."""
    local = np.full(g.n, -1, dtype=np.int64)
    local[members] = np.arange(members.size)
    rows = g.heads.reshape(g.n, g.r)[members]
    if np.any(local[rows] < 0):
        raise ValueError("an edge leaves D0; the component is not closed")
    tails = np.repeat(np.arange(members.size, dtype=np.int64), g.r)
    heads_local = local[rows].reshape(-1)
    data = np.full(heads_local.size, 1.0 / g.r)
    mat = sp.csr_matrix(
        (data, (heads_local, tails)), shape=(members.size, members.size)
    )
    mat.sum_duplicates()
    return mat


def _profile(n, members, pi, residual, iterations, converged) -> StationaryProfile:
    pi = np.maximum(pi, 0.0)
    pi = pi / pi.sum()
    return StationaryProfile(
        n=n,
        support=members,
        pi=pi,
        residual=residual,
        iterations=iterations,
        converged=converged,
    )


def stationary_power(
    g: Digraph,
    dec: SccDecomposition,
    tol: float = DEFAULT_POWER_TOL,
    max_iter: int = DEFAULT_POWER_MAX_ITER,
) -> StationaryProfile:
    """Power iteration with the half-lazy operator (I + P) / 2.

    The lazy mix preserves the stationary vector and makes the iteration
    converge even when D0 is periodic.  Iteration stops when the l1 change
    per step drops to ``tol``; the reported residual is measured against
    the plain (non-lazy) operator.  On max_iter exhaustion the best
    iterate is returned flagged non-converged.
    """
    members = _require_closed_d0(g, dec)
    T = _transition_transpose(g, members)
    m = members.size
    pi = np.full(m, 1.0 / m)
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        nxt = 0.5 * pi + 0.5 * (T @ pi)
        nxt /= nxt.sum()
        change = float(np.abs(nxt - pi).sum())
        pi = nxt
        if change <= tol:
            converged = True
            break
    residual = float(np.abs(T @ pi - pi).sum())
    return _profile(g.n, members, pi, residual, iterations, converged)


def stationary_direct(
    g: Digraph, dec: SccDecomposition, cap: int = DEFAULT_DIRECT_CAP
) -> StationaryProfile:
    """Dense linear solve of pi P = pi, sum(pi) = 1 (oracle-grade).

    Replaces one balance equation with the normalization row; the system
    is nonsingular for irreducible chains, which D0 guarantees.
    """
    members = _require_closed_d0(g, dec)
    m = members.size
    if m > cap:
        raise ValueError(f"direct solve capped at {cap} states, got {m}")
    T = _transition_transpose(g, members).toarray()
    A = T - np.eye(m)
    A[0, :] = 1.0
    b = np.zeros(m)
    b[0] = 1.0
    try:
        pi = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - irreducible => regular
        raise RuntimeError(f"singular stationary system on {m} states: {exc}") from exc
    residual = float(np.abs(T @ pi - pi).sum())
    return _profile(g.n, members, pi, residual, 1, True)


@dataclass(frozen=True)
class ReturnTimeEstimate:
    vertex: int
    trials: int
    mean: float
    stderr: float


def mean_return_time(
    g: Digraph,
    dec: SccDecomposition,
    v: int,
    trials: int,
    seed: int,
    step_budget: int = DEFAULT_WALK_STEP_BUDGET,
) -> ReturnTimeEstimate:
    """Monte Carlo mean first-return time of the plain walk started at v.

    The expectation equals 1 / pi(v).  Each trial runs on its own derived
    sub-stream, so results do not depend on execution order.  A per-trial
    step cap of step_budget / trials aborts pathological runs.
    """
    if dec.comp_id[v] != dec.d0:
        raise ValueError(f"vertex {v} is not in D0")
    _require_closed_d0(g, dec)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    cap = max(1, step_budget // trials)
    heads = g.heads
    r = g.r
    times = np.empty(trials)
    for t in range(trials):
        rng = make_generator(derive_seed(seed, t))
        x = v
        steps = 0
        done = False
        while not done:
            block_size = min(512, cap - steps)
            if block_size <= 0:
                raise RuntimeError(
                    f"return-time walk from {v} exceeded {cap} steps "
                    f"(trial {t}); the chain looks pathological"
                )
            block = rng.integers(0, r, size=block_size)
            for u in block:
                x = int(heads[x * r + u])
                steps += 1
                if x == v:
                    done = True
                    break
        times[t] = steps
    mean = float(times.mean())
    stderr = float(times.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return ReturnTimeEstimate(vertex=v, trials=trials, mean=mean, stderr=stderr)


# -- mazes --------------------------------------------------------------------


@dataclass(frozen=True)
class MazeHardness:
    """Hardness of the depth-k in-neighbourhood maze around a vertex.

    A maze vertex is single-exit when exactly one of its r out-edges
    (counting multiplicity) stays inside the maze.  The hardness h is the
    minimum, over directed paths from the entrance layer to the center
    inside the maze, of the number of single-exit vertices on the path,
    which is the largest h such that the maze is h-hard.
    """

    center: int
    depth: int
    maze: np.ndarray  # vertices of the maze, ascending
    hardness: int
    witness_path: tuple[int, ...]  # entrance-to-center path attaining h


@dataclass(frozen=True)
class EscapeProbability:
    center: int
    depth: int
    value: float  # P_v(exit the maze before returning to v)


def _maze_arrays(g: Digraph, v: int, k: int):
    res = ibfs(g, v, max_depth=k)
    maze = res.order
    entrances = maze[res.dist[maze] == k]
    return res, np.sort(maze), entrances


def maze_hardness(g: Digraph, v: int, k: int) -> MazeHardness:
    """Exact maze hardness via 0/1 vertex-weight shortest path (deque BFS)."""
    if k < 1:
        raise ValueError(f"maze depth must be >= 1, got {k}")
    res, maze, entrances = _maze_arrays(g, v, k)
    if entrances.size == 0:
        raise ValueError(f"entrance layer at depth {k} around {v} is empty")
    member = np.zeros(g.n, dtype=bool)
    member[maze] = True
    rows = g.heads.reshape(g.n, g.r)
    inside_degree = member[rows[maze]].sum(axis=1)
    weight = {int(u): int(inside_degree[i] == 1) for i, u in enumerate(maze)}

    # multi-source 0/1 BFS over induced edges, vertex costs on every visit
    INF = math.inf
    cost = {int(u): INF for u in maze}
    pred: dict[int, int | None] = {}
    dq: deque[int] = deque()
    for u in sorted(int(x) for x in entrances):
        c = weight[u]
        if c < cost[u]:
            cost[u] = c
            pred[u] = None
            if c == 0:
                dq.appendleft(u)
            else:
                dq.append(u)
    while dq:
        u = dq.popleft()
        cu = cost[u]
        for w in rows[u]:
            w = int(w)
            if not member[w]:
                continue
            cw = cu + weight[w]
            if cw < cost[w]:
                cost[w] = cw
                pred[w] = u
                if weight[w] == 0:
                    dq.appendleft(w)
                else:
                    dq.append(w)
    h = cost[v]
    assert math.isfinite(h), "an entrance always reaches the center via tree edges"
    path = [v]
    while pred.get(path[-1]) is not None:
        path.append(pred[path[-1]])
    path.reverse()
    return MazeHardness(
        center=v,
        depth=k,
        maze=maze.astype(np.int64),
        hardness=int(h),
        witness_path=tuple(path),
    )


def escape_probability(
    g: Digraph, v: int, k: int, state_cap: int = DEFAULT_ESCAPE_STATE_CAP
) -> EscapeProbability:
    """P_v(first exit of the maze happens no later than the return to v).

    Exact absorbing-chain computation on the maze states: one step is
    unrolled from v; from every other maze vertex the walk either exits
    (success), hits v (failure) or moves within the maze.
    """
    if k < 1:
        raise ValueError(f"maze depth must be >= 1, got {k}")
    _, maze, _ = _maze_arrays(g, v, k)
    if maze.size > state_cap:
        raise ValueError(f"maze has {maze.size} states, cap is {state_cap}")
    member = np.zeros(g.n, dtype=bool)
    member[maze] = True
    # transient states: maze minus the center
    transient = maze[maze != v]
    local = {int(u): i for i, u in enumerate(transient)}
    m = transient.size
    rows = g.heads.reshape(g.n, g.r)
    if m == 0:
        exits = int(np.count_nonzero(~member[rows[v]]))
        return EscapeProbability(center=v, depth=k, value=exits / g.r)
    dense = m <= 1500
    Q = np.zeros((m, m)) if dense else sp.lil_matrix((m, m))
    b = np.zeros(m)
    for u in transient:
        iu = local[int(u)]
        for w in rows[u]:
            w = int(w)
            if not member[w]:
                b[iu] += 1.0 / g.r
            elif w != v:
                Q[iu, local[w]] += 1.0 / g.r
    if dense:
        e = np.linalg.solve(np.eye(m) - Q, b)
    else:
        e = spla.spsolve(sp.eye(m, format="csr") - Q.tocsr(), b)
    value = 0.0
    for w in rows[v]:
        w = int(w)
        if not member[w]:
            value += 1.0 / g.r
        elif w != v:
            value += e[local[w]] / g.r
    return EscapeProbability(center=v, depth=k, value=float(min(max(value, 0.0), 1.0)))


def escape_probability_mc(
    g: Digraph, v: int, k: int, trials: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo cross-check of escape_probability: (estimate, stderr)."""
    _, maze, _ = _maze_arrays(g, v, k)
    member = np.zeros(g.n, dtype=bool)
    member[maze] = True
    heads = g.heads
    r = g.r
    rng = make_generator(seed)
    hits = 0
    for _ in range(trials):
        x = v
        while True:
            x = int(heads[x * r + int(rng.integers(0, r))])
            if not member[x]:
                hits += 1
                break
            if x == v:
                break
    p = hits / trials
    return p, math.sqrt(max(p * (1 - p), 1.0 / trials) / trials)


# -- extremal-bound validators ------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    ok: bool
    lhs: float
    rhs: float
    margin: float
    detail: str


def validate_pimax_bound(
    profile: StationaryProfile,
    hardness: MazeHardness,
    escape: EscapeProbability,
    r: int,
    slack: float = 1e-9,
) -> BoundReport:
    """Check pi(v) * r^h * P_escape <= 1 + slack for an h-hard maze around v.

    A violation would falsify the implementation (the inequality is a
    theorem for exact quantities), so callers treat ok=False as a hard
    failure.  Evaluated in exact rational arithmetic so r^h cannot
    overflow.
    """
    if hardness.center != escape.center or hardness.depth != escape.depth:
        raise ValueError("hardness and escape reports describe different mazes")
    v = hardness.center
    pi_v = profile.probability_of(v)
    lhs_frac = Fraction(pi_v) * r**hardness.hardness * Fraction(escape.value)
    lhs = float(lhs_frac) if lhs_frac < 10**300 else math.inf
    ok = lhs_frac <= 1 + Fraction(slack)
    return BoundReport(
        ok=bool(ok),
        lhs=lhs,
        rhs=1.0 + slack,
        margin=1.0 + slack - lhs,
        detail=(
            f"pi({v})={pi_v:.6g}, h={hardness.hardness}, "
            f"escape={escape.value:.6g}"
        ),
    )


def validate_pimin_bound(
    profile: StationaryProfile, d: int, r: int, slack: float | None = None
) -> BoundReport:
    """Check pi_min >= 1 / (1 + d * r^d) for an ergodic chain of diameter d.

    Compared in exact rational arithmetic so gigantic r^d cannot overflow;
    ``slack`` defaults to the profile's solver residual.
    """
    if slack is None:
        slack = max(profile.residual, 1e-15)
    denom = 1 + d * r**d
    pi_min = profile.pi_min
    ok = Fraction(pi_min + slack) * denom >= 1
    rhs = 1.0 / denom if denom < 10**300 else 0.0
    return BoundReport(
        ok=bool(ok),
        lhs=pi_min,
        rhs=rhs,
        margin=pi_min - rhs,
        detail=f"pi_min={pi_min:.6g} vs 1/(1+{d}*{r}^{d})",
    )
