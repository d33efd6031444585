"""Model constants and Poisson Galton-Watson tree machinery.

The giant-component fraction lambda_r is the largest root of
1 - x = exp(-r x); it is also the survival probability of a branching
process with Poisson(r) offspring, which is how the in-neighbourhoods of
the random graph behave locally.  The derived constant

    eta_r = 1 / (log_r(1/(1 - lambda_r)) - 1) = log(r) / (lambda_r * r - log r)

controls the second-order diameter term and the smallest stationary mass.

For r >= 38 the root is within double rounding of 1, so the solver works
on the complement mu = 1 - lambda (representable down to ~1e-300) and the
constants record both.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .rng import derive_seed, make_generator

DEFAULT_POP_CAP = 10**7


@dataclass(frozen=True)
class ModelConstants:
    r: int
    lambda_r: float  # giant fraction / survival probability
    one_minus_lambda: float  # exact complement (meaningful when lambda rounds to 1)
    eta_r: float
    residual: float  # |1 - lambda - exp(-r*lambda)| at the returned root
    eta_gap: float  # disagreement between the two closed forms of eta_r

    def to_csv_row(self) -> str:
        return f"{self.r},{self.lambda_r!r},{self.eta_r!r}"


def _survival_complement(r: int) -> float:
    """Bisection for mu in (0, 1/2] solving mu = exp(-r (1 - mu)).

    g(mu) = mu - exp(-r(1-mu)) is strictly increasing on (0, 1/2] for
    r >= 2 (its derivative 1 - r e^{-r(1-mu)} stays positive there), so
    plain bisection converges to the unique root.
    """
    lo, hi = 5e-324, 0.5
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if mid - math.exp(-r * (1.0 - mid)) < 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def solve_constants(r: int) -> ModelConstants:
    """Solve for lambda_r and eta_r with cross-checked closed forms."""
    if r < 2:
        raise ValueError(
            f"constants need r >= 2 (for r = 1 the only root is 0), got r={r}"
        )
    mu = _survival_complement(r)
    lam = 1.0 - mu
    log_r = math.log(r)
    # log_r(1/mu) - 1, computed from mu so it survives lambda ~ 1
    eta_a = 1.0 / (-math.log(mu) / log_r - 1.0)
    eta_b = log_r / (lam * r - log_r)
    residual = abs(1.0 - lam - math.exp(-r * lam))
    return ModelConstants(
        r=r,
        lambda_r=lam,
        one_minus_lambda=mu,
        eta_r=eta_b,
        residual=residual,
        eta_gap=abs(eta_a - eta_b),
    )


@dataclass(frozen=True)
class GwSample:
    """Generation sizes of one branching-process realization."""

    generation_sizes: list[int]
    truncated: bool  # hit the depth or population cap while still alive

    @property
    def extinct(self) -> bool:
        return not self.truncated and self.generation_sizes[-1] == 0


def gw_sample(
    r: int, kmax: int, pop_cap: int = DEFAULT_POP_CAP, seed: int = 0
) -> GwSample:
    """Simulate generation sizes of a Poisson(r) branching process.

    Each generation's size is the sum of iid Poisson(r) offspring counts
    over the current generation.  Stops at depth ``kmax`` or once the
    total population exceeds ``pop_cap`` (flagged, never silent).
    """
    if kmax < 0:
        raise ValueError(f"kmax must be >= 0, got {kmax}")
    rng = make_generator(seed)
    sizes = [1]
    total = 1
    for _ in range(kmax):
        cur = sizes[-1]
        if cur == 0:
            sizes.append(0)
            continue
        nxt = int(rng.poisson(r, size=cur).sum())
        sizes.append(nxt)
        total += nxt
        if total > pop_cap:
            return GwSample(generation_sizes=sizes, truncated=True)
    truncated = sizes[-1] > 0 and len(sizes) == kmax + 1 and kmax > 0
    return GwSample(generation_sizes=sizes, truncated=truncated)


def gw_generation_sizes_bulk(
    r: int, kmax: int, trials: int, seed: int
) -> np.ndarray:
    """Generation-size matrix (trials x kmax+1) for many processes at once.

    Uses the identity that a sum of m iid Poisson(r) draws is Poisson(r*m),
    which lets a whole cohort advance one generation per vectorized draw.
    """
    rng = make_generator(seed)
    sizes = np.ones(trials, dtype=np.int64)
    out = np.empty((trials, kmax + 1), dtype=np.int64)
    out[:, 0] = sizes
    for k in range(1, kmax + 1):
        alive = sizes > 0
        nxt = np.zeros(trials, dtype=np.int64)
        if alive.any():
            nxt[alive] = rng.poisson(r * sizes[alive])
        sizes = nxt
        out[:, k] = sizes
    return out


@dataclass(frozen=True)
class TailEstimate:
    r: int
    k: int
    omega: int
    trials: int
    estimate: float  # Monte Carlo frequency of {0 < generation_k < omega}
    stderr: float
    exact: float  # truncated-recursion value (see gw_tail_exact)

    def to_csv_row(self) -> str:
        return (
            f"{self.r},{self.k},{self.omega},{self.trials},"
            f"{self.estimate!r},{self.stderr!r}"
        )


def gw_tail_exact(r: int, k: int, omega: int, support_cap: int | None = None) -> float:
    """P(0 < generation_k < omega) by recursion on generation-size laws.

    Keeps the exact distribution of the generation size on {0..M} with
    M = ``support_cap`` (default max(50*omega, 400)) and lumps all mass
    above M into an absorbing "large" bucket.  A generation of size > M
    falling back below omega within the horizon would need a Poisson(r*M)
    draw below omega, whose probability is astronomically small, so the
    lumping error is far below double precision at these parameters.
    """
    if k < 0 or omega < 1:
        raise ValueError("need k >= 0 and omega >= 1")
    if support_cap is None:
        support_cap = max(50 * omega, 400)
    m = support_cap
    # transition[i, j] = P(Poisson(r*i) = j), rows i = 0..m, columns j = 0..m
    js = np.arange(m + 1, dtype=np.float64)
    log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, m + 1)))))
    probs = np.zeros((m + 1, m + 1))
    probs[0, 0] = 1.0
    for i in range(1, m + 1):
        lam = float(r * i)
        logs = -lam + js * math.log(lam) - log_fact
        probs[i] = np.exp(logs)
    dist = np.zeros(m + 1)
    dist[1] = 1.0
    for _ in range(k):
        dist = dist @ probs
        # mass escaping above m is dropped (absorbed in the "large" bucket)
    return float(dist[1:omega].sum())


def gw_tail_prob(
    r: int, k: int, omega: int, trials: int, seed: int
) -> TailEstimate:
    """Estimate P(0 < generation_k < omega) with Monte Carlo and recursion."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if omega <= 1:
        # the event {0 < size < 1} is empty
        return TailEstimate(r, k, omega, trials, 0.0, 0.0, 0.0)
    sizes = gw_generation_sizes_bulk(r, k, trials, seed)[:, k]
    hits = int(np.count_nonzero((sizes > 0) & (sizes < omega)))
    p_hat = hits / trials
    stderr = math.sqrt(max(p_hat * (1.0 - p_hat), 1.0 / trials) / trials)
    return TailEstimate(
        r=r,
        k=k,
        omega=omega,
        trials=trials,
        estimate=p_hat,
        stderr=stderr,
        exact=gw_tail_exact(r, k, omega),
    )


# -- tree-shape coupling ------------------------------------------------------


def _gw_shapes(r: int, k: int, trials: int, seed: int) -> list[tuple[int, ...]]:
    """Child-count sequences (breadth-first order, depths < k) of GW trees."""
    rng = make_generator(seed)
    shapes = []
    for _ in range(trials):
        counts = []
        gen = 1
        for _ in range(k):
            if gen == 0:
                break
            kids = rng.poisson(r, size=gen)
            counts.extend(int(c) for c in kids)
            gen = int(kids.sum())
        shapes.append(tuple(counts))
    return shapes


def _graph_shapes(
    n: int, r: int, k: int, trials: int, seed: int, offset: int = 0
) -> list[tuple[int, ...]]:
    """Child-count sequences of depth-k in-neighbourhood trees in the graph.

    Each trial draws a fresh graph (trial t uses the same stream as
    ``generate(n, r, derive_seed(seed, offset + t))``) and encodes the
    inward BFS tree of vertex 0: an explored vertex's children are its
    newly discovered in-neighbours in ascending order, so the child counts
    in exploration order (depths < k) match the GW encoding one-to-one.
    The in-neighbour lookups mask the raw heads array directly; building a
    full reverse index per trial would dominate the runtime.
    """
    shapes = []
    for t in range(trials):
        rng = make_generator(derive_seed(seed, offset + t))
        heads = rng.integers(0, n, size=n * r, dtype=np.int64)
        seen = {0}
        frontier = [0]
        counts = []
        for _ in range(k):
            nxt: list[int] = []
            for u in frontier:
                tails = np.unique(np.flatnonzero(heads == u) // r)
                kids = [int(w) for w in tails if int(w) not in seen]
                counts.append(len(kids))
                seen.update(kids)
                nxt.extend(kids)
            frontier = nxt
            if not frontier:
                break
        shapes.append(tuple(counts))
    return shapes


@dataclass(frozen=True)
class CouplingReport:
    n: int
    r: int
    k: int
    trials: int
    size_cap: int
    tv: float  # empirical total-variation distance between shape laws


def coupling_tv(
    n: int,
    r: int,
    k: int,
    trials: int,
    seed: int,
    size_cap: int = 9,
) -> CouplingReport:
    """Empirical TV distance between graph in-trees and GW trees at depth k.

    Shapes with more than ``size_cap`` vertices are lumped into a single
    bucket, which keeps the effective support small enough that the
    sampling noise floor of the TV estimate stays well below the real
    signal at the scales of interest.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    graph_shapes = _graph_shapes(n, r, k, trials, derive_seed(seed, 1))
    gw_shapes = _gw_shapes(r, k, trials, derive_seed(seed, 2))

    def bucket(shape: tuple[int, ...]):
        # total vertices = 1 root + all recorded children
        if 1 + sum(shape) > size_cap:
            return "big"
        return shape

    c1 = Counter(bucket(s) for s in graph_shapes)
    c2 = Counter(bucket(s) for s in gw_shapes)
    tv = 0.5 * sum(
        abs(c1.get(key, 0) / trials - c2.get(key, 0) / trials)
        for key in set(c1) | set(c2)
    )
    return CouplingReport(n=n, r=r, k=k, trials=trials, size_cap=size_cap, tv=tv)
