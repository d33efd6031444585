"""Random deterministic finite automata over the r-out graph.

A DFA is the r-out graph with the j-th edge out of each state carrying
symbol j, plus a uniform start state and iid fair-coin accepting bits.
Executing a uniform random word of length m is, by construction, the same
process as an m-step simple random walk from the start state: both follow
X_{t+1} = heads[X_t, U_t] for iid uniform symbols U_t.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Digraph, generate
from .rng import derive_seed, make_generator


@dataclass(frozen=True)
class Dfa:
    graph: Digraph
    start: int
    accepting: np.ndarray  # bool per state

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def r(self) -> int:
        return self.graph.r


def random_dfa(n: int, r: int, seed: int) -> Dfa:
    """Uniform random DFA: graph, start state and accepting set.

    Stream split: the transition graph uses child stream 0 of the seed,
    the start state stream 1, the accepting bits stream 2, so re-running
    with the same seed is bit-identical.
    """
    g = generate(n, r, derive_seed(seed, 0))
    start = int(make_generator(derive_seed(seed, 1)).integers(0, n))
    bits = make_generator(derive_seed(seed, 2)).integers(0, 2, size=n)
    accepting = bits.astype(bool)
    accepting.setflags(write=False)
    return Dfa(graph=g, start=start, accepting=accepting)


def run_word(d: Dfa, word) -> tuple[int, bool]:
    """Walk the word from the start state; returns (final state, accepted)."""
    x = d.start
    heads = d.graph.heads
    r = d.r
    for i, sym in enumerate(word):
        sym = int(sym)
        if not 0 <= sym < r:
            raise ValueError(f"symbol {sym} at position {i} outside alphabet [0, {r})")
        x = int(heads[x * r + sym])
    return x, bool(d.accepting[x])


def walk_states(d: Dfa, word) -> list[int]:
    """Full state trajectory x_0, ..., x_t of a word execution."""
    x = d.start
    states = [x]
    heads = d.graph.heads
    r = d.r
    for sym in word:
        sym = int(sym)
        if not 0 <= sym < r:
            raise ValueError(f"symbol {sym} outside alphabet [0, {r})")
        x = int(heads[x * r + sym])
        states.append(x)
    return states


def uniform_word_visit_law(d: Dfa, m: int, trials: int, seed: int) -> np.ndarray:
    """Frequency of final states over uniform random words of length m.

    This frequency vector estimates exactly the same law as the m-step
    simple-random-walk distribution from the start state (the word symbols
    are the walk's edge choices).
    """
    if m < 0:
        raise ValueError(f"word length must be >= 0, got {m}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = make_generator(seed)
    x = np.full(trials, d.start, dtype=np.int64)
    heads = d.graph.heads
    r = d.r
    for _ in range(m):
        syms = rng.integers(0, r, size=trials)
        x = heads[x * r + syms]
    counts = np.bincount(x, minlength=d.n)
    return counts / trials


def walk_distribution(d: Dfa, m: int) -> np.ndarray:
    """Exact m-step walk law from the start state.

    Applies the transition operator m times to the point mass, O(m n r)
    via scatter-adds; no matrices are materialized.
    """
    if m < 0:
        raise ValueError(f"word length must be >= 0, got {m}")
    mu = np.zeros(d.n)
    mu[d.start] = 1.0
    rows = d.graph.heads.reshape(d.n, d.r)
    for _ in range(m):
        nxt = np.zeros(d.n)
        np.add.at(nxt, rows.reshape(-1), np.repeat(mu / d.r, d.r))
        mu = nxt
    return mu


# -- text format (1-based ids; symbols 1..r in human-facing input) ------------


def dfa_to_text(d: Dfa) -> str:
    """Header ``n r start`` then one line per state: ``i: h1 ... hr bit``."""
    lines = [f"{d.n} {d.r} {d.start + 1}"]
    rows = d.graph.heads.reshape(d.n, d.r)
    for i in range(d.n):
        heads = " ".join(str(h + 1) for h in rows[i])
        lines.append(f"{i + 1}: {heads} {int(d.accepting[i])}")
    return "\n".join(lines) + "\n"


def dfa_from_text(text: str) -> Dfa:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    n, r, start = (int(tok) for tok in lines[0].split())
    heads = np.empty(n * r, dtype=np.int64)
    accepting = np.zeros(n, dtype=bool)
    for ln in lines[1:]:
        label, rest = ln.split(":", 1)
        i = int(label) - 1
        toks = rest.split()
        heads[i * r : (i + 1) * r] = [int(t) - 1 for t in toks[:r]]
        accepting[i] = bool(int(toks[r]))
    return Dfa(graph=Digraph(n, r, heads), start=start - 1, accepting=accepting)
