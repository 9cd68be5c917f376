"""Random greedy independent sets and the exact blocking probability p(H_S).

Setting: a bipartite "blocking graph" H_S with parts S and T.  Vertices are
processed in a uniformly random order; an S-vertex is *blocked* when some
T-neighbor precedes it, and p(H_S) is the probability that every S-vertex
is blocked.  If a random greedy independent set (scan the order, keep a
vertex unless a kept neighbor precedes it) misses all of S, then all of S
was blocked, so p(H_S) caps the probability that greedy misses a target set.

p(H_S) satisfies the recursion

    p(H_S) = 1/(|S|+|T|) * sum over v in T of p(H_S minus ({v} and N(v)))

(condition on the first processed vertex: an S-vertex first means failure,
a T-vertex blocks its whole neighborhood and drops out), with p = 1 on
empty S and p = 0 whenever some S-vertex has no T-neighbor left.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

import numpy as np

from .model import ColorSystem


@dataclass(frozen=True)
class STGraph:
    """Bipartite blocking graph: S-indices 0..s_size-1, T-indices 0..t_size-1,
    edges as (s_index, t_index) pairs without repeats."""

    s_size: int
    t_size: int
    edges: tuple

    def __post_init__(self):
        seen = set()
        for e in self.edges:
            i, j = e
            if not (0 <= i < self.s_size and 0 <= j < self.t_size):
                raise ValueError(f"edge {e} out of range")
            if (i, j) in seen:
                raise ValueError(f"parallel edge {e}")
            seen.add((i, j))

    @staticmethod
    def make(s_size, t_size, edges) -> "STGraph":
        return STGraph(s_size, t_size, tuple(sorted((int(i), int(j)) for i, j in edges)))

    def to_dict(self) -> dict:
        return {"s": self.s_size, "t": self.t_size, "edges": [list(e) for e in self.edges]}

    @staticmethod
    def from_dict(d) -> "STGraph":
        return STGraph.make(d["s"], d["t"], d["edges"])


@dataclass(frozen=True)
class DegreeProfile:
    d: tuple        # degree of each T-vertex
    big_d: tuple    # sum of S-neighbor degrees, per T-vertex
    delta_t: int    # max degree on the T side
    edge_count: int


def degree_profile(graph: STGraph) -> DegreeProfile:
    s_deg = [0] * graph.s_size
    t_deg = [0] * graph.t_size
    for i, j in graph.edges:
        s_deg[i] += 1
        t_deg[j] += 1
    big = [0] * graph.t_size
    for i, j in graph.edges:
        big[j] += s_deg[i]
    return DegreeProfile(
        tuple(t_deg), tuple(big), max(t_deg, default=0), len(graph.edges)
    )


def counterexample_graph() -> STGraph:
    """The 4+5-vertex blocking graph on which the per-vertex product bound
    prod_i (1+f_i)^(-f_i/d_i) fails: four pendant T-vertices matched to S
    plus one hub adjacent to all of S."""
    edges = [(0, 0), (1, 1), (2, 3), (3, 4), (0, 2), (1, 2), (2, 2), (3, 2)]
    return STGraph.make(4, 5, edges)


# --- greedy independent sets -------------------------------------------------

def greedy_independent_set(adjacency, order):
    """Maximal independent set forced by a processing order.

    adjacency maps each vertex to an iterable of neighbors; order is a
    permutation of the vertices.  A vertex is kept iff no earlier-kept
    neighbor exists.  Deterministic in the order.
    """
    chosen = set()
    for v in order:
        if not any(u in chosen for u in adjacency[v]):
            chosen.add(v)
    return chosen


def greedy_independent_set_hyper(n, edges, order):
    """Hypergraph variant: keep a vertex unless that completes a hyperedge.

    An extension of the graph rule for experimentation only; the blocking
    probability analysis does not cover it.
    """
    chosen = set()
    edge_sets = [frozenset(e) for e in edges]
    for v in order:
        grown = chosen | {v}
        if not any(e <= grown for e in edge_sets):
            chosen.add(v)
    return chosen


# --- exact and sampled blocking probability ----------------------------------

def p_blocked_exact(graph: STGraph, size_cap: int = 20) -> Fraction:
    """Exact p(H_S) by the first-vertex recursion, memoized on the surviving
    vertex set (bitmask).  Exact rational arithmetic throughout.

    The state space is 2^(|S|+|T|), hence the size cap.  Each call owns its
    memo table, so concurrent calls stay independent.
    """
    s, t = graph.s_size, graph.t_size
    n = s + t
    if n > size_cap:
        raise ValueError(f"|S|+|T| = {n} exceeds the cap of {size_cap}")
    nbr = [0] * n  # over combined ids: S at bits 0..s-1, T at bits s..n-1
    for i, j in graph.edges:
        nbr[i] |= 1 << (s + j)
        nbr[s + j] |= 1 << i
    smask = (1 << s) - 1
    memo = {}

    def rec(alive):
        s_alive = alive & smask
        if s_alive == 0:
            return Fraction(1)
        got = memo.get(alive)
        if got is not None:
            return got
        m = s_alive
        while m:
            v = m & -m
            m &= m - 1
            if nbr[v.bit_length() - 1] & alive == 0:
                memo[alive] = Fraction(0)
                return memo[alive]
        total = Fraction(0)
        tm = alive & ~smask
        while tm:
            v = tm & -tm
            tm &= tm - 1
            idx = v.bit_length() - 1
            total += rec(alive & ~(v | nbr[idx]))
        out = total / alive.bit_count()
        memo[alive] = out
        return out

    return rec((1 << n) - 1)


def p_blocked_bruteforce(graph: STGraph) -> Fraction:
    """Reference oracle: enumerate every processing order of S + T and count
    the orders blocking all of S.  Factorial cost; for cross-checks only."""
    s, t = graph.s_size, graph.t_size
    n = s + t
    t_neighbors = [set() for _ in range(s)]
    for i, j in graph.edges:
        t_neighbors[i].add(s + j)
    good = 0
    for perm in itertools.permutations(range(n)):
        seen = set()
        ok = True
        for v in perm:
            if v < s and not (t_neighbors[v] & seen):
                ok = False
                break
            seen.add(v)
        if ok:
            good += 1
    return Fraction(good, factorial(n))


@dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    std_error: float
    successes: int
    trials: int


def p_blocked_monte_carlo(graph: STGraph, trials: int, seed: int) -> MonteCarloEstimate:
    """Estimate p(H_S) from uniform random orders; deterministic per seed.

    Orders are sampled as i.i.d. uniform processing times (almost surely
    distinct), so an S-vertex is blocked iff some T-neighbor has a smaller
    time.  Vectorized over trials.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    s, t = graph.s_size, graph.t_size
    rng = np.random.default_rng(seed)
    nbrs = [[] for _ in range(s)]
    for i, j in graph.edges:
        nbrs[i].append(s + j)
    successes = 0
    done = 0
    chunk = 200_000
    while done < trials:
        m = min(chunk, trials - done)
        times = rng.random((m, s + t))
        ok = np.ones(m, dtype=bool)
        for i in range(s):
            if not nbrs[i]:
                ok[:] = False
                break
            ok &= times[:, nbrs[i]].min(axis=1) < times[:, i]
        successes += int(ok.sum())
        done += m
    est = successes / trials
    return MonteCarloEstimate(
        est, math.sqrt(max(est * (1.0 - est), 0.0) / trials), successes, trials
    )


# --- bounds on p(H_S) ---------------------------------------------------------

def fancy_bound_params(s_size: int, delta_t, edge_count) -> float:
    """(1 + |S| * Delta_T / |E|)^(-|S| / Delta_T) from raw parameters."""
    if edge_count <= 0 or delta_t <= 0:
        raise ValueError("need a nonempty graph")
    return (1.0 + s_size * delta_t / edge_count) ** (-s_size / delta_t)


def fancy_bound(graph: STGraph) -> float:
    """Degree-based upper bound on p(H_S); nondecreasing in Delta_T."""
    prof = degree_profile(graph)
    if prof.edge_count == 0:
        raise ValueError("the bound needs at least one edge")
    return fancy_bound_params(graph.s_size, prof.delta_t, prof.edge_count)


def fancy_bound_fraction(graph: STGraph) -> Fraction:
    """Exact-rational fancy bound; defined when Delta_T divides |S|."""
    prof = degree_profile(graph)
    if prof.edge_count == 0:
        raise ValueError("the bound needs at least one edge")
    if graph.s_size % prof.delta_t:
        raise ValueError("exact form needs an integral exponent |S|/Delta_T")
    base = 1 + Fraction(graph.s_size * prof.delta_t, prof.edge_count)
    return base ** -(graph.s_size // prof.delta_t)


def f_values(graph: STGraph) -> tuple:
    """Local parameters f_i = sum over S-neighbors u of v_i of 1/deg(u);
    they sum to |S| when no S-vertex is isolated.  Exact rationals."""
    s_deg = [0] * graph.s_size
    for i, _ in graph.edges:
        s_deg[i] += 1
    out = [Fraction(0)] * graph.t_size
    for i, j in graph.edges:
        out[j] += Fraction(1, s_deg[i])
    return tuple(out)


def local_product_bound(graph: STGraph) -> float:
    """prod_i (1 + f_i)^(-f_i/d_i) over T-vertices of positive degree.

    A would-be refinement of the degree bound; p_blocked_exact of the
    counterexample graph exceeds it, so it is *not* a valid bound.
    """
    prof = degree_profile(graph)
    fs = f_values(graph)
    out = 1.0
    for fi, di in zip(fs, prof.d):
        if di == 0:
            continue
        out *= (1.0 + float(fi)) ** (-float(fi) / di)
    return out


def degree_functional_check(graph: STGraph):
    """Evaluate sum_i d_i^2 / D_i over T and check it is at most |S|.

    Returns (value, holds).  Every T-vertex must have degree >= 1.
    """
    prof = degree_profile(graph)
    if any(d == 0 for d in prof.d):
        raise ValueError("isolated T-vertex: the functional is undefined")
    value = sum(Fraction(d * d, big) for d, big in zip(prof.d, prof.big_d))
    return value, value <= graph.s_size


# --- max-degree deletion schedule ---------------------------------------------

@dataclass(frozen=True)
class DeletionResult:
    deleted_count: int
    deleted: tuple          # vertices in deletion order
    remaining_edges: tuple  # surviving edges, sorted
    threshold: float        # the cap met at the stopping index


def max_degree_deletion(n: int, edges, k: int) -> DeletionResult:
    """Delete max-degree vertices until the degree falls under a moving cap.

    With m the input edge count, stop at the first i with
    max_degree_i <= (2k - 2i - 1) * m / k^2; such an i < k always exists
    because those caps sum to m while each failed step deletes more than its
    cap's worth of edges.  Ties break to the lowest vertex id.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    edge_set = set(tuple(sorted(e)) for e in edges)
    if any(len(e) != 2 or e[0] == e[1] for e in edge_set):
        raise ValueError("edges must be 2-sets of distinct vertices")
    m = len(edge_set)
    adj = {v: set() for v in range(n)}
    for u, v in edge_set:
        adj[u].add(v)
        adj[v].add(u)
    deleted = []
    i = 0
    while True:
        max_deg = max((len(adj[v]) for v in adj), default=0)
        cap = (2 * k - 2 * i - 1) * m / (k * k)
        if max_deg <= cap:
            remaining = tuple(sorted(edge_set))
            return DeletionResult(i, tuple(deleted), remaining, cap)
        victim = min(v for v in adj if len(adj[v]) == max_deg)
        for u in adj[victim]:
            adj[u].discard(victim)
            edge_set.discard(tuple(sorted((u, victim))))
        del adj[victim]
        deleted.append(victim)
        i += 1


def random_transversal_search(system: ColorSystem, restarts: int, seed: int):
    """Randomized certificate search for 2-uniform systems: prune the graph
    by the deletion schedule with k = family-set size, then repeatedly draw
    greedy independent sets of the pruned graph until one meets every family
    set.

    A returned set is a verified colorability certificate (sound); None
    after the restart budget proves nothing (incomplete).
    """
    if any(len(e) != 2 for e in system.edges):
        raise ValueError("needs a 2-uniform system")
    if not system.family:
        raise ValueError("needs a nonempty family")
    k = len(system.family[0])
    n = system.vertex_count
    pruned = max_degree_deletion(n, system.edges, k)
    survivors = sorted(set(range(n)) - set(pruned.deleted))
    adjacency = {v: set() for v in survivors}
    for u, v in pruned.remaining_edges:
        adjacency[u].add(v)
        adjacency[v].add(u)
    fam = [frozenset(f) for f in system.family]
    edge_sets = [frozenset(e) for e in system.edges]
    rng = random.Random(seed)
    order = list(survivors)
    for _ in range(restarts):
        rng.shuffle(order)
        chosen = greedy_independent_set(adjacency, order)
        if all(chosen & f for f in fam):
            if any(e <= chosen for e in edge_sets):
                raise RuntimeError("internal error: greedy set not independent")
            return frozenset(chosen)
    return None


def blocking_exponent_minimum(graph: STGraph) -> float:
    """Exploratory functional: minimize sum_i e_i*ln(1+e_i)/d_i over
    nonnegative e_i summing to |S|.

    Conjecture-level material: exp(-minimum) is a *proposed* bound on
    p(H_S), not an established one; nothing in this package relies on it.
    Solved by Lagrange waterfilling (the objective is convex and each
    marginal cost ln(1+e) + e/(1+e) increases from 0).
    """
    prof = degree_profile(graph)
    if any(d == 0 for d in prof.d):
        raise ValueError("isolated T-vertex: the functional is undefined")
    target = float(graph.s_size)

    def phi_inv(y):
        lo, hi = 0.0, 1.0
        while math.log1p(hi) + hi / (1.0 + hi) < y:
            hi *= 2.0
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            if math.log1p(mid) + mid / (1.0 + mid) < y:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def total(lam):
        return sum(phi_inv(lam * d) for d in prof.d)

    lo, hi = 0.0, 1.0
    while total(hi) < target:
        hi *= 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if total(mid) < target:
            lo = mid
        else:
            hi = mid
    lam = 0.5 * (lo + hi)
    es = [phi_inv(lam * d) for d in prof.d]
    scale = target / sum(es)
    return sum(scale * e * math.log1p(scale * e) / d for e, d in zip(es, prof.d))
