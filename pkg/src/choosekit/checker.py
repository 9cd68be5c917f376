"""Exact decision engines for list colorability.

Two independent engines answer "does this list assignment admit a proper
coloring":

* direct backtracking over vertex colorings (any bipartite adjacency), and
* for complete bipartite instances, a search for an independent set of the
  color hypergraph that meets every family set (color the B side inside the
  set, the A side outside it).

On top of these, decide_choosable settles whether *every* assignment at a
parameter point is colorable, by exhausting color systems over a bounded
universe: a color lying in no A-list can always be added to the B-side color
set, so any family set reaching outside the covered colors is automatically
met; a witness therefore exists iff one exists on the covered colors alone,
and those number at most ka * delta_b.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from math import comb

from . import bounds
from .model import (
    ColorSystem,
    Coloring,
    ListInstance,
    RegimePoint,
    instance_to_dict,
    mask_of,
    to_color_system,
)

CHOOSABLE = "choosable"
UNCHOOSABLE = "unchoosable"
EXHAUSTED = "exhausted"

RULE_TRIVIAL = "trivial-degrees"
RULE_SINGLETON = "singleton-lists-exact"
RULE_ENUMERATION = "enumeration"

#: Default search budget, in explored nodes (not wall time, for
#: reproducibility).  Overridable per call and via CHOOSEKIT_BUDGET in the CLI.
DEFAULT_NODE_BUDGET = 5_000_000


class SearchBudgetExceeded(Exception):
    """Raised when a search exceeds its node budget; distinct from False."""

    def __init__(self, nodes):
        super().__init__(f"search budget exhausted after {nodes} nodes")
        self.nodes = nodes


@dataclass(frozen=True)
class Verdict:
    tag: str  # choosable | unchoosable | exhausted
    witness: object  # ListInstance for unchoosable, else None
    nodes_explored: int
    rule: str

    def to_dict(self) -> dict:
        d = {"tag": self.tag, "nodesExplored": self.nodes_explored, "rule": self.rule}
        if self.witness is not None:
            d["witness"] = instance_to_dict(self.witness)
        return d


class _Budget:
    __slots__ = ("limit", "nodes")

    def __init__(self, limit):
        self.limit = limit
        self.nodes = 0

    def charge(self, n=1):
        self.nodes += n
        if self.limit is not None and self.nodes > self.limit:
            raise SearchBudgetExceeded(self.nodes)


# --- engine (ii): independent transversal search ----------------------------

def independent_transversal_exists(system: ColorSystem, budget=None):
    """Does some independent set of H meet every family set?

    Returns (exists, witness) where witness is a tuple of colors forming such
    a set, or None.  Clause view: each hyperedge needs a color kept out, each
    family set a color kept in; solved by unit propagation plus branching on
    the lowest undecided color (in first).
    """
    n = system.vertex_count
    edge_masks = [mask_of(e) for e in system.edges]
    fam_masks = [mask_of(f) for f in system.family]
    if any(m == 0 for m in fam_masks):
        return (False, None)  # an empty family set can never be met
    b = _Budget(budget)
    full = (1 << n) - 1

    def search(inm, outm):
        b.charge()
        while True:
            progressed = False
            for e in edge_masks:
                if e & outm:
                    continue
                und = e & ~inm & ~outm
                if und == 0:
                    return None  # hyperedge swallowed whole
                if und & (und - 1) == 0:
                    outm |= und
                    progressed = True
            for f in fam_masks:
                if f & inm:
                    continue
                und = f & ~inm & ~outm
                if und == 0:
                    return None  # family set starved
                if und & (und - 1) == 0:
                    inm |= und
                    progressed = True
            if not progressed:
                break
        undecided = full & ~inm & ~outm
        if undecided == 0:
            return inm
        if all(e & outm for e in edge_masks) and all(f & inm for f in fam_masks):
            return inm  # leftovers stay out
        c = undecided & -undecided
        got = search(inm | c, outm)
        if got is not None:
            return got
        return search(inm, outm | c)

    got = search(0, 0)
    if got is None:
        return (False, None)
    witness = tuple(c for c in range(n) if got >> c & 1)
    return (True, witness)


# --- engine (i): backtracking over vertex colorings -------------------------

def _backtrack(instance: ListInstance, budget=None):
    """MRV backtracking; returns an assignment dict or None.

    Vertices are picked by ascending remaining-choice count, colors tried in
    ascending id (fail-first; any order is correct).
    """
    na, nb = instance.num_a(), instance.num_b()
    nv = na + nb
    cand = [mask_of(l) for l in instance.a_lists] + [mask_of(l) for l in instance.b_lists]
    if instance.is_complete:
        neighbors = [list(range(na, nv)) for _ in range(na)] + [
            list(range(na)) for _ in range(nb)
        ]
    else:
        neighbors = [[] for _ in range(nv)]
        for a, bidx in instance.adjacency:
            neighbors[a].append(na + bidx)
            neighbors[na + bidx].append(a)
    colored = [0] * nv  # chosen color bit, 0 = uncolored
    b = _Budget(budget)

    def search(remaining):
        b.charge()
        if remaining == 0:
            return True
        best_i, best_k = -1, None
        for i in range(nv):
            if not colored[i]:
                k = cand[i].bit_count()
                if best_k is None or k < best_k:
                    best_i, best_k = i, k
                    if k <= 1:
                        break
        if best_k == 0:
            return False
        choices = cand[best_i]
        while choices:
            c = choices & -choices
            choices &= choices - 1
            colored[best_i] = c
            touched = []
            dead = False
            for j in neighbors[best_i]:
                if not colored[j] and cand[j] & c:
                    cand[j] &= ~c
                    touched.append(j)
                    if cand[j] == 0:
                        dead = True  # finish the loop so `touched` stays complete
            if not dead and search(remaining - 1):
                return True
            for j in touched:
                cand[j] |= c
            colored[best_i] = 0
        return False

    if search(nv):
        assignment = {}
        for i in range(na):
            assignment[("A", i)] = colored[i].bit_length() - 1
        for j in range(nb):
            assignment[("B", j)] = colored[na + j].bit_length() - 1
        return assignment
    return None


def has_proper_coloring(instance: ListInstance, engine="auto", budget=None):
    """Decide whether the lists admit a proper coloring.

    Returns (found, coloring) with a validating certificate when found.
    engine: "backtracking", "transversal" (complete bipartite only), or
    "auto" (transversal when complete, else backtracking).  Budget overruns
    raise SearchBudgetExceeded rather than returning False.
    """
    if engine == "auto":
        engine = "transversal" if instance.is_complete else "backtracking"
    if engine == "backtracking":
        assignment = _backtrack(instance, budget)
        if assignment is None:
            return (False, None)
        return (True, Coloring.make(assignment))
    if engine != "transversal":
        raise ValueError(f"unknown engine {engine!r}")
    if not instance.is_complete:
        raise ValueError("transversal engine needs a complete bipartite instance")
    system = to_color_system(instance)
    ok, chosen = independent_transversal_exists(system, budget)
    if not ok:
        return (False, None)
    inside = set(chosen)
    assignment = {}
    for j, l in enumerate(instance.b_lists):
        assignment[("B", j)] = min(c for c in l if c in inside)
    for i, l in enumerate(instance.a_lists):
        assignment[("A", i)] = min(c for c in l if c not in inside)
    return (True, Coloring.make(assignment))


# --- exhaustive choosability decision ----------------------------------------

def _hypergraph_candidates(ka, num_edges, max_colors, budget):
    """Distinct ka-edge sets in canonical generation order.

    Edges are emitted lexicographically increasing with colors introduced in
    first-use order (a new edge's fresh colors are the next consecutive ids).
    Every isomorphism class over at most max_colors covered colors appears;
    relabel-equivalent orderings are rejected wholesale, which is what makes
    the exhaustion tractable.
    """

    def extend(edges, ncolors):
        budget.charge()
        if len(edges) == num_edges:
            yield tuple(edges), ncolors
            return
        last = edges[-1] if edges else None
        for fresh in range(ka + 1):
            if ncolors + fresh > max_colors:
                break
            new_cols = tuple(range(ncolors, ncolors + fresh))
            for olds in itertools.combinations(range(ncolors), ka - fresh):
                e = tuple(sorted(olds + new_cols))
                if last is not None and e <= last:
                    continue
                yield from extend(edges + [e], ncolors + fresh)

    yield from extend([], 0)


def _maximal_independent_sets(n, edge_masks, budget):
    """All maximal independent sets (as masks) of a ka-uniform hypergraph."""
    budget.charge(1 << n)
    out = []
    for i_mask in range(1 << n):
        if any(e & i_mask == e for e in edge_masks):
            continue
        maximal = True
        for c in range(n):
            if i_mask >> c & 1:
                continue
            grown = i_mask | (1 << c)
            if not any(e & grown == e for e in edge_masks):
                maximal = False
                break
        if maximal:
            out.append(i_mask)
    return out


def _find_blocking_family(n, edge_masks, kb, max_sets, budget):
    """Search for at most max_sets distinct kb-color sets such that every
    maximal independent set is disjoint from one of them; None if impossible.

    Checking maximal sets only is exact: shrinking an independent set keeps
    it disjoint from the same family member.
    """
    mis = _maximal_independent_sets(n, edge_masks, budget)
    full = (1 << n) - 1
    for i_mask in mis:
        if (full & ~i_mask).bit_count() < kb:
            return None  # this set meets every possible kb-subset
    colors = range(n)

    def search(chosen, unmet):
        budget.charge()
        if not unmet:
            return chosen
        if len(chosen) >= max_sets:
            return None
        i_mask = unmet[0]
        outside = [c for c in colors if not i_mask >> c & 1]
        for combo in itertools.combinations(outside, kb):
            f = mask_of(combo)
            if f in chosen:
                continue
            rest = [j for j in unmet if f & j]
            got = search(chosen + [f], rest)
            if got is not None:
                return got
        return None

    return search([], mis)


def _witness_instance(ka, kb, delta_a, delta_b, ncolors, edges, family_masks):
    """Assemble the unchoosable instance for a found blocking system.

    The family is padded up to delta_a B-lists: first with unused distinct
    kb-subsets of the covered colors (extra constraints keep the instance
    unchoosable), then with repeats once the universe runs out of subsets.
    """
    fam = [tuple(c for c in range(ncolors) if m >> c & 1) for m in family_masks]
    have = set(fam)
    if len(fam) < delta_a:
        for combo in itertools.combinations(range(ncolors), kb):
            if len(fam) >= delta_a:
                break
            if combo not in have:
                fam.append(combo)
                have.add(combo)
    while len(fam) < delta_a:
        fam.append(fam[len(fam) % len(family_masks)])
    return ListInstance.complete(ncolors, ka, kb, sorted(edges), sorted(fam))


def _singleton_witness(point: RegimePoint) -> ListInstance:
    """Unchoosable assignment for ka = 1, delta_b >= kb: singleton A-lists
    covering {0..kb-1}, every B-list equal to {0..kb-1}."""
    kb = point.kb
    a_lists = [(i % kb,) for i in range(point.delta_b)]
    b_lists = [tuple(range(kb))] * point.delta_a
    return ListInstance.complete(kb, 1, kb, a_lists, b_lists)


def decide_choosable(point: RegimePoint, budget=DEFAULT_NODE_BUDGET) -> Verdict:
    """Is every list assignment at this parameter point colorable?

    Fast paths: a part with degree below its list size is always colorable;
    ka = 1 is exactly unchoosable iff delta_b >= kb.  Otherwise color
    systems with delta_b distinct edges over at most ka * delta_b colors are
    exhausted, pairing each with a search for a blocking family of at most
    min(delta_a, C(covered, kb)) distinct kb-sets (extra family sets beyond
    the covered colors are always met, and padding a found family upward
    never un-blocks it).  First witness in canonical order wins.
    """
    ka, kb = point.ka, point.kb
    da, db = point.delta_a, point.delta_b
    if da < ka or db < kb:
        return Verdict(CHOOSABLE, None, 0, RULE_TRIVIAL)
    if ka == 1:
        # db >= kb here, so a blocking assignment always exists.
        return Verdict(UNCHOOSABLE, _singleton_witness(point), 0, RULE_SINGLETON)

    b = _Budget(budget)
    try:
        for edges, ncolors in _hypergraph_candidates(ka, db, ka * db, b):
            edge_masks = [mask_of(e) for e in edges]
            max_sets = min(da, comb(ncolors, kb))
            fam = _find_blocking_family(ncolors, edge_masks, kb, max_sets, b)
            if fam is not None:
                witness = _witness_instance(ka, kb, da, db, ncolors, edges, fam)
                found, _ = has_proper_coloring(witness, engine="transversal")
                if found:
                    raise RuntimeError("internal error: witness admits a coloring")
                return Verdict(UNCHOOSABLE, witness, b.nodes, RULE_ENUMERATION)
    except SearchBudgetExceeded as exc:
        return Verdict(EXHAUSTED, None, exc.nodes, RULE_ENUMERATION)
    return Verdict(CHOOSABLE, None, b.nodes, RULE_ENUMERATION)


# --- randomized reserve-coloring simulation ----------------------------------

@dataclass(frozen=True)
class ReserveSimulation:
    trials: int
    successes: int
    aborts: int          # too many A-vertices starved after reservation
    b_starved: int       # some B-vertex ended with no reserved color
    threshold: float     # starvation cap triggering the abort
    p: float
    seed: int

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


def simulate_reserve_coloring(
    instance: ListInstance, p: float, trials: int, seed: int, eps: float = 0.1
) -> ReserveSimulation:
    """Run the randomized reserve-and-repair coloring procedure.

    Each trial reserves every color for the B side independently with
    probability p, aborts when at least u0/f(u0) * (1 + eps/ka) * ln(|B|)
    A-vertices lose their whole list to the reservation, and otherwise
    unreserves one color per starved A-vertex (lowest id, in vertex order)
    before checking that every B-list still holds a reserved color.

    A trial succeeds exactly when the outcome yields a proper coloring
    (B inside the reservation, A outside), so an uncolorable assignment has
    success rate 0.  The abort guard is skipped when its cap is zero or
    undefined (|B| = 1 makes the cap vanish; ka = 1 makes f(u0) vanish):
    the cap is then meaningless and the repair step always runs.
    """
    if not instance.is_complete:
        raise ValueError("the procedure is defined on complete bipartite instances")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if trials < 1:
        raise ValueError("need at least one trial")
    if instance.num_a() == 0 or instance.num_b() == 0:
        raise ValueError("both parts must be nonempty")

    ka = instance.ka
    res = bounds.alpha(ka)
    fu = bounds.entropy_f(res.u_star)
    ratio = res.u_star / fu if fu > 0 else math.inf
    threshold = ratio * (1.0 + eps / ka) * math.log(instance.num_b())
    if not math.isfinite(threshold):
        threshold = math.inf

    a_masks = [mask_of(l) for l in instance.a_lists]
    b_masks = [mask_of(l) for l in instance.b_lists]
    universe = instance.universe
    rng = random.Random(seed)

    successes = aborts = b_starved = 0
    for _ in range(trials):
        reserved = 0
        for c in range(universe):
            if rng.random() < p:
                reserved |= 1 << c
        starved = [m for m in a_masks if m & ~reserved == 0]
        if 0.0 < threshold <= len(starved):
            aborts += 1
            continue
        for m in starved:
            if m & ~reserved == 0:  # earlier repairs may already have freed it
                reserved &= ~(m & -m)
        if all(m & reserved for m in b_masks):
            successes += 1
        else:
            b_starved += 1
    return ReserveSimulation(trials, successes, aborts, b_starved, threshold, p, seed)
