"""Amplification operators that grow uncolorable instances.

Both operators act on concrete list assignments over product colors
(c, i) for i in 1..r, flattened to the dense id c*r + (i-1):

* blowup: A' = A x [r] with per-copy recolored lists; B' = B^r, each tuple
  taking the union of its members' lists in the matching copy.  An
  uncolorable input with B-list size kb yields an uncolorable output with
  B-list size r*kb.
* expand: every A-vertex becomes s^ka copies indexed by [s]^ka, copy
  (a_1..a_ka) taking {(l_j, a_j)} for the vertex's ordered list l_1 < ... <
  l_ka; B keeps its neighborhoods with lists L(v) x [s].  Uncolorable input
  yields an output not colorable with B-lists of size s*kb.

Parameter-level versions track the same growth on parameter points, plus
the doubling/tripling chain that squares or cubes both degrees.
"""

from __future__ import annotations

import itertools

from .model import COMPLETE, ListInstance, RegimePoint

BLOWUP = "blowup"
EXPANSION = "expansion"


def blowup(instance: ListInstance, r: int) -> ListInstance:
    """r-fold blowup; preserves uncolorability, multiplies kb by r."""
    if r < 1:
        raise ValueError("r must be >= 1")
    na, nb = instance.num_a(), instance.num_b()
    universe = instance.universe * r

    a_lists = []
    for l in instance.a_lists:
        for i in range(r):
            a_lists.append(tuple(sorted(c * r + i for c in l)))

    b_lists = []
    tuples = list(itertools.product(range(nb), repeat=r))
    for combo in tuples:
        cols = []
        for i, v in enumerate(combo):
            cols.extend(c * r + i for c in instance.b_lists[v])
        b_lists.append(tuple(sorted(cols)))

    if instance.is_complete:
        return ListInstance.complete(universe, instance.ka, r * instance.kb, a_lists, b_lists)
    # (v, i) is adjacent to (v_1..v_r) iff v ~ v_i in the input.
    old = set(instance.adjacency)
    edges = []
    for va in range(na):
        for i in range(r):
            ai = va * r + i
            for bi, combo in enumerate(tuples):
                if (va, combo[i]) in old:
                    edges.append((ai, bi))
    return ListInstance.explicit(universe, instance.ka, r * instance.kb, a_lists, b_lists, edges)


def expand(instance: ListInstance, s: int) -> ListInstance:
    """s-expansion: s^ka copies per A-vertex; multiplies kb by s.

    Each A-list is ordered by ascending color id before indexing its copies,
    which fixes the otherwise arbitrary copy labeling.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    ka = instance.ka
    universe = instance.universe * s
    copies = list(itertools.product(range(s), repeat=ka))

    a_lists = []
    for l in instance.a_lists:
        ordered = sorted(l)
        for tag in copies:
            a_lists.append(tuple(sorted(ordered[j] * s + tag[j] for j in range(ka))))

    b_lists = [
        tuple(sorted(c * s + i for c in l for i in range(s))) for l in instance.b_lists
    ]

    if instance.is_complete:
        return ListInstance.complete(universe, ka, s * instance.kb, a_lists, b_lists)
    per = len(copies)
    edges = []
    for va, bi in instance.adjacency:
        for t in range(per):
            edges.append((va * per + t, bi))
    return ListInstance.explicit(universe, ka, s * instance.kb, a_lists, b_lists, edges)


def amplify_params(point: RegimePoint, kind: str, r: int) -> RegimePoint:
    """Parameter image of an amplification applied to an uncolorable point.

    blowup: (da, db, ka, kb) -> (da^r, r*db, ka, r*kb)
    expansion: (da, db, ka, kb) -> (da, r^ka * db, ka, r*kb)

    Integers are arbitrary precision, so the exponential growth in da or db
    cannot overflow.
    """
    if r < 1:
        raise ValueError("r must be >= 1")
    if kind == BLOWUP:
        return RegimePoint(point.delta_a**r, r * point.delta_b, point.ka, r * point.kb)
    if kind == EXPANSION:
        return RegimePoint(point.delta_a, r**point.ka * point.delta_b, point.ka, r * point.kb)
    raise ValueError(f"unknown amplification kind {kind!r}")


def _chain_step(point: RegimePoint, r: int) -> RegimePoint:
    # An r-fold blowup of each part in turn reaches (r*da^r, r^r*db^r) for
    # r in {2, 3}; both degrees are padded up to (6*d)^r / 6, which dominates
    # those and makes the steps compose exactly: g_r . g_r' = g_(r*r').
    da = (6 * point.delta_a) ** r // 6
    db = (6 * point.delta_b) ** r // 6
    return RegimePoint(da, db, r * point.ka, r * point.kb)


def amplify_23_params(point: RegimePoint, a: int, b: int) -> RegimePoint:
    """Chained doubling/tripling: with r = 2^a * 3^b, maps the point to
    ((6*da)^r / 6, (6*db)^r / 6, r*ka, r*kb).

    Implemented by composing the r=2 and r=3 steps, which is exact: the map
    x -> (6x)^r / 6 satisfies g_r . g_r' = g_(r*r')."""
    if a < 0 or b < 0:
        raise ValueError("a and b must be >= 0")
    out = point
    for _ in range(a):
        out = _chain_step(out, 2)
    for _ in range(b):
        out = _chain_step(out, 3)
    return out
