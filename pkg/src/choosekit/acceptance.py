"""End-to-end acceptance checks, shared by `choosekit selftest` and pytest.

Each criterion returns a CriterionResult; run_criteria executes a selection
and the callers render one pass/fail line per criterion.  Everything here is
deterministic (fixed seeds).
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import amplify, bounds, checker, constructions, indepset
from .model import RegimePoint

FUZZ_SEED = 20260809

#: Wall-time limits (seconds) for the criteria that carry one.
TIME_BUDGETS = {1: 10.0, 2: 60.0, 3: 5.0, 4: 30.0, 9: 20.0}


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.index:2d} ({self.name}): {self.detail}"


def _compositions(total):
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


def criterion_1() -> CriterionResult:
    """Every small block construction is uncolorable, by both engines."""
    checked = 0
    for ka in (2, 3):
        for total in (1, 2, 3):
            for a in _compositions(total):
                inst = constructions.construct_blocks(constructions.BlockSpec(ka, a))
                bt, _ = checker.has_proper_coloring(inst, engine="backtracking")
                tv, _ = checker.has_proper_coloring(inst, engine="transversal")
                if bt or tv:
                    return CriterionResult(
                        1, "block-construction exactness", False,
                        f"ka={ka} a={a} admitted a coloring (backtracking={bt}, transversal={tv})",
                    )
                checked += 1
    return CriterionResult(
        1, "block-construction exactness", True,
        f"{checked} block instances rejected by both engines",
    )


def criterion_2() -> CriterionResult:
    """The (ka, kb) = (2, 2) frontier sits between delta_b = 3 and 4 at delta_a = 2."""
    v4 = checker.decide_choosable(RegimePoint(2, 4, 2, 2))
    v3 = checker.decide_choosable(RegimePoint(2, 3, 2, 2))
    ok = v4.tag == checker.UNCHOOSABLE and v3.tag == checker.CHOOSABLE
    if ok:
        reject, _ = checker.has_proper_coloring(v4.witness)
        ok = not reject
    return CriterionResult(
        2, "exhaustive frontier point", ok,
        f"(2,4,2,2) -> {v4.tag} [{v4.nodes_explored} nodes], (2,3,2,2) -> {v3.tag} "
        f"[{v3.nodes_explored} nodes]",
    )


def criterion_3() -> CriterionResult:
    """Blowup and expansion of the smallest witness stay uncolorable with the
    predicted parameters."""
    base = constructions.construct_blocks(constructions.BlockSpec(2, (1,)))  # K_{1,2} witness
    point = base.point()

    blown = amplify.blowup(base, 2)
    expanded = amplify.expand(base, 2)
    problems = []
    if blown.point() != amplify.amplify_params(point, amplify.BLOWUP, 2):
        problems.append(f"blowup params {blown.point()}")
    if expanded.point() != amplify.amplify_params(point, amplify.EXPANSION, 2):
        problems.append(f"expansion params {expanded.point()}")
    for label, inst in (("blowup", blown), ("expansion", expanded)):
        for engine in ("backtracking", "transversal"):
            found, _ = checker.has_proper_coloring(inst, engine=engine)
            if found:
                problems.append(f"{label} colorable via {engine}")
    return CriterionResult(
        3, "amplification soundness", not problems,
        "; ".join(problems) if problems else
        f"blowup -> {blown.point()}, expansion -> {expanded.point()}, both uncolorable",
    )


def criterion_4() -> CriterionResult:
    """Blocking engine on the product-bound counterexample: recursion equals
    the 9!-order oracle, beats the false product bound, respects the true one,
    and Monte Carlo agrees within 4 sigma."""
    g = indepset.counterexample_graph()
    pe = indepset.p_blocked_exact(g)
    pb = indepset.p_blocked_bruteforce(g)
    prod = indepset.local_product_bound(g)
    fb = indepset.fancy_bound_fraction(g)
    mc = indepset.p_blocked_monte_carlo(g, 10**6, FUZZ_SEED)
    sigma = math.sqrt(float(pe) * (1.0 - float(pe)) / mc.trials)
    checks = {
        "recursion == brute force": pe == pb,
        "exceeds product bound": pe - Fraction(prod) > Fraction(1, 10**9),
        "within degree bound": pe <= fb and fb == Fraction(1, 3),
        "MC within 4 sigma": abs(mc.estimate - float(pe)) <= 4.0 * sigma,
    }
    failed = [k for k, v in checks.items() if not v]
    return CriterionResult(
        4, "blocking probability engine", not failed,
        "; ".join(failed) if failed else
        f"p = {pe} = {float(pe):.6f}, product bound {prod:.8f}, "
        f"MC {mc.estimate:.6f} (sigma {sigma:.6f})",
    )


def criterion_5() -> CriterionResult:
    """Equality family: unions of identical complete bipartite blocks meet the
    degree bound with exact rational equality."""
    bad = []
    for a in (1, 2, 3):
        for j in (1, 2):
            edges = [
                (c * a + i, c * a + t) for c in range(j) for i in range(a) for t in range(a)
            ]
            g = indepset.STGraph.make(a * j, a * j, edges)
            pe = indepset.p_blocked_exact(g)
            fb = indepset.fancy_bound_fraction(g)
            if pe != fb or pe != Fraction(1, 2**j):
                bad.append(f"a={a} j={j}: p={pe} bound={fb}")
    return CriterionResult(
        5, "degree-bound equality family", not bad,
        "; ".join(bad) if bad else "p = bound = 2^-j on all unions (a <= 3, j <= 2)",
    )


def criterion_6() -> CriterionResult:
    """Interval for the smallest unchoosable xi at ka = 2."""
    xb = bounds.xim_bounds(2)
    a2 = bounds.alpha(2).alpha
    lo_ok = abs(xb.lo - 0.5 * math.log(3.0)) <= 1e-12
    hi_ok = abs(xb.hi - math.log(2.0)) <= 1e-12
    alpha_ok = a2 <= 0.5 * math.log(3.0)
    ok = lo_ok and hi_ok and alpha_ok
    return CriterionResult(
        6, "ka=2 interval", ok,
        f"[{xb.lo:.12f}, {xb.hi:.12f}] vs [ln(3)/2, ln 2], alpha(2) = {a2:.12f}",
    )


def criterion_7() -> CriterionResult:
    """ka=3 upper bound tightened by the 7-edge/7-set witness value."""
    seven = 7.0 * math.log(7.0) ** 2 / 27.0
    xb = bounds.xim_bounds(3)
    ok = seven < math.log(3.0) ** 2 and abs(xb.hi - seven) <= 1e-12
    return CriterionResult(
        7, "ka=3 tightening", ok,
        f"{seven:.5f} < {math.log(3.0) ** 2:.5f}, hi = {xb.hi:.5f} via {xb.hi_rule}",
    )


def criterion_8() -> CriterionResult:
    """Log-slope of the xi' upper bound near its limit at k = 200."""
    target = math.log(2.0) + math.log(math.log(2.0))
    slope = math.log(bounds.xim_prime_upper(200)) / 200
    ok = abs(slope - target) <= 0.05
    return CriterionResult(
        8, "xi-prime slope at k=200", ok,
        f"measured {slope:.5f}, target {target:.5f}, |diff| = {abs(slope - target):.5f} "
        f"(tolerance 0.05)",
    )


def criterion_9() -> CriterionResult:
    """Inequality fuzzers: the tedious inequality on 10^5 random points and
    the at-most-three fixed-point count on 10^4 random curves."""
    rng = random.Random(FUZZ_SEED)
    for trial in range(10**5):
        a = rng.uniform(0.0, 1.0)
        b = rng.uniform(0.0, 1.0)
        beta = rng.uniform(0.0, 10.0)
        gamma = max(a, b) + max(rng.uniform(0.0, 10.0), 1e-9)
        if not bounds.verify_tedious(a, b, beta, gamma):
            return CriterionResult(
                9, "appendix fuzz", False,
                f"tedious inequality failed at trial {trial}: a={a} b={b} beta={beta} gamma={gamma}",
            )
    for trial in range(10**4):
        a = max(rng.uniform(0.0, 10.0), 1e-9)
        b = max(rng.uniform(0.0, 10.0), 1e-9)
        n = bounds.count_double_exp_fixed_points(a, b)
        if n > 3:
            return CriterionResult(
                9, "appendix fuzz", False,
                f"{n} double-exponential fixed points at a={a} b={b}",
            )
    return CriterionResult(
        9, "appendix fuzz", True,
        "10^5 inequality samples hold; 10^4 fixed-point counts all <= 3",
    )


def criterion_10() -> CriterionResult:
    """Classifier never contradicts the exact decision on the small grid, and
    unchoosability is monotone in both degrees."""
    verdicts = {}
    for ka in (1, 2):
        for kb in (1, 2):
            for da in range(1, 4):
                for db in range(1, 6):
                    point = RegimePoint(da, db, ka, kb)
                    v = checker.decide_choosable(point)
                    if v.tag == checker.EXHAUSTED:
                        return CriterionResult(
                            10, "classifier/oracle grid", False, f"budget exhausted at {point}"
                        )
                    verdicts[(ka, kb, da, db)] = v.tag
                    report = bounds.classify(point)
                    if report.verdict == bounds.CHOOSABLE and v.tag != checker.CHOOSABLE:
                        return CriterionResult(
                            10, "classifier/oracle grid", False,
                            f"classifier says choosable, oracle disagrees at {point} ({report.rule})",
                        )
                    if report.verdict == bounds.UNCHOOSABLE and v.tag != checker.UNCHOOSABLE:
                        return CriterionResult(
                            10, "classifier/oracle grid", False,
                            f"classifier says unchoosable, oracle disagrees at {point} ({report.rule})",
                        )
    for (ka, kb, da, db), tag in verdicts.items():
        if tag != checker.UNCHOOSABLE:
            continue
        for nxt in ((ka, kb, da + 1, db), (ka, kb, da, db + 1)):
            if nxt in verdicts and verdicts[nxt] != checker.UNCHOOSABLE:
                return CriterionResult(
                    10, "classifier/oracle grid", False,
                    f"monotonicity broken between {(ka, kb, da, db)} and {nxt}",
                )
    unch = sum(1 for t in verdicts.values() if t == checker.UNCHOOSABLE)
    return CriterionResult(
        10, "classifier/oracle grid", True,
        f"{len(verdicts)} cells decided ({unch} unchoosable); classifier consistent, monotone",
    )


CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
)


def run_criteria(only=None):
    """Run the selected criteria (1-based indices; None = all).

    Each result is stamped with its wall time; exceeding a criterion's time
    budget fails it even when its checks hold.
    """
    results = []
    for i, fn in enumerate(CRITERIA, start=1):
        if only is not None and i not in only:
            continue
        start = time.perf_counter()
        r = fn()
        elapsed = time.perf_counter() - start
        budget = TIME_BUDGETS.get(i)
        detail = f"{r.detail} [{elapsed:.2f}s"
        passed = r.passed
        if budget is not None:
            detail += f" of {budget:.0f}s allowed"
            if elapsed >= budget:
                passed = False
                detail += "; over budget"
        detail += "]"
        results.append(CriterionResult(r.index, r.name, passed, detail))
    return results
