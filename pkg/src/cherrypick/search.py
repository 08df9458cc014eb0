"""Greedy construction and exact minimum-weight search.

``greedy_cps`` always produces a valid sequence (its weight is an upper
bound); ``min_weight_cps`` finds the exact minimum by iterative-deepening
depth-first search over canonical state pairs with memoized bounds.  The
minimum weight over all sequences equals the hybrid number of the two
forests, and for two trees the TBR distance between them.

The search is single-threaded and deterministic: the witness is the
lexicographically least optimal trace under the step ordering.
"""

import time
from dataclasses import dataclass

from .errors import GroundSetMismatch, NotATree
from .reductions import (
    ReductionStep,
    ReductionTrace,
    applicable_steps,
    apply_step,
)
from .trees import classify


class _BudgetExceeded(Exception):
    pass


@dataclass
class SearchStats:
    nodes: int = 0
    memo_hits: int = 0
    elapsed: float = 0.0


@dataclass
class SearchResult:
    """Outcome of a minimum-weight search.

    ``status`` is "exact" when lower == upper is the true minimum, or
    "bounded" when a node budget ran out first; the witness always
    validates with weight equal to ``upper``.
    """

    status: str
    lower: int
    upper: int
    witness: ReductionTrace
    stats: SearchStats

    @property
    def min_weight(self):
        if self.status != "exact":
            return None
        return self.lower


# ---------------------------------------------------------------------------
# greedy existence construction


def _greedy_pick(F, F2):
    """Choose the next step(s) following the existence argument: prefer a
    free C3/C1, otherwise cut the pendant edge of a cherry leaf and then
    drop it, giving the (x, x, ...) pattern."""
    cherries_f = F.cherries()
    cherries_f2 = F2.cherries()
    if not cherries_f and not cherries_f2:
        # both edge sets are empty; drop the smallest label from both
        return [ReductionStep(min(F.ground_set), "C3", "forward")]
    if cherries_f:
        x, y = cherries_f[0]
        orientation = "forward"
        A, B = F, F2
    else:
        x, y = cherries_f2[0]
        orientation = "reversed"
        A, B = F2, F
    singles = [lab for lab in (x, y) if B.is_singleton(lab)]
    if singles:
        lab = min(singles)
        c3_orient = "forward" if F.is_singleton(lab) else "reversed"
        return [ReductionStep(lab, "C3", c3_orient)]
    case = classify(A, B, (x, y))
    if case.case == "i":
        return [ReductionStep(x, "C1", "forward", y=y)]
    if case.case == "ii":
        anchors = [w[0] for w in case.witnesses]
        lab = x if x in anchors else y
        partner = y if lab == x else x
        rule = "C2a_i"
    elif case.case == "iii":
        lab, partner, rule = x, y, "C2b_i"
    else:
        lab, partner, rule = x, y, "C2c"
    cut = ReductionStep(lab, rule, orientation, y=partner, cut="e_x")
    drop = ReductionStep(lab, "C3", orientation)
    return [cut, drop]


def greedy_cps(F, F2):
    """A valid cherry picking sequence for any pair of forests on the same
    labels, of length at least |X|; weight 0 whenever only C1/C3 steps are
    needed."""
    if F.ground_set != F2.ground_set or not F.ground_set:
        raise GroundSetMismatch("forests must share a non-empty label set")
    steps = []
    cur_F, cur_F2 = F, F2
    while len(cur_F.ground_set) > 1:
        for step in _greedy_pick(cur_F, cur_F2):
            cur_F, cur_F2 = apply_step(cur_F, cur_F2, step)
            steps.append(step)
    (terminal,) = cur_F.ground_set
    return ReductionTrace(tuple(steps), terminal=terminal)


# ---------------------------------------------------------------------------
# exact search


class _Searcher:
    def __init__(self, budget=None):
        self.budget = budget
        self.stats = SearchStats()
        # state key -> (value, exact); non-exact entries are lower bounds
        self.memo = {}
        self.step_cache = {}

    @staticmethod
    def _key(F, F2):
        a, b = F.canonical, F2.canonical
        return (a, b) if a <= b else (b, a)

    def _steps(self, F, F2):
        key = (F.canonical, F2.canonical)
        got = self.step_cache.get(key)
        if got is None:
            got = [(s, apply_step(F, F2, s)) for s in applicable_steps(F, F2)]
            self.step_cache[key] = got
        return got

    def residual(self, F, F2, cutoff):
        """min(true residual weight, cutoff); exact when below cutoff."""
        if cutoff <= 0:
            return 0
        if len(F.ground_set) == 1:
            return 0
        key = self._key(F, F2)
        hit = self.memo.get(key)
        if hit is not None:
            value, exact = hit
            if exact:
                self.stats.memo_hits += 1
                return min(value, cutoff)
            if value >= cutoff:
                self.stats.memo_hits += 1
                return cutoff
        self.stats.nodes += 1
        if self.budget is not None and self.stats.nodes > self.budget:
            raise _BudgetExceeded
        best = cutoff
        ordered = self._steps(F, F2)
        # explore the zero-cost closure before C2 branching
        for want_cost in (0, 1):
            for step, (nF, nF2) in ordered:
                cost = step.cost
                if cost != want_cost or cost >= best:
                    continue
                value = cost + self.residual(nF, nF2, best - cost)
                if value < best:
                    best = value
                    if best == 0:
                        break
            if best == 0:
                break
        exact = best < cutoff
        old = self.memo.get(key)
        if old is None or (exact and not old[1]) or (not exact and not old[1] and best > old[0]):
            self.memo[key] = (best, exact)
        return best

    def witness(self, F, F2, weight):
        """The lexicographically least optimal trace, by always taking the
        first step (in enumeration order) that preserves optimality."""
        steps = []
        cur_F, cur_F2, need = F, F2, weight
        while len(cur_F.ground_set) > 1:
            for step in applicable_steps(cur_F, cur_F2):
                cost = step.cost
                if cost > need:
                    continue
                nF, nF2 = apply_step(cur_F, cur_F2, step)
                rest = self.residual(nF, nF2, need - cost + 1)
                if rest == need - cost:
                    steps.append(step)
                    cur_F, cur_F2, need = nF, nF2, need - cost
                    break
            else:  # pragma: no cover - a valid minimum always has a step
                raise AssertionError("no step preserves the optimal weight")
        (terminal,) = cur_F.ground_set
        return ReductionTrace(tuple(steps), terminal=terminal)


def min_weight_cps(F, F2, budget=None):
    """Exact minimum weight over all cherry picking sequences, with a
    witness trace.

    Iterative deepening proves each level exhausted before admitting one
    more C2 step; the greedy sequence provides the initial upper bound.
    With a node ``budget``, a "bounded" result reports the best interval
    instead of exactness; the budget limits the search itself, not the
    witness walk for an already-proven minimum.
    """
    start = time.monotonic()
    upper_trace = greedy_cps(F, F2)
    upper = upper_trace.weight
    searcher = _Searcher(budget)
    lower = 0
    try:
        for target in range(upper):
            value = searcher.residual(F, F2, target + 1)
            if value <= target:
                searcher.budget = None
                witness = searcher.witness(F, F2, value)
                searcher.stats.elapsed = time.monotonic() - start
                return SearchResult("exact", value, value, witness, searcher.stats)
            lower = target + 1
    except _BudgetExceeded:
        searcher.stats.elapsed = time.monotonic() - start
        return SearchResult("bounded", lower, upper, upper_trace, searcher.stats)
    searcher.stats.elapsed = time.monotonic() - start
    return SearchResult("exact", upper, upper, upper_trace, searcher.stats)


def hybrid_number(F, F2):
    """Minimum reticulation number over networks displaying both forests,
    computed as the minimum cherry picking weight."""
    return min_weight_cps(F, F2).min_weight


def tbr_distance(T, T2):
    """Tree bisection and reconnection distance between two trees given as
    single-component forests."""
    for forest in (T, T2):
        if len(forest.components) != 1:
            raise NotATree("tbr distance needs single-component forests")
    return min_weight_cps(T, T2).min_weight


__all__ = [
    "SearchResult",
    "SearchStats",
    "greedy_cps",
    "hybrid_number",
    "min_weight_cps",
    "tbr_distance",
]
