"""Exact optimum for small instances by exhaustive search over move plans.

Every plan is timed with the same as-soon-as-possible semantics as
:func:`starbalance.core.simulate`; inserting idle time never helps identical
tasks, so searching ASAP plans is enough.

The search runs twice over the tree of plan prefixes: a best-first pass finds
the optimal makespan, then a lexicographic pass with iterative deepening
returns the first shortest plan reaching it. Both use two exact reductions:

* branch and bound: a prefix is abandoned when a lower bound on every
  extension already exceeds the incumbent (or the known optimum);
* symmetry: among workers with identical parameters that no move has touched
  yet, only the lowest id is tried.

Neither changes the result, including the tie-break (smallest makespan, then
shortest plan, then lexicographically smallest).
"""

from __future__ import annotations

from fractions import Fraction

from .core import MovePlan, Platform, simulate

DEFAULT_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    pass


def _spread_bound(n: int, w: list[int]) -> int:
    """Smallest T with sum_i floor(T / w_i) >= n: a makespan lower bound for any plan."""
    if n == 0:
        return 0
    lo, hi = 1, n * min(w)
    while lo < hi:
        mid = (lo + hi) // 2
        if sum(mid // wi for wi in w) >= n:
            hi = mid
        else:
            lo = mid + 1
    return lo


def brute_force(
    platform: Platform,
    max_moves: int | None = None,
    restrict_no_send_and_receive: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> tuple[MovePlan, Fraction]:
    """Best plan of at most ``max_moves`` moves (default: every task may move once).

    With ``restrict_no_send_and_receive`` no worker may appear both as a
    sender and as a receiver. ``budget`` caps the number of search nodes;
    :class:`BudgetExceeded` is raised when the search would go beyond it.
    """
    m = platform.m
    lam = platform.scale()
    c = [int(x * lam) for x in platform.c]
    w = [int(x * lam) for x in platform.w]
    L = list(platform.loads)
    K = platform.n if max_moves is None else int(max_moves)
    if K < 0:
        raise ValueError("max_moves must be nonnegative")
    restricted = restrict_no_send_and_receive

    klass = [(c[i], w[i], L[i]) for i in range(m)]
    # no schedule beats spreading all tasks perfectly over the workers
    floor_all = _spread_bound(platform.n, w)
    # cheapest delivery-plus-compute for a task leaving worker i
    min_tail = [min((c[r] + w[r] for r in range(m) if r != i), default=None) for i in range(m)]

    sent = [0] * m
    got = [0] * m  # tasks received
    tail = [0] * m  # max over received tasks of delivery time + work queued after it
    touched = [False] * m
    plan: list[tuple[int, int]] = []

    nodes = 0

    def completion(i: int, extra_sends: int = 0) -> int:
        return max((L[i] - sent[i] - extra_sends + got[i]) * w[i], tail[i])

    def lower_bound(master_in: int, depth: int) -> int:
        rem = K - depth
        lb = floor_all
        for i in range(m):
            kmax = min(rem, L[i] - sent[i])
            if restricted and got[i]:
                kmax = 0
            value = completion(i)
            if kmax and min_tail[i] is not None:
                for k in range(1, kmax + 1):
                    value = min(value, max(completion(i, k), master_in + k * c[i] + min_tail[i]))
            if value > lb:
                lb = value
        return lb

    def allowed(i: int, claimed: int = -1) -> bool:
        if touched[i]:
            return True
        return not any(
            not touched[j] and j != claimed and klass[j] == klass[i] for j in range(i)
        )

    def children(master_in: int, master_out: int):
        for s in range(m):
            if sent[s] >= L[s] or (restricted and got[s]) or not allowed(s):
                continue
            arrival = master_in + c[s]
            for r in range(m):
                if r == s or (restricted and sent[r]) or not allowed(r, claimed=s):
                    continue
                yield s, r, arrival, max(arrival, master_out) + c[r]

    def descend(s, r, arrival, delivered, depth, visit):
        saved = (touched[s], touched[r], tail[r])
        sent[s] += 1
        got[r] += 1
        tail[r] = max(tail[r] + w[r], delivered + w[r])
        touched[s] = touched[r] = True
        plan.append((s, r))
        try:
            visit(arrival, delivered, depth + 1)
        finally:
            plan.pop()
            touched[s], touched[r], tail[r] = saved
            got[r] -= 1
            sent[s] -= 1

    def tick():
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"search exceeded {budget} nodes")

    # Pass 1: optimal value only; children tried best-first for early bounds.
    best_ms = max(L[i] * w[i] for i in range(m))

    def improve(master_in: int, master_out: int, depth: int) -> None:
        nonlocal best_ms
        tick()
        here = max(completion(i) for i in range(m))
        best_ms = min(best_ms, here)
        if depth == K or lower_bound(master_in, depth) >= best_ms:
            return
        scored = []
        for s, r, arrival, delivered in children(master_in, master_out):
            after = max(tail[r] + w[r], delivered + w[r], (L[r] - sent[r] + got[r] + 1) * w[r])
            rest = max(completion(i, 1 if i == s else 0) for i in range(m) if i != r)
            scored.append((max(after, rest), s, r, arrival, delivered))
        scored.sort()
        for _, s, r, arrival, delivered in scored:
            descend(s, r, arrival, delivered, depth, improve)

    # Pass 2: lexicographically first plan of minimal length reaching that value.
    found: list[tuple] = []

    def first_at(length: int):
        def visit(master_in: int, master_out: int, depth: int) -> None:
            tick()
            if depth == length:
                if max(completion(i) for i in range(m)) == best_ms:
                    found.append(tuple(plan))
                    raise _Found
                return
            if lower_bound(master_in, depth) > best_ms:
                return
            for s, r, arrival, delivered in list(children(master_in, master_out)):
                descend(s, r, arrival, delivered, depth, visit)
        return visit

    improve(0, 0, 0)
    for length in range(K + 1):
        try:
            first_at(length)(0, 0, 0)
        except _Found:
            break
    result = found[0]
    ms = simulate(platform, result).makespan
    assert ms == Fraction(best_ms, lam), (ms, best_ms, lam)
    return result, ms


class _Found(Exception):
    pass
