"""Scheduling algorithms for identical tasks initially held by the workers.

* :func:`bba` - greedy best-balance, one task per iteration.
* :func:`mbbsa_feasible` - Moore-based feasibility test for a target makespan.
* :func:`rbsa_feasible` - backward (as-late-as-possible) feasibility test.
* :func:`optimize_makespan` - binary search of the target makespan on the
  grid of reachable finish times, around either feasibility test.

Internally every platform is rescaled by the lcm of its denominators so the
algorithms run on plain integers; results are mapped back to exact fractions.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Callable, Sequence

from .core import MovePlan, Platform, as_fraction, simulate

log = logging.getLogger(__name__)

Feasibility = Callable[[Platform, Fraction], "tuple[bool, MovePlan]"]


@dataclass(frozen=True)
class _Scaled:
    scale: int
    c: tuple[int, ...]
    w: tuple[int, ...]
    load: tuple[int, ...]

    @classmethod
    def of(cls, platform: Platform) -> "_Scaled":
        lam = platform.scale()
        return cls(
            lam,
            tuple(int(x * lam) for x in platform.c),
            tuple(int(x * lam) for x in platform.w),
            platform.loads,
        )

    @property
    def f(self) -> list[int]:
        return [li * wi for li, wi in zip(self.load, self.w)]

    def target(self, M) -> Fraction | int:
        t = as_fraction(M) * self.scale
        return t.numerator if t.denominator == 1 else t


def bba(platform: Platform) -> tuple[MovePlan, Fraction]:
    """Best-balance algorithm.

    Each iteration takes the worker finishing last as sender, tentatively
    delivers one task to every other worker and keeps the one that would
    finish it earliest (ties: earlier current finish, then lower id). Stops
    as soon as the move would not finish before the sender does.

    On heterogeneous links the uplink uses the sender's cost and the downlink
    the receiver's. A worker that has received never sends and vice versa;
    when the latest worker is a receiver nothing can shorten it, so the
    search stops there.
    """
    sp = _Scaled.of(platform)
    m = platform.m
    c, w = sp.c, sp.w
    end = sp.f
    has_sent = [False] * m
    has_received = [False] * m
    master_in = master_out = 0
    plan: list[tuple[int, int]] = []

    while True:
        sender = max(range(m), key=lambda k: (end[k], -k))
        if has_received[sender] or end[sender] == 0:
            break
        arrival_master = master_in + c[sender]
        best = None
        for k in range(m):
            if k == sender or has_sent[k]:
                continue
            delivered = max(arrival_master, master_out) + c[k]
            tentative = max(end[k], delivered) + w[k]
            key = (tentative, end[k], k)
            if best is None or key < best[0]:
                best = (key, delivered)
        if best is None or end[sender] <= best[0][0]:
            break
        (tentative, _, receiver), delivered = best
        master_in = arrival_master
        master_out = delivered
        end[sender] -= w[sender]
        end[receiver] = tentative
        has_sent[sender] = True
        has_received[receiver] = True
        plan.append((sender, receiver))

    plan = tuple(plan)
    return plan, simulate(platform, plan).makespan


def moore(jobs: Sequence[tuple]) -> tuple[list[int], int]:
    """Moore-Hodgson rule: largest set of jobs finishing by their deadlines.

    ``jobs`` is a sequence of ``(deadline, cost)``. Jobs are scanned by
    non-decreasing deadline (ties by index); whenever the running completion
    time overshoots the current deadline the costliest job kept so far is
    dropped (ties: the earliest one added). Returns the on-time job indices in
    scan order and their count.
    """
    order = sorted(range(len(jobs)), key=lambda j: (jobs[j][0], j))
    heap: list[tuple] = []
    kept: set[int] = set()
    t = 0
    for seq, j in enumerate(order):
        d, cost = jobs[j]
        if cost <= 0:
            raise ValueError(f"job {j} has non-positive cost {cost}")
        heapq.heappush(heap, (-cost, seq, j))
        kept.add(j)
        t += cost
        if t > d:
            neg, _, drop = heapq.heappop(heap)
            kept.discard(drop)
            t += neg
    early = [j for j in order if j in kept]
    return early, len(early)


def _senders(sp: _Scaled, M) -> tuple[list[int], list[int]] | None:
    """Senders (sorted by link cost) and how many tasks each must shed, or None if M is hopeless."""
    f = sp.f
    senders = sorted((i for i in range(len(f)) if f[i] > M), key=lambda i: (sp.c[i], i))
    counts = []
    for s in senders:
        need = ceil((f[s] - M) / sp.w[s])
        if M // sp.c[s] < need:
            return None
        counts.append(need)
    return senders, counts


def _emissions(senders: list[int], counts: list[int], c: Sequence[int]) -> tuple[list[int], list[int]]:
    """Sender of every task in master order, and when each task is fully at the master."""
    order, avail = [], []
    t = 0
    for s, k in zip(senders, counts):
        for _ in range(k):
            t += c[s]
            order.append(s)
            avail.append(t)
    return order, avail


def mbbsa_feasible(platform: Platform, M) -> tuple[bool, MovePlan]:
    """Can every task be processed by ``M``? Moore-based test, exact for equal link costs.

    Receivers offer one deadline per extra task they could still finish by M
    (``M - l*w`` for the l-th task counted from the end); the master serves
    deadlines in EDD order with Moore's ejection rule, a reception costing the
    receiver's link time. A reception never starts before its task has
    reached the master, which only matters when link costs differ.
    """
    sp = _Scaled.of(platform)
    M = sp.target(M)
    if M < 0:
        return False, ()
    prep = _senders(sp, M)
    if prep is None:
        return False, ()
    senders, counts = prep
    need = sum(counts)
    if need == 0:
        return True, ()
    order, avail = _emissions(senders, counts, sp.c)
    c, w, f = sp.c, sp.w, sp.f

    deadlines = []
    for r in range(platform.m):
        if f[r] >= M:
            continue
        l = 0
        # more than `need` slots on one receiver can never be used
        while l < need and f[r] <= M - (l + 1) * w[r]:
            l += 1
            deadlines.append((M - l * w[r], r, l))
    deadlines.sort()

    uniform = len(set(c)) == 1
    sigma: list[tuple] = []  # (deadline, receiver, seq) in scan order
    heap: list[tuple] = []  # (-cost, seq) of kept receptions
    t = 0  # end of the last kept reception
    for seq, (d, r, _) in enumerate(deadlines):
        t = max(t, avail[len(sigma)]) + c[r]
        sigma.append((d, r, seq))
        heapq.heappush(heap, (-c[r], seq))
        while t > d:
            neg, drop = heapq.heappop(heap)
            sigma = [x for x in sigma if x[2] != drop]
            if uniform:
                t += neg
                break
            t, ok = _replay(sigma, avail, c)
            if ok:
                break
        if len(sigma) >= need:
            plan = tuple(zip(order, (x[1] for x in sigma)))
            return True, plan
    return False, ()


def _replay(sigma, avail, c) -> tuple[int, bool]:
    t = 0
    ok = True
    for pos, (d, r, _) in enumerate(sigma):
        t = max(t, avail[pos]) + c[r]
        if t > d:
            ok = False
    return t, ok


def rbsa_feasible(platform: Platform, M) -> tuple[bool, MovePlan]:
    """Backward feasibility test: fill receivers' idle time from M downwards.

    Each step picks the receiver whose reception can start the latest while
    its task still fits between the receiver's own load and the work already
    placed, the master's out-port being busy from the previously placed
    reception on. The first step places the last reception of the forward
    schedule, so the task it needs must already be at the master by then.
    Plans whose simulation overshoots M are reported infeasible.
    """
    sp = _Scaled.of(platform)
    M = sp.target(M)
    if M < 0:
        return False, ()
    prep = _senders(sp, M)
    if prep is None:
        return False, ()
    senders, counts = prep
    need = sum(counts)
    if need == 0:
        return True, ()
    order, avail = _emissions(senders, counts, sp.c)
    c, w, f = sp.c, sp.w, sp.f

    receivers = [r for r in range(platform.m) if f[r] < M]
    begin = {r: M for r in receivers}
    out_busy = M  # master out-port is committed from this time on
    chosen: list[int] = []
    while len(chosen) < need:
        ready = avail[need - 1 - len(chosen)]
        best = None
        for r in receivers:
            if begin[r] - w[r] < f[r]:
                continue
            start = min(begin[r] - w[r], out_busy) - c[r]
            if start < ready:
                continue
            if best is None or start > best[0]:
                best = (start, r)
        if best is None:
            return False, ()
        start, r = best
        begin[r] -= w[r]
        out_busy = start
        chosen.append(r)

    plan = tuple(zip(order, reversed(chosen)))
    if simulate(platform, plan).makespan > as_fraction(M) / sp.scale:
        log.debug("rbsa plan overshoots target %s", M)
        return False, ()
    return True, plan


def optimize_makespan(platform: Platform, inner: Feasibility = mbbsa_feasible) -> tuple[MovePlan, Fraction]:
    """Smallest target makespan accepted by ``inner``, searched by bisection.

    Finish times are integer multiples of ``1/lcm(denominators)``, so the
    search runs over that grid between the smallest and largest initial
    finish time. The largest is always feasible with the empty plan.
    """
    sp = _Scaled.of(platform)
    f = sp.f
    lo, hi = min(f), max(f)
    plan: MovePlan = ()
    while lo < hi:
        mid = (lo + hi) // 2
        ok, candidate = inner(platform, Fraction(mid, sp.scale))
        if ok:
            hi, plan = mid, candidate
        else:
            lo = mid + 1
    return plan, simulate(platform, plan).makespan


def mbbsa(platform: Platform) -> tuple[MovePlan, Fraction]:
    return optimize_makespan(platform, mbbsa_feasible)


def rbsa(platform: Platform) -> tuple[MovePlan, Fraction]:
    return optimize_makespan(platform, rbsa_feasible)


ALGORITHMS = {"bba": bba, "mbbsa": mbbsa, "rbsa": rbsa}
