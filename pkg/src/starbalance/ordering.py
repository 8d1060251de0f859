"""Redistribution of a known imbalance when computation time is negligible.

Senders are served by non-decreasing link cost so the master fills up as fast
as possible; receivers are served by non-increasing link cost so that slow
downlinks start first and fast ones absorb late arrivals. This ordering
minimises the time of the last delivery.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import MovePlan, Platform, simulate


class InfeasibleImbalance(ValueError):
    pass


def check_imbalance(platform: Platform, delta: Sequence[int]) -> tuple[int, ...]:
    delta = tuple(int(d) for d in delta)
    if len(delta) != platform.m:
        raise InfeasibleImbalance(f"expected {platform.m} imbalance values, got {len(delta)}")
    if sum(delta) != 0:
        raise InfeasibleImbalance(f"imbalance must sum to 0, sums to {sum(delta)}")
    for i, (d, wk) in enumerate(zip(delta, platform.workers)):
        if d > wk.load:
            raise InfeasibleImbalance(f"worker {i} must send {d} tasks but holds {wk.load}")
    return delta


def order_redistribution(platform: Platform, delta: Sequence[int]) -> tuple[MovePlan, Fraction]:
    """Optimal move order for imbalance ``delta`` (positive = surplus to send).

    Ties in link cost are broken by worker id. Returns the plan and its
    redistribution completion time.
    """
    delta = check_imbalance(platform, delta)
    c = platform.c
    senders = sorted((i for i, d in enumerate(delta) if d > 0), key=lambda i: (c[i], i))
    receivers = sorted((i for i, d in enumerate(delta) if d < 0), key=lambda i: (-c[i], i))
    out = [s for s in senders for _ in range(delta[s])]
    into = [r for r in receivers for _ in range(-delta[r])]
    plan = tuple(zip(out, into))
    return plan, simulate(platform, plan, ignore_compute=True).makespan


def redistribution_time(platform: Platform, delta: Sequence[int]) -> Fraction:
    return order_redistribution(platform, delta)[1]
