"""Star platform data model and the one-port timing simulator.

Times are exact :class:`fractions.Fraction` values throughout. A schedule is
stored as a :data:`MovePlan` (which worker sends a task to which other worker,
in master order); all timing is derived by :func:`simulate`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Move = tuple[int, int]
MovePlan = tuple[Move, ...]


class InvalidPlatform(ValueError):
    """Platform parameters violate the model (non-positive costs, bad loads)."""


class InvalidPlan(ValueError):
    """A move plan cannot be executed on the given platform."""


def as_fraction(value) -> Fraction:
    if isinstance(value, float):
        # floats go through repr so 0.1 stays 1/10 rather than its binary expansion
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class Worker:
    c: Fraction  # time to move one task over the worker's link
    w: Fraction  # time to compute one task
    load: int = 0

    def __post_init__(self):
        object.__setattr__(self, "c", as_fraction(self.c))
        object.__setattr__(self, "w", as_fraction(self.w))
        if self.c <= 0 or self.w <= 0:
            raise InvalidPlatform(f"c and w must be positive, got c={self.c}, w={self.w}")
        if isinstance(self.load, bool) or int(self.load) != self.load or self.load < 0:
            raise InvalidPlatform(f"load must be a nonnegative integer, got {self.load!r}")
        object.__setattr__(self, "load", int(self.load))


@dataclass(frozen=True)
class Platform:
    workers: tuple[Worker, ...]

    def __post_init__(self):
        object.__setattr__(self, "workers", tuple(self.workers))
        if not self.workers:
            raise InvalidPlatform("a platform needs at least one worker")

    @classmethod
    def from_lists(cls, c: Sequence, w: Sequence, load: Sequence[int]) -> "Platform":
        if not (len(c) == len(w) == len(load)):
            raise InvalidPlatform("c, w and load must have the same length")
        return cls(tuple(Worker(ci, wi, li) for ci, wi, li in zip(c, w, load)))

    @property
    def m(self) -> int:
        return len(self.workers)

    @property
    def n(self) -> int:
        return sum(wk.load for wk in self.workers)

    @property
    def c(self) -> tuple[Fraction, ...]:
        return tuple(wk.c for wk in self.workers)

    @property
    def w(self) -> tuple[Fraction, ...]:
        return tuple(wk.w for wk in self.workers)

    @property
    def loads(self) -> tuple[int, ...]:
        return tuple(wk.load for wk in self.workers)

    @property
    def comm_homogeneous(self) -> bool:
        return len(set(self.c)) == 1

    @property
    def comp_homogeneous(self) -> bool:
        return len(set(self.w)) == 1

    def scale(self) -> int:
        """Least common multiple of the denominators of all c_i and w_i.

        Every finish time of any schedule is an integer multiple of ``1/scale()``.
        """
        dens = [x.denominator for wk in self.workers for x in (wk.c, wk.w)]
        return lcm(*dens)


def finish_times(platform: Platform) -> list[Fraction]:
    """Time each worker needs to process its initial load alone."""
    return [wk.load * wk.w for wk in platform.workers]


@dataclass(frozen=True)
class MoveRecord:
    index: int
    sender: int
    receiver: int
    uplink_start: Fraction
    arrival: Fraction  # end of the uplink: task fully held by the master
    downlink_start: Fraction
    downlink_end: Fraction


@dataclass(frozen=True)
class ComputeInterval:
    worker: int
    start: Fraction
    end: Fraction
    tasks: int
    move: int | None = None  # index of the move that delivered the task, None for initial load


@dataclass(frozen=True)
class Timeline:
    moves: tuple[MoveRecord, ...]
    compute: tuple[ComputeInterval, ...]
    makespan: Fraction

    def intervals(self) -> Iterable[tuple[str, int, Fraction, Fraction]]:
        """Flatten to (kind, worker, start, end) rows, for Gantt export."""
        for rec in self.moves:
            yield "uplink", rec.sender, rec.uplink_start, rec.arrival
            yield "downlink", rec.receiver, rec.downlink_start, rec.downlink_end
        for iv in self.compute:
            yield "compute", iv.worker, iv.start, iv.end


def check_plan(platform: Platform, plan: Iterable[Move]) -> MovePlan:
    plan = tuple((int(s), int(r)) for s, r in plan)
    sent = [0] * platform.m
    for k, (s, r) in enumerate(plan):
        if not (0 <= s < platform.m and 0 <= r < platform.m):
            raise InvalidPlan(f"move {k}: worker id out of range in {(s, r)}")
        if s == r:
            raise InvalidPlan(f"move {k}: worker {s} sends to itself")
        sent[s] += 1
    for i, (cnt, wk) in enumerate(zip(sent, platform.workers)):
        if cnt > wk.load:
            raise InvalidPlan(f"worker {i} sends {cnt} tasks but holds only {wk.load}")
    return plan


def simulate(platform: Platform, plan: Iterable[Move], ignore_compute: bool = False) -> Timeline:
    """Time a move plan with as-soon-as-possible dispatch.

    Tasks cross the master in plan order: the master's in-port takes uplink k
    right after uplink k-1, the out-port forwards task k once it has fully
    arrived and downlink k-1 is done. Senders compute their retained tasks from
    t=0; a receiver queues each delivered task behind its own work.

    With ``ignore_compute`` every computation takes zero time, so the makespan
    is the redistribution completion time (last delivery).
    """
    plan = check_plan(platform, plan)
    workers = platform.workers
    sent = [0] * platform.m
    for s, _ in plan:
        sent[s] += 1

    zero = Fraction(0)
    cost = [zero if ignore_compute else wk.w for wk in workers]
    free = [(wk.load - sent[i]) * cost[i] for i, wk in enumerate(workers)]
    compute = [
        ComputeInterval(i, zero, free[i], wk.load - sent[i])
        for i, wk in enumerate(workers)
        if wk.load - sent[i] > 0
    ]

    records = []
    in_free = zero
    out_free = zero
    for k, (s, r) in enumerate(plan):
        up = in_free
        arrival = up + workers[s].c
        in_free = arrival
        down = max(arrival, out_free)
        down_end = down + workers[r].c
        out_free = down_end
        records.append(MoveRecord(k, s, r, up, arrival, down, down_end))
        start = max(down_end, free[r])
        free[r] = start + cost[r]
        compute.append(ComputeInterval(r, start, free[r], 1, k))

    if ignore_compute:
        makespan = max([rec.downlink_end for rec in records], default=zero)
    else:
        makespan = max([iv.end for iv in compute], default=zero)
    return Timeline(tuple(records), tuple(compute), makespan)


def makespan(platform: Platform, plan: Iterable[Move]) -> Fraction:
    return simulate(platform, plan).makespan


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.detail}"


def _overlaps(intervals):
    ordered = sorted(intervals, key=lambda iv: (iv[0], iv[1]))
    for a, b in zip(ordered, ordered[1:]):
        if b[0] < a[1]:
            yield a, b


def validate(timeline: Timeline, platform: Platform) -> list[Violation]:
    """Check a timeline against the one-port model; returns an empty list when valid.

    This deliberately re-derives every rule from the intervals rather than
    re-running the simulator, so it can audit hand-built or foreign timelines.
    """
    out: list[Violation] = []
    workers = platform.workers
    m = platform.m

    def bad(rule, detail):
        out.append(Violation(rule, detail))

    sent = [0] * m
    received = [0] * m
    for rec in timeline.moves:
        s, r = rec.sender, rec.receiver
        if not (0 <= s < m and 0 <= r < m):
            bad("unknown worker", f"move {rec.index}: {(s, r)}")
            continue
        if s == r:
            bad("self move", f"move {rec.index}: worker {s}")
        sent[s] += 1
        received[r] += 1
        if rec.uplink_start < 0:
            bad("negative time", f"move {rec.index} uplink starts at {rec.uplink_start}")
        if rec.arrival - rec.uplink_start != workers[s].c:
            bad("uplink duration", f"move {rec.index}: [{rec.uplink_start}, {rec.arrival}] but c={workers[s].c}")
        if rec.downlink_end - rec.downlink_start != workers[r].c:
            bad("downlink duration",
                f"move {rec.index}: [{rec.downlink_start}, {rec.downlink_end}] but c={workers[r].c}")
        if rec.downlink_start < rec.arrival:
            bad("forwarded before received",
                f"move {rec.index}: downlink starts {rec.downlink_start} < arrival {rec.arrival}")

    ups = [(rec.uplink_start, rec.arrival, rec.index) for rec in timeline.moves]
    downs = [(rec.downlink_start, rec.downlink_end, rec.index) for rec in timeline.moves]
    for a, b in _overlaps(ups):
        bad("in-port overlap", f"moves {a[2]} [{a[0]}, {a[1]}] and {b[2]} [{b[0]}, {b[1]}]")
    for a, b in _overlaps(downs):
        bad("out-port overlap", f"moves {a[2]} [{a[0]}, {a[1]}] and {b[2]} [{b[0]}, {b[1]}]")

    for i, cnt in enumerate(sent):
        if cnt > workers[i].load:
            bad("oversend", f"worker {i} sends {cnt} of {workers[i].load} tasks")

    by_index = {rec.index: rec for rec in timeline.moves}
    per_worker: dict[int, list[ComputeInterval]] = {i: [] for i in range(m)}
    for iv in timeline.compute:
        if iv.worker not in per_worker:
            bad("unknown worker", f"compute interval on {iv.worker}")
            continue
        per_worker[iv.worker].append(iv)
        if iv.start < 0:
            bad("negative time", f"worker {iv.worker} computes from {iv.start}")
        if iv.end - iv.start != iv.tasks * workers[iv.worker].w:
            bad("compute duration", f"worker {iv.worker} [{iv.start}, {iv.end}] for {iv.tasks} task(s)")
        if iv.move is not None:
            rec = by_index.get(iv.move)
            if rec is None or rec.receiver != iv.worker:
                bad("orphan compute", f"worker {iv.worker} computes task of move {iv.move}")
            elif iv.start < rec.downlink_end:
                bad("computed before received",
                    f"move {iv.move}: compute starts {iv.start} < delivery {rec.downlink_end}")

    for i, ivs in per_worker.items():
        for a, b in _overlaps([(iv.start, iv.end, iv.move) for iv in ivs]):
            bad("compute overlap", f"worker {i}: [{a[0]}, {a[1]}] and [{b[0]}, {b[1]}]")
        done = sum(iv.tasks for iv in ivs)
        expected = workers[i].load - sent[i] + received[i]
        if done != expected:
            bad("task count", f"worker {i} computes {done} tasks, holds {expected}")

    last = max([iv.end for iv in timeline.compute], default=Fraction(0))
    if timeline.makespan != last:
        bad("makespan", f"reported {timeline.makespan}, last compute ends {last}")
    return out


def sends_and_receives(plan: Iterable[Move]) -> set[int]:
    """Workers that appear both as a sender and as a receiver in ``plan``."""
    senders, receivers = set(), set()
    for s, r in plan:
        senders.add(s)
        receivers.add(r)
    return senders & receivers
