"""Makespan-optimal rebalancing of divisible load over a switched star.

Every worker talks to the switch at its own bandwidth, all links at once, and
computation overlaps communication. For a horizon T a worker's imbalance
(positive: load shipped out, negative: load taken in) must satisfy

    |delta_i| <= T * b_i,   delta_i >= alpha_i - T * s_i,   sum_i delta_i = 0.

The smallest feasible T is found exactly from the piecewise-linear function
``g(T) = sum_i max(alpha_i - T*s_i, -T*b_i)``; the transfers are then spread
over the horizon at constant rates, each sender feeding every receiver in
proportion to the receiver's deficit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import InvalidPlatform, Violation

TOL = 1e-9


class ConstraintViolation(ValueError):
    pass


@dataclass(frozen=True)
class DivisibleWorker:
    bandwidth: float
    speed: float
    alpha: float = 0.0

    def __post_init__(self):
        for name in ("bandwidth", "speed", "alpha"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.bandwidth > 0 and self.speed > 0):
            raise InvalidPlatform(f"bandwidth and speed must be positive: {self}")
        if not self.alpha >= 0:
            raise InvalidPlatform(f"alpha must be nonnegative: {self}")


@dataclass(frozen=True)
class DivisiblePlatform:
    workers: tuple[DivisibleWorker, ...]

    def __post_init__(self):
        object.__setattr__(self, "workers", tuple(self.workers))
        if not self.workers:
            raise InvalidPlatform("a platform needs at least one worker")

    @classmethod
    def from_lists(cls, bandwidth, speed, alpha) -> "DivisiblePlatform":
        if not (len(bandwidth) == len(speed) == len(alpha)):
            raise InvalidPlatform("bandwidth, speed and alpha must have the same length")
        return cls(tuple(DivisibleWorker(b, s, a) for b, s, a in zip(bandwidth, speed, alpha)))

    @property
    def b(self) -> np.ndarray:
        return np.array([wk.bandwidth for wk in self.workers])

    @property
    def s(self) -> np.ndarray:
        return np.array([wk.speed for wk in self.workers])

    @property
    def alpha(self) -> np.ndarray:
        return np.array([wk.alpha for wk in self.workers])


@dataclass(frozen=True)
class DivisibleSolution:
    T0: float
    delta: np.ndarray
    senders: tuple[int, ...]
    receivers: tuple[int, ...]
    L: float
    f: np.ndarray  # senders x receivers, load moved from senders[a] to receivers[b]
    lam: np.ndarray  # communication rates, same shape as f
    gamma: np.ndarray  # rates at which receivers compute each incoming stream
    gamma_self: dict[int, float] = field(default_factory=dict)  # own-load rate of each non-sender

    def as_dict(self) -> dict:
        def pairs(mat):
            return [
                [i, j, float(mat[a, b])]
                for a, i in enumerate(self.senders)
                for b, j in enumerate(self.receivers)
            ]

        return {
            "t0": float(self.T0),
            "delta": [float(x) for x in self.delta],
            "senders": list(self.senders),
            "receivers": list(self.receivers),
            "L": float(self.L),
            "f": pairs(self.f),
            "lambda": pairs(self.lam),
            "gamma": pairs(self.gamma),
            "gamma_self": [[j, j, float(v)] for j, v in sorted(self.gamma_self.items())],
        }


def imbalance_bounds(platform: DivisiblePlatform, T: float) -> tuple[np.ndarray, np.ndarray]:
    """Per-worker interval [lower, upper] allowed for delta_i at horizon T."""
    lower = np.maximum(platform.alpha - T * platform.s, -T * platform.b)
    return lower, T * platform.b


def g(platform: DivisiblePlatform, T: float) -> float:
    """Sum of the smallest admissible imbalances; T is feasible iff this is <= 0."""
    return float(imbalance_bounds(platform, T)[0].sum())


def _floor_time(platform: DivisiblePlatform) -> float:
    # below this some worker cannot even ship out what it cannot compute
    return float(np.max(platform.alpha / (platform.s + platform.b)))


def min_time_bisection(platform: DivisiblePlatform, rtol: float = 1e-12) -> float:
    """Smallest feasible horizon by plain bisection on ``g``."""
    lo = _floor_time(platform)
    if g(platform, lo) <= 0:
        return lo
    hi = max(lo, float(np.max(platform.alpha / platform.s)))
    while g(platform, hi) > 0:
        hi *= 2
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if g(platform, mid) <= 0:
            hi = mid
        else:
            lo = mid
    return hi


def min_time_breakpoints(platform: DivisiblePlatform) -> float:
    """Smallest feasible horizon, exactly, by scanning the pieces of ``g``.

    Term i of ``g`` switches from ``alpha_i - T*s_i`` to ``-T*b_i`` at
    ``alpha_i / (s_i - b_i)`` when ``s_i > b_i`` and never otherwise, so ``g``
    is linear between consecutive switch points and its root is read off the
    first piece where it goes non-positive.
    """
    alpha, s, b = platform.alpha, platform.s, platform.b
    t_floor = _floor_time(platform)
    if g(platform, t_floor) <= 0:
        return t_floor
    with np.errstate(divide="ignore", invalid="ignore"):
        switch = np.where(s > b, alpha / (s - b), np.inf)
    points = sorted({t_floor, *(float(x) for x in switch if t_floor < x < np.inf)})
    points.append(np.inf)
    for left, right in zip(points, points[1:]):
        probe = 2 * left + 1 if right == np.inf else 0.5 * (left + right)
        compute_side = alpha - probe * s > -probe * b
        # g(T) = intercept - slope * T on this piece
        intercept = float(alpha[compute_side].sum())
        slope = float(s[compute_side].sum() + b[~compute_side].sum())
        root = intercept / slope
        if root <= right:
            return max(root, left)
    raise AssertionError("g has no root")  # unreachable: g -> -inf


def solve_min_time(platform: DivisiblePlatform) -> tuple[float, np.ndarray]:
    """Optimal horizon T0 and one imbalance vector achieving it.

    Among the optimal imbalances this picks the lowest admissible value for
    every worker, then hands the remaining slack to workers in id order up to
    their bandwidth limit.
    """
    alpha = platform.alpha
    if not alpha.any():
        return 0.0, np.zeros(len(alpha))
    T0 = min_time_breakpoints(platform)
    if g(platform, T0) > TOL * max(1.0, float(alpha.sum())):
        T0 = min_time_bisection(platform)
    lower, upper = imbalance_bounds(platform, T0)
    delta = lower.copy()
    slack = -float(lower.sum())
    for i in range(len(delta)):
        if slack <= 0:
            break
        give = min(slack, float(upper[i] - lower[i]))
        delta[i] += give
        slack -= give
    return T0, delta


def build_plan(platform: DivisiblePlatform, T0: float, delta) -> DivisibleSolution:
    """Transfers, communication rates and compute rates for a feasible (T0, delta)."""
    delta = np.asarray(delta, dtype=float)
    problems = _lp_violations(platform, T0, delta)
    if problems:
        raise ConstraintViolation("; ".join(str(v) for v in problems))
    senders = tuple(int(i) for i in np.flatnonzero(delta > 0))
    receivers = tuple(int(j) for j in np.flatnonzero(delta < 0))
    L = float(delta[list(senders)].sum()) if senders else 0.0
    if L > 0 and receivers:
        # f_ij = delta_i * delta_j / sum_R delta_k, with sum_R delta_k = -L
        f = np.outer(delta[list(senders)], delta[list(receivers)]) / float(delta[list(receivers)].sum())
    else:
        f = np.zeros((len(senders), len(receivers)))
    lam = f / T0 if T0 > 0 else np.zeros_like(f)
    gamma = lam.copy()
    alpha = platform.alpha
    gamma_self = {
        j: (float(alpha[j]) / T0 if T0 > 0 else 0.0)
        for j in range(len(delta))
        if j not in senders
    }
    sol = DivisibleSolution(T0, delta, senders, receivers, L, f, lam, gamma, gamma_self)
    problems = verify_solution(platform, sol)
    if problems:
        raise ConstraintViolation("; ".join(str(v) for v in problems))
    return sol


def solve(platform: DivisiblePlatform) -> DivisibleSolution:
    T0, delta = solve_min_time(platform)
    return build_plan(platform, T0, delta)


def _lp_violations(platform: DivisiblePlatform, T: float, delta: np.ndarray, tol: float = TOL) -> list[Violation]:
    out = []
    b, s, alpha = platform.b, platform.s, platform.alpha
    if len(delta) != len(b):
        return [Violation("shape", f"{len(delta)} imbalances for {len(b)} workers")]
    for i in range(len(delta)):
        if abs(delta[i]) > T * b[i] + tol:
            out.append(Violation("bandwidth", f"worker {i}: |delta|={abs(delta[i]):.12g} > T*b={T * b[i]:.12g}"))
        if delta[i] < alpha[i] - T * s[i] - tol:
            out.append(Violation("capacity",
                                 f"worker {i}: delta={delta[i]:.12g} < alpha - T*s={alpha[i] - T * s[i]:.12g}"))
    if abs(delta.sum()) > tol:
        out.append(Violation("balance", f"imbalances sum to {delta.sum():.12g}"))
    return out


def verify_solution(platform: DivisiblePlatform, sol: DivisibleSolution, tol: float = TOL) -> list[Violation]:
    """Every constraint the schedule must meet; empty when the solution is valid."""
    out = _lp_violations(platform, sol.T0, np.asarray(sol.delta, dtype=float), tol)
    delta = np.asarray(sol.delta, dtype=float)
    alpha, s = platform.alpha, platform.s
    S, R = list(sol.senders), list(sol.receivers)
    shape = (len(S), len(R))
    for name in ("f", "lam", "gamma"):
        if getattr(sol, name).shape != shape:
            out.append(Violation("shape", f"{name} has shape {getattr(sol, name).shape}, expected {shape}"))
    if out and any(v.rule == "shape" for v in out):
        return out

    for a, i in enumerate(S):
        total = float(sol.f[a].sum())
        if abs(total - delta[i]) > tol:
            out.append(Violation("row sum", f"sender {i} ships {total:.12g}, imbalance {delta[i]:.12g}"))
    for bj, j in enumerate(R):
        total = float(sol.f[:, bj].sum())
        if abs(total + delta[j]) > tol:
            out.append(Violation("column sum", f"receiver {j} gets {total:.12g}, deficit {-delta[j]:.12g}"))
    if (sol.f < -tol).any():
        out.append(Violation("negative transfer", f"min f = {sol.f.min():.12g}"))

    T0 = sol.T0
    if T0 > 0:
        if np.abs(sol.lam - sol.f / T0).max(initial=0.0) > tol:
            out.append(Violation("rate definition", "lambda differs from f / T0"))
        if np.abs(sol.gamma - sol.f / T0).max(initial=0.0) > tol:
            out.append(Violation("rate definition", "gamma differs from f / T0"))
    elif sol.f.size and np.abs(sol.f).max() > tol:
        out.append(Violation("rate definition", "load moves within a zero horizon"))
    if (sol.gamma > sol.lam + tol).any():
        out.append(Violation("gamma exceeds lambda", "a stream is computed faster than it arrives"))
    for bj, j in enumerate(R):
        own = alpha[j] / T0 if T0 > 0 else 0.0
        used = float(sol.gamma[:, bj].sum()) + own
        if used > s[j] + tol:
            out.append(Violation("rate capacity", f"receiver {j} needs rate {used:.12g} > speed {s[j]:.12g}"))
    for j, rate in sol.gamma_self.items():
        own = alpha[j] / T0 if T0 > 0 else 0.0
        if abs(rate - own) > tol:
            out.append(Violation("own-load rate", f"worker {j}: {rate:.12g} != alpha/T0 = {own:.12g}"))
    return out
