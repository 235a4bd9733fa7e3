"""Executable checks of the entropy postulates and the derivation steps.

Every check sweeps a parameter range, records the worst residual it saw and
the input that produced it, and returns an :class:`AxiomReport`. Checks
that draw random inputs use :class:`random.Random` (Mersenne Twister) seeded
explicitly, so a report is reproducible from its parameters.

Most checks bound a residual from above. ``monotonicity`` and
``likelihood`` instead bound the smallest observed gap from below: they pass
only when every gap is strictly positive.

The entropy-based checks fold range violations (``H < 0`` or
``H > log A``) into their residual. A functional that is additive but
negative, for instance, is still caught.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

import numpy as np

from . import dist_core
from .composition import Branch, Leaf, flatten, total_uncertainty
from .dist_core import MAX_COUNT, RationalDist, RealDist

__all__ = [
    "CHECKS",
    "DEFAULT_CONTINUITY_TARGET",
    "AxiomReport",
    "ConvergencePoint",
    "LogFitResult",
    "check_additivity",
    "check_composition",
    "check_continuity",
    "check_decomposition",
    "check_general_additivity",
    "check_likelihood",
    "check_log_derivative",
    "check_monotonicity",
    "continuity_convergence",
    "estimate_k",
    "random_rational_dist",
    "random_tree",
    "run_check",
    "tree_to_obj",
]

IDENTITY_TOL = 1e-9
ADDITIVITY_TOL = 1e-12
GENERAL_ADDITIVITY_TOL = 1e-10
FD_TOL = 1e-4
CONVERGENCE_TOL = 1e-3

DEFAULT_CONTINUITY_TARGET = (1 / math.pi, 1 - 1 / math.pi)
DEFAULT_SCHEDULE = (10, 100, 1000, 10000)


@dataclass(frozen=True)
class AxiomReport:
    check_name: str
    sweep_description: str
    cases_run: int
    worst_residual: float
    worst_case_input: str
    passed: bool
    tolerance: float
    lower_bound: bool = False
    skipped: int = 0

    @property
    def criterion(self) -> str:
        return f"> {self.tolerance:g}" if self.lower_bound else f"<= {self.tolerance:g}"


def _report(name, sweep, cases, worst, worst_input, tol, lower_bound=False, skipped=0):
    if cases < 1:
        raise ValueError(f"{name}: no cases were run")
    passed = worst > tol if lower_bound else worst <= tol
    return AxiomReport(
        check_name=name,
        sweep_description=sweep,
        cases_run=cases,
        worst_residual=float(worst),
        worst_case_input=json.dumps(worst_input, separators=(",", ":")),
        passed=bool(passed),
        tolerance=tol,
        lower_bound=lower_bound,
        skipped=skipped,
    )


def _range_violation(h: float, num_outcomes: int, base: float) -> float:
    upper = dist_core.log_base(num_outcomes, base)
    return max(0.0, -h, h - upper)


class _Worst:
    """Tracks the largest residual and the input it came from."""

    def __init__(self, lower=False):
        self.lower = lower
        self.value = math.inf if lower else -math.inf
        self.input = None

    def update(self, value, make_input):
        if (value < self.value) if self.lower else (value > self.value):
            self.value = value
            self.input = make_input()


# -- random inputs ---------------------------------------------------------


def random_rational_dist(rng: random.Random, max_outcomes: int = 20,
                         max_total: int | None = None, max_count: int = 20) -> RationalDist:
    """Counts drawn uniformly from ``[0, max_count]``, resampled until at
    least one is positive and the total is at most ``max_total``."""
    while True:
        size = rng.randint(1, max_outcomes)
        counts = [rng.randint(0, max_count) for _ in range(size)]
        total = sum(counts)
        if total == 0 or (max_total is not None and total > max_total):
            continue
        return RationalDist(tuple(counts))


def _random_weights(rng: random.Random, size: int) -> tuple[float, ...]:
    while True:
        w = [0.0 if rng.random() < 0.1 else rng.random() for _ in range(size)]
        s = math.fsum(w)
        if s > 0:
            return tuple(x / s for x in w)


def random_tree(rng: random.Random, max_depth: int = 5, max_fanout: int = 6,
                max_outcomes: int = 6, leaf_prob: float = 0.35, _depth: int = 1):
    """Random composition tree no deeper than ``max_depth`` levels.

    Leaves alternate at random between count-based and real-valued
    distributions.
    """
    if _depth >= max_depth or rng.random() < leaf_prob:
        dist = random_rational_dist(rng, max_outcomes)
        if rng.random() < 0.5:
            dist = RealDist(dist.probs)
        return Leaf(dist)
    fanout = rng.randint(1, max_fanout)
    weights = _random_weights(rng, fanout)
    return Branch(tuple(
        (w, random_tree(rng, max_depth, max_fanout, max_outcomes, leaf_prob, _depth + 1))
        for w in weights
    ))


def tree_to_obj(tree):
    """JSON-friendly nested form of a tree."""
    if isinstance(tree, Leaf):
        d = tree.dist
        if isinstance(d, RationalDist):
            return {"leaf_counts": list(d.counts)}
        return {"leaf_probs": list(d.probs)}
    return {"branch": [[p, tree_to_obj(child)] for p, child in tree.children]}


# -- postulate checks --------------------------------------------------------


def check_monotonicity(n_max: int = 10**6, base: float = 2) -> AxiomReport:
    """Uniform entropy must strictly increase from ``n`` to ``n + 1`` outcomes."""
    if n_max < 2:
        raise ValueError(f"n_max must be >= 2, got {n_max}")
    worst = _Worst(lower=True)
    prev = float(dist_core.uniform_entropy(1, base))
    for n in range(1, n_max):
        cur = float(dist_core.uniform_entropy(n + 1, base))
        gap = cur - prev
        if gap < worst.value:
            worst.value, worst.input = gap, {"n": n}
        prev = cur
    return _report("monotonicity", f"H(n+1) - H(n) for 1 <= n < {n_max}, base {base:g}",
                   n_max - 1, worst.value, worst.input, 0.0, lower_bound=True)


def check_additivity(x_max: int = 64, base: float = 2) -> AxiomReport:
    """``H(x) + H(y) = H(xy)`` for uniform distributions, ``1 <= x, y <= x_max``."""
    if x_max < 2:
        raise ValueError(f"x_max must be >= 2, got {x_max}")
    worst = _Worst()
    cases = skipped = 0
    h = [0.0] + [float(dist_core.uniform_entropy(x, base)) for x in range(1, x_max + 1)]
    for x in range(1, x_max + 1):
        for y in range(1, x_max + 1):
            if x * y > MAX_COUNT:
                skipped += 1
                continue
            residual = abs(h[x] + h[y] - float(dist_core.uniform_entropy(x * y, base)))
            worst.update(residual, lambda: {"x": x, "y": y})
            cases += 1
    sweep = f"uniform x, y in [1, {x_max}], base {base:g}"
    if skipped:
        sweep += f"; {skipped} pairs skipped (x*y > {MAX_COUNT})"
    return _report("additivity", sweep, cases, worst.value, worst.input,
                   ADDITIVITY_TOL, skipped=skipped)


def check_general_additivity(trials: int = 1000, max_outcomes: int = 20,
                             seed: int = 42, base: float = 2) -> AxiomReport:
    """Entropy of a product of independent experiments is the sum of entropies."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = random.Random(seed)
    worst = _Worst()
    for _ in range(trials):
        a = random_rational_dist(rng, max_outcomes)
        b = random_rational_dist(rng, max_outcomes)
        ab = dist_core.product(a, b)
        ha, hb, hab = (float(dist_core.entropy(d, base)) for d in (a, b, ab))
        residual = max(
            abs(hab - ha - hb),
            _range_violation(ha, len(a), base),
            _range_violation(hb, len(b), base),
            _range_violation(hab, len(ab), base),
        )
        worst.update(residual, lambda: {"a": list(a.counts), "b": list(b.counts)})
    return _report(
        "general-additivity",
        f"{trials} random count pairs, up to {max_outcomes} outcomes, seed {seed}, base {base:g}",
        trials, worst.value, worst.input, GENERAL_ADDITIVITY_TOL,
    )


def check_likelihood(trials: int = 500, max_outcomes: int = 20,
                     seed: int = 0, base: float = 2) -> AxiomReport:
    """A biased distribution is less uncertain than the uniform one on the
    same support.

    Each trial starts from equal counts and moves some mass from one
    outcome to another.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = random.Random(seed)
    worst = _Worst(lower=True)
    for _ in range(trials):
        size = rng.randint(2, max_outcomes)
        level = rng.randint(1, 20)
        counts = [level] * size
        src, dst = rng.sample(range(size), 2)
        moved = rng.randint(1, level)
        counts[src] -= moved
        counts[dst] += moved
        biased = RationalDist(tuple(counts))
        gap = float(dist_core.uniform_entropy(size, base)) - float(dist_core.entropy(biased, base))
        worst.update(gap, lambda: {"counts": counts})
    return _report(
        "likelihood",
        f"{trials} perturbed uniforms, up to {max_outcomes} outcomes, seed {seed}, base {base:g}",
        trials, worst.value, worst.input, 0.0, lower_bound=True,
    )


def check_composition(trials: int = 500, max_depth: int = 5, seed: int = 7,
                      base: float = 2) -> AxiomReport:
    """Weighted node uncertainties of a tree sum to the entropy of its flattening."""
    if trials < 1 or max_depth < 1:
        raise ValueError("trials and max_depth must be >= 1")
    rng = random.Random(seed)
    worst = _Worst()
    for _ in range(trials):
        tree = random_tree(rng, max_depth)
        flat = flatten(tree)
        h_flat = float(dist_core.entropy(flat, base))
        total = total_uncertainty(tree, base).total
        residual = max(abs(h_flat - total), _range_violation(h_flat, len(flat), base))
        worst.update(residual, lambda: tree_to_obj(tree))
    return _report(
        "composition",
        f"{trials} random trees, depth <= {max_depth}, seed {seed}, base {base:g}",
        trials, worst.value, worst.input, IDENTITY_TOL,
    )


def check_decomposition(trials: int = 1000, max_total: int = 10000, seed: int = 1,
                        base: float = 2, max_outcomes: int = 20) -> AxiomReport:
    """``log N = H[p] + sum_i p_i log n_i`` on random count vectors."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rng = random.Random(seed)
    # wide enough that totals actually reach max_total
    max_count = max(20, max_total // max_outcomes)
    worst = _Worst()
    for _ in range(trials):
        d = random_rational_dist(rng, max_outcomes, max_total, max_count)
        rep = dist_core.decompose(d, base)
        residual = max(abs(rep.residual), _range_violation(rep.entropy_term, len(d), base))
        worst.update(residual, lambda: {"counts": list(d.counts)})
    return _report(
        "decomposition",
        f"{trials} random count vectors, N <= {max_total}, seed {seed}, base {base:g}",
        trials, worst.value, worst.input, IDENTITY_TOL,
    )


# -- derivation steps -------------------------------------------------------


@dataclass(frozen=True)
class LogFitResult:
    """``x * dH/dx`` sampled on a grid.

    ``max_deviation`` is measured against ``k_estimate``; ``spread`` is the
    largest ``|x dH/dx - y dH/dy|`` over all pairs of grid points.
    """

    k_estimate: float
    max_deviation: float
    grid: tuple[float, ...]
    spread: float
    base: float


def estimate_k(x_min: float = 1.0, x_max: float = 100.0, grid_points: int = 1000,
               base: float = 2, spacing: str = "log") -> LogFitResult:
    """Finite-difference estimate of the constant ``k`` in ``x H'(x) = k``.

    ``H(x)`` is the uniform entropy ``log_base(x)`` extended to real ``x``.
    Central differences are taken at interior grid points using their two
    neighbours. With ``spacing="log"`` the grid is geometric, so the
    truncation error is the same at every point (relative size
    ``(ln r)^2 / 6`` for ratio ``r``). A linear grid loses accuracy near
    ``x = 1`` where curvature is largest.
    """
    if not (1 <= x_min < x_max) or not math.isfinite(x_max):
        raise ValueError(f"need 1 <= x_min < x_max, got [{x_min}, {x_max}]")
    if grid_points < 3:
        raise ValueError(f"grid_points must be >= 3, got {grid_points}")
    if spacing == "log":
        x = np.geomspace(x_min, x_max, grid_points)
    elif spacing == "linear":
        x = np.linspace(x_min, x_max, grid_points)
    else:
        raise ValueError(f"spacing must be 'log' or 'linear', got {spacing!r}")
    if np.any(np.diff(x) <= 0):
        raise ValueError("degenerate grid: points are not strictly increasing")
    h = np.array([dist_core.log_base(float(v), base) for v in x])
    xd = x[1:-1] * (h[2:] - h[:-2]) / (x[2:] - x[:-2])
    k = float(xd.mean())
    return LogFitResult(
        k_estimate=k,
        max_deviation=float(np.abs(xd - k).max()),
        grid=tuple(float(v) for v in x),
        spread=float(xd.max() - xd.min()),
        base=float(base),
    )


def check_log_derivative(base: float = 2, x_min: float = 1.0, x_max: float = 100.0,
                         grid_points: int = 1000) -> AxiomReport:
    """``estimate_k`` recovers ``1 / ln(base)`` with a flat profile."""
    fit = estimate_k(x_min, x_max, grid_points, base)
    expected = 1 / math.log(base)
    residual = max(abs(fit.k_estimate - expected), fit.max_deviation)
    if fit.k_estimate <= 0:
        residual = math.inf
    return _report(
        "log-derivative",
        f"x*dH/dx on {grid_points} geometric points in [{x_min:g}, {x_max:g}], base {base:g}",
        grid_points - 2, residual,
        {"k_estimate": fit.k_estimate, "expected": expected, "max_deviation": fit.max_deviation},
        FD_TOL,
    )


@dataclass(frozen=True)
class ConvergencePoint:
    N: int
    counts: tuple[int, ...]
    error: float


def continuity_convergence(target: RealDist, n_schedule, base: float = 2) -> list[ConvergencePoint]:
    """Entropy error of rational approximations with growing denominators."""
    schedule = [int(n) for n in n_schedule]
    if not schedule:
        raise ValueError("empty schedule")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ValueError(f"schedule must be strictly increasing: {schedule}")
    if schedule[0] < len(target):
        raise ValueError(f"every N must be >= the number of outcomes ({len(target)})")
    h_target = float(dist_core.entropy(target, base))
    points = []
    for n in schedule:
        approx = dist_core.rational_approx(target, n)
        err = abs(float(dist_core.entropy(approx, base)) - h_target)
        points.append(ConvergencePoint(n, approx.counts, err))
    return points


def is_non_increasing(errors, window: int = 1) -> bool:
    """Whether the trailing-window maximum of ``errors`` never rises."""
    smoothed = [max(errors[max(0, i - window + 1):i + 1]) for i in range(len(errors))]
    return all(b <= a for a, b in zip(smoothed, smoothed[1:]))


def check_continuity(target=DEFAULT_CONTINUITY_TARGET, n_schedule=DEFAULT_SCHEDULE,
                     base: float = 2, window: int = 1) -> AxiomReport:
    """Rational approximations converge in entropy to an irrational target.

    The residual is the final error, or infinity when the smoothed error
    sequence rises anywhere.
    """
    if not isinstance(target, RealDist):
        target = RealDist(tuple(target))
    points = continuity_convergence(target, n_schedule, base)
    errors = [p.error for p in points]
    residual = errors[-1] if is_non_increasing(errors, window) else math.inf
    return _report(
        "continuity",
        f"N in {list(n_schedule)}, base {base:g}",
        len(points), residual,
        {"target": list(target.probs), "errors": errors},
        CONVERGENCE_TOL,
    )


# name -> (function, parameters it accepts besides base)
CHECKS = {
    "monotonicity": (check_monotonicity, ("n_max",)),
    "additivity": (check_additivity, ("x_max",)),
    "general-additivity": (check_general_additivity, ("trials", "max_outcomes", "seed")),
    "likelihood": (check_likelihood, ("trials", "max_outcomes", "seed")),
    "composition": (check_composition, ("trials", "max_depth", "seed")),
    "decomposition": (check_decomposition, ("trials", "max_total", "seed")),
    "log-derivative": (check_log_derivative, ("grid_points",)),
    "continuity": (check_continuity, ()),
}


def run_check(name: str, base: float = 2, **params) -> AxiomReport:
    """Run a check by name, ignoring parameters it does not take or that are None."""
    try:
        func, accepted = CHECKS[name]
    except KeyError:
        raise KeyError(f"unknown check {name!r}; valid: {', '.join(CHECKS)}") from None
    kwargs = {k: v for k, v in params.items() if k in accepted and v is not None}
    return func(base=base, **kwargs)
