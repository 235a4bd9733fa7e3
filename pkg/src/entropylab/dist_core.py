"""Discrete distributions and the entropy functional.

Two distribution types are provided. :class:`RationalDist` holds integer
outcome counts ``n_i`` with total ``N``, so every probability is the exact
rational ``n_i / N``. :class:`RealDist` holds a real probability vector
and renormalizes inputs that sum to one within :data:`NORMALIZATION_TOL`.

Outcomes with zero mass are legal everywhere and contribute nothing: the
``0 * log 0`` term is skipped explicitly rather than evaluated.
"""

from __future__ import annotations

import math
import sys
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = [
    "AGREEMENT_TOL",
    "MAX_COUNT",
    "NORMALIZATION_TOL",
    "DecompositionReport",
    "DistributionError",
    "EntropyValue",
    "RationalDist",
    "RealDist",
    "decompose",
    "entropy",
    "log_base",
    "make_rational_dist",
    "product",
    "rational_approx",
    "uniform",
    "uniform_entropy",
]

NORMALIZATION_TOL = 1e-9
AGREEMENT_TOL = 1e-9
# Counts behave like signed 64-bit integers; anything larger is refused.
MAX_COUNT = 2**63 - 1
_RENORM_SLACK = 4 * sys.float_info.epsilon


class DistributionError(ValueError):
    """Raised when a distribution violates one of its invariants."""


def _check_base(base: float) -> float:
    try:
        b = float(base)
    except (TypeError, ValueError):
        raise ValueError(f"log base must be a real number, got {base!r}") from None
    if not math.isfinite(b) or b <= 1.0:
        raise ValueError(f"log base must be finite and > 1, got {base!r}")
    return b


def log_base(x: float, base: float = 2) -> float:
    """Logarithm of ``x`` in ``base``, computed as ``ln(x) / ln(base)``."""
    return math.log(x) / math.log(base)


def _check_labels(labels, size: int) -> tuple[str, ...] | None:
    if labels is None:
        return None
    labels = tuple(str(label) for label in labels)
    if len(labels) != size:
        raise DistributionError(
            f"got {len(labels)} labels for {size} outcomes"
        )
    return labels


@dataclass(frozen=True)
class RationalDist:
    """Distribution given by nonnegative integer counts.

    The probability of outcome ``i`` is exactly ``counts[i] / total``.
    Use :func:`make_rational_dist` or construct directly; both validate.
    """

    counts: tuple[int, ...]
    labels: tuple[str, ...] | None = None
    total: int = field(init=False)

    def __post_init__(self):
        counts = tuple(self.counts)
        if not counts:
            raise DistributionError("a distribution needs at least one outcome")
        for i, n in enumerate(counts):
            if isinstance(n, bool) or not isinstance(n, int):
                raise DistributionError(f"count at index {i} is not an integer: {n!r}")
            if n < 0:
                raise DistributionError(f"negative count at index {i}: {n}")
        total = sum(counts)
        if total == 0:
            raise DistributionError("all counts are zero; total must be >= 1")
        if total > MAX_COUNT:
            raise OverflowError(f"total count {total} exceeds {MAX_COUNT}")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "labels", _check_labels(self.labels, len(counts)))
        object.__setattr__(self, "total", total)

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def probabilities(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.total) for n in self.counts)

    @property
    def probs(self) -> tuple[float, ...]:
        return tuple(n / self.total for n in self.counts)

    def outcome_labels(self) -> tuple[str, ...]:
        """Labels, with ``o0, o1, ...`` substituted when none were given."""
        if self.labels is not None:
            return self.labels
        return tuple(f"o{i}" for i in range(len(self.counts)))


@dataclass(frozen=True)
class RealDist:
    """Distribution given by a real probability vector.

    Inputs must be nonnegative and sum to one within
    :data:`NORMALIZATION_TOL`; they are then divided by their sum so the
    stored vector lies on the simplex.
    """

    probs: tuple[float, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        if not probs:
            raise DistributionError("a distribution needs at least one outcome")
        for i, p in enumerate(probs):
            if not math.isfinite(p):
                raise DistributionError(f"probability at index {i} is not finite: {p}")
            if p < 0:
                raise DistributionError(f"negative probability at index {i}: {p}")
        s = math.fsum(probs)
        if abs(s - 1.0) > NORMALIZATION_TOL:
            raise DistributionError(f"probabilities sum to {s!r}, not 1")
        # a few ulps of slack keeps renormalization idempotent
        if abs(s - 1.0) > _RENORM_SLACK:
            probs = tuple(p / s for p in probs)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "labels", _check_labels(self.labels, len(probs)))

    def __len__(self) -> int:
        return len(self.probs)

    def outcome_labels(self) -> tuple[str, ...]:
        if self.labels is not None:
            return self.labels
        return tuple(f"o{i}" for i in range(len(self.probs)))


class EntropyValue(float):
    """A float carrying the log base it was measured in."""

    base: float

    def __new__(cls, value: float, base: float = 2):
        obj = super().__new__(cls, value)
        obj.base = float(base)
        return obj

    def __repr__(self) -> str:
        return f"EntropyValue({float(self)!r}, base={self.base!r})"

    @property
    def value(self) -> float:
        return float(self)

    @property
    def units(self) -> str:
        return unit_name(self.base)


def unit_name(base: float) -> str:
    if base == 2:
        return "bits"
    if base == math.e:
        return "nats"
    if base == 10:
        return "hartleys"
    return f"base-{base:g} units"


@dataclass(frozen=True)
class DecompositionReport:
    """Terms of ``log N = H[p] + sum_i p_i log n_i`` and what is left over."""

    log_total: float
    group_term: float
    entropy_term: float
    residual: float
    base: float = 2.0


def make_rational_dist(counts: Iterable[int], labels: Sequence[str] | None = None) -> RationalDist:
    return RationalDist(tuple(counts), labels)


def uniform(num_outcomes: int) -> RationalDist:
    """Equiprobable distribution over ``num_outcomes`` outcomes."""
    if num_outcomes < 1:
        raise ValueError(f"num_outcomes must be >= 1, got {num_outcomes}")
    return RationalDist((1,) * num_outcomes)


def _entropy_nats(masses: Iterable[tuple[float, int]]) -> float:
    # masses: (probability, multiplicity) pairs; zero probabilities skipped
    return -math.fsum(m * p * math.log(p) for p, m in masses if p > 0)


def _mass_profile(dist: RationalDist | RealDist) -> list[tuple[float, int]]:
    # Equal masses are grouped; entropy is permutation invariant so the
    # grouping changes only the summation order.
    if isinstance(dist, RationalDist):
        n_total = dist.total
        return [(n / n_total, m) for n, m in Counter(dist.counts).items()]
    if isinstance(dist, RealDist):
        return list(Counter(dist.probs).items())
    raise TypeError(f"expected RationalDist or RealDist, got {type(dist).__name__}")


def entropy(dist: RationalDist | RealDist, base: float = 2) -> EntropyValue:
    """Shannon entropy ``-sum_i p_i log p_i`` of ``dist`` in ``base``.

    >>> float(entropy(make_rational_dist([1, 1])))
    1.0
    """
    b = _check_base(base)
    nats = _entropy_nats(_mass_profile(dist))
    return EntropyValue(nats / math.log(b), b)


def uniform_entropy(num_outcomes: int, base: float = 2) -> EntropyValue:
    """Entropy of ``num_outcomes`` equally likely outcomes, ``log(num_outcomes)``."""
    b = _check_base(base)
    if isinstance(num_outcomes, bool) or int(num_outcomes) != num_outcomes or num_outcomes < 1:
        raise ValueError(f"num_outcomes must be a positive integer, got {num_outcomes!r}")
    return EntropyValue(log_base(num_outcomes, b), b)


def product(a: RationalDist, b: RationalDist) -> RationalDist:
    """Joint distribution of two independent experiments.

    Outcome ``(i, j)`` gets count ``a.counts[i] * b.counts[j]``; outcomes are
    ordered row-major in ``a``.
    """
    if a.total * b.total > MAX_COUNT:
        raise OverflowError(
            f"product total {a.total} * {b.total} exceeds {MAX_COUNT}"
        )
    counts = tuple(n * m for n in a.counts for m in b.counts)
    labels = None
    if a.labels is not None or b.labels is not None:
        labels = tuple(
            f"{la},{lb}" for la in a.outcome_labels() for lb in b.outcome_labels()
        )
    return RationalDist(counts, labels)


def decompose(dist: RationalDist, base: float = 2) -> DecompositionReport:
    """Split ``log N`` into the entropy and the weighted within-group term.

    Drawing one of ``N`` items uniformly is the same as first drawing an
    outcome ``i`` with probability ``n_i / N`` and then one of its ``n_i``
    items uniformly. Zero-count outcomes contribute nothing to the group
    term.
    """
    b = _check_base(base)
    n_total = dist.total
    log_total = log_base(n_total, b)
    group_term = math.fsum(
        (n / n_total) * log_base(n, b) for n in dist.counts if n > 0
    )
    entropy_term = float(entropy(dist, b))
    residual = log_total - group_term - entropy_term
    return DecompositionReport(log_total, group_term, entropy_term, residual, b)


def rational_approx(dist: RealDist, denominator: int) -> RationalDist:
    """Counts summing to ``denominator`` that approximate ``dist``.

    Uses largest-remainder apportionment of ``denominator * p_i`` (computed
    exactly from the binary float values), breaking ties by lowest index.
    Every ``|n_i / N - p_i|`` is below ``1 / N``.
    """
    n_total = int(denominator)
    if n_total != denominator or n_total < 1:
        raise ValueError(f"denominator must be a positive integer, got {denominator!r}")
    quotas = [Fraction(p) * n_total for p in dist.probs]
    counts = [q.numerator // q.denominator for q in quotas]
    # renormalized floats may sum a few ulps off one; floors never overshoot
    extra = max(0, n_total - sum(counts))
    order = sorted(range(len(quotas)), key=lambda i: (counts[i] - quotas[i], i))
    for i in order[:extra]:
        counts[i] += 1
    return RationalDist(tuple(counts), dist.labels)
