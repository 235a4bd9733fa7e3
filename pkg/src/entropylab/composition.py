"""Hierarchical experiments and the weighted composition rule.

A tree is either a :class:`Leaf` holding a distribution or a
:class:`Branch` whose children are ``(probability, subtree)`` pairs. The
branch probabilities pick which child experiment runs next.

The uncertainty of the whole operation is the sum, over every node, of the
probability of reaching that node times the entropy of the choice made
there. :func:`flatten` builds the single flat experiment over all paths so
the two can be compared.

Outcomes in a flattened tree are identified by position, not label; two
leaves with identical labels stay distinct outcomes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .dist_core import (
    NORMALIZATION_TOL,
    RationalDist,
    RealDist,
    _check_base,
    entropy,
)

__all__ = [
    "Branch",
    "CompTree",
    "Leaf",
    "NodeUncertainty",
    "TreeValidationError",
    "UncertaintyBreakdown",
    "ValidationResult",
    "flatten",
    "format_path",
    "total_uncertainty",
    "validate",
]


@dataclass(frozen=True)
class Leaf:
    dist: RationalDist | RealDist


@dataclass(frozen=True)
class Branch:
    children: tuple[tuple[float, "CompTree"], ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(tuple(c) for c in self.children))


CompTree = Union[Leaf, Branch]


def format_path(path: tuple[int, ...]) -> str:
    """``()`` -> ``"root"``, ``(0, 2)`` -> ``"root/0/2"``."""
    return "/".join(["root", *map(str, path)])


@dataclass(frozen=True)
class ValidationResult:
    valid: bool
    path: tuple[int, ...] = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        if self.valid:
            return "valid"
        return f"{format_path(self.path)}: {self.message}"


class TreeValidationError(ValueError):
    def __init__(self, result: ValidationResult):
        super().__init__(str(result))
        self.result = result


def validate(tree) -> ValidationResult:
    """Check every branch carries nonnegative probabilities summing to one.

    Never raises; the first violation found in depth-first order is
    reported together with the path to the offending node.
    """
    stack = [((), tree)]
    while stack:
        path, node = stack.pop()
        if isinstance(node, Leaf):
            if not isinstance(node.dist, (RationalDist, RealDist)):
                return ValidationResult(False, path, "leaf does not hold a distribution")
            continue
        if not isinstance(node, Branch):
            return ValidationResult(False, path, f"not a tree node: {type(node).__name__}")
        if not node.children:
            return ValidationResult(False, path, "branch has no children")
        probs = []
        for i, child in enumerate(node.children):
            if len(child) != 2:
                return ValidationResult(False, path, f"child {i} is not a (probability, subtree) pair")
            p = child[0]
            if isinstance(p, bool) or not isinstance(p, (int, float)) or not math.isfinite(p):
                return ValidationResult(False, path, f"child {i} probability is not a finite number: {p!r}")
            if p < 0:
                return ValidationResult(False, path, f"negative probability {p!r} on child {i}")
            probs.append(float(p))
        s = math.fsum(probs)
        if abs(s - 1.0) > NORMALIZATION_TOL:
            return ValidationResult(False, path, f"branch probabilities sum to {s:.10g}")
        # reversed so the left-most child is examined first
        for i in reversed(range(len(node.children))):
            stack.append(((*path, i), node.children[i][1]))
    return ValidationResult(True)


def _require_valid(tree) -> None:
    result = validate(tree)
    if not result:
        raise TreeValidationError(result)


def _selector(branch: Branch) -> RealDist:
    return RealDist(tuple(p for p, _ in branch.children))


@dataclass(frozen=True)
class NodeUncertainty:
    path: tuple[int, ...]
    path_prob: float
    local_entropy: float


@dataclass(frozen=True)
class UncertaintyBreakdown:
    nodes: tuple[NodeUncertainty, ...]
    total: float
    base: float = 2.0


def total_uncertainty(tree: CompTree, base: float = 2) -> UncertaintyBreakdown:
    """Probability-weighted sum of the entropies of every choice in ``tree``.

    Each branch contributes the entropy of its selection probabilities and
    each leaf the entropy of its distribution, weighted by the probability of
    reaching that node from the root. Nodes are listed depth-first.
    """
    b = _check_base(base)
    _require_valid(tree)
    nodes = []

    def visit(node, path, path_prob):
        if isinstance(node, Leaf):
            nodes.append(NodeUncertainty(path, path_prob, float(entropy(node.dist, b))))
            return
        selector = _selector(node)
        nodes.append(NodeUncertainty(path, path_prob, float(entropy(selector, b))))
        for i, (p, child) in enumerate(zip(selector.probs, (c for _, c in node.children))):
            visit(child, (*path, i), path_prob * p)

    visit(tree, (), 1.0)
    total = math.fsum(n.path_prob * n.local_entropy for n in nodes)
    return UncertaintyBreakdown(tuple(nodes), total, b)


def flatten(tree: CompTree) -> RealDist | RationalDist:
    """Single distribution over every root-to-outcome path, depth-first.

    A bare leaf is returned unchanged.
    """
    _require_valid(tree)
    if isinstance(tree, Leaf):
        return tree.dist
    probs: list[float] = []

    def visit(node, path_prob):
        if isinstance(node, Leaf):
            probs.extend(path_prob * p for p in node.dist.probs)
            return
        selector = _selector(node)
        for p, (_, child) in zip(selector.probs, node.children):
            visit(child, path_prob * p)

    visit(tree, 1.0)
    return RealDist(tuple(probs))
