"""File formats and the ``entropylab`` command line.

Histogram files hold one record per line, ``label<TAB>value`` or just
``value`` (auto-labelled ``o0, o1, ...``). ``#`` starts a comment and blank
lines are ignored. A file is in count mode when every value is an
integer, and in probability mode otherwise. Probability files may use the
integers 0 and 1, but any other integer mixed with reals is a parse error.

Tree files describe hierarchical experiments by indentation::

    # a coin picks one of two dice
    branch:
      - 0.5 leaf: 1 1 1 1 1 1
      - 0.5 leaf: die.tsv

A ``branch:`` line is followed by its children, each ``- <prob> <node>``
and indented deeper than the line that opened the branch. A leaf is
``leaf:`` followed by inline values (whitespace or comma separated) or by
a histogram path relative to the tree file. Branch probabilities may be
written as decimals or fractions such as ``1/3``.

Exit codes: 0 success, 2 usage or parse error, 3 validation error,
4 numerical check failure.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import axiom_lab, composition, dist_core
from .composition import Branch, Leaf
from .dist_core import AGREEMENT_TOL, RationalDist, RealDist

__all__ = [
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_VALIDATION",
    "EXIT_NUMERIC",
    "InputError",
    "ValidationFailure",
    "format_histogram",
    "format_tree",
    "load_histogram",
    "load_tree",
    "main",
    "parse_histogram",
    "parse_tree",
]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_NUMERIC = 4

_INT_RE = re.compile(r"[+-]?\d+")
_REAL_RE = re.compile(r"[+-]?(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?")


class InputError(Exception):
    """Malformed input; maps to exit code 2."""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        parts = [source] if source is not None else []
        if line is not None:
            parts.append(f"line {line}")
        super().__init__(": ".join([*parts, message]))


class ValidationFailure(InputError):
    """Well-formed input that breaks a distribution or tree invariant."""

    exit_code = EXIT_VALIDATION


# -- histograms --------------------------------------------------------------


@dataclass
class _Record:
    line: int
    label: str | None
    value: str


def _histogram_records(text: str, source: str | None) -> list[_Record]:
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) == 1:
            label, value = None, fields[0].strip()
        elif len(fields) == 2:
            label, value = fields[0].strip(), fields[1].strip()
        else:
            raise InputError(f"expected 'label<TAB>value', got {len(fields)} fields", lineno, source)
        if not _REAL_RE.fullmatch(value):
            raise InputError(f"not a number: {value!r}", lineno, source)
        records.append(_Record(lineno, label, value))
    if not records:
        raise InputError("no records found", None, source)
    return records


def parse_histogram(text: str, source: str | None = None) -> RationalDist | RealDist:
    """Parse histogram text into a count or probability distribution."""
    records = _histogram_records(text, source)
    count_mode = all(_INT_RE.fullmatch(r.value) for r in records)
    labels = None
    if any(r.label is not None for r in records):
        labels = tuple(r.label if r.label is not None else f"o{i}" for i, r in enumerate(records))

    if count_mode:
        counts = []
        for r in records:
            n = int(r.value)
            if n < 0:
                raise ValidationFailure(f"negative count at line {r.line}", None, source)
            counts.append(n)
        if sum(counts) == 0:
            raise ValidationFailure("all counts are zero; total must be >= 1", None, source)
        try:
            return RationalDist(tuple(counts), labels)
        except (dist_core.DistributionError, OverflowError) as exc:
            raise ValidationFailure(str(exc), None, source) from None

    probs = []
    for r in records:
        if _INT_RE.fullmatch(r.value) and int(r.value) not in (0, 1):
            raise InputError(f"count value {r.value} in a probability file", r.line, source)
        p = float(r.value)
        if p < 0:
            raise ValidationFailure(f"negative probability at line {r.line}", None, source)
        probs.append(p)
    try:
        return RealDist(tuple(probs), labels)
    except dist_core.DistributionError as exc:
        raise ValidationFailure(str(exc), None, source) from None


def _read_text(path: str | Path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_histogram(path: str | Path) -> RationalDist | RealDist:
    return parse_histogram(_read_text(path), str(path))


def _check_label(label: str) -> str:
    if label != label.strip() or any(c in label for c in "\t\n\r#") or not label:
        raise ValueError(f"label {label!r} cannot be written to a histogram file")
    return label


def format_histogram(dist: RationalDist | RealDist) -> str:
    """Histogram text that parses back to ``dist``."""
    if isinstance(dist, RationalDist):
        values = [str(n) for n in dist.counts]
    else:
        # repr keeps full precision; force a real-looking token
        values = [repr(p) for p in dist.probs]
    if dist.labels is None:
        lines = values
    else:
        lines = [f"{_check_label(lab)}\t{v}" for lab, v in zip(dist.labels, values)]
    return "\n".join(lines) + "\n"


# -- trees ---------------------------------------------------------------------


@dataclass
class _TreeLine:
    line: int
    indent: int
    text: str


def _parse_prob(token: str, line: int, source) -> float:
    try:
        return float(Fraction(token))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad branch probability {token!r}", line, source) from None


def _parse_leaf(spec: str, line: int, source, base_dir: Path | None):
    if not spec:
        raise InputError("leaf needs inline values or a histogram path", line, source)
    tokens = [t for t in re.split(r"[\s,]+", spec) if t]
    if all(_REAL_RE.fullmatch(t) for t in tokens):
        try:
            return parse_histogram("\n".join(tokens))
        except ValidationFailure as exc:
            raise ValidationFailure(f"leaf: {exc}", line, source) from None
        except InputError as exc:
            raise InputError(f"leaf: {exc}", line, source) from None
    path = Path(spec)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    return load_histogram(path)


def parse_tree(text: str, source: str | None = None, base_dir: Path | None = None):
    """Parse the indented tree format into a :class:`Leaf` or :class:`Branch`.

    Branch probabilities are not checked here; run
    :func:`composition.validate` on the result.
    """
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        stripped = body.lstrip(" ")
        if stripped.startswith("\t"):
            raise InputError("tabs are not allowed in indentation", lineno, source)
        lines.append(_TreeLine(lineno, len(body) - len(stripped), stripped))
    if not lines:
        raise InputError("empty tree file", None, source)

    def node(i: int, text: str, own_indent: int):
        ln = lines[i].line
        if text.startswith("leaf:"):
            return Leaf(_parse_leaf(text[5:].strip(), ln, source, base_dir)), i + 1
        if text != "branch:":
            raise InputError(f"expected 'branch:' or 'leaf:', got {text!r}", ln, source)
        children = []
        child_indent = None
        j = i + 1
        while j < len(lines) and lines[j].indent > own_indent:
            cur = lines[j]
            if child_indent is None:
                child_indent = cur.indent
            elif cur.indent != child_indent:
                raise InputError("inconsistent indentation", cur.line, source)
            m = re.fullmatch(r"-\s+(\S+)\s+(.*)", cur.text)
            if not m:
                raise InputError("expected '- <prob> branch:' or '- <prob> leaf: ...'", cur.line, source)
            prob = _parse_prob(m.group(1), cur.line, source)
            child, j = node(j, m.group(2).strip(), child_indent)
            children.append((prob, child))
        if not children:
            raise InputError("branch has no children", ln, source)
        return Branch(tuple(children)), j

    if lines[0].indent != 0:
        raise InputError("tree must start at column 0", lines[0].line, source)
    tree, end = node(0, lines[0].text, 0)
    if end < len(lines):
        raise InputError(f"unexpected line {lines[end].text!r}", lines[end].line, source)
    return tree


def load_tree(path: str | Path):
    text = _read_text(path)
    base_dir = None if str(path) == "-" else Path(path).parent
    return parse_tree(text, str(path), base_dir)


def format_tree(tree, indent: int = 0) -> str:
    """Tree text with inline leaves that parses back to an equal tree."""

    def leaf_text(d) -> str:
        if isinstance(d, RationalDist):
            return " ".join(map(str, d.counts))
        return " ".join(repr(p) for p in d.probs)

    def emit(node, pad, prefix, out):
        if isinstance(node, Leaf):
            out.append(f"{pad}{prefix}leaf: {leaf_text(node.dist)}")
            return
        out.append(f"{pad}{prefix}branch:")
        child_pad = pad + ("    " if prefix else "  ")
        for p, child in node.children:
            emit(child, child_pad, f"- {p!r} ", out)

    out: list[str] = []
    emit(tree, " " * indent, "", out)
    return "\n".join(out) + "\n"


# -- commands ----------------------------------------------------------------


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _base_label(base: float) -> str:
    return "e" if base == math.e else f"{base:g}"


def _json_number(x: float):
    # json has no infinity; such values only appear in failing reports
    return x if math.isfinite(x) else str(x)


def cmd_entropy(path, base: float = 2):
    dist = load_histogram(path)
    h = dist_core.entropy(dist, base)
    report = {
        "command": "entropy",
        "mode": "counts" if isinstance(dist, RationalDist) else "probabilities",
        "base": base,
        "units": h.units,
        "outcomes": len(dist),
        "entropy": float(h),
    }
    lines = [
        f"entropy: {_fmt(h)} {h.units}",
        f"base: {_base_label(base)}",
        f"outcomes: {len(dist)}",
    ]
    if isinstance(dist, RationalDist):
        dec = dist_core.decompose(dist, base)
        report["total"] = dist.total
        report["decomposition"] = {
            "log_total": dec.log_total,
            "group_term": dec.group_term,
            "entropy_term": dec.entropy_term,
            "residual": dec.residual,
        }
        lines += [
            f"total count: {dist.total}",
            "decomposition:",
            f"  log_total     {_fmt(dec.log_total)}",
            f"  group_term    {_fmt(dec.group_term)}",
            f"  entropy_term  {_fmt(dec.entropy_term)}",
            f"  residual      {_fmt(dec.residual)}",
        ]
    return EXIT_OK, report, lines


def cmd_compose(path, base: float = 2):
    tree = load_tree(path)
    result = composition.validate(tree)
    if not result:
        raise ValidationFailure(f"invalid tree at {result}")
    breakdown = composition.total_uncertainty(tree, base)
    flat = composition.flatten(tree)
    h_flat = float(dist_core.entropy(flat, base))
    residual = breakdown.total - h_flat
    ok = abs(residual) <= AGREEMENT_TOL
    report = {
        "command": "compose",
        "base": base,
        "nodes": [
            {
                "path": composition.format_path(n.path),
                "path_prob": n.path_prob,
                "local_entropy": n.local_entropy,
            }
            for n in breakdown.nodes
        ],
        "total": breakdown.total,
        "flattened_outcomes": len(flat),
        "flattened_entropy": h_flat,
        "residual": residual,
        "tolerance": AGREEMENT_TOL,
        "passed": ok,
    }
    width = max(len(composition.format_path(n.path)) for n in breakdown.nodes)
    lines = [f"{'node':<{width}}  {'path_prob':>9}  {'entropy':>9}"]
    for n in breakdown.nodes:
        lines.append(
            f"{composition.format_path(n.path):<{width}}  {_fmt(n.path_prob):>9}  {_fmt(n.local_entropy):>9}"
        )
    lines += [
        f"total uncertainty: {_fmt(breakdown.total)}",
        f"flattened entropy: {_fmt(h_flat)} ({len(flat)} outcomes)",
        f"residual: {_fmt(residual)}",
        f"composition rule: {'holds' if ok else 'VIOLATED'}",
    ]
    return (EXIT_OK if ok else EXIT_NUMERIC), report, lines


def cmd_verify(checks, base: float = 2, seed: int | None = None, **scale):
    reports = [axiom_lab.run_check(name, base=base, seed=seed, **scale) for name in checks]
    all_ok = all(r.passed for r in reports)
    report = {
        "command": "verify",
        "base": base,
        "seed": seed,
        "passed": all_ok,
        "checks": [
            {
                "check_name": r.check_name,
                "sweep_description": r.sweep_description,
                "cases_run": r.cases_run,
                "skipped": r.skipped,
                "worst_residual": _json_number(r.worst_residual),
                "criterion": r.criterion,
                "passed": r.passed,
                "worst_case_input": r.worst_case_input,
            }
            for r in reports
        ],
    }
    width = max(len("check"), *(len(r.check_name) for r in reports))
    lines = [f"{'check':<{width}}  {'cases':>7}  {'worst residual':>14}  {'criterion':<10}  result"]
    for r in reports:
        lines.append(
            f"{r.check_name:<{width}}  {r.cases_run:>7}  {r.worst_residual:>14.6e}  "
            f"{r.criterion:<10}  {'pass' if r.passed else 'FAIL'}"
        )
    lines.append(f"{sum(r.passed for r in reports)}/{len(reports)} checks passed")
    return (EXIT_OK if all_ok else EXIT_NUMERIC), report, lines


def cmd_approx(path, denominators, base: float = 2):
    dist = load_histogram(path)
    if not isinstance(dist, RealDist):
        raise InputError("approx requires probability mode")
    try:
        points = axiom_lab.continuity_convergence(dist, denominators, base)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    h_target = float(dist_core.entropy(dist, base))
    errors = [p.error for p in points]
    report = {
        "command": "approx",
        "base": base,
        "target_entropy": h_target,
        "rows": [{"N": p.N, "counts": list(p.counts), "error": p.error} for p in points],
        "non_increasing": axiom_lab.is_non_increasing(errors),
    }
    lines = [f"target entropy: {_fmt(h_target)} {dist_core.unit_name(base)}",
             f"{'N':>8}  {'error':>12}  counts"]
    for p in points:
        lines.append(f"{p.N:>8}  {p.error:>12.6e}  {' '.join(map(str, p.counts))}")
    return EXIT_OK, report, lines


# -- argument parsing ------------------------------------------------------


def _parse_base(text: str) -> float:
    if text == "e":
        return math.e
    try:
        b = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid base {text!r}") from None
    if not math.isfinite(b) or b <= 1:
        raise argparse.ArgumentTypeError(f"base must be > 1, got {text!r}")
    return b


def _parse_seed(text: str) -> int:
    try:
        s = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return s


def _parse_schedule(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid denominator list {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("denominators must be positive integers")
    return values


def _common_flags(parser, suppress: bool):
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--base", type=_parse_base, default=default(2.0),
                        help="log base, a number > 1 or 'e' (default 2)")
    parser.add_argument("--json", action="store_true", default=default(False),
                        help="machine-readable output")
    parser.add_argument("--seed", type=_parse_seed, default=default(None),
                        help="seed for randomized checks")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entropylab",
        description="Shannon entropy with executable checks of its defining properties.",
    )
    _common_flags(parser, suppress=False)
    shared = argparse.ArgumentParser(add_help=False)
    _common_flags(shared, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", parents=[shared], help="entropy of a histogram file")
    p.add_argument("path")

    p = sub.add_parser("compose", parents=[shared], help="composition rule on a tree file")
    p.add_argument("path")

    p = sub.add_parser("verify", parents=[shared], help="run the axiom checks")
    p.add_argument("--all", action="store_true", help="run every check (the default)")
    p.add_argument("--check", action="append", default=[], metavar="NAME",
                   help=f"run one check; repeatable. One of: {', '.join(axiom_lab.CHECKS)}")
    p.add_argument("--n-max", type=int)
    p.add_argument("--x-max", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--max-outcomes", type=int)
    p.add_argument("--max-depth", type=int)
    p.add_argument("--max-total", type=int)
    p.add_argument("--grid-points", type=int)

    p = sub.add_parser("approx", parents=[shared], help="rational approximations of a probability file")
    p.add_argument("path")
    p.add_argument("--N", "--denominators", dest="denominators", type=_parse_schedule,
                   default=list(axiom_lab.DEFAULT_SCHEDULE),
                   help="comma-separated increasing denominators (default 10,100,1000,10000)")
    return parser


def _dispatch(args):
    if args.command == "entropy":
        return cmd_entropy(args.path, args.base)
    if args.command == "compose":
        return cmd_compose(args.path, args.base)
    if args.command == "approx":
        return cmd_approx(args.path, args.denominators, args.base)
    unknown = [c for c in args.check if c not in axiom_lab.CHECKS]
    if unknown:
        raise InputError(
            f"unknown check {unknown[0]!r}; valid checks: {', '.join(axiom_lab.CHECKS)}"
        )
    names = list(axiom_lab.CHECKS) if args.all or not args.check else list(dict.fromkeys(args.check))
    scale = {
        k: getattr(args, k)
        for k in ("n_max", "x_max", "trials", "max_outcomes", "max_depth", "max_total", "grid_points")
    }
    try:
        return cmd_verify(names, args.base, args.seed, **scale)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        code, report, lines = _dispatch(args)
    except InputError as exc:
        print(f"entropylab {args.command}: error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.json:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")
    return code
