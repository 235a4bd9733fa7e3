"""Acceptance criteria, one test per criterion.

Each ``criterion_N`` function raises ``AssertionError`` on failure so the
mutation test can re-run them against broken entropy kernels. A pass/fail
line per criterion is printed in the terminal summary (see conftest.py).
"""

import math
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from entropylab import axiom_lab, dist_core
from entropylab.cli_io import main
from entropylab.composition import Branch, Leaf, flatten, total_uncertainty
from entropylab.dist_core import RationalDist, RealDist, decompose, entropy, uniform, uniform_entropy

from mutants import mutated

HERE = Path(__file__).parent
DATA = HERE / "data"
GOLDEN = HERE / "golden"


def criterion_1():
    fruit = RationalDist((3, 7))
    h = float(entropy(fruit, 2))
    direct = -(0.3 * math.log2(0.3) + 0.7 * math.log2(0.7))
    via_identity = math.log2(10) - (0.3 * math.log2(3) + 0.7 * math.log2(7))
    assert abs(h - 0.881291) <= 1e-6
    assert abs(h - direct) <= 1e-6 and abs(h - via_identity) <= 1e-6
    assert abs(float(entropy(uniform(2), 2)) - 1.0) <= 1e-12
    assert float(entropy(RationalDist((5,)), 2)) == 0.0
    assert float(entropy(RealDist((1.0, 0.0)), 2)) == 0.0


def criterion_2():
    assert float(uniform_entropy(1, 2)) == 0.0
    xs = np.arange(1, 10**6 + 1)
    oracle = np.log2(xs)
    closed = np.array([float(uniform_entropy(int(x), 2)) for x in xs])
    assert np.max(np.abs(closed - oracle)) <= 1e-9
    # The grouped form entropy() reduces a uniform count vector to: one mass
    # 1/x with multiplicity x. Evaluated for every x through the same kernel.
    ln2 = math.log(2)
    grouped = np.array([dist_core._entropy_nats([(1 / int(x), int(x))]) / ln2 for x in xs])
    assert np.max(np.abs(grouped - closed)) <= 1e-9
    # The full public path, exhaustively on small x and at sampled large x.
    rng = np.random.default_rng(2)
    sample = list(range(1, 1501)) + sorted(rng.integers(1501, 10**6, 12).tolist()) + [10**6]
    for x in sample:
        assert abs(float(entropy(uniform(x), 2)) - closed[x - 1]) <= 1e-9, x


def criterion_3():
    start = time.perf_counter()
    rep = axiom_lab.check_monotonicity(10**6, 2)
    elapsed = time.perf_counter() - start
    assert rep.passed and rep.worst_residual > 0, rep
    assert rep.cases_run == 10**6 - 1
    assert elapsed < 5.0, f"took {elapsed:.2f}s"


def criterion_4():
    rep = axiom_lab.check_additivity(64, 2)
    assert rep.cases_run == 4096 and rep.worst_residual < 1e-12 and rep.passed, rep
    rep = axiom_lab.check_general_additivity(1000, 20, 42, 2)
    assert rep.cases_run == 1000 and rep.worst_residual < 1e-10 and rep.passed, rep


def criterion_5():
    die = Leaf(RationalDist((1,) * 6))
    fig1 = Branch(((0.5, die), (0.5, die)))
    total = total_uncertainty(fig1, 2).total
    assert abs(total - (1 + math.log2(6))) <= 1e-9
    assert abs(total - 3.584963) <= 1e-6
    assert abs(float(entropy(flatten(fig1), 2)) - total) <= 1e-9
    rep = axiom_lab.check_composition(500, 5, 7, 2)
    assert rep.cases_run == 500 and rep.worst_residual < 1e-9 and rep.passed, rep


def criterion_6():
    rep = axiom_lab.check_decomposition(1000, 10**4, 1, 2)
    assert rep.cases_run == 1000 and rep.worst_residual < 1e-9 and rep.passed, rep
    # exact rational oracle for the entropy term
    d = RationalDist((3, 7))
    exact_group = sum(Fraction(n, d.total) * math.log2(n) for n in d.counts)
    assert abs(decompose(d, 2).group_term - float(exact_group)) <= 1e-12


def criterion_7():
    fit = axiom_lab.estimate_k(1, 100, 1000, 2)
    assert abs(fit.k_estimate - 1.442695) <= 1e-4, fit.k_estimate
    assert fit.max_deviation < 1e-4, fit.max_deviation
    assert fit.k_estimate > 0
    fit_e = axiom_lab.estimate_k(1, 100, 1000, math.e)
    assert abs(fit_e.k_estimate - 1.0) <= 1e-4, fit_e.k_estimate
    assert fit_e.max_deviation < 1e-4 and fit_e.k_estimate > 0


def criterion_8():
    p = 1 / math.pi
    points = axiom_lab.continuity_convergence(RealDist((p, 1 - p)), [10, 100, 1000, 10**4], 2)
    errors = [pt.error for pt in points]
    assert all(b <= a for a, b in zip(errors, errors[1:])), errors
    assert errors[-1] < 1e-3, errors


GOLDEN_RUNS = {
    "entropy_fruit.json": ["entropy", DATA / "fruit.tsv", "--json"],
    "compose_fig1.json": ["compose", DATA / "fig1.tree", "--json"],
    "verify_all_seed42.json": ["verify", "--all", "--seed", "42", "--json"],
    "approx_pi.json": ["approx", DATA / "pi.tsv", "--N", "10,100,1000,10000", "--json"],
}


def test_criterion_01_eq1_spot_values():
    """Entropy spot values: [3,7], fair coin, point mass."""
    criterion_1()


def test_criterion_02_uniform_case():
    """uniform_entropy(x, 2) = log2 x for x <= 1e6, agreeing with entropy(uniform(x))."""
    criterion_2()


def test_criterion_03_monotonicity():
    """check_monotonicity(1e6) passes in under 5 s."""
    criterion_3()


def test_criterion_04_additivity():
    """Uniform additivity < 1e-12; general additivity < 1e-10 at seed 42."""
    criterion_4()


def test_criterion_05_composition():
    """Fig. 1 tree = 1 + log2 6; 500 random trees at seed 7 < 1e-9."""
    criterion_5()


def test_criterion_06_decomposition():
    """Decomposition identity on 1000 random count vectors < 1e-9."""
    criterion_6()


def test_criterion_07_log_derivative():
    """estimate_k gives 1/ln 2 and 1.0 within 1e-4."""
    criterion_7()


def test_criterion_08_continuity():
    """Rational approximations of (1/pi, 1-1/pi) converge, final error < 1e-3."""
    criterion_8()


@pytest.mark.parametrize("criterion", [criterion_1, criterion_4, criterion_6])
def test_criterion_09_sign_flip_detected(monkeypatch, criterion):
    """Dropping the minus sign breaks criteria 1, 4 and 6."""
    with mutated(monkeypatch, "sign"):
        with pytest.raises(AssertionError):
            criterion()
    criterion()


def test_criterion_09_log10_detected(monkeypatch):
    """Base-10 logs in place of the requested base break criterion 7."""
    with mutated(monkeypatch, "log10"):
        with pytest.raises(AssertionError):
            criterion_7()
    criterion_7()


@pytest.mark.parametrize("golden", sorted(GOLDEN_RUNS))
def test_criterion_10_cli_golden(capsys, golden):
    """CLI machine output matches stored golden files byte for byte."""
    code = main([str(a) for a in GOLDEN_RUNS[golden]])
    out = capsys.readouterr().out
    assert code == 0
    assert out.encode() == (GOLDEN / golden).read_bytes()
