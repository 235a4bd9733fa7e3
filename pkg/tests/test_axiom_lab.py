import json
import math
import random

import mpmath
import pytest

from entropylab import axiom_lab
from entropylab.axiom_lab import (
    CHECKS,
    check_additivity,
    check_composition,
    check_continuity,
    check_decomposition,
    check_general_additivity,
    check_likelihood,
    check_log_derivative,
    check_monotonicity,
    continuity_convergence,
    estimate_k,
    is_non_increasing,
    random_rational_dist,
    run_check,
)
from entropylab.composition import Branch, Leaf, flatten, total_uncertainty
from entropylab.dist_core import RealDist, entropy, make_rational_dist, product, uniform, uniform_entropy

from mutants import mutated

# log2 of consecutive integers at 50 digits
MONO_GAPS_3 = [1.0, 0.5849625007211562]
GAP_AT_1E6 = 1.4426957622369648e-06
# 1 / ln 2
K_BITS = 1.4426950408889634


# -- monotonicity ----------------------------------------------------------------


def test_monotonicity_small():
    rep = check_monotonicity(3, 2)
    assert rep.passed and rep.cases_run == 2
    assert rep.worst_residual == pytest.approx(MONO_GAPS_3[1], abs=1e-12)
    assert json.loads(rep.worst_case_input) == {"n": 2}


def test_monotonicity_single_comparison():
    rep = check_monotonicity(2)
    assert rep.passed and rep.cases_run == 1 and rep.worst_residual == 1.0


def test_monotonicity_oracle_values():
    with mpmath.workdps(40):
        assert float(mpmath.log(3, 2) - 1) == pytest.approx(MONO_GAPS_3[1], abs=1e-15)
        assert float(mpmath.log(1 + mpmath.mpf(1) / (10**6 - 1), 2)) == pytest.approx(GAP_AT_1E6, rel=1e-12)


def test_monotonicity_rejects_small_n():
    with pytest.raises(ValueError):
        check_monotonicity(1)


# -- additivity --------------------------------------------------------------------


def test_additivity_two_dice():
    assert abs(uniform_entropy(2) + uniform_entropy(6) - uniform_entropy(12)) <= 1e-12


def test_additivity_with_one_is_exact():
    for y in range(1, 50):
        assert uniform_entropy(1) + uniform_entropy(y) - uniform_entropy(y) == 0.0


def test_additivity_sweep():
    rep = check_additivity(64)
    assert rep.cases_run == 4096 and rep.passed
    assert rep.worst_residual < 1e-12


def test_additivity_overflow_skips_and_reports(monkeypatch):
    monkeypatch.setattr(axiom_lab, "MAX_COUNT", 100)
    rep = check_additivity(20)
    assert rep.skipped > 0 and rep.cases_run + rep.skipped == 400
    assert "skipped" in rep.sweep_description


def test_general_additivity_example():
    a, b = make_rational_dist([3, 7]), make_rational_dist([1, 1])
    assert entropy(product(a, b)) == pytest.approx(1.881291, abs=1e-6)
    assert entropy(a) + entropy(b) == pytest.approx(0.881291 + 1, abs=1e-6)


def test_general_additivity_point_mass():
    a = make_rational_dist([5])
    rng = random.Random(3)
    for _ in range(50):
        b = random_rational_dist(rng)
        assert entropy(product(a, b)) == pytest.approx(entropy(b), abs=1e-13)


def test_general_additivity_golden():
    rep = check_general_additivity(1000, 20, 42)
    assert rep.passed and rep.worst_residual < 1e-10


# -- composition / decomposition -------------------------------------------------


def test_composition_fig1_residual():
    fig1 = Branch(((0.5, Leaf(uniform(6))), (0.5, Leaf(uniform(6)))))
    assert abs(entropy(flatten(fig1)) - total_uncertainty(fig1).total) < 1e-12


def test_composition_depth_one_exact():
    rep = check_composition(50, 1, seed=3)
    assert rep.worst_residual == 0.0


def test_composition_golden():
    rep = check_composition(500, 5, 7)
    assert rep.passed and rep.worst_residual < 1e-9


def test_decomposition_golden():
    rep = check_decomposition(1000, 10000, 1)
    assert rep.passed and rep.worst_residual < 1e-9


def test_decomposition_respects_max_total():
    rng = random.Random(5)
    totals = [random_rational_dist(rng, 20, 10000, 500).total for _ in range(300)]
    assert max(totals) <= 10000
    assert max(totals) > 4000


# -- estimate_k ----------------------------------------------------------------------


def test_estimate_k_natural_log():
    fit = estimate_k(1, 100, 1000, math.e)
    assert fit.k_estimate == pytest.approx(1.0, abs=1e-4)


def test_estimate_k_bits():
    fit = estimate_k(1, 100, 1000, 2)
    assert fit.k_estimate == pytest.approx(1.442695, abs=1e-4)
    assert fit.k_estimate == pytest.approx(K_BITS, abs=1e-4)
    assert fit.max_deviation < 1e-4
    assert fit.spread < 1e-4
    assert len(fit.grid) == 1000 and fit.grid[0] == 1 and fit.grid[-1] == pytest.approx(100)


@pytest.mark.parametrize("base", [2, math.e, 10, 1.5, 64])
def test_estimate_k_matches_inverse_log_base(base):
    fit = estimate_k(1, 100, 1000, base)
    assert fit.k_estimate > 0
    assert fit.k_estimate == pytest.approx(1 / math.log(base), abs=1e-4)


def test_linear_grid_is_coarser_near_one():
    # central differences on a uniform grid carry h^2/(3 x^2) relative error
    fit = estimate_k(1, 100, 1000, 2, spacing="linear")
    assert fit.k_estimate == pytest.approx(K_BITS, abs=1e-4)
    h = 99 / 999
    assert fit.max_deviation == pytest.approx(K_BITS * h**2 / (3 * (1 + h) ** 2), rel=0.05)


@pytest.mark.parametrize("args", [(0.5, 100, 10), (5, 5, 10), (1, 100, 2), (1, math.inf, 10)])
def test_estimate_k_degenerate(args):
    with pytest.raises(ValueError):
        estimate_k(*args)


def test_log_derivative_check():
    assert check_log_derivative(2).passed
    assert check_log_derivative(10).passed


# -- continuity ----------------------------------------------------------------------


def test_continuity_exact_half():
    pts = continuity_convergence(RealDist((0.5, 0.5)), [2, 4, 10, 100])
    assert all(p.error == 0 for p in pts)


def test_continuity_uniform_three():
    pts = continuity_convergence(RealDist((1 / 3,) * 3), [3, 30, 300, 3000])
    assert [p.counts for p in pts] == [(1, 1, 1), (10, 10, 10), (100, 100, 100), (1000, 1000, 1000)]
    assert all(p.error == pytest.approx(0, abs=1e-15) for p in pts)


def test_continuity_inverse_pi():
    # errors from 50-digit evaluation of the apportioned counts
    expected = [0.021243144369173217, 0.0018474141246280634, 0.000340786312689417, 1.0862117805630172e-05]
    p = 1 / math.pi
    pts = continuity_convergence(RealDist((p, 1 - p)), [10, 100, 1000, 10000])
    assert [pt.counts for pt in pts] == [(3, 7), (32, 68), (318, 682), (3183, 6817)]
    for pt, e in zip(pts, expected):
        assert pt.error == pytest.approx(e, abs=1e-12)
    assert all(b < a for a, b in zip([pt.error for pt in pts], [pt.error for pt in pts][1:]))
    assert check_continuity().passed


@pytest.mark.parametrize("sched", [[10, 10], [100, 10], [], [1, 10]])
def test_continuity_bad_schedule(sched):
    with pytest.raises(ValueError):
        continuity_convergence(RealDist((0.2, 0.3, 0.5)), sched)


def test_non_increasing_window():
    assert is_non_increasing([3, 2, 2, 1])
    assert not is_non_increasing([3, 1, 2, 0.5])
    assert is_non_increasing([3, 1, 2, 0.5], window=2)


def test_continuity_rise_gives_infinite_residual():
    # 0.3 is exact at N=10 but not at N=15
    rep = check_continuity((0.3, 0.7), [10, 15])
    assert rep.worst_residual == math.inf and not rep.passed


# -- postulate 2 -------------------------------------------------------------------


def test_likelihood():
    rep = check_likelihood(500, 20, seed=0)
    assert rep.passed and rep.worst_residual > 0


def test_die_that_favours_six():
    biased = RealDist((0.1, 0.1, 0.1, 0.1, 0.1, 0.5))
    assert entropy(biased) < uniform_entropy(6)


# -- reports, determinism, registry ----------------------------------------------


def test_report_invariant():
    for name in CHECKS:
        rep = run_check(name, trials=20, n_max=50, x_max=8, grid_points=50)
        assert rep.cases_run >= 1
        if rep.lower_bound:
            assert rep.passed == (rep.worst_residual > rep.tolerance)
        else:
            assert rep.passed == (rep.worst_residual <= rep.tolerance)


@pytest.mark.parametrize("name", ["general-additivity", "composition", "decomposition", "likelihood"])
def test_checks_are_deterministic(name):
    a = run_check(name, seed=11, trials=100)
    b = run_check(name, seed=11, trials=100)
    assert a == b
    c = run_check(name, seed=12, trials=100)
    assert c.worst_case_input != a.worst_case_input


def test_run_check_unknown():
    with pytest.raises(KeyError, match="valid"):
        run_check("nosuch")


# -- mutation detection ------------------------------------------------------------


@pytest.mark.parametrize("kind", ["sign", "square"])
def test_mutated_entropy_is_caught(monkeypatch, kind):
    with mutated(monkeypatch, kind):
        failed = {
            name for name in ("general-additivity", "composition", "decomposition", "likelihood")
            if not run_check(name, trials=100).passed
        }
    assert failed
    assert "decomposition" in failed


def test_sign_flip_fails_additivity_via_range(monkeypatch):
    with mutated(monkeypatch, "sign"):
        assert not check_general_additivity(50).passed


def test_log10_substitution_caught(monkeypatch):
    with mutated(monkeypatch, "log10"):
        assert not check_log_derivative(2).passed
    assert check_log_derivative(2).passed
