import math
from fractions import Fraction

import numpy as np
import pytest

from bridgewalk.kernels import (
    ReturnSequence,
    escape_probability,
    first_return_probabilities,
    generating_value,
    growth_diagnostics,
    ratio_diagnostics,
    renewal_residuals,
    return_probabilities,
    spectral_radius_estimate,
    tree_closed_forms,
    verify_moment_properties,
    with_F_at_rho,
)
from bridgewalk.walk_models import make_model
from utils.errors import (
    BudgetExceededError,
    DivergenceError,
    InvalidModelSpecError,
    NumericalInstabilityError,
    UnsupportedModelError,
)

# =============================================================================
# RETURN AND FIRST-RETURN PROBABILITIES
# =============================================================================


def test_tree_return_probabilities(tree2):
    u = return_probabilities(tree2, 4)
    assert u[0] == 1.0
    assert u[1] == 0.0
    assert u[2] == pytest.approx(1 / 3, rel=1e-14)
    assert u[4] == pytest.approx(5 / 27, rel=1e-14)
    assert u.period == 2
    assert u.log_u[3] == -math.inf


def test_lamplighter_two_step_return(lamp1):
    u = return_probabilities(lamp1, 6)
    assert u[2] == pytest.approx(1 / 8, rel=1e-14)
    assert u[1] == 0.0


def test_first_returns_on_the_tree(tree2):
    f = first_return_probabilities(return_probabilities(tree2, 6))
    assert f[0] == 0.0
    assert f[2] == pytest.approx(1 / 3, rel=1e-13)
    assert f[4] == pytest.approx(2 / 27, rel=1e-13)


def test_first_return_on_the_line(line):
    f = first_return_probabilities(return_probabilities(line, 4))
    assert f[2] == pytest.approx(0.5)


def test_renewal_identity_is_reproduced(tree3, line12, lamp1):
    for model, N in ((tree3, 200), (line12, 200), (lamp1, 120)):
        u = return_probabilities(model, N)
        f = first_return_probabilities(u)
        assert renewal_residuals(u, f) <= 1e-12


def test_grid_and_axis_mixing_agree():
    separable = make_model({"kind": "lattice", "dim": 2})
    explicit = make_model(
        {
            "kind": "lattice",
            "dim": 2,
            "steps": [[[1, 0], 0.25], [[-1, 0], 0.25], [[0, 1], 0.25], [[0, -1], 0.25]],
        }
    )
    a = return_probabilities(separable, 40).u
    b = return_probabilities(explicit, 40).u
    np.testing.assert_allclose(a, b, rtol=1e-12)


def test_two_dimensional_return_closed_form(plane):
    u = return_probabilities(plane, 20)
    for n in range(1, 11):
        exact = (math.comb(2 * n, n) / 4**n) ** 2
        assert u[2 * n] == pytest.approx(exact, rel=1e-12)


def test_budgets_are_enforced(tree2, settings):
    tight = settings.model_copy(update={"tree_table_max_n": 10})
    with pytest.raises(BudgetExceededError) as info:
        return_probabilities(tree2, 11, settings=tight)
    assert info.value.budget_name == "tree_table_max_n"


def test_lamplighter_over_the_plane_needs_monte_carlo():
    model = make_model({"kind": "lamplighter", "dim": 2})
    with pytest.raises(UnsupportedModelError):
        return_probabilities(model, 10)
    estimate = return_probabilities(model, 4, method="monte_carlo", trials=2000, seed=3)
    assert estimate.method == "monte_carlo"
    assert estimate[0] == 1.0
    assert estimate[1] == 0.0
    assert estimate.stderr is not None
    # u_2 = 1/16 over Z^2
    assert abs(estimate[2] - 1 / 16) <= 4 * math.sqrt((1 / 16) * (15 / 16) / 2000)


def test_monte_carlo_is_reproducible(tree2):
    a = return_probabilities(tree2, 8, method="monte_carlo", trials=300, seed=11)
    b = return_probabilities(tree2, 8, method="monte_carlo", trials=300, seed=11)
    np.testing.assert_array_equal(a.u, b.u)


def test_negative_first_returns_are_rejected():
    u = ReturnSequence.from_values([1.0, 0.0, 0.5, 0.0, 0.1])
    with pytest.raises(NumericalInstabilityError):
        first_return_probabilities(u)


def test_round_off_negatives_are_clamped():
    u = ReturnSequence.from_values([1.0, 0.5, 0.25 - 1e-14])
    f = first_return_probabilities(u)
    assert f[2] == 0.0


def test_return_sequence_must_start_at_one():
    with pytest.raises(ValueError):
        ReturnSequence.from_values([0.5, 0.1])


# =============================================================================
# TREE CLOSED FORMS
# =============================================================================


def test_tree_constants():
    forms = tree_closed_forms(2)
    assert forms.lam_exact == Fraction(2, 9)
    assert forms.lam == pytest.approx(2 / 9)
    assert forms.F == pytest.approx(0.5)
    assert forms.rho == pytest.approx(3 / (2 * math.sqrt(2)))
    assert forms.F_at_rho == pytest.approx(0.75)
    assert forms.f_2k(1) == pytest.approx(1 / 3)
    assert forms.f_2k(2) == pytest.approx(2 / 27)


def test_rational_expansion_of_the_return_generating_function():
    coefficients = tree_closed_forms(2).u_coefficients(6)
    assert coefficients[:5] == [Fraction(1), 0, Fraction(1, 3), 0, Fraction(5, 27)]


def test_generating_functions_in_closed_form():
    forms = tree_closed_forms(2)
    assert forms.U_of_z(0.0) == 1.0
    assert forms.F_of_z(1.0) == pytest.approx(forms.F)
    assert forms.F_of_z(forms.rho) == pytest.approx(0.75)
    assert forms.U_of_z(1.0) == pytest.approx(1.0 / (1.0 - forms.F))
    with pytest.raises(DivergenceError):
        forms.F_of_z(1.1 * forms.rho)


def test_closed_forms_require_branching():
    with pytest.raises(InvalidModelSpecError):
        tree_closed_forms(1)


@pytest.mark.parametrize("b", [2, 3, 4])
def test_recursion_matches_closed_forms(b):
    model = make_model({"kind": "tree", "b": b})
    forms = tree_closed_forms(b)
    u = return_probabilities(model, 200)
    f = first_return_probabilities(u)

    expected_u = forms.return_sequence(200).u
    even = slice(0, None, 2)
    np.testing.assert_allclose(u.u[even], expected_u[even], rtol=1e-10)
    assert not np.any(u.u[1::2])

    expected_f = forms.first_return_sequence(200).f
    np.testing.assert_allclose(f.f[2::2], expected_f[2::2], rtol=1e-10)


# =============================================================================
# ESCAPE PROBABILITY
# =============================================================================


def test_tree_escape_probability(tree2):
    u = return_probabilities(tree2, 400)
    f = first_return_probabilities(u)
    report = escape_probability(f, spectral_radius_estimate(u))
    assert abs(report.partial_sum - 0.5) <= 1e-6
    assert report.stabilized
    assert report.tail_model == "geometric"
    assert report.estimate == pytest.approx(0.5, abs=1e-6)


def test_line_escape_is_inconclusive_before_partial_sums_settle(line):
    u = return_probabilities(line, 1000)
    f = first_return_probabilities(u)
    assert not f.stabilized
    report = escape_probability(f, spectral_radius_estimate(u))
    assert report.inconclusive is True
    assert not report.recurrent
    assert report.tail_model != "recurrent"
    assert report.estimate == pytest.approx(f.F)
    assert report.estimate < 1.0


@pytest.mark.slow
def test_line_partial_sums_approach_one(line):
    u = return_probabilities(line, 10_000)
    f = first_return_probabilities(u)
    assert f.F > 0.99
    report = escape_probability(f, spectral_radius_estimate(u))
    # 1 - F_N still decays like N^(-1/2), so the window never settles
    assert report.inconclusive
    assert report.estimate == pytest.approx(f.F)


def test_cubic_lattice_escape_probability(cubic):
    u = return_probabilities(cubic, 4000)
    f = first_return_probabilities(u)
    summary = spectral_radius_estimate(u)
    report = escape_probability(f, summary)
    assert report.tail_model == "polynomial"
    assert not report.recurrent
    assert report.inconclusive == (not report.stabilized)
    assert report.tail_estimate > 0
    assert report.estimate == pytest.approx(0.3405, abs=0.01)


def test_escape_without_profile_reports_partial_sum(tree2):
    f = first_return_probabilities(return_probabilities(tree2, 40))
    report = escape_probability(f)
    assert report.tail_estimate is None
    assert report.tail_model == "none"
    assert report.estimate == pytest.approx(f.F)


# =============================================================================
# SPECTRAL RADIUS AND GENERATING VALUES
# =============================================================================


def test_tree_spectral_radius_fit(tree2):
    summary = spectral_radius_estimate(return_probabilities(tree2, 1000))
    assert summary.rho == pytest.approx(3 / (2 * math.sqrt(2)), rel=5e-3)
    assert 1.3 <= summary.gamma <= 1.7
    assert not summary.clamped


def test_tree_b3_spectral_radius_fit(tree3):
    summary = spectral_radius_estimate(return_probabilities(tree3, 1000))
    assert summary.rho == pytest.approx(2 / math.sqrt(3), rel=5e-3)


def test_line_spectral_radius_is_one(line):
    summary = spectral_radius_estimate(return_probabilities(line, 1000))
    assert summary.rho == pytest.approx(1.0, abs=2e-3)


def test_uncorrected_fit_extrapolates(tree2):
    summary = spectral_radius_estimate(return_probabilities(tree2, 1000), correction="none")
    assert summary.gamma is None
    assert summary.rho == pytest.approx(3 / (2 * math.sqrt(2)), rel=2e-2)


def test_fit_needs_enough_values(tree2):
    with pytest.raises(ValueError):
        spectral_radius_estimate(return_probabilities(tree2, 40))


def test_generating_values_at_small_arguments(tree2):
    u = return_probabilities(tree2, 400)
    f = first_return_probabilities(u)
    assert generating_value(u, 0.0).value == 1.0
    assert generating_value(f, 1.0).value == pytest.approx(0.5, abs=1e-6)


def test_generating_value_beyond_radius_diverges(tree2):
    u = return_probabilities(tree2, 400)
    with pytest.raises(DivergenceError):
        generating_value(u, 1.2)


def test_first_return_generating_value_at_rho():
    forms = tree_closed_forms(2)
    f = forms.first_return_sequence(100_000)
    value = generating_value(f, forms.rho, summary=forms.generating_summary())
    assert value.value == pytest.approx(0.75, abs=0.01)
    assert value.value < 0.75
    assert value.tail_bound >= 0.75 - value.value
    assert value.tail_bound < 0.05


def test_fitted_profile_carries_F_at_rho(tree2):
    u = return_probabilities(tree2, 1000)
    f = first_return_probabilities(u)
    summary = with_F_at_rho(spectral_radius_estimate(u), f)
    assert summary.F_at_rho == pytest.approx(0.75, abs=0.03)
    assert summary.to_dict()["F_at_rho"] == summary.F_at_rho


# =============================================================================
# MOMENT PROPERTIES
# =============================================================================


@pytest.mark.parametrize(
    ("spec", "N"),
    [
        ({"kind": "tree", "b": 2}, 200),
        ({"kind": "tree", "b": 3}, 200),
        ({"kind": "tree", "b": 4}, 200),
        ({"kind": "lattice", "dim": 1}, 200),
        ({"kind": "lattice", "dim": 1, "jumps": [1, 2]}, 200),
        ({"kind": "lattice", "dim": 2}, 200),
        ({"kind": "lattice", "dim": 3}, 120),
        ({"kind": "lamplighter", "dim": 1}, 120),
    ],
)
def test_moment_inequalities_hold(spec, N):
    report = verify_moment_properties(return_probabilities(make_model(spec), N))
    assert report.ok, report.violations[:5]
    assert all(count > 0 for count in report.checked.values())


def test_supermultiplicative_instance(tree2):
    u = return_probabilities(tree2, 4)
    assert u[4] >= u[2] * u[2]


def test_increasing_even_moments_are_reported():
    u = ReturnSequence.from_values([1.0, 0.0, 0.2, 0.0, 0.3])
    report = verify_moment_properties(u)
    assert not report.ok
    assert report.by_family("even_nonincreasing")[0].indices == (4, 2)


# =============================================================================
# RATIO AND GROWTH DIAGNOSTICS
# =============================================================================


def test_unshifted_trajectory_is_identically_one(line12):
    u = return_probabilities(line12, 100)
    diagnostics = ratio_diagnostics(u, rho=1.0, eta=0.5)
    _, ratios = diagnostics.trajectories[0]
    assert np.all(ratios == 1.0)


def test_planar_doubling_ratio_settles_near_two(plane):
    u = return_probabilities(plane, 400)
    diagnostics = ratio_diagnostics(u, rho=1.0, eta=0.5)
    assert diagnostics.doubling_ratios[-1] == pytest.approx(2.0, abs=0.05)
    assert diagnostics.doubling_verdict == "consistent with bounded"


def test_tree_shift_ratio_approaches_one(tree2):
    u = return_probabilities(tree2, 400)
    forms = tree_closed_forms(2)
    diagnostics = ratio_diagnostics(u, rho=forms.rho, eta=0.5)
    _, ratios = diagnostics.trajectories[2]
    assert abs(ratios[-1] - 1.0) < abs(ratios[0] - 1.0)
    assert diagnostics.trajectory_verdicts[2] == "consistent with -> 1"
    assert diagnostics.doubling_verdict == "growing on this grid"


def test_ratio_diagnostics_argument_checks(tree2):
    u = return_probabilities(tree2, 40)
    with pytest.raises(ValueError):
        ratio_diagnostics(u, rho=0.0, eta=0.5)
    with pytest.raises(ValueError):
        ratio_diagnostics(u, rho=1.0, eta=1.0)


def test_polynomial_growth_bands(line, plane):
    d1 = growth_diagnostics(return_probabilities(line, 400), degree=1)
    assert 0.5 < d1.c1 <= d1.c2 < 0.6
    d2 = growth_diagnostics(return_probabilities(plane, 400), degree=2)
    assert 0.3 < d2.c1 <= d2.c2 < 0.33
    assert d2.doubling_settled


def test_tree_doubling_ratios_keep_growing(tree2):
    diagnostics = growth_diagnostics(return_probabilities(tree2, 400), degree=0)
    assert not diagnostics.doubling_settled
    ratios = diagnostics.doubling_ratios
    assert ratios[-1] > ratios[len(ratios) // 2]
