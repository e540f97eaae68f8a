import numpy as np
import pytest

from finhilbert.chebrep import Sampler, SpectralFunction, WeightClass, evaluate
from finhilbert.dictionary import arcsine, chebyshev_u, constant, indicator, kober, log_singular, range_gap, zero
from finhilbert.errors import PreconditionError
from finhilbert.inversion import (
    ARCSINE,
    IN_RANGE,
    OUT_OF_RANGE,
    AirfoilSolution,
    fredholm_demo,
    l1_distance,
    optimal_domain_diag,
    pairing_integral,
    parseval_residual,
    range_check,
    solve_airfoil,
)
from finhilbert.transform import Method


def test_zero_data_gives_the_arcsine_density():
    solution = solve_airfoil(zero(), c=1.0)
    assert solution.solution.trimmed() == ARCSINE
    assert solution.residual_l1 == 0.0
    assert solution.method is Method.SPECTRAL


def test_constant_data():
    solution = solve_airfoil(constant())
    assert solution.particular == SpectralFunction(WeightClass.INV_SQRT, [0.0, 1.0])
    assert solution.residual_l1 == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("c1, c2", [(0.0, 1.0), (-2.5, 0.75)])
def test_solutions_differ_by_the_kernel(c1, c2):
    g = SpectralFunction(WeightClass.FLAT, [0.3, -0.2, 0.9])
    gap = solve_airfoil(g, c1).solution - solve_airfoil(g, c2).solution
    assert gap.trimmed() == (c1 - c2) * ARCSINE


def test_complex_coefficient():
    solution = solve_airfoil(constant(), 1.0 + 2.0j)
    assert solution.real_part == SpectralFunction(WeightClass.INV_SQRT, [1.0, 1.0])
    assert solution.imag_part == 2.0 * ARCSINE
    with pytest.raises(PreconditionError):
        solution.solution
    assert solution.to_dict()["c"] == {"real": 1.0, "imag": 2.0}


def test_grid_path():
    g = chebyshev_u(3)
    solution = solve_airfoil(Sampler(lambda t: evaluate(g, t), label="u3"))
    assert solution.method is Method.QUADRATURE
    assert solution.residual_l1 < 1e-8
    assert solution.verdict == IN_RANGE
    assert solution.evidence["growing"] is False
    exact = solve_airfoil(g).particular
    np.testing.assert_allclose(solution.particular.padded(8)[:8], exact.padded(8)[:8], atol=1e-9)


def test_solution_to_dict():
    payload = solve_airfoil(zero(), 1.0).to_dict()
    assert payload == {
        "particular": {"weight": "inv_sqrt", "coeffs": [0.0, 0.0]},
        "c": 1.0,
        "residual_l1": 0.0,
        "method": "spectral",
        "verdict": "in-range evidence",
    }
    assert isinstance(solve_airfoil(zero()), AirfoilSolution)


def test_l1_distance():
    assert l1_distance(indicator(-0.5, 0.5), zero()) == pytest.approx(1.0, rel=1e-12)
    assert l1_distance(arcsine(), arcsine()) == 0.0


def test_range_check_of_a_polynomial():
    check = range_check(constant(), resolution=1024)
    assert check.verdict == IN_RANGE
    assert check.in_range
    assert check.resolutions == (64, 256, 1024)
    assert not check.growing
    assert check.to_dict()["evidence"]["residual_l1"] < 1e-8


def test_parseval():
    f = SpectralFunction(WeightClass.FLAT, [0.5, -0.25, 0.1])
    g = SpectralFunction(WeightClass.INV_SQRT, [0.2, 0.7, -0.3])
    assert parseval_residual(f, g) < 1e-6
    # T(arcsine) = 0, so the pairing against it vanishes both ways
    assert pairing_integral(chebyshev_u(2), ARCSINE) == pytest.approx(0.0, abs=1e-12)
    assert pairing_integral(ARCSINE, chebyshev_u(2)) == pytest.approx(0.0, abs=1e-6)


def test_pairing_against_a_log_singularity():
    f = SpectralFunction(WeightClass.FLAT, [0.5, -0.25, 0.1])
    g = log_singular(0.086, 0.7)
    forward = pairing_integral(f, g)
    assert np.isfinite(forward)
    assert forward == pytest.approx(-pairing_integral(g, f), abs=1e-6)
    assert parseval_residual(f, g, depth=30, order=12) < 1e-5


def test_optimal_domain_diagnostic():
    diag = optimal_domain_diag(constant(), depth=4)
    assert len(diag.sups) == 4
    assert all(b >= a for a, b in zip(diag.sups[:-1], diag.sups[1:]))
    assert diag.sup_lower_bound == diag.sups[-1] > 0.0
    assert diag.skipped == 0
    assert set(diag.to_dict()["sups"]) == {"1", "2", "3", "4"}
    with pytest.raises(PreconditionError):
        optimal_domain_diag(constant(), depth=13)


def test_fredholm_demo():
    cases = fredholm_demo(sets=((-0.5, 0.5), (0.0, 0.5)), n=16)
    assert [case.support for case in cases] == [(-0.5, 0.5), (0.0, 0.5)]
    for case in cases:
        assert case.residual < 1e-4


def test_grid_path_flags_data_outside_the_range():
    solution = solve_airfoil(range_gap(), resolution=4096)
    assert solution.method is Method.QUADRATURE
    assert solution.verdict == OUT_OF_RANGE
    assert solution.evidence["growing"] is True
    assert solution.to_dict()["verdict"] == OUT_OF_RANGE


def test_optimal_domain_diagnostic_grows_for_kober():
    diag = optimal_domain_diag(kober())
    assert diag.growth_flag
    assert all(b >= a for a, b in zip(diag.sups[:-1], diag.sups[1:]))
    assert diag.sups[-1] > diag.sups[0]
    assert diag.best_cells
