import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finhilbert.chebrep import GridFunction, Sampler, SpectralFunction, WeightClass, as_sampler, evaluate, sampler_rule
from finhilbert.dictionary import arcsine, bump, chebyshev_u, constant, indicator, log_singular, semicircle
from finhilbert.errors import DomainError, PreconditionError, UnsupportedWeightError
from finhilbert.transform import (
    Method,
    TransformResult,
    calderon_domination,
    fht_hat,
    fht_hat_spectral,
    fht_hat_step,
    fht_quadrature,
    fht_spectral,
    fht_step,
    hat_plus_t,
    hat_values,
    mean_value,
    project_P,
    step_transform,
    t_series_to_u,
    transform_sampler,
    transform_values,
)

XS = np.linspace(-1.0, 1.0, 23)[1:-1]
coefficients = st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=1, max_size=16)


def log_ratio(xs, a, b):
    """T of the indicator of (a, b)."""
    return np.log(np.abs((b - xs) / (a - xs))) / np.pi


def test_kernel_is_annihilated():
    for c in (1.0, -3.7):
        result = fht_spectral(arcsine(c))
        assert result.method is Method.SPECTRAL
        assert result.output.weight is WeightClass.FLAT
        assert result.output.is_zero()


def test_spectral_closed_forms():
    np.testing.assert_allclose(evaluate(fht_spectral(semicircle()).output, XS), -XS, atol=1e-15)
    # T(T_3 / w) = U_2
    t3 = SpectralFunction(WeightClass.INV_SQRT, [0.0, 0.0, 0.0, 1.0])
    assert fht_spectral(t3).output.coeffs == (0.0, 0.0, 1.0)
    with pytest.raises(UnsupportedWeightError):
        fht_spectral(constant())


def test_t_series_to_u():
    # T_2 = (U_2 - U_0) / 2
    np.testing.assert_array_equal(t_series_to_u([0.0, 0.0, 1.0]), [-0.5, 0.0, 0.5])
    a = np.array([0.3, -1.0, 0.25, 2.0, -0.5])
    u = SpectralFunction(WeightClass.FLAT, t_series_to_u(a))
    np.testing.assert_allclose(evaluate(u, XS), np.polynomial.chebyshev.chebval(XS, a), atol=1e-13)


def test_hat_of_the_constant():
    result = fht_hat_spectral(constant())
    assert result.output == SpectralFunction(WeightClass.INV_SQRT, [0.0, 1.0])
    np.testing.assert_allclose(evaluate(result.output, XS), XS / np.sqrt(1.0 - XS**2), rtol=1e-14)
    with pytest.raises(UnsupportedWeightError):
        fht_hat_spectral(arcsine())


@settings(max_examples=100, deadline=None)
@given(coefficients)
def test_inversion_round_trips_are_exact(coeffs):
    g = SpectralFunction(WeightClass.FLAT, coeffs)
    assert fht_spectral(fht_hat_spectral(g).output).output == g
    f = SpectralFunction(WeightClass.INV_SQRT, coeffs)
    back = fht_hat_spectral(fht_spectral(f).output).output
    np.testing.assert_array_equal(back.padded(len(coeffs) + 1), (f - project_P(f)).padded(len(coeffs) + 1))


@settings(max_examples=50, deadline=None)
@given(coefficients)
def test_projection_is_idempotent(coeffs):
    f = SpectralFunction(WeightClass.INV_SQRT, coeffs)
    assert project_P(project_P(f)) == project_P(f)
    assert fht_spectral(project_P(f)).output.is_zero()


@settings(max_examples=50, deadline=None)
@given(coefficients)
def test_transform_of_t_times_f(coeffs):
    # T(t f)(x) = x T(f)(x) + (1/pi) int f
    f = SpectralFunction(WeightClass.INV_SQRT, coeffs)
    tf = SpectralFunction(WeightClass.INV_SQRT, np.polynomial.chebyshev.chebmulx(coeffs))
    lhs = evaluate(fht_spectral(tf).output, XS)
    rhs = XS * evaluate(fht_spectral(f).output, XS) + mean_value(f)
    np.testing.assert_allclose(lhs, rhs, atol=1e-11 * (1.0 + np.abs(coeffs).sum()))


@settings(max_examples=20, deadline=None)
@given(
    st.sampled_from([WeightClass.INV_SQRT, WeightClass.SQRT]),
    st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=1, max_size=8),
)
def test_quadrature_agrees_with_the_spectral_rule(weight, coeffs):
    f = SpectralFunction(weight, coeffs)
    exact = evaluate(fht_spectral(f).output, XS)
    np.testing.assert_allclose(transform_values(as_sampler(f), XS), exact, atol=1e-8 * (1.0 + np.abs(coeffs).sum()))


@settings(max_examples=50, deadline=None)
@given(coefficients, coefficients, st.floats(min_value=-2.0, max_value=2.0))
def test_transform_is_linear(a, b, scale):
    f, g = SpectralFunction(WeightClass.INV_SQRT, a), SpectralFunction(WeightClass.SQRT, b)
    combined = transform_values(f, XS) + scale * transform_values(g, XS)
    separate = fht_spectral(f).output + scale * fht_spectral(g).output
    np.testing.assert_allclose(combined, evaluate(separate, XS), atol=1e-12 * (1.0 + np.abs(a).sum() + np.abs(b).sum()))
    h = SpectralFunction(WeightClass.INV_SQRT, b)
    summed = fht_spectral(f + scale * h).output
    np.testing.assert_allclose(
        summed.padded(17)[:17], (fht_spectral(f).output + scale * fht_spectral(h).output).padded(17)[:17], atol=1e-14
    )


def test_mean_value():
    assert mean_value(arcsine(2.0)) == 2.0
    assert mean_value(semicircle()) == 0.5
    assert mean_value(constant()) == pytest.approx(2.0 / math.pi, rel=1e-15)
    assert mean_value(indicator(0.0, 0.5)) == pytest.approx(0.5 / math.pi, rel=1e-15)
    assert mean_value(fht_hat_spectral(chebyshev_u(2)).output) == 0.0


def test_quadrature_closed_forms():
    constant_image = np.log((1.0 - XS) / (1.0 + XS)) / np.pi
    np.testing.assert_allclose(fht_quadrature(constant(), XS).output.y, constant_image, atol=1e-13)
    sampled = Sampler(lambda t: np.sqrt((1.0 - t) * (1.0 + t)), label="semicircle")
    np.testing.assert_allclose(transform_values(sampled, XS), -XS, atol=1e-8)
    kernel = fht_quadrature(arcsine(-3.7), XS)
    assert kernel.method is Method.QUADRATURE
    assert np.abs(kernel.output.y).max() < 1e-8


def test_quadrature_sorts_points_and_checks_domain():
    result = fht_quadrature(constant(), [0.5, -0.5])
    assert result.output.nodes == (-0.5, 0.5)
    with pytest.raises(DomainError):
        fht_quadrature(constant(), [0.0, 1.0])


def test_transform_of_an_indicator():
    xs = np.array([-0.75, -0.5, 0.25, 0.4, 0.75])
    expected = log_ratio(xs, 0.0, 0.5)
    np.testing.assert_allclose(transform_values(indicator(0.0, 0.5), xs), expected, atol=1e-10)
    restricted = fht_quadrature(constant(), xs, support=(0.0, 0.5)).output
    np.testing.assert_allclose(restricted.y, expected, atol=1e-12)


def test_polynomial_path_matches_general_quadrature():
    f = SpectralFunction(WeightClass.FLAT, [0.2, -0.7, 0.4, 0.1])
    general = transform_values(Sampler(lambda t: evaluate(f, t)), XS)
    np.testing.assert_allclose(transform_values(f, XS), general, atol=1e-9)


def test_quadrature_at_rule_nodes():
    # evaluation points that coincide with quadrature nodes keep their quotient term
    f = SpectralFunction(WeightClass.FLAT, [0.0, 1.0])
    t = np.polynomial.legendre.leggauss(3)[0]
    expected = (4.0 + 2.0 * t * np.log((1.0 - t) / (1.0 + t))) / np.pi
    np.testing.assert_allclose(transform_values(f, t), expected, atol=1e-14)


def test_step_transform_is_exact_for_cell_functions():
    result = fht_step(indicator(0.0, 0.5), 64)
    assert result.method is Method.STEP
    np.testing.assert_allclose(result.output.y, log_ratio(result.output.x, 0.0, 0.5), atol=1e-12)


def test_step_transform_is_linear_along_rows():
    rng = np.random.default_rng(0)
    rows = rng.normal(size=(3, 32))
    stacked = step_transform(rows)
    for row, image in zip(rows, stacked):
        np.testing.assert_allclose(step_transform(row), image, atol=1e-12)
    np.testing.assert_allclose(step_transform(rows.sum(axis=0)), stacked.sum(axis=0), atol=1e-12)


def test_hat_quadrature_matches_spectral_rule():
    sampled = Sampler(lambda t: np.ones_like(t), label="one")
    np.testing.assert_allclose(hat_values(sampled, XS), XS / np.sqrt(1.0 - XS**2), rtol=1e-9, atol=1e-12)
    on_grid = fht_hat(GridFunction(XS, np.ones_like(XS)), XS[1:-1])
    assert on_grid.method is Method.QUADRATURE
    np.testing.assert_allclose(on_grid.output.y, XS[1:-1] / np.sqrt(1.0 - XS[1:-1] ** 2), rtol=1e-9, atol=1e-12)


def test_hat_honours_the_requested_method():
    g = SpectralFunction(WeightClass.FLAT, [0.5, -0.25, 0.1])
    result = fht_hat(g, XS, method="quadrature")
    assert result.method is Method.QUADRATURE
    exact = evaluate(fht_hat(g).output, XS)
    np.testing.assert_allclose(result.output.y, exact, rtol=1e-9, atol=1e-12)
    with pytest.raises(PreconditionError):
        fht_hat(g, XS, method="step")
    with pytest.raises(UnsupportedWeightError):
        fht_hat(GridFunction(XS, np.ones_like(XS)), method="spectral")


def test_hat_on_the_step_grid():
    result = fht_hat_step(constant(), 1024)
    assert result.method is Method.STEP
    x, y = result.output.x, result.output.y
    inner = np.abs(x) < 0.9
    np.testing.assert_allclose(y[inner], x[inner] / np.sqrt(1.0 - x[inner] ** 2), atol=1e-2)


def test_transform_of_a_log_singularity_at_its_own_nodes():
    g = log_singular(0.086, 0.7)
    nodes, _ = sampler_rule(as_sampler(g))
    values = transform_values(g, nodes[::37])
    assert np.all(np.isfinite(values))


def test_hat_plus_t():
    g = constant()
    expected = np.log((1.0 - XS) / (1.0 + XS)) / np.pi + XS / np.sqrt(1.0 - XS**2)
    np.testing.assert_allclose(hat_plus_t(g, XS), expected, atol=1e-13)


def test_transform_result_validation():
    with pytest.raises(PreconditionError):
        TransformResult(GridFunction([0.0], [1.0]), Method.SPECTRAL)
    payload = fht_spectral(semicircle()).to_dict()
    assert payload == {"method": "spectral", "output": {"weight": "flat_u", "coeffs": [0.0, -0.5]}, "residual_meta": None}


def test_calderon_domination_report():
    report = calderon_domination(bump(0.0, 0.5), (0.25, 0.5, 1.0, 2.0), resolution=256, depth=20)
    assert not report.violations
    assert 0.0 < report.sup < math.inf
    assert len(report.ratios) == 4
    assert set(report.to_dict()) == {"ts", "ratios", "sup", "sup_coarse", "stable", "violations"}


def test_transform_sampler():
    image = transform_sampler(constant())
    assert np.allclose(image(XS), log_ratio(XS, -1.0, 1.0), rtol=1e-12, atol=1e-14)
    zero_image = transform_sampler(arcsine(2.0))
    assert np.all(zero_image(XS) == 0.0)
