import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial
from scipy import integrate
from hypothesis import given, settings
from hypothesis import strategies as st

from finhilbert.chebrep import SpectralFunction, WeightClass
from finhilbert.dictionary import arcsine, bump, constant, indicator, random_polynomial, semicircle
from finhilbert.errors import DataError, DomainError, PreconditionError
from finhilbert.rearrange import (
    RearrangementProfile,
    calderon,
    distribution,
    growth_flag,
    log_weight_primitive,
    norm_l1,
    norm_llogl,
    norm_llogl_alpha,
    norm_lp,
    norm_report,
    profile_from_cells,
    profile_value,
    rearrangement,
    weak_quasi,
)

UNIT = RearrangementProfile([0.0, 2.0], [1.0])


def test_profile_from_cells_sorts_absolute_values():
    profile = profile_from_cells([1.0, -3.0, 2.0, 0.0])
    assert profile.levels == (3.0, 2.0, 1.0, 0.0)
    assert profile.breakpoints == (0.0, 0.5, 1.0, 1.5, 2.0)
    assert distribution(profile, 1.5) == 1.0
    assert distribution(profile, 3.0) == 0.0
    np.testing.assert_array_equal(profile_value(profile, [0.25, 0.5, 0.75, 2.0]), [3.0, 3.0, 2.0, 0.0])


def test_profile_validation():
    with pytest.raises(PreconditionError):
        RearrangementProfile([0.0, 1.0], [1.0])
    with pytest.raises(DataError):
        RearrangementProfile([0.0, 1.0, 2.0], [1.0, 2.0])
    with pytest.raises(DataError):
        profile_from_cells([1.0, math.inf])
    with pytest.raises(PreconditionError):
        UNIT.scaled(-1.0)


def test_closed_form_norms_of_the_constant():
    # int_0^2 log(2e/t) dt = 4 and int_0^2 log^2(2e/t) dt = 10
    assert norm_llogl(UNIT) == pytest.approx(4.0, abs=1e-12)
    assert norm_llogl_alpha(UNIT, 1.0) == pytest.approx(4.0, rel=1e-12)
    assert norm_llogl_alpha(UNIT, 2.0) == pytest.approx(10.0, rel=1e-12)
    assert norm_l1(UNIT) == 2.0
    assert norm_lp(UNIT, 2.0) == pytest.approx(math.sqrt(2.0))
    assert weak_quasi(UNIT, 2.0) == pytest.approx(math.sqrt(2.0))


def test_llogl_of_the_constant_function():
    assert norm_llogl(rearrangement(constant(), 4096)) == pytest.approx(4.0, abs=1e-10)


def test_log_weight_primitive_against_quadrature():
    for alpha in (1.5, 3.0):
        for end in (0.1, 0.7, 2.0):
            expected, _ = integrate.quad(lambda s: math.log(2.0 * math.e / s) ** alpha, 0.0, end, epsrel=1e-12)
            assert log_weight_primitive(np.array([end]), alpha)[0] == pytest.approx(expected, rel=1e-9)


def test_norm_parameter_checks():
    with pytest.raises(PreconditionError):
        norm_llogl_alpha(UNIT, 0.5)
    with pytest.raises(PreconditionError):
        norm_lp(UNIT, 0.5)
    with pytest.raises(PreconditionError):
        weak_quasi(UNIT, 0.9)
    with pytest.raises(PreconditionError):
        rearrangement(constant(), 4)


@pytest.mark.parametrize("t, expected", [(1.0, 1.0 + math.log(2.0)), (2.0, 1.0), (0.5, 1.0 + math.log(4.0))])
def test_calderon_of_the_constant(t, expected):
    assert calderon(UNIT, t) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("t", [0.0, -1.0, 2.5])
def test_calderon_domain(t):
    with pytest.raises(DomainError):
        calderon(UNIT, t)


def test_arcsine_rearrangement():
    profile = rearrangement(arcsine(), 4096)
    ts = np.linspace(0.1, 1.9, 19)
    exact = 2.0 / np.sqrt(ts * (4.0 - ts))
    np.testing.assert_allclose(profile_value(profile, ts), exact, rtol=0.01)
    assert norm_l1(profile) == pytest.approx(math.pi, rel=1e-8)


def test_semicircle_keeps_its_mass():
    assert norm_l1(rearrangement(semicircle(), 4096)) == pytest.approx(math.pi / 2.0, rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(min_value=-1.0, max_value=1.0), min_size=0, max_size=5))
def test_equimeasurability_for_positive_polynomials(tail):
    # |U_k| <= k + 1 keeps the series positive, so cell means are exact
    lead = 0.1 + sum(abs(c) * (k + 2) for k, c in enumerate(tail))
    f = SpectralFunction(WeightClass.FLAT, [lead, *tail])
    exact = sum(2.0 * c / (k + 1) for k, c in enumerate(f.coeffs) if k % 2 == 0)
    assert norm_l1(rearrangement(f, 512)) == pytest.approx(exact, rel=1e-12)


def abs_integral(coeffs):
    """int |sum c_k U_k| over (-1,1), split at the real roots."""
    x = Polynomial([0.0, 1.0])
    basis = [Polynomial([1.0]), 2.0 * x]
    while len(basis) < len(coeffs):
        basis.append(2.0 * x * basis[-1] - basis[-2])
    p = sum((c * u for c, u in zip(coeffs, basis)), Polynomial([0.0]))
    roots = sorted(r.real for r in p.roots() if abs(r.imag) < 1e-12 and -1.0 < r.real < 1.0)
    edges = [-1.0, *roots, 1.0]
    q = p.integ()
    return sum(abs(q(b) - q(a)) for a, b in zip(edges[:-1], edges[1:]))


@pytest.mark.parametrize("seed", [3, 5, 11])
def test_equimeasurability_across_sign_changes(seed):
    f = random_polynomial(np.random.default_rng(seed))
    profile = rearrangement(f, 4096)
    assert norm_l1(profile) == pytest.approx(abs_integral(f.coeffs), rel=1e-8)


def test_equimeasurability_of_a_polynomial_with_many_roots():
    f = SpectralFunction(WeightClass.FLAT, [0.05, 0.0, 0.3, 0.0, -1.0])
    assert norm_l1(rearrangement(f, 4096)) == pytest.approx(abs_integral(f.coeffs), rel=1e-8)


def test_norm_chain():
    profile = rearrangement(bump(0.2, 0.5), 1024)
    assert norm_l1(profile) <= norm_llogl(profile) <= norm_llogl_alpha(profile, 2.0)
    assert norm_lp(profile, 1.5) <= norm_lp(profile, 3.0) * 2.0 ** (1.0 / 1.5 - 1.0 / 3.0) + 1e-12


def test_growth_flag():
    assert growth_flag([1.0, 2.0, 3.0])
    assert not growth_flag([1.0, 1.5, 1.6])
    assert not growth_flag([1.0, 2.0])
    assert not growth_flag([3.0, 2.0, 1.0])


def test_norm_report():
    report = norm_report(indicator(-1.0, 1.0), 1024, p_list=(2.0,), weak_list=(2.0,), alphas=(3.0,))
    assert report.llogl.value == pytest.approx(4.0, abs=1e-10)
    assert not report.llogl.growing
    assert report.lp[2.0].value == pytest.approx(math.sqrt(2.0))
    payload = report.to_dict()
    assert set(payload) == {"resolution", "l1", "llogl", "lloglsq", "lp", "weak_quasi", "llogl_alpha"}
    assert payload["lp"]["2.0"]["growing"] is False


profiles = st.lists(st.floats(min_value=0.0, max_value=10.0), min_size=1, max_size=8).map(profile_from_cells)


@settings(max_examples=50, deadline=None)
@given(profiles, st.floats(min_value=0.0, max_value=5.0), st.floats(min_value=0.01, max_value=2.0))
def test_calderon_is_homogeneous(profile, factor, t):
    assert calderon(profile.scaled(factor), t) == pytest.approx(factor * calderon(profile, t), rel=1e-12)


@settings(max_examples=50, deadline=None)
@given(profiles, st.lists(st.floats(min_value=0.01, max_value=2.0), min_size=2, max_size=6))
def test_calderon_does_not_increase_in_t(profile, ts):
    values = [calderon(profile, t) for t in sorted(ts)]
    for earlier, later in zip(values[:-1], values[1:]):
        assert later <= earlier * (1.0 + 1e-12) + 1e-12
