import math

import numpy as np
import pytest

from finhilbert import dictionary, verify
from finhilbert.backend import HilbertBackend, load_config, parse_points, parse_spaces
from finhilbert.chebrep import GridFunction, SpectralFunction, WeightClass
from finhilbert.errors import ConfigError, PreconditionError, UnsupportedWeightError
from finhilbert.results import VerificationReport
from finhilbert.settings import ENV_CONFIG, RESOLUTION, TOLERANCES
from finhilbert.transform import Method


@pytest.fixture
def backend():
    return HilbertBackend({"RESOLUTION": 256, "SPECTRAL_N": 16})


def test_defaults():
    backend = HilbertBackend()
    assert backend.resolution == RESOLUTION
    assert backend.output_format == "json"
    assert backend.tolerances == TOLERANCES


@pytest.mark.parametrize(
    "params",
    [
        {"RESOLUTION": 32},
        {"RESOLUTION": "4096"},
        {"RESOLUTION": True},
        {"SPECTRAL_N": 2},
        {"TRIM": 1.0},
        {"TRIM": "0.5"},
        {"OUTPUT_FORMAT": "xml"},
        {"PANEL_ORDER": 1},
        {"WORKERS": 0},
        {"TOLERANCES": {"nonsense": 1.0}},
    ],
)
def test_invalid_params(params):
    with pytest.raises(ConfigError):
        HilbertBackend(params)


def test_tolerance_override():
    backend = HilbertBackend({"TOLERANCES": {"kernel": 1e-6}})
    assert backend.tolerance("kernel") == 1e-6
    assert backend.tolerance("parseval") == TOLERANCES["parseval"]
    with pytest.raises(PreconditionError):
        backend.tolerance("nonsense")


def test_load_config(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('resolution = 256\noutput_format = "csv"\n\n[tolerances]\nkernel = 1e-6\n')
    params = load_config(path)
    assert params == {"RESOLUTION": 256, "OUTPUT_FORMAT": "csv", "TOLERANCES": {"kernel": 1e-6}}
    backend = HilbertBackend(params)
    assert backend.output_format == "csv"
    assert backend.tolerance("kernel") == 1e-6


def test_load_config_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "env.toml"
    path.write_text("SEED = 11\n")
    monkeypatch.setenv(ENV_CONFIG, str(path))
    assert load_config() == {"SEED": 11}
    monkeypatch.delenv(ENV_CONFIG)
    assert load_config() == {}


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.toml")
    broken = tmp_path / "broken.toml"
    broken.write_text("resolution = = 3\n")
    with pytest.raises(ConfigError):
        load_config(broken)


def test_parse_points():
    assert np.allclose(parse_points("uniform:4"), [-0.75, -0.25, 0.25, 0.75])
    assert np.allclose(parse_points("0.5, -0.25"), [0.5, -0.25])
    chebyshev = parse_points("chebyshev:8")
    assert len(chebyshev) == 8
    assert np.all(np.abs(chebyshev) < 1.0)
    for spec in ("uniform:x", "chebyshev:0", "a,b"):
        with pytest.raises(PreconditionError):
            parse_points(spec)


def test_parse_spaces():
    assert parse_spaces("llogl") == ((), (), ())
    assert parse_spaces("l1,lp:1.5,weak:2,alpha:3,lp:4") == ((1.5, 4.0), (2.0,), (3.0,))
    for spec in ("lorentz", "lp", "lp:x"):
        with pytest.raises(PreconditionError):
            parse_spaces(spec)


def test_transform_dispatch(backend):
    result = backend.transform(dictionary.arcsine(2.0))
    assert result.method is Method.SPECTRAL
    assert np.all(result.output.array == 0.0)

    result = backend.transform(dictionary.constant(), points="0.0,0.5")
    assert result.method is Method.QUADRATURE
    assert result.output.values[0] == pytest.approx(0.0, abs=1e-14)
    assert result.output.values[1] == pytest.approx(math.log(1.0 / 3.0) / math.pi, rel=1e-12)

    result = backend.transform(dictionary.constant())
    assert result.method is Method.QUADRATURE
    assert len(result.output.nodes) == backend.spectral_n

    assert backend.transform(dictionary.constant(), method="step").method is Method.STEP


def test_transform_of_a_grid_defaults_to_its_nodes(backend):
    grid = GridFunction([-0.5, 0.0, 0.5], [1.0, 1.0, 1.0])
    result = backend.transform(grid)
    assert np.allclose(result.output.x, grid.x)
    with pytest.raises(UnsupportedWeightError):
        backend.transform(grid, method="spectral")


def test_hat_dispatch(backend):
    result = backend.transform(dictionary.constant(), hat=True)
    assert result.method is Method.SPECTRAL
    assert result.output.weight is WeightClass.INV_SQRT
    assert np.allclose(result.output.array, [0.0, 1.0])

    result = backend.transform(dictionary.semicircle(), hat=True, points="0.25")
    assert result.method is Method.QUADRATURE
    # T^(w) = -(1/w) T(1 - t^2) and T(1 - t^2) = (1 - x^2) T(1) - 2x/pi
    x = 0.25
    w = math.sqrt(1.0 - x * x)
    expected = -((1.0 - x * x) * math.log((1.0 - x) / (1.0 + x)) - 2.0 * x) / (math.pi * w)
    assert result.output.values[0] == pytest.approx(expected, rel=1e-9)


def test_hat_honours_the_quadrature_method(backend):
    g = SpectralFunction(WeightClass.FLAT, [0.5, -0.25, 0.1])
    result = backend.transform(g, hat=True, method="quadrature", points="-0.5,0.25,0.5")
    assert result.method is Method.QUADRATURE
    exact = backend.transform(g, hat=True)
    assert exact.method is Method.SPECTRAL
    np.testing.assert_allclose(result.output.values, exact.output([-0.5, 0.25, 0.5]), rtol=1e-9, atol=1e-12)


def test_hat_on_the_step_grid(backend):
    result = backend.transform(dictionary.constant(), hat=True, method="step")
    assert result.method is Method.STEP
    x, values = result.output.x, result.output.y
    assert len(x) == 256
    inner = np.abs(x) < 0.9
    # T^(1) = x / sqrt(1 - x^2), far from T(1)
    np.testing.assert_allclose(values[inner], x[inner] / np.sqrt(1.0 - x[inner] ** 2), atol=3e-2)


def test_invert_and_range_check(backend):
    solution = backend.invert(dictionary.zero(), 1.0)
    assert solution.homogeneous_coeff == 1.0
    assert isinstance(solution.solution, SpectralFunction)
    assert HilbertBackend({"RESOLUTION": 1024}).range_check(dictionary.constant()).in_range


def test_norm(backend):
    report = backend.norm(dictionary.constant(), "llogl,lp:2")
    assert report.resolution == 256
    assert report.llogl.value == pytest.approx(4.0, rel=1e-9)
    assert report.lp[2.0].value == pytest.approx(math.sqrt(2.0), rel=1e-9)
    assert not report.llogl.growing


def test_verify_uses_tolerances():
    backend = HilbertBackend({"RESOLUTION": 256, "TOLERANCES": {"kernel": 1e-6}})
    (report,) = backend.verify(["kernel"])
    assert report.suite == "kernel"
    assert report.passed
    assert max(case.tolerance for case in report.cases) == 1e-6
    with pytest.raises(PreconditionError):
        backend.verify(["nonsense"])


def test_unknown_witness(backend):
    with pytest.raises(PreconditionError):
        backend.witness("nonsense")


def test_verify_passes_the_panel_settings(monkeypatch):
    seen = {}

    def suite(**options):
        seen.update(options)
        return VerificationReport("kernel", (), options["seed"])

    monkeypatch.setitem(verify.SUITES, "kernel", suite)
    HilbertBackend({"PANEL_DEPTH": 20, "PANEL_ORDER": 8}).verify(["kernel"])
    assert seen["depth"] == 20
    assert seen["order"] == 8
