import logging
import os
import tomllib
from functools import cached_property

import numpy as np

from . import verify
from .chebrep import GridFunction, SpectralFunction, WeightClass, chebyshev_nodes
from .errors import ConfigError, PreconditionError, UnsupportedWeightError
from .inversion import range_check, solve_airfoil
from .rearrange import norm_report
from .settings import (
    ENV_CONFIG,
    MIN_RESOLUTION,
    MIN_SPECTRAL_N,
    OUTPUT_FORMAT,
    OUTPUT_FORMATS,
    PANEL_DEPTH,
    PANEL_ORDER,
    RESOLUTION,
    SEED,
    SPECTRAL_N,
    TOLERANCES,
    TRIM,
    WORKERS,
)
from .transform import Method, fht_hat, fht_hat_step, fht_quadrature, fht_spectral, fht_step
from .utils import weak_lru

logger = logging.getLogger(__name__)

# always part of a NormReport
BASE_SPACES = ("l1", "llogl", "lloglsq")


def load_config(path=None):
    """
    Reads a TOML config file, from `path` or else from $FINHILBERT_CONFIG.

    Top-level keys are upper-cased so that `resolution = 8192` and
    `RESOLUTION = 8192` mean the same thing.

    Returns:
        dict: Parameters for HilbertBackend; empty when no file is named.

    Raises:
        ConfigError: If the file cannot be read or is not valid TOML.
    """
    path = path or os.environ.get(ENV_CONFIG)
    if not path:
        return {}
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as err:
        msg = f"Cannot read config {path}: {err}"
        raise ConfigError(msg) from err
    except tomllib.TOMLDecodeError as err:
        msg = f"Invalid config {path}: {err}"
        raise ConfigError(msg) from err
    logger.debug("Loaded config from %s", path)
    return {str(key).upper(): value for key, value in data.items()}


def parse_points(spec):
    """
    Evaluation points from "chebyshev:N", "uniform:N" (cell midpoints) or a
    comma separated list of numbers.
    """
    kind, _, count = spec.partition(":")
    if kind in ("chebyshev", "uniform"):
        try:
            n = int(count)
        except ValueError as err:
            msg = f"Expected {kind}:N, got {spec!r}"
            raise PreconditionError(msg) from err
        if n < 1:
            msg = f"Need at least one point, got {n}"
            raise PreconditionError(msg)
        if kind == "chebyshev":
            return chebyshev_nodes(WeightClass.INV_SQRT, n)
        return -1.0 + (2.0 * np.arange(n) + 1.0) / n
    try:
        return np.array([float(item) for item in spec.split(",") if item.strip()])
    except ValueError as err:
        msg = f"Cannot parse points {spec!r}"
        raise PreconditionError(msg) from err


def parse_spaces(spec):
    """
    "l1,llogl,lp:1.5,weak:2,alpha:3" to the extra exponents of a norm
    report: (p_list, weak_list, alphas).
    """
    p_list, weak_list, alphas = [], [], []
    targets = {"lp": p_list, "weak": weak_list, "alpha": alphas}
    for item in (part.strip() for part in spec.split(",")):
        if not item or item in BASE_SPACES:
            continue
        name, _, value = item.partition(":")
        if name not in targets or not value:
            msg = f"Unknown space {item!r}; use {', '.join(BASE_SPACES)}, lp:P, weak:P or alpha:A"
            raise PreconditionError(msg)
        try:
            targets[name].append(float(value))
        except ValueError as err:
            msg = f"Cannot parse exponent in {item!r}"
            raise PreconditionError(msg) from err
    return tuple(p_list), tuple(weak_list), tuple(alphas)


class HilbertBackend:
    """
    Run parameters and the operations the command line exposes.

    Every command goes through one backend, so a command's output is the
    output of the library call made here with the same parameters.
    """

    suites = verify.SUITES
    witnesses = verify.WITNESSES

    def __init__(self, params=None):
        """
        Args:
            params (dict): Upper-case keys; anything missing takes its
                default from settings.

        Raises:
            ConfigError: On an out-of-range value.
        """
        params = params or {}
        self.params = params
        self.resolution = params.get("RESOLUTION", RESOLUTION)
        self.spectral_n = params.get("SPECTRAL_N", SPECTRAL_N)
        self.trim = params.get("TRIM", TRIM)
        self.panel_depth = params.get("PANEL_DEPTH", PANEL_DEPTH)
        self.panel_order = params.get("PANEL_ORDER", PANEL_ORDER)
        self.output_format = params.get("OUTPUT_FORMAT", OUTPUT_FORMAT)
        self.seed = params.get("SEED", SEED)
        self.workers = params.get("WORKERS", WORKERS)
        self._validate()

    def _validate(self):
        for name in ("resolution", "spectral_n", "panel_depth", "panel_order", "seed", "workers"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                msg = f"{name} must be an integer, got {value!r}"
                raise ConfigError(msg)
        if self.resolution < MIN_RESOLUTION:
            msg = f"resolution must be at least {MIN_RESOLUTION}, got {self.resolution}"
            raise ConfigError(msg)
        if self.spectral_n < MIN_SPECTRAL_N:
            msg = f"spectral_n must be at least {MIN_SPECTRAL_N}, got {self.spectral_n}"
            raise ConfigError(msg)
        if not isinstance(self.trim, (int, float)) or not 0.0 < self.trim < 1.0:
            msg = f"trim must lie in (0, 1), got {self.trim!r}"
            raise ConfigError(msg)
        if self.output_format not in OUTPUT_FORMATS:
            msg = f"output format must be one of {', '.join(OUTPUT_FORMATS)}, got {self.output_format!r}"
            raise ConfigError(msg)
        if self.panel_depth < 1 or self.panel_order < 2 or self.workers < 1:
            msg = "panel_depth and workers must be positive and panel_order at least 2"
            raise ConfigError(msg)
        unknown = set(self.params.get("TOLERANCES", {})) - set(TOLERANCES)
        if unknown:
            msg = f"Tolerances given for unknown suite(s): {', '.join(sorted(unknown))}"
            raise ConfigError(msg)

    @cached_property
    def tolerances(self):
        return TOLERANCES | dict(self.params.get("TOLERANCES", {}))

    def tolerance(self, suite):
        try:
            return self.tolerances[suite]
        except KeyError as err:
            msg = f"No tolerance for {suite!r}"
            raise PreconditionError(msg) from err

    def _default_points(self, f):
        if isinstance(f, GridFunction):
            return f.x
        return chebyshev_nodes(WeightClass.INV_SQRT, self.spectral_n)

    def transform(self, f, hat=False, method=None, points=None):
        """
        T(f), or T^(f) with `hat`.

        Args:
            f: SpectralFunction or GridFunction.
            method (str, optional): "spectral", "quadrature" or "step";
                spectral input defaults to its exact rule where one exists.
                The step method applies to T^ as well.
            points (str, optional): Evaluation points for quadrature, in the
                format `parse_points` reads.

        Returns:
            TransformResult

        Raises:
            UnsupportedWeightError: For the spectral method on input that
                has no coefficient rule.
        """
        method = Method(method) if method else None
        spectral = isinstance(f, SpectralFunction)
        if method is Method.SPECTRAL and not spectral:
            msg = "The spectral method needs spectral input"
            raise UnsupportedWeightError(msg)
        if method is Method.STEP:
            return fht_hat_step(f, self.resolution) if hat else fht_step(f, self.resolution)
        xs = parse_points(points) if points else None
        if hat:
            return fht_hat(f, xs, self.panel_depth, self.panel_order, self.spectral_n, method=method)
        if method is Method.SPECTRAL or (method is None and spectral and f.weight is not WeightClass.FLAT):
            return fht_spectral(f)
        if xs is None:
            xs = self._default_points(f)
        return fht_quadrature(f, xs, depth=self.panel_depth, order=self.panel_order)

    def invert(self, g, c=0.0):
        return solve_airfoil(
            g, c, n=self.spectral_n, resolution=self.resolution, depth=self.panel_depth, order=self.panel_order
        )

    def range_check(self, g):
        return range_check(g, self.resolution, n=self.spectral_n, depth=self.panel_depth, order=self.panel_order)

    def norm(self, f, spaces="llogl"):
        p_list, weak_list, alphas = parse_spaces(spaces)
        return norm_report(f, self.resolution, p_list, weak_list, alphas)

    def verify(self, names):
        return verify.run_suites(
            names,
            seed=self.seed,
            tolerances=self.tolerances,
            resolution=self.resolution,
            trim=self.trim,
            workers=self.workers,
            depth=self.panel_depth,
            order=self.panel_order,
        )

    @weak_lru()
    def witness(self, name):
        """
        Raises:
            PreconditionError: For an unknown witness name.
        """
        if name not in self.witnesses:
            msg = f"Unknown witness {name!r}; choose from {', '.join(sorted(self.witnesses))}"
            raise PreconditionError(msg)
        return self.witnesses[name](seed=self.seed, resolution=self.resolution, workers=self.workers)


Backend = HilbertBackend
