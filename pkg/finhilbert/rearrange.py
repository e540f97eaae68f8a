"""
Decreasing rearrangements on (0, 2) and the rearrangement-invariant
functionals built from them.

All norms act on a `RearrangementProfile`, a step function, and are exact
on it: the L log L weight through its antiderivative, the L(log L)^alpha
weights through the incomplete gamma function, and the Calderón operator
through per-step logarithms.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .chebrep import GridFunction, Sampler, as_sampler, cell_integrals, sign_changes
from .errors import DataError, DomainError, PreconditionError
from .settings import GROWTH_RATIO, MIN_PROFILE_RESOLUTION, RESOLUTION

logger = logging.getLogger(__name__)

TOTAL_MEASURE = 2.0
TWO_E = 2.0 * math.e


@dataclass(frozen=True)
class RearrangementProfile:
    """f*(t) = levels[i] on (breakpoints[i], breakpoints[i+1]]."""

    breakpoints: tuple
    levels: tuple

    def __post_init__(self):
        t = np.asarray(self.breakpoints, dtype=float)
        levels = np.asarray(self.levels, dtype=float)
        if len(t) != len(levels) + 1 or len(levels) == 0:
            msg = "A profile needs K levels and K+1 breakpoints"
            raise PreconditionError(msg)
        if t[0] != 0.0 or not math.isclose(t[-1], TOTAL_MEASURE, rel_tol=1e-12) or np.any(np.diff(t) <= 0):
            msg = "Profile breakpoints must increase from 0 to 2"
            raise PreconditionError(msg)
        if np.any(levels < 0) or np.any(np.diff(levels) > 0) or not np.all(np.isfinite(levels)):
            msg = "Profile levels must be finite, nonnegative and non-increasing"
            raise DataError(msg)
        object.__setattr__(self, "breakpoints", tuple(t.tolist()))
        object.__setattr__(self, "levels", tuple(levels.tolist()))

    @property
    def t(self):
        return np.array(self.breakpoints)

    @property
    def f(self):
        return np.array(self.levels)

    @property
    def widths(self):
        return np.diff(self.t)

    def scaled(self, factor):
        if factor < 0:
            msg = "Profiles scale by nonnegative factors only"
            raise PreconditionError(msg)
        return RearrangementProfile(self.breakpoints, factor * self.f)

    def to_dict(self):
        return {"breakpoints": list(self.breakpoints), "levels": list(self.levels)}

    @classmethod
    def from_dict(cls, payload):
        try:
            return cls(payload["breakpoints"], payload["levels"])
        except (KeyError, TypeError) as err:
            msg = f"Not a profile: {err}"
            raise DataError(msg) from err


def profile_from_cells(values, widths=None):
    """
    Sorts cell representatives |values| in decreasing order and stacks the
    cell measures from 0; the widths must add up to 2.
    """
    values = np.abs(np.asarray(values, dtype=float))
    if not np.all(np.isfinite(values)):
        msg = "Cannot rearrange non-finite values"
        raise DataError(msg)
    if widths is None:
        widths = np.full(len(values), TOTAL_MEASURE / len(values))
    widths = np.asarray(widths, dtype=float)
    order = np.argsort(-values, kind="stable")
    breakpoints = np.concatenate([[0.0], np.cumsum(widths[order])])
    breakpoints[-1] = TOTAL_MEASURE
    return RearrangementProfile(breakpoints, values[order])


def rearrangement(f, resolution=RESOLUTION):
    """
    Step approximation of the decreasing rearrangement f* on (0, 2).

    (-1,1) is cut into `resolution` equal cells. Each cell is represented by
    the mean of |f| over it; cells touching a declared singularity are
    integrated with dyadic subsampling toward it.

    Args:
        f: SpectralFunction, GridFunction, Sampler or callable.
        resolution (int): Number of cells, at least 8.

    Raises:
        PreconditionError: If resolution < 8, or a grid has fewer nodes
            than cells.
        DataError: If a cell mean is not finite.
    """
    if resolution < MIN_PROFILE_RESOLUTION:
        msg = f"Resolution must be at least {MIN_PROFILE_RESOLUTION}"
        raise PreconditionError(msg)
    if isinstance(f, GridFunction) and len(f.nodes) < resolution:
        msg = f"Grid has {len(f.nodes)} nodes, fewer than {resolution} cells"
        raise PreconditionError(msg)
    sampler = as_sampler(f)
    if sampler.primitive is not None and _nonnegative(sampler):
        absolute = sampler
    else:
        # |f| has a kink wherever f changes sign
        absolute = Sampler(
            lambda xs, g=sampler: np.abs(g(xs)),
            tuple(sorted(set(sampler.breakpoints) | set(sign_changes(sampler)))),
            sampler.singular,
            None,
            f"|{sampler.label}|",
        )
    edges = np.linspace(-1.0, 1.0, resolution + 1)
    means = cell_integrals(absolute, edges) / np.diff(edges)
    return profile_from_cells(means)


def _nonnegative(sampler):
    points = np.linspace(-1.0, 1.0, 1025)[1:-1]
    return bool(np.all(sampler(points) >= 0.0))


def profile_value(profile, t):
    """
    f*(t) for t in (0, 2]; values at t <= 0 take the first level.
    """
    t = np.asarray(t, dtype=float)
    idx = np.searchsorted(profile.t, t, side="left") - 1
    idx = np.clip(idx, 0, len(profile.levels) - 1)
    return profile.f[idx]


def distribution(profile, level):
    """Measure of {|f| > level}."""
    return float(profile.widths[profile.f > level].sum())


def _llogl_primitive(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    positive = t > 0
    out[positive] = t[positive] * np.log(TWO_E / t[positive]) + t[positive]
    return out


def norm_l1(profile):
    return float(profile.f @ profile.widths)


def norm_llogl(profile):
    """
    Sum over steps of levels[i] * (Phi(t_{i+1}) - Phi(t_i)) with
    Phi(t) = t log(2e/t) + t.
    """
    return float(profile.f @ np.diff(_llogl_primitive(profile.t)))


def log_weight_primitive(t, alpha):
    """
    Integral of log^alpha(2e/s) over (0, t), via the regularised upper
    incomplete gamma function.
    """
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    positive = t > 0
    u = np.log(TWO_E / t[positive])
    out[positive] = TWO_E * special.gamma(alpha + 1.0) * special.gammaincc(alpha + 1.0, u)
    return out


def norm_llogl_alpha(profile, alpha):
    """
    L(log L)^alpha functional, exact for step profiles.

    Raises:
        PreconditionError: If alpha < 1.
    """
    if alpha < 1:
        msg = f"alpha must be >= 1, got {alpha}"
        raise PreconditionError(msg)
    return float(profile.f @ np.diff(log_weight_primitive(profile.t, alpha)))


def norm_lp(profile, p):
    if p < 1:
        msg = f"p must be >= 1, got {p}"
        raise PreconditionError(msg)
    return float((profile.f**p @ profile.widths) ** (1.0 / p))


def weak_quasi(profile, p):
    """sup t^(1/p) f*(t), attained at the right end of some step."""
    if p < 1:
        msg = f"p must be >= 1, got {p}"
        raise PreconditionError(msg)
    return float(np.max(profile.t[1:] ** (1.0 / p) * profile.f))


def calderon(profile, t):
    """
    S(f*)(t) = (1/t) * int_0^t f* + int_t^2 f*(s)/s ds, both in closed form.

    Raises:
        DomainError: If t is not in (0, 2].
    """
    if not 0.0 < t <= TOTAL_MEASURE:
        msg = f"Calderón operator evaluated at t={t} outside (0,2]"
        raise DomainError(msg)
    edges, levels = profile.t, profile.f
    lo, hi = edges[:-1], edges[1:]
    # mass up to t
    covered = np.clip(np.minimum(hi, t) - lo, 0.0, None)
    average = float(levels @ covered) / t
    # int_t^2 f*(s)/s ds
    start = np.maximum(lo, t)
    active = hi > start
    tail = float(levels[active] @ np.log(hi[active] / start[active]))
    return average + tail


@dataclass(frozen=True)
class NormValue:
    value: float
    coarse: float
    growing: bool

    def to_dict(self):
        return {"value": self.value, "coarse": self.coarse, "growing": self.growing}


@dataclass(frozen=True)
class NormReport:
    l1: NormValue
    llogl: NormValue
    lloglsq: NormValue
    lp: dict
    weak_quasi: dict
    alphas: dict
    resolution: int

    def to_dict(self):
        return {
            "resolution": self.resolution,
            "l1": self.l1.to_dict(),
            "llogl": self.llogl.to_dict(),
            "lloglsq": self.lloglsq.to_dict(),
            "lp": {repr(p): v.to_dict() for p, v in self.lp.items()},
            "weak_quasi": {repr(p): v.to_dict() for p, v in self.weak_quasi.items()},
            "llogl_alpha": {repr(a): v.to_dict() for a, v in self.alphas.items()},
        }


def growth_flag(values, ratio=GROWTH_RATIO):
    """
    True when a sequence computed at increasing resolutions keeps growing
    without its increments contracting.
    """
    increments = np.diff(np.asarray(values, dtype=float))
    if len(increments) < 2 or increments[-1] <= 0:
        return False
    if increments[-2] <= 0:
        return False
    return bool(increments[-1] >= ratio * increments[-2])


def _norm_value(functional, profiles):
    values = [functional(profile) for profile in profiles]
    growing = growth_flag(values)
    if growing:
        logger.warning("Functional grows with resolution; reporting truncated value %.6g", values[-1])
    return NormValue(values[-1], values[-2], growing)


def norm_report(f, resolution=RESOLUTION, p_list=(), weak_list=(), alphas=()):
    """
    All requested functionals of f at resolutions n/16, n/4 and n, with a
    growth flag per functional.
    """
    resolutions = [max(MIN_PROFILE_RESOLUTION, resolution // k) for k in (16, 4, 1)]
    if isinstance(f, GridFunction):
        resolutions = [r for r in resolutions if r <= len(f.nodes)] or [MIN_PROFILE_RESOLUTION]
    profiles = [rearrangement(f, r) for r in resolutions]
    while len(profiles) < 2:
        profiles.insert(0, profiles[0])
    return NormReport(
        l1=_norm_value(norm_l1, profiles),
        llogl=_norm_value(norm_llogl, profiles),
        lloglsq=_norm_value(lambda pr: norm_llogl_alpha(pr, 2.0), profiles),
        lp={p: _norm_value(lambda pr, p=p: norm_lp(pr, p), profiles) for p in p_list},
        weak_quasi={p: _norm_value(lambda pr, p=p: weak_quasi(pr, p), profiles) for p in weak_list},
        alphas={a: _norm_value(lambda pr, a=a: norm_llogl_alpha(pr, a), profiles) for a in alphas},
        resolution=resolution,
    )
