"""
The finite Hilbert transform

    T(f)(x) = (1/pi) p.v. int_{-1}^{1} f(t) / (t - x) dt,

its partial inverse T^(g) = -(1/w) T(w g) with w(x) = sqrt(1 - x^2), and the
projection P onto the kernel of T.

Three evaluation paths are offered. The spectral path maps Chebyshev
coefficients exactly (T_n/w -> U_{n-1}, w U_m -> -T_{m+1}). The quadrature
path subtracts the singularity and integrates the regular remainder on
dyadically refined Gauss–Legendre panels. The step path transforms the
cell-averaged step approximation exactly, as a discrete convolution.
"""
import enum
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import signal

from .chebrep import (
    GridFunction,
    NodeKind,
    Sampler,
    SpectralFunction,
    WeightClass,
    as_sampler,
    cell_integrals,
    chebyshev_nodes,
    evaluate,
    integrate,
    interior_points,
    quad_rule,
    QuadratureKind,
    sampler_rule,
    series_value,
)
from .errors import DataError, PreconditionError, UnsupportedWeightError
from .rearrange import calderon, profile_from_cells, profile_value, rearrangement
from .settings import PANEL_DEPTH, PANEL_ORDER, RESOLUTION, SPECTRAL_N
from .utils import chunks

logger = logging.getLogger(__name__)


class Method(enum.Enum):
    SPECTRAL = "spectral"
    QUADRATURE = "quadrature"
    STEP = "step"


# weight class of T(f) (or T^(g)) for each input class on the spectral path
SPECTRAL_CLOSURE = {
    WeightClass.INV_SQRT: WeightClass.FLAT,
    WeightClass.SQRT: WeightClass.FLAT,
}
HAT_CLOSURE = {WeightClass.FLAT: WeightClass.INV_SQRT}

# order bumps tried when an evaluation point lands on a quadrature node
COINCIDENT_RETRIES = 2
# non-finite samples closer than this to a special point are dropped
SPECIAL_ATOL = 1e-12


@dataclass(frozen=True)
class TransformResult:
    output: object
    method: Method
    residual_meta: Optional[float] = None

    def __post_init__(self):
        if self.method is Method.SPECTRAL and not isinstance(self.output, SpectralFunction):
            msg = "Spectral results carry a SpectralFunction"
            raise PreconditionError(msg)

    def to_dict(self):
        return {
            "method": self.method.value,
            "output": self.output.to_dict(),
            "residual_meta": self.residual_meta,
        }


def t_series_to_u(coeffs):
    """
    Re-expands sum a_n T_n in the U basis using T_0 = U_0, T_1 = U_1/2 and
    T_n = (U_n - U_{n-2})/2.
    """
    a = np.asarray(coeffs, dtype=float)
    out = np.zeros_like(a)
    out[0] = a[0]
    out[1:] += 0.5 * a[1:]
    out[:-2] -= 0.5 * a[2:]
    return out


def fht_spectral(f):
    """
    Exact coefficient rule for T on the InvSqrt and Sqrt classes.

    InvSqrt T-coefficients (a_0, a_1, ...) map to Flat U-coefficients
    (a_1, a_2, ...); the arcsine component a_0 is annihilated. Sqrt
    U-coefficients (b_0, b_1, ...) map to -sum b_m T_{m+1}, returned in the
    U basis.

    Raises:
        UnsupportedWeightError: For Flat input, which has no closed rule.
    """
    if f.weight is WeightClass.INV_SQRT:
        a = f.array
        coeffs = a[1:] if len(a) > 1 else np.zeros(1)
        return TransformResult(SpectralFunction(WeightClass.FLAT, coeffs), Method.SPECTRAL)
    if f.weight is WeightClass.SQRT:
        t_coeffs = np.concatenate([[0.0], -f.array])
        return TransformResult(
            SpectralFunction(WeightClass.FLAT, t_series_to_u(t_coeffs)), Method.SPECTRAL
        )
    msg = "No spectral rule for the Flat class; use fht_quadrature"
    raise UnsupportedWeightError(msg)


def fht_hat_spectral(g):
    """T^(U_m) = T_{m+1}/w, so Flat (b_0, b_1, ...) maps to InvSqrt (0, b_0, b_1, ...)."""
    if not isinstance(g, SpectralFunction):
        msg = "The spectral T^ rule needs a Flat spectral function"
        raise UnsupportedWeightError(msg)
    if g.weight is not WeightClass.FLAT:
        msg = f"No spectral T^ rule for the {g.weight.label} class"
        raise UnsupportedWeightError(msg)
    return TransformResult(
        SpectralFunction(WeightClass.INV_SQRT, np.concatenate([[0.0], g.array])), Method.SPECTRAL
    )


def _log_term(xs, a, b):
    return np.log(np.abs(b - xs)) - np.log(np.abs(xs - a))


def _coincident(xs, t):
    """Points of xs lying on (or within rounding of) a quadrature node of the sorted t."""
    pos = np.searchsorted(t, xs)
    left = t[np.clip(pos - 1, 0, len(t) - 1)]
    right = t[np.clip(pos, 0, len(t) - 1)]
    nearest = np.minimum(np.abs(left - xs), np.abs(right - xs))
    return nearest <= 4.0 * np.finfo(float).eps * (1.0 + np.abs(xs))


def _quotient_sum(t, w, ft, xs, fx):
    out = np.empty_like(xs)
    for idx in chunks(np.arange(len(xs))):
        diff = t[None, :] - xs[idx, None]
        quotient = (ft[None, :] - fx[idx, None]) / np.where(diff == 0.0, np.inf, diff)
        out[idx] = quotient @ w
    return out


def _polynomial_pv(f, xs, extra=0):
    """
    T of a Flat series. The difference quotient of a polynomial is a
    polynomial, so one Gauss–Legendre rule integrates it exactly.
    """
    rule = quad_rule(QuadratureKind.GAUSS_LEGENDRE, len(f.coeffs) // 2 + 2 + extra)
    t = rule.x
    hits = _coincident(xs, t)
    if np.any(hits):
        out = np.empty_like(xs)
        out[~hits] = _polynomial_pv(f, xs[~hits], extra)
        out[hits] = _polynomial_pv(f, xs[hits], extra + 1)
        return out
    px = series_value(f, xs)
    out = _quotient_sum(t, rule.w, series_value(f, t), xs, px)
    return (out + px * _log_term(xs, -1.0, 1.0)) / np.pi


def _at_special_points(points, sampler):
    special = np.array([*sampler.special_points, *sampler.support])
    distance = np.abs(points[:, None] - special[None, :]).min(axis=1)
    return bool(np.all(distance <= SPECIAL_ATOL))


def _pv_values(sampler, xs, depth, order, retries=COINCIDENT_RETRIES):
    a, b = sampler.support
    t, w = sampler_rule(sampler, a, b, depth, order)
    hits = _coincident(xs, t) if retries else np.zeros(len(xs), dtype=bool)
    if np.any(hits):
        # a node shared with the evaluation point loses its quotient; shift the rule
        values = np.empty_like(xs)
        values[hits] = _pv_values(sampler, xs[hits], depth, order + 1, retries - 1)
        values[~hits] = _pv_values(sampler, xs[~hits], depth, order, 0)
        return values
    ft = sampler(t)
    bad = ~np.isfinite(ft)
    if np.any(bad):
        if not _at_special_points(t[bad], sampler):
            msg = f"{sampler.label} is not finite at a quadrature node"
            raise DataError(msg)
        # nodes rounded onto a singular point carry a negligible weight
        logger.debug("%s: dropping %d nodes at its singular points", sampler.label, np.sum(bad))
        t, w, ft = t[~bad], w[~bad], ft[~bad]
    inside = (xs > a) & (xs < b)
    fx = np.zeros_like(xs)
    if np.any(inside):
        fx[inside] = sampler(xs[inside])
    out = _quotient_sum(t, w, ft, xs, fx)
    log_term = np.zeros_like(xs)
    log_term[inside] = _log_term(xs[inside], a, b)
    values = (out + fx * log_term) / np.pi
    if not np.all(np.isfinite(values)):
        msg = f"Transform of {sampler.label} is not finite"
        raise DataError(msg)
    return values


def transform_values(f, xs, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """
    T(f) at interior points, through the exact rule whenever the
    representation allows one.
    """
    xs = interior_points(xs)
    if isinstance(f, SpectralFunction):
        if f.weight in SPECTRAL_CLOSURE:
            return evaluate(fht_spectral(f).output, xs)
        return _polynomial_pv(f, xs)
    return _pv_values(as_sampler(f), xs, depth, order)


def transform_sampler(f, depth=PANEL_DEPTH, order=PANEL_ORDER):
    source = as_sampler(f)
    return Sampler(
        lambda xs: transform_values(f, xs, depth, order),
        source.breakpoints,
        label=f"T({source.label})",
    )


def fht_quadrature(f, xs, support=None, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """
    T(f) at the points xs by singularity subtraction:

        (1/pi) int (f(t) - f(x))/(t - x) dt + (f(x)/pi) log|(b - x)/(a - x)|

    with (a, b) = (-1, 1) unless `support` restricts f to a sub-interval.

    Args:
        f: Any function representation `as_sampler` accepts.
        xs: Interior evaluation points.
        support (tuple, optional): Multiply f by the indicator of (a, b).
        depth (int): Dyadic refinement levels toward ends and breakpoints.

    Raises:
        DomainError: If a point is not inside (-1,1).
        DataError: If f is not finite at a quadrature node.
    """
    xs = np.sort(interior_points(xs))
    if isinstance(f, SpectralFunction) and f.weight is WeightClass.FLAT and support is None:
        values = _polynomial_pv(f, xs)
    else:
        sampler = as_sampler(f)
        if support is not None:
            sampler = sampler.restricted(*support)
        values = _pv_values(sampler, xs, depth, order)
    return TransformResult(GridFunction(xs, values), Method.QUADRATURE)


def _weighted_exponent(exponent):
    """End exponent of w*g for g behaving like |1 -/+ t|^(-exponent) there."""
    shifted = exponent - 0.5
    return shifted if shifted > -1.0 else 0.0


def sqrt_weighted(g):
    """
    w*g, kept spectral where the class allows it. A sampled w*g declares
    the square-root factor at both ends.
    """
    if isinstance(g, SpectralFunction):
        if g.weight is WeightClass.FLAT:
            return SpectralFunction(WeightClass.SQRT, g.coeffs)
        if g.weight is WeightClass.INV_SQRT:
            return SpectralFunction(WeightClass.FLAT, t_series_to_u(g.array))
    sampler = as_sampler(g)
    singular = tuple((where, exponent) for where, exponent in sampler.singular if abs(where) != 1.0)
    singular += tuple((end, _weighted_exponent(sampler.exponent_at(end) or 0.0)) for end in (-1.0, 1.0))
    return Sampler(
        lambda t, s=sampler: WeightClass.SQRT.prefactor(t) * s(t),
        sampler.breakpoints,
        singular,
        label=f"w*{sampler.label}",
        support=sampler.support,
    )


def hat_values(g, xs, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """T^(g) at interior points."""
    xs = interior_points(xs)
    if isinstance(g, SpectralFunction) and g.weight is WeightClass.FLAT:
        return evaluate(fht_hat_spectral(g).output, xs)
    return -transform_values(sqrt_weighted(g), xs, depth, order) / WeightClass.SQRT.prefactor(xs)


def hat_sampler(g, depth=PANEL_DEPTH, order=PANEL_ORDER):
    source = as_sampler(g)
    return Sampler(
        lambda xs: hat_values(g, xs, depth, order),
        source.breakpoints,
        singular=((-1.0, 0.5), (1.0, 0.5)),
        label=f"That({source.label})",
    )


def fht_hat(g, xs=None, depth=PANEL_DEPTH, order=PANEL_ORDER, n=SPECTRAL_N, method=None):
    """
    T^(g) = -(1/w) T(w g).

    Flat spectral input takes the exact rule unless `method` asks for
    quadrature; anything else is evaluated by quadrature at `xs`,
    defaulting to the grid's own nodes or to the n first-kind
    Chebyshev–Gauss nodes. The step rule is `fht_hat_step`.

    Raises:
        UnsupportedWeightError: For the spectral method on anything but a
            Flat series.
    """
    method = Method(method) if method else None
    if method is Method.STEP:
        msg = "The step rule for T^ is fht_hat_step"
        raise PreconditionError(msg)
    exact = isinstance(g, SpectralFunction) and g.weight is WeightClass.FLAT
    if method is Method.SPECTRAL or (exact and method is None):
        return fht_hat_spectral(g)
    kind = NodeKind.CUSTOM
    if xs is None:
        if isinstance(g, GridFunction):
            xs = g.x
        else:
            xs, kind = chebyshev_nodes(WeightClass.INV_SQRT, n), NodeKind.CHEBYSHEV_GAUSS
    xs = np.sort(interior_points(xs))
    values = hat_values(as_sampler(g) if exact else g, xs, depth, order)
    return TransformResult(GridFunction(xs, values, kind), Method.QUADRATURE)


def hat_plus_t(g, xs, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """(T + T^)(g) at interior points."""
    return transform_values(g, xs, depth, order) + hat_values(g, xs, depth, order)


def mean_value(f):
    """(1/pi) times the integral of f over (-1,1)."""
    if isinstance(f, SpectralFunction):
        c = f.array
        if f.weight is WeightClass.INV_SQRT:
            return float(c[0])
        if f.weight is WeightClass.SQRT:
            return float(c[0]) / 2.0
        n = np.arange(len(c))
        even = n % 2 == 0
        return float(c[even] @ (2.0 / (n[even] + 1.0))) / np.pi
    return integrate(f) / np.pi


def project_P(f):
    """
    P(f) = ((1/pi) int f) / sqrt(1 - x^2), the projection onto the kernel of T.
    """
    return SpectralFunction(WeightClass.INV_SQRT, [mean_value(f)])


@lru_cache(maxsize=16)
def _step_kernel(n):
    """
    Transform of a unit-height cell evaluated at the midpoints of cells
    d = -(n-1) .. n-1 positions away, stored in convolution order.
    """
    d = np.arange(-(n - 1), n, dtype=float)
    kernel = -np.log(np.abs((d + 0.5) / (d - 0.5))) / np.pi
    kernel.setflags(write=False)
    return kernel


def step_transform(heights):
    """
    T of piecewise-constant functions on a uniform partition of (-1,1),
    evaluated at the cell midpoints.

    Args:
        heights (ndarray): Cell heights, one row per function.

    Returns:
        ndarray: Same shape as `heights`.
    """
    heights = np.asarray(heights, dtype=float)
    n = heights.shape[-1]
    kernel = _step_kernel(n)
    if heights.ndim == 1:
        full = signal.fftconvolve(heights, kernel, mode="full")
    else:
        full = signal.fftconvolve(heights, kernel[None, :], mode="full", axes=-1)
    return full[..., n - 1 : 2 * n - 1]


def cell_grid(resolution):
    edges = np.linspace(-1.0, 1.0, resolution + 1)
    return edges, 0.5 * (edges[:-1] + edges[1:])


def fht_step(f, resolution=RESOLUTION, support=None):
    """
    Transform of the cell-averaged step approximation of f, exact for step
    functions on the uniform partition, at the cell midpoints.
    """
    sampler = as_sampler(f)
    if support is not None:
        sampler = sampler.restricted(*support)
    edges, mid = cell_grid(resolution)
    heights = cell_integrals(sampler, edges) / np.diff(edges)
    return TransformResult(GridFunction(mid, step_transform(heights)), Method.STEP)


def hat_step_values(g, resolution=RESOLUTION):
    """T^(g) at the cell midpoints, through the step transform of w*g."""
    edges, mid = cell_grid(resolution)
    heights = cell_integrals(sqrt_weighted(g), edges) / np.diff(edges)
    return mid, -step_transform(heights) / WeightClass.SQRT.prefactor(mid)


def fht_hat_step(g, resolution=RESOLUTION):
    """
    T^(g) = -(1/w) T(w g) with T(w g) taken by the step rule, at the cell
    midpoints.
    """
    mid, values = hat_step_values(g, resolution)
    if not np.all(np.isfinite(values)):
        msg = "T^(g) is not finite on the step grid"
        raise DataError(msg)
    return TransformResult(GridFunction(mid, values), Method.STEP)


@dataclass(frozen=True)
class CalderonReport:
    ts: tuple
    ratios: tuple
    sup: float
    sup_coarse: float
    stable: bool
    violations: tuple

    def to_dict(self):
        return {
            "ts": list(self.ts),
            "ratios": list(self.ratios),
            "sup": self.sup,
            "sup_coarse": self.sup_coarse,
            "stable": self.stable,
            "violations": list(self.violations),
        }


def _domination_ratios(f, ts, resolution, depth, order):
    f_star = rearrangement(f, resolution)
    _, mid = cell_grid(resolution)
    tf_star = profile_from_cells(transform_values(f, mid, depth, order))
    ratios, violations = [], []
    for t in ts:
        lhs = float(profile_value(tf_star, t))
        rhs = calderon(f_star, t)
        if rhs > 0.0:
            ratios.append(lhs / rhs)
        elif lhs > 0.0:
            ratios.append(np.inf)
            violations.append(t)
        else:
            ratios.append(0.0)
    return ratios, violations


def calderon_domination(f, ts, resolution=RESOLUTION, depth=PANEL_DEPTH, stability=0.1, order=PANEL_ORDER):
    """
    Ratios (Tf)*(t) / S(f*)(t) at the points ts, with their supremum at
    `resolution` and at half of it.

    The constant dominating (Tf)* by S(f*) is not known explicitly, so the
    report exposes the empirical supremum and whether it is stable across
    the two resolutions.
    """
    ts = tuple(float(t) for t in ts)
    ratios, violations = _domination_ratios(f, ts, resolution, depth, order)
    coarse, coarse_violations = _domination_ratios(f, ts, resolution // 2, depth, order)
    sup, sup_coarse = max(ratios, default=0.0), max(coarse, default=0.0)
    if violations or coarse_violations:
        logger.warning("S(f*) vanishes where (Tf)* does not for %d points", len(violations))
    stable = not violations and abs(sup - sup_coarse) <= stability * max(sup, sup_coarse)
    return CalderonReport(ts, tuple(ratios), sup, sup_coarse, bool(stable), tuple(violations))
