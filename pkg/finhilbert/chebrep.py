"""
Function representations on (-1,1).

A function is carried either as a weighted Chebyshev series
(`SpectralFunction`), on which the transforms act by exact coefficient
rules, or as samples on a grid (`GridFunction`), which feeds the quadrature
path. `Sampler` is the common vectorised view both are coerced to when a
quadrature needs point values.
"""
import enum
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import chebyshev
from scipy import fft, optimize, special

from .errors import DataError, DomainError, PreconditionError
from .settings import (
    ENDPOINT_EXPONENT,
    NEAR_CELLS,
    PANEL_DEPTH,
    PANEL_ORDER,
    SIGN_GRID,
    SUBSAMPLE_LEVELS,
    WEIGHT_TAGS,
)
from .utils import format_csv_rows, load_json, parse_csv_grid, read_text

logger = logging.getLogger(__name__)


class WeightClass(enum.Enum):
    INV_SQRT = "inv_sqrt"
    FLAT = "flat_u"
    SQRT = "sqrt_u"

    @property
    def basis(self):
        """Chebyshev family the coefficients refer to: "T" or "U"."""
        return "T" if self is WeightClass.INV_SQRT else "U"

    @property
    def label(self):
        return WEIGHT_TAGS[self.value]

    def prefactor(self, xs):
        xs = np.asarray(xs, dtype=float)
        if self is WeightClass.FLAT:
            return np.ones_like(xs)
        w = np.sqrt((1.0 - xs) * (1.0 + xs))
        if self is WeightClass.SQRT:
            return w
        return 1.0 / w


class NodeKind(enum.Enum):
    CHEBYSHEV_GAUSS = "chebyshev_gauss"
    UNIFORM = "uniform"
    CUSTOM = "custom"


class QuadratureKind(enum.Enum):
    GAUSS_LEGENDRE = "gauss_legendre"
    GAUSS_CHEBYSHEV_T = "gauss_chebyshev_t"
    GAUSS_CHEBYSHEV_U = "gauss_chebyshev_u"
    COMPOSITE = "composite"


def interior_points(xs):
    """
    Returns `xs` as a float array, checking every point lies in (-1,1).

    Raises:
        DomainError: If any point is outside the open interval or not finite.
    """
    xs = np.asarray(xs, dtype=float)
    if not np.all(np.isfinite(xs)) or np.any(np.abs(xs) >= 1.0):
        msg = "Evaluation points must lie strictly inside (-1,1)"
        raise DomainError(msg)
    return xs


@dataclass(frozen=True)
class SpectralFunction:
    """
    prefactor(weight, x) * sum(coeffs[n] * B_n(x)), with B the Chebyshev T
    polynomials for the InvSqrt class and the U polynomials otherwise.
    """

    weight: WeightClass
    coeffs: tuple

    # numpy scalars defer to __rmul__ instead of broadcasting over the object
    __array_ufunc__ = None

    def __post_init__(self):
        coeffs = tuple(float(c) for c in np.atleast_1d(np.asarray(self.coeffs, dtype=float)))
        if not coeffs:
            msg = "A spectral function needs at least one coefficient"
            raise PreconditionError(msg)
        if not all(np.isfinite(coeffs)):
            msg = "Spectral coefficients must be finite"
            raise DataError(msg)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "weight", WeightClass(self.weight))

    @property
    def array(self):
        return np.array(self.coeffs)

    def padded(self, n):
        """Coefficients zero-padded (never truncated) to length n."""
        out = np.zeros(max(n, len(self.coeffs)))
        out[: len(self.coeffs)] = self.coeffs
        return out

    def _combine(self, other, scale):
        if not isinstance(other, SpectralFunction):
            return NotImplemented
        if other.weight is not self.weight:
            msg = f"Cannot combine {self.weight.label} and {other.weight.label} series"
            raise PreconditionError(msg)
        n = max(len(self.coeffs), len(other.coeffs))
        return SpectralFunction(self.weight, self.padded(n) + scale * other.padded(n))

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, scalar):
        return SpectralFunction(self.weight, float(scalar) * self.array)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def is_zero(self, atol=0.0):
        return bool(np.all(np.abs(self.array) <= atol))

    def trimmed(self, atol=0.0):
        """Drops trailing coefficients with magnitude <= atol."""
        coeffs = self.array
        nonzero = np.nonzero(np.abs(coeffs) > atol)[0]
        last = nonzero[-1] + 1 if len(nonzero) else 1
        return SpectralFunction(self.weight, coeffs[:last])

    def to_dict(self):
        return {"weight": self.weight.value, "coeffs": list(self.coeffs)}

    @classmethod
    def from_dict(cls, payload):
        try:
            return cls(WeightClass(payload["weight"]), payload["coeffs"])
        except (KeyError, ValueError, TypeError) as err:
            if isinstance(err, DataError):
                raise
            msg = f"Not a spectral function: {err}"
            raise DataError(msg) from err

    def __call__(self, xs):
        return evaluate(self, xs)


@dataclass(frozen=True)
class GridFunction:
    nodes: tuple
    values: tuple
    node_kind: NodeKind = NodeKind.CUSTOM
    singular: tuple = ()

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float).ravel()
        values = np.asarray(self.values, dtype=float).ravel()
        if len(nodes) == 0 or len(nodes) != len(values):
            msg = "Grid nodes and values must be non-empty and of equal length"
            raise PreconditionError(msg)
        if np.any(np.abs(nodes) >= 1.0) or np.any(np.diff(nodes) <= 0):
            msg = "Grid nodes must be strictly increasing inside (-1,1)"
            raise PreconditionError(msg)
        finite = np.isfinite(values)
        allowed = np.zeros(len(values), dtype=bool)
        allowed[list(self.singular)] = True
        if np.any(~finite & ~allowed) or np.any(np.isnan(values)):
            msg = "Grid values must be finite outside the declared singular nodes"
            raise DataError(msg)
        object.__setattr__(self, "nodes", tuple(nodes.tolist()))
        object.__setattr__(self, "values", tuple(values.tolist()))
        object.__setattr__(self, "node_kind", NodeKind(self.node_kind))
        object.__setattr__(self, "singular", tuple(int(i) for i in self.singular))

    @property
    def x(self):
        return np.array(self.nodes)

    @property
    def y(self):
        return np.array(self.values)

    def to_dict(self):
        return {"nodes": list(self.nodes), "values": list(self.values)}

    @classmethod
    def from_dict(cls, payload):
        try:
            kind = NodeKind(payload.get("node_kind", NodeKind.CUSTOM.value))
            return cls(payload["nodes"], payload["values"], kind)
        except (KeyError, TypeError, AttributeError) as err:
            msg = f"Not a grid function: {err}"
            raise DataError(msg) from err

    def interpolant(self, xs):
        """Linear interpolation of the finite samples, constant beyond the end nodes."""
        mask = np.isfinite(self.y)
        return np.interp(np.asarray(xs, dtype=float), self.x[mask], self.y[mask])


@dataclass(frozen=True)
class QuadratureRule:
    nodes: tuple
    weights: tuple
    kind: QuadratureKind

    @property
    def x(self):
        return np.array(self.nodes)

    @property
    def w(self):
        return np.array(self.weights)

    def integrate(self, func):
        return float(self.w @ np.asarray(func(self.x), dtype=float))


@dataclass(frozen=True)
class Sampler:
    """
    Vectorised point values of a function on (-1,1).

    Args:
        func: Callable mapping an array of points to an array of values.
        breakpoints: Points where the function may jump; quadrature panels
            start and end there.
        singular: Pairs (point, exponent) for behaviour like
            |t - point|^(-exponent), -1 < exponent < 1. Exponent 0 marks a
            logarithmic singularity, a negative one a vanishing power such
            as the square root at an end.
        primitive: Optional exact antiderivative, used for cell integrals.
    """

    func: Callable
    breakpoints: tuple = ()
    singular: tuple = ()
    primitive: Optional[Callable] = None
    label: str = "f"
    support: tuple = (-1.0, 1.0)

    def __call__(self, xs):
        xs = np.asarray(xs, dtype=float)
        return np.broadcast_to(np.asarray(self.func(xs), dtype=float), xs.shape).copy()

    def exponent_at(self, point):
        for where, exponent in self.singular:
            if abs(where - point) < 1e-15:
                return exponent
        return None

    @property
    def special_points(self):
        points = set(self.breakpoints) | {where for where, _ in self.singular}
        return tuple(sorted(p for p in points if -1.0 < p < 1.0))

    def scaled(self, factor):
        primitive = None
        if self.primitive is not None:
            primitive = lambda xs, p=self.primitive: factor * p(xs)  # noqa: E731
        return Sampler(
            lambda xs, f=self.func: factor * f(xs),
            self.breakpoints,
            self.singular,
            primitive,
            f"{factor:g}*{self.label}",
            self.support,
        )

    def restricted(self, a, b):
        """The function multiplied by the indicator of (a, b)."""
        primitive = None
        if self.primitive is not None:
            p = self.primitive

            def primitive(xs):
                return p(np.clip(xs, a, b)) - p(np.full_like(np.asarray(xs, dtype=float), a))

        def func(xs, f=self.func):
            xs = np.asarray(xs, dtype=float)
            inside = (xs > a) & (xs < b)
            out = np.zeros_like(xs)
            if np.any(inside):
                out[inside] = f(xs[inside])
            return out

        return Sampler(
            func,
            tuple(sorted(set(self.breakpoints) | {a, b})),
            self.singular,
            primitive,
            f"{self.label}*chi({a:g},{b:g})",
            (max(a, self.support[0]), min(b, self.support[1])),
        )


def as_sampler(f, label=None):
    """
    Coerces a SpectralFunction, GridFunction, Sampler or plain callable
    into a Sampler.
    """
    if isinstance(f, Sampler):
        return f
    if isinstance(f, SpectralFunction):
        singular = ()
        if f.weight is WeightClass.INV_SQRT:
            singular = ((-1.0, 0.5), (1.0, 0.5))
        elif f.weight is WeightClass.SQRT:
            singular = ((-1.0, -0.5), (1.0, -0.5))
        return Sampler(lambda xs, g=f: evaluate(g, xs), singular=singular, label=label or "spectral")
    if isinstance(f, GridFunction):
        return Sampler(f.interpolant, label=label or "grid")
    if callable(f):
        return Sampler(f, label=label or getattr(f, "__name__", "f"))
    msg = f"Cannot sample an object of type {type(f).__name__}"
    raise PreconditionError(msg)


def _clenshaw_u(xs, coeffs):
    """Backward recurrence for sum(coeffs[n] * U_n(x))."""
    b1 = np.zeros_like(xs)
    b2 = np.zeros_like(xs)
    for a in coeffs[::-1]:
        b1, b2 = a + 2.0 * xs * b1 - b2, b1
    return b1


def series_value(f, xs):
    """The Chebyshev sum without the weight prefactor."""
    xs = np.asarray(xs, dtype=float)
    if f.weight.basis == "T":
        return chebyshev.chebval(xs, f.array)
    return _clenshaw_u(xs, f.array)


def evaluate(f, xs):
    """
    Evaluates a spectral function at points strictly inside (-1,1).

    Raises:
        DomainError: If a point lies on or outside the boundary.
    """
    xs = interior_points(xs)
    return f.weight.prefactor(xs) * series_value(f, xs)


def _chebyshev_angles(weight, n):
    """Angles of the Gauss nodes for the weight's basis, in ascending-node order."""
    if weight.basis == "T":
        k = np.arange(n)
        theta = (2 * k + 1) * np.pi / (2 * n)
    else:
        k = np.arange(1, n + 1)
        theta = k * np.pi / (n + 1)
    return theta[::-1]


def chebyshev_nodes(weight, n):
    """
    First-kind Gauss nodes for the InvSqrt class, second-kind otherwise,
    in increasing order.
    """
    if n < 1:
        msg = "Need at least one node"
        raise PreconditionError(msg)
    return np.cos(_chebyshev_angles(weight, n))


def sample_chebyshev(f, weight, n):
    """
    Samples any function at the Chebyshev–Gauss nodes matching `weight`.
    """
    nodes = chebyshev_nodes(weight, n)
    values = as_sampler(f)(nodes)
    return GridFunction(nodes, values, NodeKind.CHEBYSHEV_GAUSS)


def fit(samples, weight, n=None):
    """
    Coefficients of the degree n-1 interpolant of value/prefactor.

    Uses discrete orthogonality at the Gauss nodes, which for the T basis is
    a type-II cosine transform and for the U basis a type-I sine transform.

    Args:
        samples (GridFunction): Values at the Chebyshev–Gauss nodes of
            `weight`'s basis.
        weight (WeightClass): Target class.
        n (int, optional): Number of nodes; defaults to the sample count.

    Raises:
        PreconditionError: If the nodes are not the expected Gauss nodes.
        DataError: If a sample is not finite.
    """
    weight = WeightClass(weight)
    n = len(samples.nodes) if n is None else n
    if len(samples.nodes) != n:
        msg = f"Expected {n} samples, got {len(samples.nodes)}"
        raise PreconditionError(msg)
    theta = _chebyshev_angles(weight, n)
    if not np.allclose(samples.x, np.cos(theta), rtol=0.0, atol=1e-12):
        msg = f"Samples are not at the {weight.basis}-basis Chebyshev–Gauss nodes"
        raise PreconditionError(msg)
    values = samples.y
    if not np.all(np.isfinite(values)):
        msg = "Cannot fit non-finite samples"
        raise DataError(msg)
    # reorder from ascending nodes to ascending angle
    h = (values / weight.prefactor(samples.x))[::-1]
    if weight.basis == "T":
        coeffs = fft.dct(h, type=2) / n
        coeffs[0] /= 2.0
    else:
        coeffs = fft.dst(np.sin(theta[::-1]) * h, type=1) / (n + 1)
    return SpectralFunction(weight, coeffs)


def to_grid(f, nodes, node_kind=NodeKind.CUSTOM):
    nodes = np.asarray(nodes, dtype=float)
    return GridFunction(nodes, evaluate(f, nodes), node_kind)


@lru_cache(maxsize=None)
def _quad_rule(kind, n):
    if kind is QuadratureKind.GAUSS_LEGENDRE:
        x, w = special.roots_legendre(n)
    elif kind is QuadratureKind.GAUSS_CHEBYSHEV_T:
        x, w = special.roots_chebyt(n)
    elif kind is QuadratureKind.GAUSS_CHEBYSHEV_U:
        x, w = special.roots_chebyu(n)
    else:
        msg = f"No classical rule of kind {kind.value}"
        raise PreconditionError(msg)
    order = np.argsort(x)
    return QuadratureRule(tuple(x[order]), tuple(w[order]), kind)


def quad_rule(kind, n):
    """
    Gauss nodes and weights for the named measure on (-1,1).

    Raises:
        PreconditionError: If n < 1.
    """
    if n < 1:
        msg = "A quadrature rule needs at least one node"
        raise PreconditionError(msg)
    return _quad_rule(QuadratureKind(kind), int(n))


@lru_cache(maxsize=None)
def _jacobi_end_rule(order, exponent, side):
    """
    Gauss–Jacobi rule on [-1,1] for the weight |1 -/+ s|^(-exponent) at one
    end. The weight is divided back out by the caller, at the distances the
    mapped nodes actually have from the end.
    """
    if exponent == 0.0:
        return special.roots_legendre(order)
    if side == "left":
        return special.roots_jacobi(order, 0.0, -exponent)
    return special.roots_jacobi(order, -exponent, 0.0)


def _map(s, w, a, b):
    half = 0.5 * (b - a)
    return a + half * (s + 1.0), half * w


def _refined_toward(a, c, depth, exponent, order, toward_left):
    """
    Dyadic panels on [a, c] shrinking toward a (or toward c when
    toward_left is False); the terminal panel gets the Gauss–Jacobi rule.
    """
    gl_s, gl_w = special.roots_legendre(order)
    length = c - a
    xs, ws = [], []
    for k in range(depth):
        lo, hi = length * 2.0 ** -(k + 1), length * 2.0**-k
        if toward_left:
            x, w = _map(gl_s, gl_w, a + lo, a + hi)
        else:
            x, w = _map(gl_s, gl_w, c - hi, c - lo)
        xs.append(x)
        ws.append(w)
    h = length * 2.0**-depth
    if toward_left:
        s, w = _jacobi_end_rule(order, float(exponent), "left")
        x, w = _map(s, w, a, a + h)
        distance = x - a
    else:
        s, w = _jacobi_end_rule(order, float(exponent), "right")
        x, w = _map(s, w, c - h, c)
        distance = c - x
    # exact for x within a factor 2 of the end, so pure powers stay consistent
    w = w * (distance / (0.5 * h)) ** exponent
    xs.append(x)
    ws.append(w)
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    order_idx = np.argsort(x)
    return x[order_idx], w[order_idx]


@lru_cache(maxsize=1024)
def panel_rule(a, b, depth=PANEL_DEPTH, left=None, right=None, order=PANEL_ORDER):
    """
    Composite Gauss–Legendre rule on [a, b], refined dyadically toward each
    end whose exponent is given (None means no refinement on that side).

    Args:
        a, b (float): Interval, a < b.
        depth (int): Number of dyadic levels toward each refined end.
        left, right (float or None): Algebraic singularity exponent at the
            end, in (-1, 1); 0 refines without a singular terminal rule
            and a negative exponent is a vanishing power.
        order (int): Gauss points per panel.

    Returns:
        QuadratureRule: Kind COMPOSITE.
    """
    if not b > a:
        msg = f"Empty interval [{a}, {b}]"
        raise PreconditionError(msg)
    for exponent in (left, right):
        if exponent is not None and not -1.0 < exponent < 1.0:
            msg = f"Endpoint exponent {exponent} outside (-1, 1)"
            raise PreconditionError(msg)
    if left is not None and right is not None:
        m = 0.5 * (a + b)
        x1, w1 = _refined_toward(a, m, depth, left, order, True)
        x2, w2 = _refined_toward(m, b, depth, right, order, False)
        x, w = np.concatenate([x1, x2]), np.concatenate([w1, w2])
    elif left is not None:
        x, w = _refined_toward(a, b, depth, left, order, True)
    elif right is not None:
        x, w = _refined_toward(a, b, depth, right, order, False)
    else:
        s, w = special.roots_legendre(order)
        x, w = _map(s, w, a, b)
    return QuadratureRule(tuple(x), tuple(w), QuadratureKind.COMPOSITE)


def _end_exponent(sampler, point, refine):
    exponent = sampler.exponent_at(point)
    if exponent is not None:
        return exponent
    if abs(abs(point) - 1.0) < 1e-15:
        return ENDPOINT_EXPONENT if refine else None
    if point in sampler.breakpoints:
        return 0.0
    return 0.0 if refine else None


def sampler_rule(sampler, a=-1.0, b=1.0, depth=PANEL_DEPTH, order=PANEL_ORDER, refine_ends=True):
    """
    Composite rule on [a, b] with panel boundaries at the sampler's special
    points, refined toward each of them.

    Returns:
        tuple: (nodes, weights) arrays.
    """
    inner = [p for p in sampler.special_points if a < p < b]
    edges = [a, *inner, b]
    xs, ws = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        left = _end_exponent(sampler, lo, refine_ends or lo != a)
        right = _end_exponent(sampler, hi, refine_ends or hi != b)
        rule = panel_rule(float(lo), float(hi), depth, left, right, order)
        xs.append(rule.x)
        ws.append(rule.w)
    x, w = np.concatenate(xs), np.concatenate(ws)
    logger.debug("%s: %d quadrature nodes on [%g, %g]", sampler.label, len(x), a, b)
    return x, w


def integrate(f, a=-1.0, b=1.0, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """
    Integral of f over [a, b]; exact through the primitive when one is known.
    """
    sampler = as_sampler(f)
    if sampler.primitive is not None:
        values = sampler.primitive(np.array([a, b], dtype=float))
        return float(values[1] - values[0])
    x, w = sampler_rule(sampler, a, b, depth, order)
    return float(w @ sampler(x))


def _gauss_cells(sampler, lo, hi, order):
    s, w = special.roots_legendre(order)
    half = 0.5 * (hi - lo)
    points = lo[:, None] + half[:, None] * (s[None, :] + 1.0)
    return (sampler(points) * w[None, :]).sum(axis=1) * half


def cell_integrals(f, edges, order=3, levels=SUBSAMPLE_LEVELS):
    """
    Integrals of f over each cell of a partition.

    Regular cells use an `order`-point Gauss–Legendre rule and cells within
    a few widths of a declared singular point the full panel order. Cells
    holding a breakpoint are split there; cells touching a singular point
    are integrated with `levels` dyadic sub-levels toward it.

    Args:
        f: Anything `as_sampler` accepts.
        edges (array): Increasing cell edges.

    Returns:
        ndarray: One integral per cell.
    """
    sampler = as_sampler(f)
    edges = np.asarray(edges, dtype=float)
    if sampler.primitive is not None:
        return np.diff(sampler.primitive(edges))
    lo, hi = edges[:-1], edges[1:]
    out = _gauss_cells(sampler, lo, hi, order)
    if sampler.singular:
        points = np.array([where for where, _ in sampler.singular])
        gap = np.maximum(lo[:, None] - points[None, :], points[None, :] - hi[:, None]).min(axis=1)
        near = np.flatnonzero(gap <= NEAR_CELLS * (hi - lo))
        out[near] = _gauss_cells(sampler, lo[near], hi[near], PANEL_ORDER)
    cuts = np.array([p for p in sampler.breakpoints if edges[0] < p < edges[-1]])
    for i in np.unique(np.searchsorted(edges, cuts, side="right") - 1):
        inside = cuts[(cuts > lo[i]) & (cuts < hi[i])]
        if len(inside):
            pieces = np.concatenate([[lo[i]], inside, [hi[i]]])
            out[i] = _gauss_cells(sampler, pieces[:-1], pieces[1:], PANEL_ORDER).sum()
    for where, exponent in sampler.singular:
        touched = np.nonzero((lo <= where) & (hi >= where))[0]
        for i in touched:
            out[i] = _singular_cell(sampler, lo[i], hi[i], where, exponent, levels)
    return out


def _singular_cell(sampler, lo, hi, where, exponent, levels):
    total = 0.0
    if lo < where:
        rule = panel_rule(float(lo), float(where), levels, None, exponent)
        total += rule.w @ sampler(rule.x)
    if where < hi:
        rule = panel_rule(float(where), float(hi), levels, exponent, None)
        total += rule.w @ sampler(rule.x)
    if not np.isfinite(total):
        msg = f"Cell ({lo}, {hi}) of {sampler.label} has a non-finite integral"
        raise DataError(msg)
    return float(total)


def sign_changes(f, a=-1.0, b=1.0, n=SIGN_GRID):
    """
    Points of (a, b) where f changes sign or vanishes on the scan grid:
    the grid of n cells is scanned and each bracketed root refined by
    Brent's method.
    """
    sampler = as_sampler(f)
    grid = np.linspace(a, b, n + 1)[1:-1]
    values = sampler(grid)
    finite = np.isfinite(values)
    grid, values = grid[finite], values[finite]
    zero = values == 0.0
    padded = np.concatenate([[False], zero, [False]])
    # zeros inside a run of zeros are not sign changes
    roots = set(grid[zero & ~padded[:-2] & ~padded[2:]].tolist())
    signs = np.sign(values)
    flips = np.flatnonzero(signs[:-1] * signs[1:] < 0)

    def scalar(x):
        return float(sampler(np.array([x]))[0])

    for i in flips:
        roots.add(float(optimize.brentq(scalar, grid[i], grid[i + 1], xtol=1e-15)))
    return tuple(sorted(roots))


def read_function(path):
    """
    Loads a SpectralFunction or GridFunction from JSON, or a GridFunction
    from a two-column CSV file.

    Raises:
        DataError: If the file cannot be parsed.
    """
    text = read_text(path)
    if Path(path).suffix.lower() == ".csv":
        nodes, values = parse_csv_grid(text)
        return GridFunction(nodes, values)
    return function_from_dict(load_json(text))


def function_from_dict(payload):
    if not isinstance(payload, dict):
        msg = "Expected a JSON object"
        raise DataError(msg)
    if "weight" in payload:
        return SpectralFunction.from_dict(payload)
    if "nodes" in payload:
        try:
            return GridFunction.from_dict(payload)
        except (PreconditionError, ValueError) as err:
            if isinstance(err, DataError):
                raise
            msg = f"Invalid grid function: {err}"
            raise DataError(msg) from err
    msg = "JSON is neither a spectral nor a grid function"
    raise DataError(msg)


def write_grid_csv(grid):
    """node,value rows with a header, for `--format csv` output."""
    return format_csv_rows(["node", "value"], zip(grid.nodes, grid.values))
