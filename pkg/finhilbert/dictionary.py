"""
Named functions on (-1,1) used as test inputs: closed-form members of the
weight classes, indicators, bumps, truncated powers, and the Kober-type
functions separating L^1 from L log L.
"""
import numpy as np

from .chebrep import Sampler, SpectralFunction, WeightClass


def arcsine(c=1.0):
    """c / sqrt(1 - x^2), which spans the kernel of T."""
    return SpectralFunction(WeightClass.INV_SQRT, [c])


def semicircle():
    """sqrt(1 - x^2)."""
    return SpectralFunction(WeightClass.SQRT, [1.0])


def constant(c=1.0):
    return SpectralFunction(WeightClass.FLAT, [c])


def zero():
    return SpectralFunction(WeightClass.FLAT, [0.0])


def chebyshev_u(n):
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    return SpectralFunction(WeightClass.FLAT, coeffs)


def indicator(a, b, height=1.0):
    """height * chi_(a,b), with its exact primitive."""

    def func(t):
        return np.where((t > a) & (t < b), height, 0.0)

    def primitive(t):
        return height * (np.clip(t, a, b) - a)

    return Sampler(
        func,
        tuple(p for p in (a, b) if -1.0 < p < 1.0),
        primitive=primitive,
        label=f"chi({a:g},{b:g})",
    )


def _on_half(func):
    def wrapped(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        inside = (t > 0.0) & (t < 0.5)
        out[inside] = func(t[inside])
        return out

    return wrapped


def kober():
    """
    h(t) = 1/(t log^2 t) on (0, 1/2), zero elsewhere: integrable, with
    primitive -1/log t, but not in L log L.
    """

    def primitive(t):
        t = np.clip(np.asarray(t, dtype=float), 0.0, 0.5)
        out = np.zeros_like(t)
        positive = t > 0
        out[positive] = -1.0 / np.log(t[positive])
        return out

    return Sampler(
        _on_half(lambda t: 1.0 / (t * np.log(t) ** 2)),
        (0.0, 0.5),
        ((0.0, 0.9),),
        primitive,
        "kober",
    )


def kober_cubed():
    """1/(t |log t|^3) on (0, 1/2), an L log L control for `kober`."""

    def primitive(t):
        t = np.clip(np.asarray(t, dtype=float), 0.0, 0.5)
        out = np.zeros_like(t)
        positive = t > 0
        out[positive] = 0.5 / np.log(t[positive]) ** 2
        return out

    return Sampler(
        _on_half(lambda t: -1.0 / (t * np.log(t) ** 3)),
        (0.0, 0.5),
        ((0.0, 0.9),),
        primitive,
        "kober_cubed",
    )


def range_gap():
    """h(t)/sqrt(1 - t^2) with h the Kober function: in L^1 but outside T(L log L)."""
    h = kober()
    return Sampler(
        lambda t: h(t) / WeightClass.SQRT.prefactor(t),
        h.breakpoints,
        h.singular,
        label="range_gap",
    )


def bump(center, width, height=1.0):
    """Smooth bump exp(1 - 1/(1 - s^2)) with s = (x - center)/width."""
    lo, hi = max(-1.0, center - width), min(1.0, center + width)

    def func(t):
        s = (np.asarray(t, dtype=float) - center) / width
        out = np.zeros_like(s)
        inside = np.abs(s) < 1.0
        out[inside] = height * np.exp(1.0 - 1.0 / (1.0 - s[inside] ** 2))
        return out

    return Sampler(
        func,
        tuple(p for p in (lo, hi) if -1.0 < p < 1.0),
        label=f"bump({center:g},{width:g})",
    )


def truncated_power(exponent, end=1.0):
    """|end - x|^(-exponent) with end = +1 or -1, exponent in [0, 1)."""
    end = 1.0 if end > 0 else -1.0

    def func(t):
        return np.abs(end - np.asarray(t, dtype=float)) ** -exponent

    def primitive(t):
        distance = np.abs(end - np.asarray(t, dtype=float))
        values = distance ** (1.0 - exponent) / (1.0 - exponent)
        return -end * values

    return Sampler(
        func,
        singular=((end, exponent),),
        primitive=primitive,
        label=f"power({exponent:g},{end:+g})",
    )


def log_singular(point, scale=1.0):
    """scale * log|x - point|."""
    return Sampler(
        lambda t: scale * np.log(np.abs(np.asarray(t, dtype=float) - point)),
        (point,),
        ((point, 0.0),),
        label=f"log({point:.3f})",
    )


def random_spectral(rng, weight, max_terms=16, min_terms=1):
    n = int(rng.integers(min_terms, max_terms + 1))
    return SpectralFunction(weight, rng.uniform(-1.0, 1.0, n))


def random_polynomial(rng, max_terms=6):
    return random_spectral(rng, WeightClass.FLAT, max_terms)


def norm_fixed(seed=7):
    """The part of the operator-norm dictionary that does not depend on p."""
    rng = np.random.default_rng(seed)
    return [
        *(random_polynomial(rng) for _ in range(3)),
        bump(0.9, 0.08),
        bump(-0.95, 0.04),
        indicator(0.0, 0.5),
    ]


def norm_powers(p):
    """Truncated powers just inside L^p."""
    exponent = 0.9 / p
    return [
        truncated_power(exponent, 1.0),
        truncated_power(exponent, -1.0),
        truncated_power(0.5 * exponent, 1.0),
    ]


def llogl_dictionary(seed=7):
    rng = np.random.default_rng(seed)
    return [
        constant(),
        semicircle(),
        arcsine(),
        indicator(-0.5, 0.25),
        bump(0.5, 0.3),
        truncated_power(0.4, 1.0),
        *(random_polynomial(rng) for _ in range(2)),
    ]
