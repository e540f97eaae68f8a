"""
Verification suites: identities, closed forms and inequalities for the
finite Hilbert transform, run end to end and reported case by case.

Every suite is deterministic for a fixed seed and resolution; cases may be
evaluated on a thread pool and are sorted by descriptor in the report.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
from scipy import special

from . import dictionary
from .chebrep import (
    QuadratureKind,
    Sampler,
    SpectralFunction,
    WeightClass,
    as_sampler,
    evaluate,
    integrate,
    panel_rule,
    quad_rule,
    sampler_rule,
    sign_changes,
)
from .errors import FinHilbertError, PreconditionError
from .inversion import (
    ARCSINE,
    OUT_OF_RANGE,
    l1_distance,
    optimal_domain_diag,
    pairing_integral,
    range_check,
    solve_airfoil,
)
from .rearrange import norm_llogl, profile_value, rearrangement
from .results import BoundSweep, Case, SweepPoint, VerificationReport
from .settings import (
    APPENDIX_TAIL,
    DIAG_DEPTH,
    PANEL_DEPTH,
    PANEL_ORDER,
    RESOLUTION,
    SEED,
    TOLERANCES,
    TRIM,
)
from .transform import (
    calderon_domination,
    fht_hat_spectral,
    fht_spectral,
    fht_step,
    hat_plus_t,
    hat_step_values,
    mean_value,
    project_P,
    transform_sampler,
    transform_values,
)

logger = logging.getLogger(__name__)

P_GRID = (1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9)
HAT_P_GRID = (1.1, 1.2, 1.3, 1.4, 1.45)
EXACT_P_GRID = (Fraction(11, 10), Fraction(6, 5), Fraction(13, 10), Fraction(7, 5))
BETA_GAMMA_VALUES = (0.55, 0.65, 0.75, 0.85, 0.95)
BETA_GAMMA_GRID = tuple((b, g) for b in BETA_GAMMA_VALUES for g in BETA_GAMMA_VALUES)
X_GRID = (0.0, 0.5, -0.5, 0.9, -0.9)
CALDERON_TS = (1 / 64, 1 / 16, 1 / 4, 1 / 2, 1.0, 1.5, 2.0)
KOBER_RESOLUTIONS = (2**12, 2**14, 2**16)
# coarser rule for the norm sweep, whose estimates sit well inside their bounds
SWEEP_DEPTH = 24
SWEEP_ORDER = 12
# extra Gauss points per panel for the stability comparison of log weights
STABILITY_STEP = 8


def _tolerance(name, tol):
    return TOLERANCES[name] if tol is None else tol


def evaluate_cases(jobs, workers=1):
    """
    Runs (descriptor, job) pairs, each job returning (lhs, rhs, residual,
    tolerance). A job raising a library error becomes a failed case.
    """

    def run(item):
        descriptor, job = item
        try:
            return Case(descriptor, *job())
        except FinHilbertError as err:
            logger.warning("Case %s failed: %s", descriptor, err)
            return Case(descriptor, math.nan, math.nan, math.inf, 0.0)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, jobs))
    return [run(item) for item in jobs]


def _trimmed_rule(trim, n=64):
    rule = quad_rule(QuadratureKind.GAUSS_LEGENDRE, n)
    return trim * rule.x, trim * rule.w


def _describe(f):
    if isinstance(f, SpectralFunction):
        return f"{f.weight.label}[{len(f.coeffs)}]"
    return as_sampler(f).label


# identities


def suite_kernel(seed=SEED, tol=None, resolution=RESOLUTION, workers=1, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """
    The kernel of T and the two closed forms T(sqrt(1-t^2)) = -x and
    T(1) = (1/pi) log((1-x)/(1+x)), on both evaluation paths.
    """
    tol = _tolerance("kernel", tol)
    xs = np.linspace(-1.0, 1.0, 23)[1:-1]
    gx, gw = _trimmed_rule(1.0)

    def spectral_kernel(c):
        coeffs = fht_spectral(dictionary.arcsine(c)).output.array
        return lambda: (float(np.abs(coeffs).max()), 0.0, float(np.abs(coeffs).max()), 0.0)

    def quadrature_kernel(c):
        def job():
            norm = float(gw @ np.abs(transform_values(as_sampler(dictionary.arcsine(c)), gx, depth, order)))
            return norm, 0.0, norm, tol

        return job

    def closed_form(f, expected, spectral):
        def job():
            source = f if spectral else as_sampler(f)
            got = transform_values(source, xs, depth, order)
            error = float(np.abs(got - expected).max())
            return float(got[-1]), float(expected[-1]), error, tol

        return job

    semicircle_image = -xs
    constant_image = np.log((1.0 - xs) / (1.0 + xs)) / np.pi
    jobs = [
        ("kernel spectral c=1", spectral_kernel(1.0)),
        ("kernel spectral c=-3.7", spectral_kernel(-3.7)),
        ("kernel quadrature c=1", quadrature_kernel(1.0)),
        ("kernel quadrature c=-3.7", quadrature_kernel(-3.7)),
        ("semicircle spectral", closed_form(dictionary.semicircle(), semicircle_image, True)),
        ("semicircle quadrature", closed_form(dictionary.semicircle(), semicircle_image, False)),
        ("constant quadrature", closed_form(dictionary.constant(), constant_image, False)),
    ]
    return VerificationReport("kernel", evaluate_cases(jobs, workers), seed, {"points": len(xs)})


def suite_roundtrip(
    seed=SEED,
    tol=None,
    resolution=RESOLUTION,
    workers=1,
    n_cases=100,
    max_terms=16,
    depth=PANEL_DEPTH,
    order=PANEL_ORDER,
):
    """
    T(T^(g)) = g, T^(T(f)) = f - P(f), the vanishing mean of T^(g), and the
    airfoil solution family, on random coefficient vectors.
    """
    tol = _tolerance("roundtrip", tol)
    rng = np.random.default_rng(seed)
    jobs = []
    for i in range(n_cases):
        g = dictionary.random_spectral(rng, WeightClass.FLAT, max_terms)
        f = dictionary.random_spectral(rng, WeightClass.INV_SQRT, max_terms)
        c1, c2 = rng.uniform(-2.0, 2.0, 2)

        def forward(g=g):
            back = fht_spectral(fht_hat_spectral(g).output).output
            error = float(np.abs((back - g).array).max())
            return 0.0, 0.0, error, tol

        def backward(f=f):
            back = fht_hat_spectral(fht_spectral(f).output).output
            error = float(np.abs((back - (f - project_P(f))).array).max())
            return 0.0, 0.0, error, tol

        def mean(g=g):
            hat = fht_hat_spectral(g).output
            total = integrate(hat)
            return total, math.pi * mean_value(hat), abs(total), tol

        jobs += [(f"{i:03d} T(That g)", forward), (f"{i:03d} That(T f)", backward), (f"{i:03d} mean That g", mean)]
        if i < 20:

            def family(g=g, c1=c1, c2=c2):
                first, second = solve_airfoil(g, c1), solve_airfoil(g, c2)
                gap = first.solution - second.solution - float(c1 - c2) * ARCSINE
                error = max(first.residual_l1, second.residual_l1, float(np.abs(gap.array).max()))
                return first.residual_l1, second.residual_l1, error, tol

            jobs.append((f"{i:03d} airfoil family", family))
        if i < 3:

            def grid_path(g=g):
                sampled = Sampler(lambda t, g=g: evaluate(g, t), label="polynomial")
                solution = solve_airfoil(sampled, resolution=resolution, depth=depth, order=order)
                return solution.residual_l1, 0.0, solution.residual_l1, tol

            jobs.append((f"{i:03d} airfoil grid path", grid_path))
    return VerificationReport("roundtrip", evaluate_cases(jobs, workers), seed, {"n_cases": n_cases})


def suite_parseval(
    seed=SEED, tol=None, resolution=RESOLUTION, workers=1, n_cases=50, depth=PANEL_DEPTH, order=PANEL_ORDER
):
    """
    int f T(g) = -int g T(f) for bounded polynomials f against InvSqrt
    series and logarithmic singularities g.
    """
    tol = _tolerance("parseval", tol)
    rng = np.random.default_rng(seed)
    pairs = [
        (dictionary.semicircle(), dictionary.chebyshev_u(3)),
        (dictionary.constant(), dictionary.arcsine()),
    ]
    for i in range(max(0, n_cases - len(pairs))):
        f = dictionary.random_polynomial(rng)
        if i % 2:
            g = dictionary.log_singular(rng.uniform(-0.8, 0.8), rng.uniform(-1.0, 1.0))
        else:
            g = dictionary.random_spectral(rng, WeightClass.INV_SQRT, 6)
        pairs.append((f, g))

    def pairing(f, g):
        def job():
            lhs = pairing_integral(f, g, depth, order)
            rhs = -pairing_integral(g, f, depth, order)
            return lhs, rhs, abs(lhs - rhs), tol

        return job

    jobs = [(f"{i:03d} {_describe(f)},{_describe(g)}", pairing(f, g)) for i, (f, g) in enumerate(pairs[:n_cases])]
    return VerificationReport("parseval", evaluate_cases(jobs, workers), seed, {"n_cases": n_cases})


def poincare_bertrand_residual(f, g, trim=TRIM, n=64, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """
    Trimmed L^1 distance between T(g T(f) + f T(g)) and T(f) T(g) - f g on
    |x| <= trim, with the mean absolute sides.
    """
    if not 0.0 < trim < 1.0:
        msg = f"trim must lie in (0,1), got {trim}"
        raise PreconditionError(msg)
    xs, weights = _trimmed_rule(trim, n)
    fs, gs = as_sampler(f), as_sampler(g)
    tf, tg = transform_sampler(f, depth, order), transform_sampler(g, depth, order)
    inner = Sampler(
        lambda t: gs(t) * tf(t) + fs(t) * tg(t),
        tuple(sorted(set(fs.breakpoints) | set(gs.breakpoints))),
        ((-1.0, 0.5), (1.0, 0.5)),
        label=f"{gs.label}T({fs.label})+{fs.label}T({gs.label})",
    )
    lhs = transform_values(inner, xs, depth, order)
    rhs = tf(xs) * tg(xs) - fs(xs) * gs(xs)
    return float(weights @ np.abs(lhs)), float(weights @ np.abs(rhs)), float(weights @ np.abs(lhs - rhs))


def suite_poincare_bertrand(
    seed=SEED,
    tol=None,
    resolution=RESOLUTION,
    workers=1,
    n_cases=20,
    trim=TRIM,
    depth=PANEL_DEPTH,
    order=PANEL_ORDER,
):
    """
    T(g T(f) + f T(g)) = T(f) T(g) - f g on |x| <= trim, for InvSqrt
    series f and polynomials g.
    """
    if not 0.0 < trim < 1.0:
        msg = f"trim must lie in (0,1), got {trim}"
        raise PreconditionError(msg)
    tol = _tolerance("poincare_bertrand", tol)
    rng = np.random.default_rng(seed)
    pairs = [
        (dictionary.semicircle(), dictionary.constant()),
        (dictionary.zero(), dictionary.zero()),
    ]
    for _ in range(max(0, n_cases - len(pairs))):
        pairs.append(
            (dictionary.random_spectral(rng, WeightClass.INV_SQRT, 6), dictionary.random_polynomial(rng))
        )

    def job(f, g):
        return lambda: (*poincare_bertrand_residual(f, g, trim, depth=depth, order=order), tol)

    jobs = [(f"{i:03d} {_describe(f)},{_describe(g)}", job(f, g)) for i, (f, g) in enumerate(pairs[:n_cases])]
    return VerificationReport(
        "poincare_bertrand", evaluate_cases(jobs, workers), seed, {"n_cases": n_cases, "trim": trim}
    )


# operator norms


def pichorides_constant(p):
    """max{tan(pi/(2p)), cot(pi/(2p))}, the norm of T on L^p."""
    angle = math.pi / (2.0 * p)
    return max(math.tan(angle), 1.0 / math.tan(angle))


def _sweep_rule(sampler, exponents, depth, order):
    singular = dict(sampler.singular)
    for end, exponent in exponents.items():
        singular[end] = max(singular.get(end, 0.0), exponent)
    shaped = Sampler(
        sampler.func,
        sampler.breakpoints,
        tuple((where, min(max(e, -0.95), 0.95)) for where, e in sorted(singular.items())),
        label=sampler.label,
    )
    return sampler_rule(shaped, depth=depth, order=order)


def lp_ratios(f, ps, operator, hat=False, depth=SWEEP_DEPTH, order=SWEEP_ORDER):
    """
    ||operator(f)||_p / ||f||_p for every p in `ps`, from a single
    evaluation of the operator on a composite rule graded for the largest p.

    The operator runs its own rule one order higher, so its nodes stay off
    the outer ones.
    """
    sampler = as_sampler(f)
    top = max(ps)
    exponents = {where: e * top for where, e in sampler.singular}
    if hat:
        for end in (-1.0, 1.0):
            exponents[end] = max(exponents.get(end, 0.0), top / 2.0)
    x, w = _sweep_rule(sampler, exponents, depth, order)
    values = np.abs(sampler(x))
    image = np.abs(operator(f, x, depth, order + 1))
    ratios = []
    for p in ps:
        norm_f = (w @ values**p) ** (1.0 / p)
        ratios.append(float((w @ image**p) ** (1.0 / p) / norm_f) if norm_f > 0.0 else 0.0)
    return ratios


def lp_ratio(f, p, operator, hat=False, depth=SWEEP_DEPTH, order=SWEEP_ORDER):
    """||operator(f)||_p / ||f||_p on a composite rule adapted to f's singularities raised to the power p."""
    return lp_ratios(f, (p,), operator, hat, depth, order)[0]


def suite_norm_bounds(
    seed=SEED,
    tol=None,
    resolution=RESOLUTION,
    workers=1,
    p_grid=P_GRID,
    hat_grid=HAT_P_GRID,
    depth=SWEEP_DEPTH,
    order=SWEEP_ORDER,
):
    """
    Dictionary lower estimates of ||T||_{p->p} and ||T + T^||_{p->p} against
    their bounds, and the chain of elementary inequalities behind the
    explicit constants.

    Functions that do not depend on p are transformed once for the whole
    grid; the truncated powers, whose exponent follows p, once per p. The
    sweep never refines deeper than its own defaults.
    """
    tol = _tolerance("norm_bounds", tol)
    depth, order = min(depth, SWEEP_DEPTH), min(order, SWEEP_ORDER)
    sweeps = (
        ("pichorides", transform_values, False, tuple(p_grid)),
        ("t_plus_hat", hat_plus_t, True, tuple(hat_grid)),
    )
    jobs = []
    for label, operator, hat, ps in sweeps:
        if ps:
            jobs += [(label, f, ps, operator, hat) for f in dictionary.norm_fixed(seed)]
            jobs += [(label, f, (p,), operator, hat) for p in ps for f in dictionary.norm_powers(p)]

    def run(job):
        label, f, ps, operator, hat = job
        return label, ps, lp_ratios(f, ps, operator, hat, depth, order)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]
    best = {}
    for label, ps, ratios in results:
        for p, ratio in zip(ps, ratios):
            best[label, p] = max(best.get((label, p), 0.0), ratio)

    points = [SweepPoint("pichorides", (p,), best["pichorides", p], pichorides_constant(p), tol) for p in p_grid]
    points += [
        SweepPoint("t_plus_hat", (p,), best["t_plus_hat", p], 72.0 * math.sqrt(2.0) / (p - 1.0), tol) for p in hat_grid
    ]
    for p in p_grid:
        tangent = math.tan(math.pi / (2.0 * p))
        points += [
            SweepPoint("tan_vs_three", (p,), tangent, 3.0 / (p - 1.0)),
            SweepPoint("tan_chain_1", (p,), tangent, 4.0 * p / (math.pi * (p - 1.0))),
            SweepPoint("tan_chain_2", (p,), 4.0 * p / (math.pi * (p - 1.0)), 8.0 / (math.pi * (p - 1.0))),
            SweepPoint("tan_chain_3", (p,), 8.0 / (math.pi * (p - 1.0)), 3.0 / (p - 1.0)),
        ]
    for p in hat_grid:
        dual = p / (p - 1.0)
        chained = 24.0 * math.sqrt(2.0) / math.pi * (3.0 / (p - 1.0)) ** (1.0 / p) * 6.0 ** (1.0 / dual)
        points.append(SweepPoint("t_plus_hat_chain", (p,), chained, 72.0 * math.sqrt(2.0) / (p - 1.0)))
    return BoundSweep("norm_bounds", tuple(points), seed)


# appendix integrals


def _check_beta_gamma(beta, gamma):
    if not (0 < beta < 1 and 0 < gamma < 1) or beta + gamma <= 1:
        msg = f"Need beta, gamma in (0,1) with beta + gamma > 1, got ({beta}, {gamma})"
        raise PreconditionError(msg)


def c_beta_gamma(beta, gamma):
    """
    max{1/(1-beta), 1/(1-gamma), 1/(beta+gamma-1)}; exact for Fraction input.

    Raises:
        PreconditionError: Unless beta, gamma lie in (0,1) with beta + gamma > 1.
    """
    _check_beta_gamma(beta, gamma)
    return max(1 / (1 - beta), 1 / (1 - gamma), 1 / (beta + gamma - 1))


def appendix_tail(beta, gamma, cutoff=APPENDIX_TAIL):
    """
    int_M^oo xi^(-beta) (1+xi)^(-gamma) dxi in closed form. With u = 1/xi it
    is M^(1-s)/(s-1) * 2F1(gamma, s-1; s; -1/M), s = beta + gamma; the leading
    factor alone is the power bound.
    """
    s = beta + gamma
    return cutoff ** (1.0 - s) / (s - 1.0) * special.hyp2f1(gamma, s - 1.0, s, -1.0 / cutoff)


def _origin_integral(func, length, exponent, depth, order):
    """int_0^length func(u) du for func singular like u^(-exponent) at 0 only."""
    return panel_rule(0.0, float(length), depth, float(exponent), None, order).integrate(func)


def appendix_integral(beta, gamma, cutoff=APPENDIX_TAIL, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """
    int_{-1}^oo dxi / (|xi|^beta (xi+1)^gamma): endpoint-singular panels on
    (-1,0) and (0,1), geometric panels on (1, M) and the analytic tail.

    Each singular piece is integrated in the distance from its singular
    point, so nodes close to -1 keep their full relative precision.
    """
    _check_beta_gamma(beta, gamma)
    beta, gamma = float(beta), float(gamma)
    total = (
        _origin_integral(lambda u: u**-gamma * (1.0 - u) ** -beta, 0.5, gamma, depth, order)
        + _origin_integral(lambda v: v**-beta * (1.0 - v) ** -gamma, 0.5, beta, depth, order)
        + _origin_integral(lambda xi: xi**-beta * (1.0 + xi) ** -gamma, 1.0, beta, depth, order)
    )
    edges = np.geomspace(1.0, cutoff, 41)
    s, w = special.roots_legendre(order)
    half = 0.5 * (edges[1:] - edges[:-1])
    points = edges[:-1, None] + half[:, None] * (s[None, :] + 1.0)
    values = points**-beta * (points + 1.0) ** -gamma
    total += float(((values * w[None, :]).sum(axis=1) * half).sum())
    return total + float(appendix_tail(beta, gamma, cutoff))


def appendix_oracle(beta, gamma):
    """B(1-beta, 1-gamma) + B(1-beta, beta+gamma-1): the pieces over (-1,0) and (0,oo)."""
    return float(special.beta(1.0 - beta, 1.0 - gamma) + special.beta(1.0 - beta, beta + gamma - 1.0))


def weighted_integral(beta, gamma, x, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """
    int_{-1}^1 dt / (|t-x|^beta (1-t^2)^gamma), split at x and at the
    midpoints of (-1, x) and (x, 1) into pieces singular at one end only.
    """
    _check_beta_gamma(beta, gamma)
    beta, gamma, x = float(beta), float(gamma), float(x)
    left, right = 0.5 * (1.0 + x), 0.5 * (1.0 - x)
    pieces = (
        # t = -1 + u
        (lambda u: u**-gamma * (2.0 - u) ** -gamma * (1.0 + x - u) ** -beta, left, gamma),
        # t = x - v
        (lambda v: v**-beta * (1.0 - x + v) ** -gamma * (1.0 + x - v) ** -gamma, left, beta),
        # t = x + v
        (lambda v: v**-beta * (1.0 - x - v) ** -gamma * (1.0 + x + v) ** -gamma, right, beta),
        # t = 1 - u
        (lambda u: u**-gamma * (2.0 - u) ** -gamma * (1.0 - x - u) ** -beta, right, gamma),
    )
    return sum(_origin_integral(func, length, exponent, depth, order) for func, length, exponent in pieces)


def suite_appendix(
    seed=SEED,
    tol=None,
    resolution=RESOLUTION,
    workers=1,
    beta_gamma_grid=BETA_GAMMA_GRID,
    x_grid=X_GRID,
    p_grid=EXACT_P_GRID,
    depth=PANEL_DEPTH,
    order=PANEL_ORDER,
):
    """
    The bounds int_{-1}^oo <= 6c and int_{-1}^1 <= 24c/(1-x^2)^(beta+gamma-1)
    over a (beta, gamma) grid, the Beta-function oracle, and the exact
    identities for c at the exponents used by the T + T^ estimate.
    """
    slack = _tolerance("appendix", tol)
    for beta, gamma in beta_gamma_grid:
        _check_beta_gamma(beta, gamma)
    points = []
    for beta, gamma in beta_gamma_grid:
        c = float(c_beta_gamma(beta, gamma))
        numeric = appendix_integral(beta, gamma, depth=depth, order=order)
        oracle = appendix_oracle(beta, gamma)
        points.append(SweepPoint("line_integral", (beta, gamma), numeric, 6.0 * c, slack))
        points.append(SweepPoint("beta_oracle", (beta, gamma), abs(numeric - oracle) / oracle, 1e-8))
        values = {}
        for x in x_grid:
            values[x] = weighted_integral(beta, gamma, x, depth, order)
            bound = 24.0 * c / (1.0 - x * x) ** (beta + gamma - 1.0)
            points.append(SweepPoint("weighted_integral", (beta, gamma, x), values[x], bound, slack))
        for x in x_grid:
            if x > 0 and -x in values:
                asymmetry = abs(values[x] - values[-x]) / values[x]
                points.append(SweepPoint("weighted_symmetry", (beta, gamma, x), asymmetry, 1e-9))
    half = Fraction(1, 2)
    points.append(SweepPoint("c_half_two_thirds", (0.5, 2 / 3), float(c_beta_gamma(half, Fraction(2, 3))), 6.0))
    points.append(SweepPoint("c_half_two_thirds_floor", (0.5, 2 / 3), 6.0, float(c_beta_gamma(half, Fraction(2, 3)))))
    for p in p_grid:
        delta = Fraction(2, 3) * (p - 1) / p
        dual = p / (p - 1)
        shifted = c_beta_gamma(half, delta * p + half)
        points.append(SweepPoint("c_shifted_bound", (float(p),), float(shifted), float(3 / (p - 1))))
        dual_c = c_beta_gamma(half, delta * dual)
        points.append(SweepPoint("c_dual_exponent", (float(p),), float(abs(dual_c - 6)), 0.0))
    return BoundSweep("appendix", tuple(points), seed)


# rearrangement-side suites


def suite_calderon(
    seed=SEED,
    tol=None,
    resolution=RESOLUTION,
    workers=1,
    n_cases=2,
    ts=CALDERON_TS,
    depth=PANEL_DEPTH,
    order=PANEL_ORDER,
):
    """
    The supremum of (Tf)*(t) / S(f*)(t) is finite and changes by less than
    `tol` (relative) between `resolution` and half of it.
    """
    tol = _tolerance("calderon", tol)
    rng = np.random.default_rng(seed)
    functions = [dictionary.zero(), dictionary.constant(), dictionary.indicator(-0.5, 0.25)]
    functions += [dictionary.random_polynomial(rng) for _ in range(n_cases)]

    def job(f):
        def run():
            report = calderon_domination(f, ts, resolution, depth, order=order)
            scale = max(report.sup, report.sup_coarse)
            drift = abs(report.sup - report.sup_coarse) / scale if scale > 0 else 0.0
            if report.violations:
                drift = math.inf
            return report.sup, report.sup_coarse, drift, tol

        return run

    jobs = [(f"{i:03d} {_describe(f)}", job(f)) for i, f in enumerate(functions)]
    return VerificationReport("calderon", evaluate_cases(jobs, workers), seed, {"resolution": resolution})


def log_weight_integral(f, end, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """
    int |f(x) log(1 - end*x)| dx over (-1,1). The integrand has kinks at 0
    and wherever f changes sign; panels end there.
    """
    sampler = as_sampler(f)
    singular = sampler.singular
    if sampler.exponent_at(end) is None:
        singular += ((end, 0.0),)
    weighted = Sampler(
        lambda t: np.abs(sampler(t) * np.log1p(-end * t)),
        tuple(sorted({0.0, *sampler.breakpoints, *sign_changes(sampler)})),
        singular,
        label=f"{sampler.label}*log(1{-end:+g}x)",
    )
    x, w = sampler_rule(weighted, depth=depth, order=order)
    return float(w @ weighted(x))


def interval_transform_l1(f, resolution, interval=(-0.5, 0.0)):
    """int over `interval` of |T(f)|, from the step transform at `resolution` cells."""
    result = fht_step(f, resolution).output
    mid, values = result.x, result.y
    inside = (mid > interval[0]) & (mid < interval[1])
    return float(np.abs(values[inside]).sum() * 2.0 / resolution)


def _monotone_gap(values):
    """Largest decrease along a sequence; zero for a non-decreasing one."""
    return float(max([0.0, *(a - b for a, b in zip(values[:-1], values[1:]))]))


def suite_logweights(
    seed=SEED,
    tol=None,
    resolution=RESOLUTION,
    workers=1,
    resolutions=KOBER_RESOLUTIONS,
    depth=PANEL_DEPTH,
    order=PANEL_ORDER,
):
    """
    int |f log(1 -/+ x)| is finite and stable under a change of rule order
    for L log L functions; for the Kober function the L^1 mass of T(h) on
    (-1/2, 0) keeps growing with resolution.
    """
    tol = _tolerance("logweights", tol)
    functions = [dictionary.zero(), *dictionary.llogl_dictionary(seed)]

    def stable(f, end):
        def run():
            coarse, fine = (log_weight_integral(f, end, depth, n) for n in (order, order + STABILITY_STEP))
            return coarse, fine, abs(fine - coarse), tol

        return run

    def exact_constant():
        value = log_weight_integral(dictionary.constant(), 1.0, depth, order)
        exact = 2.0 * math.log(2.0)
        return value, exact, abs(value - exact), tol

    def kober_growth():
        values = [interval_transform_l1(dictionary.kober(), r) for r in resolutions]
        return values[-1], values[0], _monotone_gap(values), 0.0

    jobs = [("constant exact", exact_constant), ("kober growth", kober_growth)]
    for i, f in enumerate(functions):
        jobs.append((f"{i:03d} {_describe(f)} log(1-x)", stable(f, 1.0)))
        jobs.append((f"{i:03d} {_describe(f)} log(1+x)", stable(f, -1.0)))
    return VerificationReport("logweights", evaluate_cases(jobs, workers), seed, {"resolutions": list(resolutions)})


def transform_l1(f, resolution=RESOLUTION, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """
    ||T(f)||_{L^1}: exact series for the InvSqrt and Sqrt classes, the
    logarithmically graded rule for Flat series, and the step transform at
    `resolution` cells for anything else.
    """
    zero = dictionary.zero()
    if isinstance(f, SpectralFunction):
        if f.weight is not WeightClass.FLAT:
            return l1_distance(fht_spectral(f).output, zero)
        signed = Sampler(lambda t: transform_values(f, t), label=f"T({_describe(f)})")
        image = Sampler(
            lambda t: np.abs(transform_values(f, t)),
            sign_changes(signed),
            ((-1.0, 0.0), (1.0, 0.0)),
            label=f"|T({_describe(f)})|",
        )
        x, w = sampler_rule(image, depth=depth, order=order)
        return float(w @ image(x))
    values = fht_step(f, resolution).output.y
    return float(np.abs(values).sum() * 2.0 / resolution)


def suite_operator_ratio(seed=SEED, tol=None, resolution=RESOLUTION, workers=1, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """
    ||T(f)||_1 / ||f||_{L log L} over the L log L dictionary. No bound is
    asserted; the residual column carries the ratio.
    """

    def job(f):
        def run():
            image = transform_l1(f, resolution, depth, order)
            norm = norm_llogl(rearrangement(f, resolution))
            return image, norm, (image / norm if norm > 0 else 0.0), math.inf

        return run

    jobs = [(f"{i:03d} {_describe(f)}", job(f)) for i, f in enumerate(dictionary.llogl_dictionary(seed))]
    return VerificationReport("operator_ratio", evaluate_cases(jobs, workers), seed, {"resolution": resolution})


# witnesses


def witness_kober(
    seed=SEED, tol=None, resolution=RESOLUTION, workers=1, resolutions=KOBER_RESOLUTIONS, depth=DIAG_DEPTH
):
    """
    h(t) = 1/(t log^2 t) on (0, 1/2) lies in L^1 but not in L log L: the L^1
    mass of T(h) near the origin grows with resolution and the optimal
    domain diagnostic flags growth. h3 = 1/(t |log t|^3), which is in
    L log L, serves as the convergent control.
    """
    kober, control = dictionary.kober(), dictionary.kober_cubed()

    def growth():
        values = [interval_transform_l1(kober, r) for r in resolutions]
        return values[-1], values[0], _monotone_gap(values), 0.0

    def contraction():
        values = [interval_transform_l1(control, r) for r in resolutions]
        first, last = values[1] - values[0], values[2] - values[1]
        return last, first, max(0.0, last - first), 0.0

    def diagnostic():
        diag = optimal_domain_diag(kober, depth, workers=workers)
        return diag.sup_lower_bound, diag.sups[0], (0.0 if diag.growth_flag else 1.0), 0.0

    jobs = [("kober L1 growth", growth), ("control contraction", contraction), ("kober diagnostic", diagnostic)]
    parameters = {"resolutions": list(resolutions), "depth": depth}
    return VerificationReport("witness_kober", evaluate_cases(jobs, 1), seed, parameters)


def witness_arcsine(seed=SEED, tol=None, resolution=RESOLUTION, workers=1):
    """
    The arcsine density spans the kernel of T and rearranges to
    2/sqrt(t(4-t)).
    """
    kernel_tol = TOLERANCES["kernel"]

    def rearranged():
        profile = rearrangement(ARCSINE, resolution)
        ts = np.linspace(0.1, 1.9, 19)
        exact = 2.0 / np.sqrt(ts * (4.0 - ts))
        error = float(np.max(np.abs(profile_value(profile, ts) / exact - 1.0)))
        return float(profile_value(profile, 1.0)), 2.0 / math.sqrt(3.0), error, 0.01

    def kernel():
        coeffs = fht_spectral(ARCSINE).output.array
        return 0.0, 0.0, float(np.abs(coeffs).max()), kernel_tol

    jobs = [("rearrangement", rearranged), ("kernel", kernel)]
    return VerificationReport("witness_arcsine", evaluate_cases(jobs, workers), seed, {"resolution": resolution})


def witness_range_gap(seed=SEED, tol=None, resolution=RESOLUTION, workers=1):
    """
    g = h/sqrt(1-t^2) with h the Kober function is integrable but not in the
    range of T on L log L: the range check finds growth.
    """
    g = dictionary.range_gap()

    def verdict():
        check = range_check(g, resolution)
        return check.llogl[-1], check.llogl[0], (0.0 if check.verdict == OUT_OF_RANGE else 1.0), 0.0

    def growth():
        values = []
        for r in (resolution // 16, resolution // 4, resolution):
            mid, hat = hat_step_values(g, r)
            inside = (mid > -0.5) & (mid < 0.0)
            values.append(float(np.abs(hat[inside]).sum() * 2.0 / r))
        return values[-1], values[0], _monotone_gap(values), 0.0

    jobs = [("range verdict", verdict), ("hat L1 growth", growth)]
    return VerificationReport("witness_range_gap", evaluate_cases(jobs, workers), seed, {"resolution": resolution})


SUITES = {
    "appendix": suite_appendix,
    "calderon": suite_calderon,
    "kernel": suite_kernel,
    "logweights": suite_logweights,
    "norm_bounds": suite_norm_bounds,
    "operator_ratio": suite_operator_ratio,
    "parseval": suite_parseval,
    "poincare_bertrand": suite_poincare_bertrand,
    "roundtrip": suite_roundtrip,
}

WITNESSES = {
    "arcsine": witness_arcsine,
    "kober": witness_kober,
    "range-gap": witness_range_gap,
}


def run_suites(
    names,
    seed=SEED,
    tolerances=None,
    resolution=RESOLUTION,
    trim=TRIM,
    workers=1,
    depth=PANEL_DEPTH,
    order=PANEL_ORDER,
):
    """
    Runs the named suites ("all" for every one) in name order, each with
    the panel depth and order of the quadrature path.

    Raises:
        PreconditionError: For an unknown suite name.
    """
    names = sorted(SUITES) if "all" in names else sorted(set(names))
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        msg = f"Unknown suite(s) {', '.join(unknown)}; choose from {', '.join(sorted(SUITES))} or all"
        raise PreconditionError(msg)
    tolerances = tolerances or {}
    reports = []
    for name in names:
        options = {"depth": depth, "order": order}
        if name == "poincare_bertrand":
            options["trim"] = trim
        logger.info("Running suite %s", name)
        reports.append(
            SUITES[name](seed=seed, tol=tolerances.get(name), resolution=resolution, workers=workers, **options)
        )
    return reports
