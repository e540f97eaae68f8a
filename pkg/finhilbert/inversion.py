"""
The airfoil equation T(f) = g: its solutions T^(g) + c/sqrt(1 - x^2), the
evidence for g lying in the range of T, and the membership diagnostic for
the optimal domain of T with values in L^1.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .chebrep import (
    GridFunction,
    NodeKind,
    Sampler,
    SpectralFunction,
    WeightClass,
    as_sampler,
    cell_integrals,
    chebyshev_nodes,
    fit,
    integrate,
    interior_points,
    quad_rule,
    QuadratureKind,
    sampler_rule,
)
from .dictionary import indicator
from .errors import DataError, FinHilbertError, PreconditionError
from .rearrange import growth_flag, norm_llogl, profile_from_cells
from .settings import (
    DIAG_DEPTH,
    DIAG_GROWTH_TOL,
    DIAG_MAX_DEPTH,
    DIAG_MAX_STEPS,
    DIAG_START_DEPTH,
    IN_RANGE_TOL,
    MIN_PROFILE_RESOLUTION,
    PANEL_DEPTH,
    PANEL_ORDER,
    RESOLUTION,
    SPECTRAL_N,
    TRIM,
)
from .transform import (
    Method,
    cell_grid,
    fht_hat_spectral,
    fht_spectral,
    hat_sampler,
    hat_step_values,
    hat_values,
    step_transform,
    transform_sampler,
    transform_values,
)
from .utils import chunks

logger = logging.getLogger(__name__)

ARCSINE = SpectralFunction(WeightClass.INV_SQRT, [1.0])

IN_RANGE = "in-range evidence"
OUT_OF_RANGE = "out-of-range evidence"
INCONCLUSIVE = "inconclusive"

# candidate cells kept for the greedy union at each depth
GREEDY_CANDIDATES = 64


def l1_distance(f, g):
    """||f - g||_{L^1(-1,1)} on the composite rule of both functions' special points."""
    first, second = as_sampler(f), as_sampler(g)
    diff = Sampler(
        lambda t: np.abs(first(t) - second(t)),
        tuple(sorted(set(first.breakpoints) | set(second.breakpoints))),
        first.singular + second.singular,
        label=f"|{first.label}-{second.label}|",
    )
    return integrate(diff)


@dataclass(frozen=True)
class AirfoilSolution:
    """
    f = particular + c / sqrt(1 - x^2). A complex c is carried as is; the
    real and imaginary parts of f are `real_part` and `imag_part`.

    `verdict` grades the evidence that g lies in the range of T. On the
    grid path `evidence` holds the growth test behind it.
    """

    particular: SpectralFunction
    homogeneous_coeff: complex
    residual_l1: float
    method: Method = Method.SPECTRAL
    verdict: str = IN_RANGE
    evidence: dict = field(default_factory=dict, compare=False)

    @property
    def real_part(self):
        return self.particular + float(np.real(self.homogeneous_coeff)) * ARCSINE

    @property
    def imag_part(self):
        return float(np.imag(self.homogeneous_coeff)) * ARCSINE

    @property
    def solution(self):
        if np.imag(self.homogeneous_coeff) != 0:
            msg = "A complex solution has no single real representation; use real_part and imag_part"
            raise PreconditionError(msg)
        return self.real_part

    def to_dict(self):
        c = self.homogeneous_coeff
        if np.imag(c) != 0:
            c = {"real": float(np.real(c)), "imag": float(np.imag(c))}
        else:
            c = float(np.real(c))
        payload = {
            "particular": self.particular.to_dict(),
            "c": c,
            "residual_l1": self.residual_l1,
            "method": self.method.value,
            "verdict": self.verdict,
        }
        if self.evidence:
            payload["evidence"] = self.evidence
        return payload


def hat_growth(g, resolution=RESOLUTION):
    """
    L log L norms of T^(g) on the step grid at resolutions n/16, n/4 and n.

    Returns:
        tuple: (resolutions, norms, growing). A non-finite norm counts as
        growth.
    """
    resolutions = tuple(max(MIN_PROFILE_RESOLUTION, resolution // k) for k in (16, 4, 1))
    norms = []
    for r in resolutions:
        try:
            _, values = hat_step_values(g, r)
        except DataError as err:
            logger.warning("No step values for T^(g) at resolution %d: %s", r, err)
            norms.append(np.inf)
            continue
        if not np.all(np.isfinite(values)):
            norms.append(np.inf)
            continue
        norms.append(norm_llogl(profile_from_cells(values)))
    growing = bool(not np.all(np.isfinite(norms)) or growth_flag(norms))
    return resolutions, tuple(float(v) for v in norms), growing


def _grade(growing, residual, tol):
    if growing:
        return OUT_OF_RANGE
    if residual < tol:
        return IN_RANGE
    return INCONCLUSIVE


def _particular(g, n, depth, order):
    if isinstance(g, SpectralFunction) and g.weight is WeightClass.FLAT:
        return fht_hat_spectral(g).output, Method.SPECTRAL
    nodes = chebyshev_nodes(WeightClass.INV_SQRT, n)
    try:
        values = hat_values(g, nodes, depth, order)
    except DataError as err:
        msg = f"T^(g) diverges at the Chebyshev nodes; g appears out of range: {err}"
        raise DataError(msg) from err
    particular = fit(GridFunction(nodes, values, NodeKind.CHEBYSHEV_GAUSS), WeightClass.INV_SQRT)
    return particular, Method.QUADRATURE


def _residual(g, f):
    """||T(f) - g||_{L^1} with T(f) taken by the spectral rule."""
    image = fht_spectral(f).output
    if isinstance(g, SpectralFunction) and g.weight is WeightClass.FLAT:
        return float(l1_distance(image - g, SpectralFunction(WeightClass.FLAT, [0.0])))
    return float(l1_distance(image, g))


def solve_airfoil(
    g,
    c=0.0,
    n=SPECTRAL_N,
    resolution=RESOLUTION,
    tol=IN_RANGE_TOL,
    depth=PANEL_DEPTH,
    order=PANEL_ORDER,
):
    """
    Solves T(f) = g in the form f = T^(g) + c / sqrt(1 - x^2).

    Flat spectral data is inverted exactly in coefficients. Any other g is
    inverted on the grid path: T^(g) is evaluated by quadrature at the n
    first-kind Chebyshev–Gauss nodes and refitted in the InvSqrt class, and
    the residual ||T(f) - g||_{L^1} is then taken through the exact spectral
    rule for T. The grid path also measures the L log L norm of T^(g) on
    the step grid up to `resolution`; growth marks the solution as
    out-of-range evidence, whatever the residual says.

    Args:
        g: Right-hand side.
        c (complex): Coefficient of the homogeneous solution; real and
            imaginary parts are solved separately.
        n (int): Chebyshev nodes on the grid path.
        resolution (int): Finest step resolution of the growth test.
        tol (float): Residual under which the grid path reports in-range
            evidence.

    Returns:
        AirfoilSolution

    Raises:
        DataError: If T^(g) is not finite at a node, a sign that g is out of
            the range of T.
    """
    c = complex(c)
    particular, method = _particular(g, n, depth, order)
    # the imaginary part c.imag/sqrt(1-x^2) lies in the kernel and adds nothing
    residual = _residual(g, particular + c.real * ARCSINE)
    verdict, evidence = IN_RANGE, {}
    if method is Method.QUADRATURE:
        resolutions, norms, growing = hat_growth(g, resolution)
        verdict = _grade(growing, residual, tol)
        evidence = {"resolutions": list(resolutions), "llogl": list(norms), "growing": growing}
        if growing:
            logger.warning("T^(g) grows under refinement; g appears to be out of the range of T")
    logger.debug("Airfoil solve (%s): residual %.3g, %s", method.value, residual, verdict)
    return AirfoilSolution(particular, c if c.imag else c.real, residual, method, verdict, evidence)


@dataclass(frozen=True)
class RangeCheck:
    verdict: str
    resolutions: tuple
    llogl: tuple
    growing: bool
    residual_l1: float
    tolerance: float

    @property
    def in_range(self):
        return self.verdict == IN_RANGE

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "evidence": {
                "resolutions": list(self.resolutions),
                "llogl": list(self.llogl),
                "growing": self.growing,
                "residual_l1": self.residual_l1,
                "tolerance": self.tolerance,
            },
        }


def range_check(g, resolution=RESOLUTION, tol=IN_RANGE_TOL, n=SPECTRAL_N, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """
    Grades the evidence that g is in the range T(L log L).

    The L log L norm of T^(g) is measured at resolutions n/16, n/4 and n;
    growth across them points out of the range. Otherwise a residual
    ||T(T^(g)) - g||_{L^1} below `tol` counts as evidence for membership.
    Verdicts are evidence, never proofs.
    """
    resolutions, norms, growing = hat_growth(g, resolution)
    try:
        particular, _ = _particular(g, n, depth, order)
        residual = _residual(g, particular)
    except DataError as err:
        logger.warning("No residual for the range check: %s", err)
        residual = np.inf
    return RangeCheck(_grade(growing, residual, tol), resolutions, norms, growing, float(residual), tol)


@dataclass(frozen=True)
class MembershipDiagnostic:
    catalogue_depth: int
    sup_lower_bound: float
    growth_flag: bool
    sups: tuple = ()
    skipped: int = 0
    best_cells: tuple = field(default=(), compare=False)

    def to_dict(self):
        return {
            "catalogue_depth": self.catalogue_depth,
            "sup_lower_bound": self.sup_lower_bound,
            "growth_flag": self.growth_flag,
            "sups": {str(depth): value for depth, value in enumerate(self.sups, start=1)},
            "skipped": self.skipped,
        }


def _cell_transforms(heights, cells, workers):
    """
    T(f chi_I) at the fine midpoints for each dyadic cell I, as rows.
    """
    fine = len(heights)
    per_cell = fine // cells
    index = np.arange(cells)

    def run(rows):
        block = np.zeros((len(rows), fine))
        for i, k in enumerate(rows):
            block[i, k * per_cell : (k + 1) * per_cell] = heights[k * per_cell : (k + 1) * per_cell]
        return rows, step_transform(block)

    batches = list(chunks(index, 128))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            yield from pool.map(run, batches)
    else:
        yield from map(run, batches)


def _depth_sup(heights, cells, seed, max_steps, workers):
    """
    Largest ||T(f chi_A)||_{L^1} at one depth over single dyadic cells and a
    greedy union grown from `seed`, a boolean mask over the cells.

    Returns:
        tuple: (value, mask of the set attaining it, skipped sets)
    """
    fine = len(heights)
    h = 2.0 / fine
    per_cell = fine // cells
    norms = np.zeros(cells)
    skipped = 0
    keep = min(GREEDY_CANDIDATES, cells)
    candidates, candidate_cells, candidate_norms = np.zeros((0, fine)), np.zeros(0, dtype=int), np.zeros(0)
    for rows, block in _cell_transforms(heights, cells, workers):
        finite = np.all(np.isfinite(block), axis=1)
        if not np.all(finite):
            skipped += int(np.sum(~finite))
            logger.warning("Skipping %d catalogue sets with non-finite transforms", np.sum(~finite))
        block_norms = np.where(finite, h * np.abs(np.where(finite[:, None], block, 0.0)).sum(axis=1), 0.0)
        norms[rows] = block_norms
        pool_rows = np.concatenate([candidates, np.where(finite[:, None], block, 0.0)])
        pool_cells = np.concatenate([candidate_cells, rows])
        pool_norms = np.concatenate([candidate_norms, block_norms])
        best = np.argsort(-pool_norms, kind="stable")[:keep]
        candidates, candidate_cells, candidate_norms = pool_rows[best], pool_cells[best], pool_norms[best]

    chosen = np.zeros(cells, dtype=bool) if seed is None else np.asarray(seed, dtype=bool).copy()
    total = np.zeros(fine)
    if chosen.any():
        total = step_transform(np.repeat(chosen, per_cell) * heights)
        if not np.all(np.isfinite(total)):
            chosen[:] = False
            total = np.zeros(fine)
    greedy = float(h * np.abs(total).sum())
    used = chosen[candidate_cells]
    for _ in range(min(max_steps, len(candidates))):
        trial = h * np.abs(total[None, :] + candidates).sum(axis=1)
        trial[used] = -np.inf
        pick = int(np.argmax(trial))
        if trial[pick] <= greedy:
            break
        used[pick] = True
        chosen[candidate_cells[pick]] = True
        total += candidates[pick]
        greedy = float(trial[pick])

    single = int(np.argmax(norms))
    if norms[single] > greedy:
        chosen = np.zeros(cells, dtype=bool)
        chosen[single] = True
        return float(norms[single]), chosen, skipped
    return greedy, chosen, skipped


def optimal_domain_diag(
    f,
    depth=DIAG_DEPTH,
    max_steps=DIAG_MAX_STEPS,
    start_depth=DIAG_START_DEPTH,
    tol=DIAG_GROWTH_TOL,
    workers=1,
):
    """
    Lower bound for sup_A ||T(f chi_A)||_{L^1} over unions of dyadic cells.

    At depth d the interval is cut into 2^d cells and f is replaced by its
    cell averages on a grid eight times finer, whose transforms are exact
    through the step convolution. The catalogue holds every single cell and
    a greedy union that starts from the best set of depth d - 1, cut into
    its children, and adds the cell with the largest increment while the
    norm improves. The running maximum is reported per depth; `growth_flag`
    is set when it strictly grows at every depth from `start_depth` on and
    the last increment is at least `tol` times the value.

    Bounded values are consistent with f in L log L; sustained growth is
    consistent with f outside it.

    Raises:
        PreconditionError: If depth is not in [1, 12].
        DataError: If f is not numerically integrable.
    """
    if not 1 <= depth <= DIAG_MAX_DEPTH:
        msg = f"Catalogue depth must be in [1, {DIAG_MAX_DEPTH}], got {depth}"
        raise PreconditionError(msg)
    sampler = as_sampler(f)
    sups, skipped, running = [], 0, 0.0
    chosen = None
    for d in range(1, depth + 1):
        cells = 2**d
        edges, _ = cell_grid(8 * cells)
        try:
            heights = cell_integrals(sampler, edges) / np.diff(edges)
        except FinHilbertError as err:
            msg = f"Cannot average {sampler.label} at depth {d}: {err}"
            raise DataError(msg) from err
        if not np.all(np.isfinite(heights)):
            msg = f"{sampler.label} is not integrable at depth {d}"
            raise DataError(msg)
        seed = None if chosen is None else np.repeat(chosen, 2)
        value, chosen, missed = _depth_sup(heights, cells, seed, max_steps, workers)
        skipped += missed
        running = max(running, value)
        sups.append(running)
        logger.debug("Depth %d: sup %.6g over %d cells", d, running, int(chosen.sum()))
    tail = np.asarray(sups[max(0, min(start_depth, depth - 2) - 1) :])
    increments = np.diff(tail)
    growing = bool(len(increments) >= 2 and np.all(increments > 0) and increments[-1] >= tol * tail[-1])
    best = tuple(int(k) for k in np.flatnonzero(chosen))
    return MembershipDiagnostic(depth, float(sups[-1]), growing, tuple(sups), skipped, best)


def pairing_integral(f, g, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """
    int f T(g) over (-1,1), on a composite rule refined toward the special
    points of both f and g.

    Raises:
        DataError: If the pairing is not finite.
    """
    first, second = as_sampler(f), as_sampler(g)
    tg = transform_sampler(g, depth, order)
    product = Sampler(
        lambda t: first(t) * tg(t),
        tuple(sorted(set(first.breakpoints) | set(second.special_points))),
        first.singular,
        label=f"{first.label}*T({second.label})",
    )
    # one order above the rule inside T(g) so the outer nodes avoid its nodes
    x, w = sampler_rule(product, depth=depth, order=order + 1)
    value = float(w @ product(x))
    if not np.isfinite(value):
        msg = f"Pairing {product.label} diverges"
        raise DataError(msg)
    return value


def parseval_residual(f, g, depth=PANEL_DEPTH, order=PANEL_ORDER):
    """|int f T(g) + int g T(f)|."""
    return abs(pairing_integral(f, g, depth, order) + pairing_integral(g, f, depth, order))


@dataclass(frozen=True)
class FredholmCase:
    support: tuple
    residual: float

    def to_dict(self):
        return {"support": list(self.support), "residual": self.residual}


def fredholm_demo(sets=((-0.5, 0.5), (0.0, 0.5), (-1.0, 0.25)), trim=TRIM, n=64):
    """
    ||T(T^(chi_A)) - chi_A|| on |x| <= trim for interval sets A, averaged
    over Gauss–Legendre nodes of the trimmed interval.
    """
    rule = quad_rule(QuadratureKind.GAUSS_LEGENDRE, n)
    xs = interior_points(trim * rule.x)
    weights = trim * rule.w
    cases = []
    for a, b in sets:
        chi = indicator(a, b)
        round_trip = transform_values(hat_sampler(chi), xs)
        residual = float(weights @ np.abs(round_trip - chi(xs)))
        cases.append(FredholmCase((a, b), residual))
    return cases
