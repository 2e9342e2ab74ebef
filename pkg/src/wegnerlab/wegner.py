"""Resonance events, perturbation thresholds, and Monte Carlo estimation.

The three event kinds (fixed energy, variable energy over an interval, and
the two-volume joint event) are evaluated exactly through interval algebra
on sampled spectra; no grid approximation is involved.  All comparisons are
closed (<=) to match the defining inequalities.  Probabilities are
estimated by counting over counter-based trials, so the success count is
bit-identical for a fixed seed regardless of worker count.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DistributionError
from .hamiltonian import InteractionSpec, build_hamiltonian, interaction_sup_norm
from .lattice import Cube, Site
from .randomfield import (
    DistributionSpec,
    FieldSample,
    sample_field,
    validate,
)
from .spectral import Spectrum, dist_to_spectrum, full_spectrum

_WILSON_Z = 1.96


@dataclass(frozen=True)
class WegnerParams:
    """Parameter bundle for the resonance-probability campaigns."""

    beta: float
    sigma: float
    L0: int
    q: float
    h: float = 0.0
    E0: float = 0.0
    interval: tuple[float, float] | None = None

    def __post_init__(self):
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        if self.sigma <= 0.0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.L0 < 1:
            raise ValueError(f"L0 must be a positive integer, got {self.L0}")
        if self.interval is not None and self.interval[0] > self.interval[1]:
            raise ValueError(f"empty interval {self.interval}")


@dataclass(frozen=True)
class IntervalUnion:
    """Disjoint closed intervals, sorted, with strictly positive gaps."""

    intervals: tuple[tuple[float, float], ...]

    @classmethod
    def from_intervals(cls, raw) -> "IntervalUnion":
        """Merge arbitrary closed intervals; touching intervals merge."""
        spans = sorted((float(lo), float(hi)) for lo, hi in raw if lo <= hi)
        merged: list[tuple[float, float]] = []
        for lo, hi in spans:
            if merged and lo <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
            else:
                merged.append((lo, hi))
        return cls(intervals=tuple(merged))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def total_length(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)

    def contains(self, x: float) -> bool:
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return True
            if lo > x:
                break
        return False

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        """Linear sweep over the two sorted interval lists."""
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return IntervalUnion(intervals=tuple(out))

    def clip(self, lo: float, hi: float) -> "IntervalUnion":
        return self.intersect(IntervalUnion(intervals=((lo, hi),)))


def fatten(spec: Spectrum, eps: float) -> IntervalUnion:
    """Union of [lambda - eps, lambda + eps] over all eigenvalues."""
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    ev = spec.eigenvalues
    return IntervalUnion.from_intervals(zip(ev - eps, ev + eps))


def spectrum_dist(spec: Spectrum, energy: float) -> float:
    return float(np.min(np.abs(spec.eigenvalues - energy)))


def interval_dist(spec: Spectrum, interval: tuple[float, float]) -> float:
    """min over eigenvalues of dist(lambda, [lo, hi])."""
    lo, hi = interval
    ev = spec.eigenvalues
    return float(np.min(np.maximum.reduce([lo - ev, ev - hi, np.zeros_like(ev)])))


def fixed_energy_event(spec: Spectrum, energy: float, eps: float) -> bool:
    """dist(E, spectrum) <= eps, boundary inclusive."""
    return spectrum_dist(spec, energy) <= eps


def variable_energy_event(spec: Spectrum, interval, eps: float) -> bool:
    """Exists E in the interval with dist(E, spectrum) <= eps.

    Evaluated exactly: the witness set is nonempty iff some eigenvalue lies
    within eps of the interval.
    """
    lo, hi = interval
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    return interval_dist(spec, (lo, hi)) <= eps


def two_volume_event(spec_x: Spectrum, spec_y: Spectrum, interval, eps: float) -> bool:
    """Exists E in the interval within eps of both spectra.

    Equivalent to a nonempty three-way intersection of the two fattened
    spectra with the interval, computed by a linear sweep.
    """
    lo, hi = interval
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    joint = fatten(spec_x, eps).intersect(fatten(spec_y, eps))
    return not joint.clip(lo, hi).is_empty


def h_star(u_norm: float, sigma: float, L0: int, beta: float) -> float:
    """Coupling threshold 1 / (2 ||U|| e^(sigma L0^beta)); inf for ||U|| = 0."""
    if u_norm < 0.0:
        raise ValueError(f"u_norm must be >= 0, got {u_norm}")
    if u_norm == 0.0:
        return math.inf
    return 1.0 / (2.0 * u_norm * math.exp(sigma * L0**beta))


def delta0(sigma: float, L0: int, beta: float) -> float:
    """Half-width (1/2) e^(-sigma L0^beta) of the admissible energy window."""
    return 0.5 * math.exp(-sigma * L0**beta)


@dataclass(frozen=True)
class PerturbationCheck:
    """Outcome of the resolvent-identity and stability checks on one instance."""

    ok: bool
    skipped: bool
    failed_clause: str | None
    energy: float
    h: float
    u_norm: float
    threshold: float
    dist_free: float
    dist_coupled: float


def perturbation_check(
    cube: Cube,
    field: FieldSample,
    inter: InteractionSpec,
    h: float,
    energy: float,
    sigma: float,
    beta: float,
    L0: int,
) -> PerturbationCheck:
    """Verify the weak-coupling stability of resonances on one instance.

    Clause (a), the second-resolvent-identity norm bound: with G = (H-E)^-1
    and its norm 1/dist for self-adjoint H,

        ||G_h|| <= ||G_0|| + |h| ||U|| ||G_0|| ||G_h||

    whenever both resolvents exist.  Clause (b), the stability implication:

        dist(E, spec(H_0)) > e^(-sigma L0^beta)
            implies  dist(E, spec(H_h)) >= (1/2) e^(-sigma L0^beta),

    which eigenvalue perturbation (Weyl) guarantees for every |h| below
    h_star.  Returns the first violated clause with all computed
    quantities; an instance with a divergent resolvent is skipped.
    """
    u_norm = interaction_sup_norm(cube, inter)
    bound = h_star(u_norm, sigma, L0, beta)
    if abs(h) >= bound:
        raise ValueError(f"|h| = {abs(h)} is not below h_star = {bound}")
    threshold = math.exp(-sigma * L0**beta)
    h_free = build_hamiltonian(cube, field, inter, 0.0)
    h_coupled = build_hamiltonian(cube, field, inter, h)
    dist_free = dist_to_spectrum(h_free, energy)
    dist_coupled = dist_to_spectrum(h_coupled, energy)

    def result(ok, skipped=False, clause=None):
        return PerturbationCheck(
            ok=ok,
            skipped=skipped,
            failed_clause=clause,
            energy=energy,
            h=h,
            u_norm=u_norm,
            threshold=threshold,
            dist_free=dist_free,
            dist_coupled=dist_coupled,
        )

    if dist_free == 0.0 or dist_coupled == 0.0:
        return result(ok=False, skipped=True)
    slack = 1e-9
    norm_free = 1.0 / dist_free
    norm_coupled = 1.0 / dist_coupled
    rhs = norm_free + abs(h) * u_norm * norm_free * norm_coupled
    if norm_coupled > rhs * (1.0 + slack):
        return result(ok=False, clause="norm_inequality")
    if dist_free > threshold and dist_coupled < 0.5 * threshold * (1.0 - slack):
        return result(ok=False, clause="distance_stability")
    return result(ok=True)


def wilson_interval(successes: int, trials: int, z: float = _WILSON_Z) -> tuple[float, float]:
    """Wilson score 95% interval; non-degenerate upper bound at 0 successes."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = float(trials)
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2.0 * n)) / denom
    spread = z * math.sqrt((p * (1.0 - p) + z * z / (4.0 * n)) / n) / denom
    return (max(0.0, center - spread), min(1.0, center + spread))


@dataclass(frozen=True)
class MCResult:
    """Estimated event probability with its Wilson 95% interval."""

    trials: int
    successes: int
    p_hat: float
    ci95: tuple[float, float]


@dataclass(frozen=True)
class EventQuery:
    """One fully specified event family: geometry, disorder, and thresholds.

    ``energy`` is used by the fixed-energy kind, ``window`` by the variable
    and two-volume kinds.  ``offset`` displaces the second cube center for
    the two-volume kind; the default is 2L+1 along the first coordinate,
    which makes the two configuration cubes disjoint.
    """

    kind: str
    n: int
    d: int
    L: int
    distribution: DistributionSpec
    interaction: InteractionSpec
    h: float
    eps: float
    energy: float | None = None
    window: tuple[float, float] | None = None
    center: tuple[int, ...] | None = None
    offset: tuple[int, ...] | None = None


def _query_cubes(query: EventQuery) -> list[Cube]:
    nd = query.n * query.d
    center = tuple(query.center) if query.center is not None else (0,) * nd
    if len(center) != nd:
        raise ValueError(f"center length {len(center)} != n*d = {nd}")
    first = Cube(Site(query.n, query.d, center), query.L)
    if query.kind != "two_volume":
        return [first]
    offset = tuple(query.offset) if query.offset is not None else (
        (2 * query.L + 1,) + (0,) * (nd - 1)
    )
    if len(offset) != nd:
        raise ValueError(f"offset length {len(offset)} != n*d = {nd}")
    second_center = tuple(c + o for c, o in zip(center, offset))
    return [first, Cube(Site(query.n, query.d, second_center), query.L)]


def validate_query(query: EventQuery) -> list[str]:
    """Configuration problems that must be reported before any sampling."""
    problems = [f"distribution: {v}" for v in validate(query.distribution)]
    if query.kind not in ("fixed", "variable", "two_volume"):
        problems.append(f"unknown event kind {query.kind!r}")
    if query.L < 0:
        problems.append(f"cube radius must be >= 0, got {query.L}")
    if query.eps <= 0.0:
        problems.append(f"eps must be positive, got {query.eps}")
    if query.kind == "fixed" and query.energy is None:
        problems.append("fixed-energy event needs an energy")
    if query.kind in ("variable", "two_volume"):
        if query.window is None:
            problems.append(f"{query.kind} event needs an interval")
        elif query.window[0] > query.window[1]:
            problems.append(f"empty interval {query.window}")
    return problems


def evaluate_event(query: EventQuery, seed: int, trial: int) -> bool:
    """Sample one field realization and decide the event exactly."""
    cubes = _query_cubes(query)
    region = frozenset().union(*(c.field_region() for c in cubes))
    field = sample_field(query.distribution, region, seed, trial)
    spectra = [
        full_spectrum(build_hamiltonian(c, field, query.interaction, query.h))
        for c in cubes
    ]
    if query.kind == "fixed":
        return fixed_energy_event(spectra[0], query.energy, query.eps)
    if query.kind == "variable":
        return variable_energy_event(spectra[0], query.window, query.eps)
    return two_volume_event(spectra[0], spectra[1], query.window, query.eps)


def mc_estimate(query: EventQuery, trials: int, seed: int, workers: int = 1) -> MCResult:
    """Estimate the event probability over counter-based trials.

    Trial t uses the field keyed by (seed, t), so the success count is a
    pure function of (query, trials, seed): the worker count only changes
    how the integer sum is assembled.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    problems = validate_query(query)
    if problems:
        raise DistributionError("invalid event query: " + "; ".join(problems))

    def count_range(lo: int, hi: int) -> int:
        return sum(evaluate_event(query, seed, t) for t in range(lo, hi))

    if workers <= 1:
        successes = count_range(0, trials)
    else:
        chunk = -(-trials // workers)
        bounds = [(lo, min(lo + chunk, trials)) for lo in range(0, trials, chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            successes = sum(pool.map(lambda b: count_range(*b), bounds))
    p_hat = successes / trials
    return MCResult(
        trials=trials,
        successes=successes,
        p_hat=p_hat,
        ci95=wilson_interval(successes, trials),
    )


@dataclass(frozen=True)
class DecayFit:
    """Fitted exponential decay rate and per-length polynomial checks.

    ``alpha_hat`` is defined only when at least two campaign points have a
    nonzero estimate; ``passes_polynomial`` compares Wilson upper bounds
    against L^(-q) either way.
    """

    points: tuple[tuple[int, float], ...]
    alpha_hat: float | None
    passes_polynomial: tuple[tuple[int, bool], ...]


def decay_fit(points, beta: float, q: float) -> DecayFit:
    """Least-squares decay rate of -ln p_hat against L^beta.

    ``points`` is a sequence of (L, MCResult).  The polynomial check per L
    is Wilson-upper(p_hat) <= L^(-q).
    """
    points = list(points)
    if len(points) < 2:
        raise ValueError("decay_fit needs at least two campaign points")
    fitted = [(L, r.p_hat) for L, r in points]
    checks = tuple(
        (L, r.ci95[1] <= float(L) ** (-q)) for L, r in points
    )
    positive = [(L, p) for L, p in fitted if p > 0.0]
    alpha = None
    if len(positive) >= 2:
        x = np.array([float(L) ** beta for L, _ in positive])
        y = np.array([-math.log(p) for _, p in positive])
        alpha = float(np.polyfit(x, y, 1)[0])
    return DecayFit(
        points=tuple(fitted),
        alpha_hat=alpha,
        passes_polynomial=checks,
    )
