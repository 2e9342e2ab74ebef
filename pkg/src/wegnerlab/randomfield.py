"""Single-site disorder measures and reproducible i.i.d. field sampling.

Sampling is counter-based: the value at a lattice point is a pure function
of (seed, trial, point coordinates), obtained by chaining the SplitMix64
finalizer over those words and mapping the top 53 bits to [0, 1).  There is
no generator state, so results do not depend on the order in which points
are visited or on how trials are split across workers.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DistributionError, FieldCoverageError

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INIT = np.uint64(0x9E3779B97F4A7C15)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_TWO53 = float(1 << 53)


def _mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer, a bijective scrambling of 64-bit words."""
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


def _as_words(values) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(values, dtype=np.int64))
    return np.ascontiguousarray(arr).view(np.uint64)


def hash_uniform01(seed: int, trial: int, words) -> np.ndarray:
    """Uniform [0, 1) variates keyed by (seed, trial, words[k, :]).

    ``words`` is an (m, w) integer array; one variate per row, with 53-bit
    resolution.  Pure function of its arguments: uint64 arithmetic only,
    no shared state.
    """
    w = _as_words(words)
    h = np.full(w.shape[0], _INIT, dtype=np.uint64)
    h = _mix64(h ^ np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    h = _mix64(h ^ np.uint64(trial & 0xFFFFFFFFFFFFFFFF))
    for k in range(w.shape[1]):
        h = _mix64(h ^ w[:, k])
    return (h >> _S11).astype(np.float64) / _TWO53


def derive_seed(seed: int, *words: int) -> int:
    """Deterministic 64-bit subseed from a seed and integer tags.

    Used to decouple sampling streams (one per campaign row) without any
    generator state.
    """
    h = np.full(1, _INIT, dtype=np.uint64)
    h = _mix64(h ^ np.uint64(seed & 0xFFFFFFFFFFFFFFFF))
    for w in words:
        h = _mix64(h ^ np.uint64(int(w) & 0xFFFFFFFFFFFFFFFF))
    return int(h[0])


@dataclass(frozen=True)
class DistributionSpec:
    """Single-site measure: two-point, uniform, or general finite support."""

    kind: str
    p: float = 0.5
    lo: float = 0.0
    hi: float = 1.0
    values: tuple[float, ...] = ()
    weights: tuple[float, ...] = ()

    @classmethod
    def bernoulli(cls, p: float = 0.5, lo: float = 0.0, hi: float = 1.0):
        """Takes the value ``hi`` with probability p and ``lo`` otherwise."""
        return cls(kind="bernoulli", p=float(p), lo=float(lo), hi=float(hi))

    @classmethod
    def uniform(cls, lo: float, hi: float):
        return cls(kind="uniform", lo=float(lo), hi=float(hi))

    @classmethod
    def finite(cls, values, weights):
        return cls(
            kind="finite",
            values=tuple(float(v) for v in values),
            weights=tuple(float(w) for w in weights),
        )

    @classmethod
    def point_mass(cls, value: float):
        """Degenerate measure; fails validation, for diagnostics only."""
        return cls.finite((value,), (1.0,))


def validate(spec: DistributionSpec) -> list[str]:
    """Check the support conditions; returns the violated clauses ([] if ok).

    Admitted measures must have bounded support on at least two distinct
    points, so every absolute moment is automatically finite.
    """
    violations = []
    if spec.kind == "bernoulli":
        if not all(math.isfinite(v) for v in (spec.p, spec.lo, spec.hi)):
            violations.append("non-finite parameter")
        elif not 0.0 < spec.p < 1.0 or spec.lo == spec.hi:
            violations.append("single-point support")
    elif spec.kind == "uniform":
        if not all(math.isfinite(v) for v in (spec.lo, spec.hi)):
            violations.append("unbounded support")
        elif spec.lo >= spec.hi:
            violations.append("single-point support" if spec.lo == spec.hi else "empty support")
    elif spec.kind == "finite":
        if len(spec.values) != len(spec.weights) or not spec.values:
            violations.append("values/weights length mismatch")
            return violations
        if not all(math.isfinite(v) for v in spec.values):
            violations.append("unbounded support")
        if any(w < 0 for w in spec.weights):
            violations.append("negative weight")
        if abs(sum(spec.weights) - 1.0) > 1e-12:
            violations.append("weights do not sum to 1")
        support = {v for v, w in zip(spec.values, spec.weights) if w > 0}
        if len(support) < 2:
            violations.append("single-point support")
    else:
        violations.append(f"unknown distribution kind {spec.kind!r}")
    return violations


def _transform(spec: DistributionSpec, u: np.ndarray) -> np.ndarray:
    if spec.kind == "bernoulli":
        return np.where(u < spec.p, spec.hi, spec.lo)
    if spec.kind == "uniform":
        return spec.lo + u * (spec.hi - spec.lo)
    if spec.kind == "finite":
        cum = np.cumsum(spec.weights)
        idx = np.minimum(
            np.searchsorted(cum, u, side="right"), len(spec.values) - 1
        )
        return np.asarray(spec.values, dtype=np.float64)[idx]
    raise DistributionError(f"unknown distribution kind {spec.kind!r}")


def draw_values(spec: DistributionSpec, points, seed: int, trial: int) -> np.ndarray:
    """i.i.d. draws from the measure at integer index tuples, one per row.

    No validation is applied here; degenerate measures are allowed for
    diagnostics (transfer-matrix closed-form checks).
    """
    return _transform(spec, hash_uniform01(seed, trial, points))


@dataclass(frozen=True)
class FieldSample:
    """One realization of the i.i.d. field over a finite region of Z^d.

    The same sample serves all particle coordinates: the potential of a
    configuration reads each particle position from this one map.
    """

    region: frozenset[tuple[int, ...]]
    values: dict[tuple[int, ...], float]

    def value(self, point: tuple[int, ...]) -> float:
        try:
            return self.values[tuple(point)]
        except KeyError:
            raise FieldCoverageError(
                f"field sample does not cover lattice point {tuple(point)}"
            ) from None

    def values_at(self, points: np.ndarray) -> np.ndarray:
        """Vectorized lookup for an (m, d) array of points."""
        return np.array([self.value(tuple(p)) for p in points.tolist()])


def sample_field(spec: DistributionSpec, region, seed: int, trial: int) -> FieldSample:
    """Sample the field on ``region``, keyed by (seed, trial).

    Bit-identical for equal arguments regardless of the iteration order of
    ``region`` or of concurrency, since each point is hashed independently.
    """
    violations = validate(spec)
    if violations:
        raise DistributionError(
            "invalid distribution: " + "; ".join(violations)
        )
    pts = sorted(tuple(int(c) for c in p) for p in region)
    if not pts:
        return FieldSample(region=frozenset(), values={})
    vals = draw_values(spec, np.asarray(pts, dtype=np.int64), seed, trial)
    return FieldSample(
        region=frozenset(pts),
        values={p: float(v) for p, v in zip(pts, vals)},
    )
