"""Experiment configuration: JSON schema, validation, campaign parameters.

The config document is plain JSON with three required sections (``model``,
``wegner``, ``run``) and an optional ``sweep`` section for the Lyapunov
energy sweep; see the README for the full schema.  Parsing and
serialization round-trip exactly.
"""

import json
import math
from dataclasses import dataclass

from .hamiltonian import InteractionSpec
from .randomfield import DistributionSpec, derive_seed, validate
from .wegner import EventQuery, delta0

SCHEMA_VERSION = 1

EVENT_KINDS = ("fixed", "variable", "two_volume")


class ConfigError(ValueError):
    """The config document is structurally or semantically invalid."""


@dataclass(frozen=True)
class ModelConfig:
    n: int
    d: int
    L_list: tuple[int, ...]
    distribution: DistributionSpec
    interaction: InteractionSpec
    h: float


@dataclass(frozen=True)
class WegnerConfig:
    """Resonance thresholds; ``L0 = None`` tracks the campaign length L."""

    beta: float
    sigma: float
    L0: int | None
    q: float
    E0: float
    half_width: float | None


@dataclass(frozen=True)
class RunConfig:
    event: str
    trials: int
    seed: int
    workers: int
    offset: tuple[int, ...] | None


@dataclass(frozen=True)
class SweepConfig:
    e_min: float
    e_max: float
    points: int
    steps: int


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelConfig
    wegner: WegnerConfig
    run: RunConfig
    sweep: SweepConfig | None


def _get(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"missing key {key!r} in section {where!r}")
    return section[key]


def _parse_distribution(obj: dict) -> DistributionSpec:
    kind = _get(obj, "kind", "model.distribution")
    if kind == "bernoulli":
        return DistributionSpec.bernoulli(
            p=obj.get("p", 0.5), lo=obj.get("lo", 0.0), hi=obj.get("hi", 1.0)
        )
    if kind == "uniform":
        return DistributionSpec.uniform(
            _get(obj, "lo", "model.distribution"), _get(obj, "hi", "model.distribution")
        )
    if kind == "finite":
        return DistributionSpec.finite(
            _get(obj, "values", "model.distribution"),
            _get(obj, "weights", "model.distribution"),
        )
    raise ConfigError(f"unknown distribution kind {kind!r}")


def _parse_interaction(obj: dict) -> InteractionSpec:
    kind = _get(obj, "kind", "model.interaction")
    if kind == "none":
        return InteractionSpec.none()
    if kind == "pair_contact":
        return InteractionSpec.pair_contact(
            _get(obj, "range", "model.interaction"),
            _get(obj, "amplitude", "model.interaction"),
        )
    raise ConfigError(f"unknown interaction kind {kind!r}")


def parse_config(text: str) -> ExperimentConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config root must be a JSON object")
    model = _get(doc, "model", "config")
    wegner = _get(doc, "wegner", "config")
    run = _get(doc, "run", "config")
    offset = run.get("offset")
    sweep = doc.get("sweep")
    return ExperimentConfig(
        model=ModelConfig(
            n=int(_get(model, "n", "model")),
            d=int(_get(model, "d", "model")),
            L_list=tuple(int(L) for L in _get(model, "L_list", "model")),
            distribution=_parse_distribution(_get(model, "distribution", "model")),
            interaction=_parse_interaction(_get(model, "interaction", "model")),
            h=float(model.get("h", 0.0)),
        ),
        wegner=WegnerConfig(
            beta=float(_get(wegner, "beta", "wegner")),
            sigma=float(_get(wegner, "sigma", "wegner")),
            L0=None if wegner.get("L0") is None else int(wegner["L0"]),
            q=float(_get(wegner, "q", "wegner")),
            E0=float(_get(wegner, "E0", "wegner")),
            half_width=None
            if wegner.get("half_width") is None
            else float(wegner["half_width"]),
        ),
        run=RunConfig(
            event=str(_get(run, "event", "run")),
            trials=int(_get(run, "trials", "run")),
            seed=int(run.get("seed", 0)),
            workers=int(run.get("workers", 1)),
            offset=None if offset is None else tuple(int(o) for o in offset),
        ),
        sweep=None
        if sweep is None
        else SweepConfig(
            e_min=float(_get(sweep, "e_min", "sweep")),
            e_max=float(_get(sweep, "e_max", "sweep")),
            points=int(_get(sweep, "points", "sweep")),
            steps=int(_get(sweep, "steps", "sweep")),
        ),
    )


def _distribution_dict(spec: DistributionSpec) -> dict:
    if spec.kind == "bernoulli":
        return {"kind": "bernoulli", "p": spec.p, "lo": spec.lo, "hi": spec.hi}
    if spec.kind == "uniform":
        return {"kind": "uniform", "lo": spec.lo, "hi": spec.hi}
    return {"kind": "finite", "values": list(spec.values), "weights": list(spec.weights)}


def _interaction_dict(spec: InteractionSpec) -> dict:
    if spec.kind == "none":
        return {"kind": "none"}
    return {"kind": "pair_contact", "range": spec.radius, "amplitude": spec.amplitude}


def config_to_dict(config: ExperimentConfig) -> dict:
    doc = {
        "model": {
            "n": config.model.n,
            "d": config.model.d,
            "L_list": list(config.model.L_list),
            "distribution": _distribution_dict(config.model.distribution),
            "interaction": _interaction_dict(config.model.interaction),
            "h": config.model.h,
        },
        "wegner": {
            "beta": config.wegner.beta,
            "sigma": config.wegner.sigma,
            "L0": config.wegner.L0,
            "q": config.wegner.q,
            "E0": config.wegner.E0,
            "half_width": config.wegner.half_width,
        },
        "run": {
            "event": config.run.event,
            "trials": config.run.trials,
            "seed": config.run.seed,
            "workers": config.run.workers,
            "offset": None if config.run.offset is None else list(config.run.offset),
        },
    }
    if config.sweep is not None:
        doc["sweep"] = {
            "e_min": config.sweep.e_min,
            "e_max": config.sweep.e_max,
            "points": config.sweep.points,
            "steps": config.sweep.steps,
        }
    return doc


def serialize_config(config: ExperimentConfig) -> str:
    return json.dumps(config_to_dict(config), indent=2, sort_keys=True) + "\n"


def validate_config(config: ExperimentConfig) -> list[str]:
    """All config violations, empty when runnable."""
    problems = [f"distribution: {v}" for v in validate(config.model.distribution)]
    if config.model.n < 1 or config.model.d < 1:
        problems.append(f"need n >= 1 and d >= 1, got n={config.model.n}, d={config.model.d}")
    if not config.model.L_list:
        problems.append("L_list must not be empty")
    if any(L < 1 for L in config.model.L_list):
        problems.append(f"every L in L_list must be >= 1, got {list(config.model.L_list)}")
    if not 0.0 < config.wegner.beta < 1.0:
        problems.append(f"beta must lie in (0, 1), got {config.wegner.beta}")
    if config.wegner.sigma <= 0.0:
        problems.append(f"sigma must be positive, got {config.wegner.sigma}")
    if config.wegner.L0 is not None and config.wegner.L0 < 1:
        problems.append(f"L0 must be a positive integer or null, got {config.wegner.L0}")
    if config.wegner.half_width is not None and config.wegner.half_width <= 0.0:
        problems.append(f"half_width must be positive or null, got {config.wegner.half_width}")
    if config.run.event not in EVENT_KINDS:
        problems.append(f"run.event must be one of {EVENT_KINDS}, got {config.run.event!r}")
    if config.run.trials < 1:
        problems.append(f"trials must be >= 1, got {config.run.trials}")
    if config.run.workers < 1:
        problems.append(f"workers must be >= 1, got {config.run.workers}")
    nd = config.model.n * config.model.d
    if config.run.offset is not None and len(config.run.offset) != nd:
        problems.append(
            f"offset length {len(config.run.offset)} does not match n*d = {nd}"
        )
    if config.sweep is not None:
        if config.sweep.points < 1:
            problems.append("sweep.points must be >= 1")
        if config.sweep.steps < 1000:
            problems.append("sweep.steps must be >= 1000")
        if config.sweep.e_min > config.sweep.e_max:
            problems.append("sweep.e_min must not exceed sweep.e_max")
    return problems


def effective_L0(config: ExperimentConfig, L: int) -> int:
    return L if config.wegner.L0 is None else config.wegner.L0


def event_window(config: ExperimentConfig, L: int) -> tuple[float, float]:
    """Energy interval [E0 - delta, E0 + delta] for a campaign at length L."""
    w = config.wegner
    half = (
        w.half_width
        if w.half_width is not None
        else delta0(w.sigma, effective_L0(config, L), w.beta)
    )
    return (w.E0 - half, w.E0 + half)


def event_query_for(config: ExperimentConfig, L: int) -> EventQuery:
    """The event family probed at one campaign length."""
    w = config.wegner
    eps = math.exp(-w.sigma * float(L) ** w.beta)
    kind = config.run.event
    return EventQuery(
        kind=kind,
        n=config.model.n,
        d=config.model.d,
        L=L,
        distribution=config.model.distribution,
        interaction=config.model.interaction,
        h=config.model.h,
        eps=eps,
        energy=w.E0 if kind == "fixed" else None,
        window=event_window(config, L) if kind != "fixed" else None,
        offset=config.run.offset,
    )


def row_seed(seed: int, L: int, row: int) -> int:
    """Per-row sampling stream; campaigns at different L stay decoupled."""
    return derive_seed(seed, 0x524F57, L, row)
