"""Monte Carlo harness: random channels, per-trial algorithm runs, aggregation.

Trials are seeded from ``(seed, trial_index)`` alone, so they can run in any
order or in parallel and still reduce to the same numbers. Means use
:func:`math.fsum`, whose exactly rounded result does not depend on summation
order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .baselines import (
    EXHAUSTIVE_MAX_PLAYERS,
    default_pooling_budget,
    equilibrium_check,
    exhaustive_optimum,
    matching_optimum,
    spectrum_pooling,
)
from .coordination import delta_mcsc, delta_ocsc, outcome_from_assignment, random_coordination
from .errors import DomainError
from .game import ChannelMatrix, EfficiencyModel, GameConfig, compute_sinr, compute_utilities

__all__ = [
    "ALGORITHMS",
    "FADING_MODELS",
    "ScenarioSpec",
    "AlgorithmMetrics",
    "TrialMetrics",
    "AggregateMetrics",
    "generate_channels",
    "run_trial",
    "run_scenario",
    "aggregate",
    "sweep",
    "mean_alpha_trace",
]

ALGORITHMS = ("ocsc", "mcsc", "random", "pooling", "exhaustive")
FADING_MODELS = ("exponential", "rayleigh")


def generate_channels(n_players: int, n_carriers: int, seed, fading: str = "exponential") -> ChannelMatrix:
    """Independent Rayleigh-fading gains, reproducible from ``seed``.

    ``fading="exponential"`` draws power gains ``|h|^2`` (unit-mean
    exponential); ``fading="rayleigh"`` draws the amplitude ``|h|`` itself,
    scaled so that ``E[g^2] = 1``. ``seed`` is anything
    :func:`numpy.random.default_rng` accepts.
    """
    if n_players < 1 or n_carriers < 1:
        raise DomainError("matrix dimensions must be positive")
    if fading not in FADING_MODELS:
        raise DomainError(f"unknown fading model {fading!r}; expected one of {FADING_MODELS}")
    rng = np.random.default_rng(seed)
    gains = rng.standard_exponential((n_players, n_carriers))
    if fading == "rayleigh":
        gains = np.sqrt(gains)
    # standard_exponential can return exactly 0 with probability ~2**-53.
    return ChannelMatrix(np.maximum(gains, np.finfo(float).tiny))


@dataclass(frozen=True)
class ScenarioSpec:
    """One experiment configuration.

    ``n_carriers=None`` means ``K = N``. The noise variance is derived from
    ``snr_db`` with SNR defined as ``1 / sigma^2``.
    """

    n_players: int
    n_carriers: int | None = None
    snr_db: float = 10.0
    trials: int = 10000
    seed: int = 0
    algorithms: tuple[str, ...] = ("ocsc", "mcsc", "random", "pooling")
    efficiency_order: int = 100
    delta: float = 1e-3
    rate: float = 1e6
    fading: str = "rayleigh"
    pooling_budget: float | None = None
    early_stop: bool = False

    def __post_init__(self):
        algorithms = tuple(a for a in ALGORITHMS if a in set(self.algorithms))
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise DomainError(f"unknown algorithms {sorted(unknown)}; expected a subset of {ALGORITHMS}")
        if not algorithms:
            raise DomainError("at least one algorithm is required")
        object.__setattr__(self, "algorithms", algorithms)
        if self.trials < 1:
            raise DomainError("trials must be at least 1")
        if self.fading not in FADING_MODELS:
            raise DomainError(f"unknown fading model {self.fading!r}")
        if self.pooling_budget is not None and not self.pooling_budget > 0:
            raise DomainError("pooling_budget must be positive")
        self.config  # validates N, K, delta, order

    @property
    def config(self) -> GameConfig:
        return GameConfig.uniform(
            self.n_players,
            self.n_carriers,
            snr_db=self.snr_db,
            rate=self.rate,
            efficiency_order=self.efficiency_order,
            delta=self.delta,
        )

    @property
    def noise_variance(self) -> float:
        return self.config.noise_variance

    def as_dict(self) -> dict:
        return {
            "n_players": self.n_players,
            "n_carriers": self.n_players if self.n_carriers is None else self.n_carriers,
            "snr_db": self.snr_db,
            "noise_variance": self.noise_variance,
            "trials": self.trials,
            "seed": self.seed,
            "algorithms": list(self.algorithms),
            "efficiency_order": self.efficiency_order,
            "delta": self.delta,
            "rate": self.rate,
            "fading": self.fading,
            "pooling_budget": self.pooling_budget,
            "early_stop": self.early_stop,
        }


@dataclass(frozen=True)
class AlgorithmMetrics:
    """Per-trial figures for one algorithm.

    ``mean_ee`` is in bits/joule and ``mean_se`` in bits/s/Hz, both averaged
    over users. Equilibrium fields are ``None``/NaN for pooling, which is not
    a coordinated outcome.
    """

    mean_ee: float
    mean_se: float
    welfare: float
    alpha_star: float = math.nan
    exact_equilibrium: bool | None = None
    epsilon: float = math.nan


@dataclass(frozen=True)
class TrialMetrics:
    trial_index: int
    results: dict[str, AlgorithmMetrics]
    alpha_trace: tuple[float, ...] | None = None


@dataclass(frozen=True)
class AggregateMetrics:
    """Trial averages for one algorithm at one axis value."""

    axis_value: float
    algorithm: str
    mean_ee: float
    se_ee: float
    mean_se: float
    prob_exact: float
    prob_alpha_ge_threshold: float
    mean_alpha_star: float


def _trial_seeds(seed: int, trial_index: int) -> tuple[np.random.SeedSequence, np.random.SeedSequence]:
    base = np.random.SeedSequence(entropy=seed, spawn_key=(trial_index,))
    channel_seed, order_seed = base.spawn(2)
    return channel_seed, order_seed


def _coordinated_metrics(config, channels, outcome, model) -> AlgorithmMetrics:
    utilities = compute_utilities(config, channels, outcome.allocation, model)
    sinr = compute_sinr(config, channels, outcome.allocation).sinr
    report = equilibrium_check(config, channels, outcome, model)
    return AlgorithmMetrics(
        mean_ee=math.fsum(utilities.utilities) / config.n_players,
        mean_se=math.fsum(np.log2(1.0 + sinr).sum(axis=1)) / config.n_players,
        welfare=utilities.welfare,
        alpha_star=outcome.alpha_star,
        exact_equilibrium=report.is_exact,
        epsilon=report.epsilon,
    )


def run_trial(spec: ScenarioSpec, trial_index: int) -> TrialMetrics:
    """Run every requested algorithm on one freshly drawn channel matrix."""
    config = spec.config
    model = EfficiencyModel(spec.efficiency_order)
    channel_seed, order_seed = _trial_seeds(spec.seed, trial_index)
    channels = generate_channels(config.n_players, config.n_carriers, channel_seed, spec.fading)
    results: dict[str, AlgorithmMetrics] = {}
    trace = None
    for name in spec.algorithms:
        if name == "ocsc":
            outcome = delta_ocsc(config, channels, model, early_stop=spec.early_stop)
            results[name] = _coordinated_metrics(config, channels, outcome, model)
        elif name == "mcsc":
            outcome, alphas = delta_mcsc(config, channels, model, early_stop=spec.early_stop)
            trace = tuple(alphas)
            results[name] = _coordinated_metrics(config, channels, outcome, model)
        elif name == "random":
            outcome = random_coordination(config, channels, model, order_seed)
            results[name] = _coordinated_metrics(config, channels, outcome, model)
        elif name == "exhaustive":
            if config.n_players <= EXHAUSTIVE_MAX_PLAYERS:
                optimum = exhaustive_optimum(config, channels, model)
            else:
                optimum = matching_optimum(config, channels, model)
            outcome = outcome_from_assignment(config, channels, optimum.best_assignment, model, "exhaustive")
            metrics = _coordinated_metrics(config, channels, outcome, model)
            results[name] = replace(metrics, alpha_star=math.nan)
        elif name == "pooling":
            budget = spec.pooling_budget or default_pooling_budget(config, model)
            allocation, rates = spectrum_pooling(config, channels, budget)
            utilities = compute_utilities(config, channels, allocation, model)
            results[name] = AlgorithmMetrics(
                mean_ee=math.fsum(utilities.utilities) / config.n_players,
                mean_se=math.fsum(rates) / config.n_players,
                welfare=utilities.welfare,
            )
    return TrialMetrics(trial_index=trial_index, results=results, alpha_trace=trace)


def _run_chunk(spec: ScenarioSpec, indices: Sequence[int]) -> list[TrialMetrics]:
    return [run_trial(spec, i) for i in indices]


def run_scenario(spec: ScenarioSpec, *, workers: int = 1) -> list[TrialMetrics]:
    """All trials of ``spec``, sorted by trial index.

    With ``workers > 1`` the trials are spread over a process pool; the
    returned list is the same either way.
    """
    indices = list(range(spec.trials))
    if workers <= 1 or spec.trials == 1:
        return _run_chunk(spec, indices)
    chunks = [indices[i::workers] for i in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_run_chunk, [spec] * len(chunks), chunks)
        trials = [t for part in parts for t in part]
    return sorted(trials, key=lambda t: t.trial_index)


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values) if values else math.nan


def _standard_error(values: Sequence[float]) -> float:
    n = len(values)
    if n < 2:
        return 0.0
    centre = _mean(values)
    variance = math.fsum((v - centre) ** 2 for v in values) / (n - 1)
    return math.sqrt(variance / n)


def aggregate(
    trials: Iterable[TrialMetrics],
    algorithms: Sequence[str],
    threshold: float,
    axis_value: float = math.nan,
) -> list[AggregateMetrics]:
    """Reduce trials to one row per algorithm.

    ``threshold`` is ``1 / (1 + gamma_star)``. Probabilities are NaN for
    algorithms without an equilibrium verdict or a quality level.
    """
    trials = sorted(trials, key=lambda t: t.trial_index)
    rows = []
    for name in algorithms:
        metrics = [t.results[name] for t in trials]
        ee = [m.mean_ee for m in metrics]
        verdicts = [m.exact_equilibrium for m in metrics if m.exact_equilibrium is not None]
        alphas = [m.alpha_star for m in metrics if not math.isnan(m.alpha_star)]
        rows.append(
            AggregateMetrics(
                axis_value=axis_value,
                algorithm=name,
                mean_ee=_mean(ee),
                se_ee=_standard_error(ee),
                mean_se=_mean([m.mean_se for m in metrics]),
                prob_exact=_mean([float(v) for v in verdicts]),
                prob_alpha_ge_threshold=_mean([float(a >= threshold) for a in alphas]),
                mean_alpha_star=_mean(alphas),
            )
        )
    return rows


def sweep(
    template: ScenarioSpec,
    axis: str,
    values: Sequence[float],
    *,
    workers: int = 1,
) -> list[AggregateMetrics]:
    """Aggregate rows for each value of ``axis`` (``"users"`` or ``"snr"``).

    On the users axis ``K`` follows ``N`` unless the template fixes
    ``n_carriers``. Every row reuses the template's seed.
    """
    if not values:
        raise DomainError("sweep needs at least one axis value")
    if axis not in ("users", "snr"):
        raise DomainError(f"unknown sweep axis {axis!r}; expected 'users' or 'snr'")
    threshold = EfficiencyModel(template.efficiency_order).equilibrium_threshold
    rows: list[AggregateMetrics] = []
    for value in values:
        if axis == "users":
            spec = replace(template, n_players=int(value))
        else:
            spec = replace(template, snr_db=float(value))
        trials = run_scenario(spec, workers=workers)
        rows.extend(aggregate(trials, spec.algorithms, threshold, axis_value=value))
    return rows


def mean_alpha_trace(trials: Iterable[TrialMetrics]) -> np.ndarray:
    """Average quality level per step of the repeated ordering search."""
    traces = [t.alpha_trace for t in trials if t.alpha_trace is not None]
    if not traces:
        raise DomainError("no trial recorded a quality-level trace; include 'mcsc' in the algorithms")
    return np.array([math.fsum(col) / len(col) for col in zip(*traces)])
