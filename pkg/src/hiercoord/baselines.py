"""Reference solutions and checks used to judge the coordination algorithms."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .coordination import CoordinationOutcome, QualityRatios, min_position_ratio, outcome_from_assignment
from .errors import DimensionError, DomainError, NotCoordinatedError
from .game import (
    EfficiencyModel,
    GameConfig,
    PowerAllocation,
    _as_channels,
    compute_sinr,
    compute_utilities,
)

__all__ = [
    "EquilibriumReport",
    "AssignmentOptimum",
    "max_utilities",
    "exhaustive_optimum",
    "matching_optimum",
    "equilibrium_check",
    "prop2_certificate",
    "waterfill",
    "spectrum_pooling",
    "default_pooling_budget",
    "rho_preserving_gains",
    "ladder_gains",
]

EXHAUSTIVE_MAX_PLAYERS = 9
_CHUNK = 65536


@dataclass(frozen=True)
class EquilibriumReport:
    """Result of the unilateral-deviation check.

    ``per_player_slack[n]`` is the relative utility gain player ``n`` could
    obtain by moving alone to another carrier; ``epsilon`` is the largest one.
    """

    is_exact: bool
    epsilon: float
    per_player_slack: np.ndarray
    worst_player: int


@dataclass(frozen=True)
class AssignmentOptimum:
    best_assignment: tuple[int, ...]
    best_welfare: float
    per_player_max: np.ndarray


def max_utilities(config: GameConfig, channels, model: EfficiencyModel) -> np.ndarray:
    """Utility each player gets alone on its best carrier: ``R f(g*) max_k g / (g* sigma^2)``."""
    channels = _as_channels(channels)
    return (
        config.rate_vector
        * model.peak_success
        * channels.gains.max(axis=1)
        / (model.gamma_star * config.noise_variance)
    )


def _welfare(config, channels, outcome, model) -> float:
    return compute_utilities(config, channels, outcome.allocation, model).welfare


def exhaustive_optimum(
    config: GameConfig,
    channels,
    model: EfficiencyModel,
    *,
    max_players: int = EXHAUSTIVE_MAX_PLAYERS,
) -> AssignmentOptimum:
    """Welfare-maximising coordinated outcome by enumerating every injective assignment.

    There are ``K! / (K - N)!`` candidates, so ``N`` is capped. Ties go to the
    lexicographically smallest assignment.
    """
    channels = _as_channels(channels)
    channels.check(config)
    n, k = channels.shape
    if n > max_players:
        raise DimensionError(
            f"exhaustive search refused for N={n} > {max_players}; "
            "use matching_optimum, which solves the same problem as a linear assignment"
        )
    weights = (config.rate_vector * model.peak_success / (model.gamma_star * config.noise_variance))[:, None]
    weights = weights * channels.gains
    rows = np.arange(n)
    best_value, best = -math.inf, None
    candidates = itertools.permutations(range(k), n)
    while True:
        chunk = np.array(list(itertools.islice(candidates, _CHUNK)), dtype=np.intp)
        if chunk.size == 0:
            break
        chunk = chunk.reshape(-1, n)
        values = weights[rows, chunk].sum(axis=1)
        idx = int(np.argmax(values))
        if values[idx] > best_value:
            best_value, best = values[idx], tuple(chunk[idx].tolist())
    outcome = outcome_from_assignment(config, channels, best, model, "exhaustive")
    return AssignmentOptimum(
        best_assignment=best,
        best_welfare=_welfare(config, channels, outcome, model),
        per_player_max=max_utilities(config, channels, model),
    )


def matching_optimum(config: GameConfig, channels, model: EfficiencyModel) -> AssignmentOptimum:
    """Same optimum as :func:`exhaustive_optimum`, via a linear assignment solver.

    Coordinated utilities are proportional to the gain of the assigned
    carrier, so welfare maximisation is a weighted bipartite matching.
    """
    channels = _as_channels(channels)
    channels.check(config)
    weights = config.rate_vector[:, None] * channels.gains
    rows, cols = linear_sum_assignment(weights, maximize=True)
    assignment = tuple(int(c) for c in cols[np.argsort(rows)])
    outcome = outcome_from_assignment(config, channels, assignment, model, "exhaustive")
    return AssignmentOptimum(
        best_assignment=assignment,
        best_welfare=_welfare(config, channels, outcome, model),
        per_player_max=max_utilities(config, channels, model),
    )


def equilibrium_check(
    config: GameConfig,
    channels,
    outcome: CoordinationOutcome,
    model: EfficiencyModel,
) -> EquilibriumReport:
    """Unilateral deviations from a coordinated outcome.

    A player moving to an idle carrier ``k`` reaches utility proportional to
    ``g[n, k]``; moving onto a carrier already used by someone transmitting
    at SINR ``gamma_star`` it faces interference ``gamma_star * sigma^2`` and
    reaches ``g[n, k] / (1 + gamma_star)``. Its current utility is
    proportional to ``g[n, assignment[n]]``. The occupant keeps its power.
    """
    channels = _as_channels(channels)
    channels.check(config)
    alloc = outcome.allocation
    if alloc.shape != channels.shape or not alloc.is_complete_coordination:
        raise NotCoordinatedError("equilibrium_check needs a completely coordinated allocation")
    gains = channels.gains
    n_players = config.n_players
    assignment = np.asarray(outcome.assignment)
    powers = alloc.powers
    occupied = np.zeros(config.n_carriers, dtype=bool)
    transmitting = powers[np.arange(n_players), assignment] > 0
    occupied[assignment[transmitting]] = True

    discount = np.where(occupied, 1.0 / (1.0 + model.gamma_star), 1.0)
    alternatives = gains * discount
    alternatives[np.arange(n_players), assignment] = -np.inf
    best_alternative = alternatives.max(axis=1)

    slack = np.zeros(n_players)
    for n in range(n_players):
        current = gains[n, assignment[n]] if transmitting[n] else 0.0
        if best_alternative[n] <= current:
            continue
        slack[n] = math.inf if current == 0 else best_alternative[n] / current - 1.0
    worst = int(np.argmax(slack))
    epsilon = float(slack[worst])
    return EquilibriumReport(is_exact=epsilon == 0.0, epsilon=epsilon, per_player_slack=slack, worst_player=worst)


def prop2_certificate(ratios: QualityRatios, ordering) -> float:
    """Largest ``alpha`` such that every player under ``ordering`` keeps ``alpha`` of its best utility."""
    return min_position_ratio(ratios, ordering)


def rho_preserving_gains(channels) -> np.ndarray:
    """Gains ``max_l g[n, l] * rho_sorted[n, k]``: same sorted ratios, best carriers first."""
    channels = _as_channels(channels)
    return -np.sort(-channels.gains, axis=1)


def ladder_gains(n_players: int, n_carriers: int, eps: float) -> np.ndarray:
    """Strongly correlated gains on which only the identity ordering is good.

    With 1-based indices, ``g[n, k] = 1 - k eps`` for ``k <= n`` and
    ``(K - k) eps`` otherwise. Ordering the players ``1, 2, ..., N`` keeps
    each of them near its best utility; with ``K = N`` every other ordering
    leaves some player with at most ``K eps`` of it.
    """
    n = np.arange(1, n_players + 1)[:, None]
    k = np.arange(1, n_carriers + 1)[None, :]
    return np.where(k <= n, 1.0 - k * eps, (n_carriers - k) * eps)


# ---------------------------------------------------------------------------
# Throughput-maximising spectrum pooling
# ---------------------------------------------------------------------------


def waterfill(effective_gain: np.ndarray, budget: float) -> tuple[np.ndarray, float]:
    """Rate-maximising split of ``budget`` over parallel channels.

    Returns powers ``max(0, mu - 1/h)`` and the water level ``mu``; channels
    with zero effective gain never receive power.
    """
    if not budget > 0:
        raise DomainError("power budget must be positive")
    h = np.asarray(effective_gain, dtype=float)
    floors = np.full(h.shape, np.inf)
    np.divide(1.0, h, out=floors, where=h > 0)
    order = np.argsort(floors, kind="stable")
    ranked = floors[order]
    usable = int(np.count_nonzero(np.isfinite(ranked)))
    if usable == 0:
        raise DomainError("no channel with positive gain")
    cumulative = np.cumsum(ranked[:usable])
    level = math.nan
    for m in range(usable, 0, -1):
        candidate = (budget + cumulative[m - 1]) / m
        if candidate > ranked[m - 1]:
            level = candidate
            break
    powers = np.maximum(level - floors, 0.0)
    powers[~np.isfinite(floors)] = 0.0
    return powers, level


def default_pooling_budget(config: GameConfig, model: EfficiencyModel) -> float:
    """``gamma_star * sigma^2``: the energy of one coordinated unit-gain transmission."""
    return model.gamma_star * config.noise_variance


def spectrum_pooling(config: GameConfig, channels, power_budget: float) -> tuple[PowerAllocation, np.ndarray]:
    """Sequential water-filling in hierarchy order.

    Each player spreads ``power_budget`` over all carriers against noise plus
    the interference of the players above it.

    Returns
    -------
    allocation, rates
        Powers and per-player spectral efficiency ``sum_k log2(1 + sinr)``
        in bits/s/Hz.
    """
    channels = _as_channels(channels)
    channels.check(config)
    gains = channels.gains
    powers = np.zeros(gains.shape)
    interference = np.full(config.n_carriers, config.noise_variance)
    for n in range(config.n_players):
        powers[n], _ = waterfill(gains[n] / interference, power_budget)
        interference = interference + gains[n] * powers[n]
    allocation = PowerAllocation(powers)
    sinr = compute_sinr(config, channels, allocation).sinr
    return allocation, np.log2(1.0 + sinr).sum(axis=1)
