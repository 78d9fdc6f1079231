"""Complete spectrum coordination algorithms.

Every algorithm here ends with each player alone on one carrier, transmitting
at power ``gamma_star * sigma^2 / g``. They differ only in the order in which
players pick their carriers:

* :func:`pi_csc` takes the order as given,
* :func:`delta_ocsc` searches for the order maximising the worst quality
  ratio (bisection over the quality level ``alpha``),
* :func:`delta_mcsc` repeats that search after every commitment,
* :func:`random_coordination` draws the order uniformly at random.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, DomainError, NoUsableCarrierError
from .game import EfficiencyModel, GameConfig, PowerAllocation, _as_channels

__all__ = [
    "QualityRatios",
    "StopReason",
    "OrderingSearchResult",
    "CoordinationOutcome",
    "quality_ratios",
    "pi_csc",
    "ordering_search",
    "delta_ocsc",
    "delta_mcsc",
    "random_coordination",
    "min_position_ratio",
]

Ordering = tuple[int, ...]


@dataclass(frozen=True)
class QualityRatios:
    """Per-player gain ratios relative to the player's best carrier.

    Attributes
    ----------
    rho : ndarray, shape (N, K)
        ``g[n, k] / max_l g[n, l]``.
    rho_sorted : ndarray, shape (N, K)
        Each row of ``rho`` in nonincreasing order; ``rho_sorted[n, l]`` is
        the ratio of player ``n``'s ``(l+1)``-th best carrier.
    sort_order : ndarray, shape (N, K)
        Carrier indices realising ``rho_sorted`` (ties: lower index first).
    """

    rho: np.ndarray
    rho_sorted: np.ndarray
    sort_order: np.ndarray

    @classmethod
    def from_rho(cls, rho: np.ndarray) -> "QualityRatios":
        rho = np.array(rho, dtype=float)
        order = np.argsort(-rho, axis=1, kind="stable")
        ranked = np.take_along_axis(rho, order, axis=1)
        for arr in (rho, ranked, order):
            arr.setflags(write=False)
        return cls(rho=rho, rho_sorted=ranked, sort_order=order)

    def restrict(self, players: Sequence[int], carriers: Sequence[int]) -> "QualityRatios":
        """Ratios of a sub-game, keeping the full-matrix denominators."""
        return QualityRatios.from_rho(self.rho[np.ix_(list(players), list(carriers))])


class StopReason(str, enum.Enum):
    WIDTH_BELOW_DELTA = "width_below_delta"
    ALPHA_EXCEEDS_THRESHOLD = "alpha_exceeds_threshold"
    NO_FEASIBLE_ALPHA = "no_feasible_alpha"


@dataclass(frozen=True)
class OrderingSearchResult:
    alpha_star: float
    ordering: Ordering
    converged_by: StopReason
    iterations: int


@dataclass(frozen=True)
class CoordinationOutcome:
    """Carrier assignment and powers produced by a coordination algorithm.

    ``assignment[n]`` is the carrier of player ``n``; ``ordering`` lists the
    players in the order they picked.
    """

    assignment: tuple[int, ...]
    allocation: PowerAllocation
    ordering: Ordering
    alpha_star: float
    algorithm: str
    search: OrderingSearchResult | None = None


def quality_ratios(channels) -> QualityRatios:
    channels = _as_channels(channels)
    gains = channels.gains
    return QualityRatios.from_rho(gains / gains.max(axis=1, keepdims=True))


def _check_ordering(ordering: Sequence[int], n_players: int) -> Ordering:
    perm = tuple(int(p) for p in ordering)
    if sorted(perm) != list(range(n_players)):
        raise DomainError(f"{perm} is not a permutation of 0..{n_players - 1}")
    return perm


def min_position_ratio(ratios: QualityRatios, ordering: Sequence[int]) -> float:
    """``min_i rho_sorted[ordering[i], i]``: worst quality ratio an ordering can force.

    Under :func:`pi_csc` with this ordering every player keeps at least this
    fraction of its best achievable utility.
    """
    perm = _check_ordering(ordering, ratios.rho.shape[0])
    return float(ratios.rho_sorted[list(perm), np.arange(len(perm))].min())


def pi_csc(
    config: GameConfig,
    channels,
    ordering: Sequence[int],
    model: EfficiencyModel,
    *,
    allow_idle: bool = False,
    algorithm: str = "pi_csc",
    alpha_star: float = 0.0,
) -> CoordinationOutcome:
    """Players pick, in ``ordering``, their strongest carrier not yet taken.

    Parameters
    ----------
    allow_idle : bool
        When a player's remaining carriers all have zero gain it is assigned
        the lowest-index one with zero power instead of raising
        :class:`NoUsableCarrierError`.
    """
    channels = _as_channels(channels)
    channels.check(config)
    perm = _check_ordering(ordering, config.n_players)
    gains = channels.gains
    powers = np.zeros(gains.shape)
    free = np.ones(config.n_carriers, dtype=bool)
    assignment = [0] * config.n_players
    scale = model.gamma_star * config.noise_variance
    for player in perm:
        candidates = np.where(free, gains[player], -np.inf)
        carrier = int(np.argmax(candidates))
        gain = gains[player, carrier]
        if gain > 0:
            powers[player, carrier] = scale / gain
        elif not allow_idle:
            raise NoUsableCarrierError(f"player {player} has only zero-gain carriers left")
        free[carrier] = False
        assignment[player] = carrier
    return CoordinationOutcome(
        assignment=tuple(assignment),
        allocation=PowerAllocation(powers),
        ordering=perm,
        alpha_star=float(alpha_star),
        algorithm=algorithm,
    )


def _latest_free_slot(parent: list[int], slot: int) -> int:
    # Disjoint-set lookup of the largest free slot <= slot; 0 means none.
    root = slot
    while parent[root] != root:
        root = parent[root]
    while parent[slot] != root:
        parent[slot], slot = root, parent[slot]
    return root


def _place_players(rho_sorted: np.ndarray, alpha: float) -> Ordering | None:
    """Try to order the players so that the player at position ``i`` has ``i`` carriers with ratio >= alpha.

    Player ``n`` goes to slot ``l*`` (its count of qualifying carriers) or,
    if that is taken, to the largest free slot below it. Returns the players
    by slot with empty slots dropped, or ``None`` when some player cannot be
    placed.
    """
    n_slots = rho_sorted.shape[1]
    deadlines = np.count_nonzero(rho_sorted >= alpha, axis=1)
    parent = list(range(n_slots + 1))
    owner = [-1] * (n_slots + 1)
    for player, deadline in enumerate(deadlines.tolist()):
        slot = _latest_free_slot(parent, deadline) if deadline else 0
        if slot == 0:
            return None
        owner[slot] = player
        parent[slot] = slot - 1
    return tuple(p for p in owner[1:] if p >= 0)


def search_quality_level(
    rho_sorted: np.ndarray,
    delta: float,
    gamma_star: float,
    *,
    early_stop: bool = False,
) -> OrderingSearchResult:
    """Bisection over the quality level for a matrix of sorted ratios.

    Rows of ``rho_sorted`` must be nonincreasing. Orderings refer to row
    positions.
    """
    if not 0 < delta < 1:
        raise DomainError("delta must lie in (0, 1)")
    n_players = rho_sorted.shape[0]
    threshold = 1.0 / (1.0 + gamma_star)
    lo, hi = 0.0, 1.0
    best: Ordering | None = None
    iterations = 0
    while True:
        if hi - lo < delta:
            reason = StopReason.WIDTH_BELOW_DELTA
            break
        if early_stop and lo > threshold:
            reason = StopReason.ALPHA_EXCEEDS_THRESHOLD
            break
        alpha = 0.5 * (lo + hi)
        iterations += 1
        placed = _place_players(rho_sorted, alpha)
        if placed is None:
            hi = alpha
        else:
            lo, best = alpha, placed
    if best is None:
        return OrderingSearchResult(0.0, tuple(range(n_players)), StopReason.NO_FEASIBLE_ALPHA, iterations)
    return OrderingSearchResult(lo, best, reason, iterations)


def ordering_search(
    ratios: QualityRatios,
    delta: float,
    gamma_star: float,
    *,
    early_stop: bool = False,
) -> OrderingSearchResult:
    """Largest quality level ``alpha*`` (to within ``delta``) and an ordering achieving it.

    The returned ordering guarantees that the player at position ``i`` has
    at least ``i + 1`` carriers whose ratio is ``>= alpha*``. With
    ``early_stop`` the search also halts as soon as the feasible level
    exceeds ``1 / (1 + gamma_star)``, which already certifies an exact
    equilibrium but leaves ``alpha*`` unrefined.
    """
    return search_quality_level(ratios.rho_sorted, delta, gamma_star, early_stop=early_stop)


def delta_ocsc(
    config: GameConfig,
    channels,
    model: EfficiencyModel,
    *,
    early_stop: bool = False,
) -> CoordinationOutcome:
    """Search the best ordering once, then run :func:`pi_csc` with it."""
    channels = _as_channels(channels)
    channels.check(config)
    result = ordering_search(quality_ratios(channels), config.delta, model.gamma_star, early_stop=early_stop)
    outcome = pi_csc(config, channels, result.ordering, model, algorithm="ocsc", alpha_star=result.alpha_star)
    return _with_search(outcome, result)


def _with_search(outcome: CoordinationOutcome, result: OrderingSearchResult) -> CoordinationOutcome:
    return CoordinationOutcome(
        assignment=outcome.assignment,
        allocation=outcome.allocation,
        ordering=outcome.ordering,
        alpha_star=outcome.alpha_star,
        algorithm=outcome.algorithm,
        search=result,
    )


def delta_mcsc(
    config: GameConfig,
    channels,
    model: EfficiencyModel,
    *,
    early_stop: bool = False,
) -> tuple[CoordinationOutcome, list[float]]:
    """Re-run the ordering search after every commitment.

    At each of the ``N`` steps the search runs on the remaining players and
    carriers, with ratios still normalised by each player's best carrier in
    the full matrix. The first player of the resulting ordering takes its
    strongest remaining carrier and leaves the game.

    Returns
    -------
    outcome, alpha_trace
        ``alpha_trace[t]`` is the quality level found at step ``t``; the
        outcome's ``alpha_star`` is ``alpha_trace[0]``.
    """
    channels = _as_channels(channels)
    channels.check(config)
    gains = channels.gains
    rho = quality_ratios(channels).rho
    players = list(range(config.n_players))
    carriers = list(range(config.n_carriers))
    assignment = [0] * config.n_players
    powers = np.zeros(gains.shape)
    scale = model.gamma_star * config.noise_variance
    committed: list[int] = []
    trace: list[float] = []
    for _ in range(config.n_players):
        sub = rho[np.ix_(players, carriers)]
        ranked = -np.sort(-sub, axis=1)
        result = search_quality_level(ranked, config.delta, model.gamma_star, early_stop=early_stop)
        trace.append(result.alpha_star)
        leader = players[result.ordering[0]]
        remaining = gains[leader, carriers]
        pick = int(np.argmax(remaining))
        carrier = carriers[pick]
        if remaining[pick] <= 0:
            raise NoUsableCarrierError(f"player {leader} has only zero-gain carriers left")
        powers[leader, carrier] = scale / gains[leader, carrier]
        assignment[leader] = carrier
        committed.append(leader)
        players.remove(leader)
        carriers.remove(carrier)
    outcome = CoordinationOutcome(
        assignment=tuple(assignment),
        allocation=PowerAllocation(powers),
        ordering=tuple(committed),
        alpha_star=trace[0],
        algorithm="mcsc",
    )
    return outcome, trace


def random_coordination(
    config: GameConfig,
    channels,
    model: EfficiencyModel,
    rng_seed,
    *,
    allow_idle: bool = False,
) -> CoordinationOutcome:
    """:func:`pi_csc` with a uniformly random ordering.

    ``rng_seed`` is anything :func:`numpy.random.default_rng` accepts.
    """
    rng = np.random.default_rng(rng_seed)
    ordering = rng.permutation(config.n_players)
    return pi_csc(config, channels, ordering, model, allow_idle=allow_idle, algorithm="random")


def outcome_from_assignment(
    config: GameConfig,
    channels,
    assignment: Sequence[int],
    model: EfficiencyModel,
    algorithm: str,
) -> CoordinationOutcome:
    """Coordinated outcome for an explicit injective player-to-carrier map."""
    assignment = tuple(int(k) for k in assignment)
    if len(assignment) != config.n_players or len(set(assignment)) != len(assignment):
        raise DimensionError("assignment must map every player to a distinct carrier")
    channels = _as_channels(channels)
    channels.check(config)
    gains = channels.gains
    powers = np.zeros(gains.shape)
    rows = np.arange(config.n_players)
    chosen = gains[rows, list(assignment)]
    if np.any(chosen <= 0):
        raise NoUsableCarrierError("assignment uses a zero-gain carrier")
    powers[rows, list(assignment)] = model.gamma_star * config.noise_variance / chosen
    return CoordinationOutcome(
        assignment=assignment,
        allocation=PowerAllocation(powers),
        ordering=tuple(range(config.n_players)),
        alpha_star=math.nan,
        algorithm=algorithm,
    )
