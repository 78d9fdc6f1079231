"""Hierarchical multi-carrier energy-efficiency game.

Players are indexed ``0 .. N-1`` by hierarchy level: row 0 is the super
leader and only sees noise, row ``n`` sees interference from rows ``0 .. n-1``
on every carrier it uses. Carriers are indexed ``0 .. K-1``.

The efficiency (packet success rate) function is ``f(x) = (1 - exp(-x))**M``
and every energy-efficient best response operates at the SINR ``gamma_star``
solving ``x f'(x) = f(x)``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionError,
    DomainError,
    NoUsableCarrierError,
    UnsupportedOrderError,
)

__all__ = [
    "GameConfig",
    "EfficiencyModel",
    "ChannelMatrix",
    "PowerAllocation",
    "SinrProfile",
    "UtilityVector",
    "efficiency_value",
    "efficiency_derivative",
    "solve_gamma_star",
    "compute_sinr",
    "compute_utilities",
    "best_response",
    "noise_variance_from_snr_db",
]

# Upper end of the root bracket for gamma_star.
GAMMA_BRACKET_LIMIT = 1e3
GAMMA_TOLERANCE = 1e-12


def _frozen_array(values, ndim: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float, copy=True)
    if arr.ndim != ndim:
        raise DimensionError(f"{name} must be {ndim}-dimensional, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def noise_variance_from_snr_db(snr_db: float) -> float:
    """Noise variance for a given SNR in dB, with SNR defined as ``1 / sigma^2``."""
    return 10.0 ** (-snr_db / 10.0)


@dataclass(frozen=True)
class GameConfig:
    """Static parameters of one game instance.

    Parameters
    ----------
    n_players, n_carriers : int
        Number of players ``N`` and carriers ``K``; ``K >= N`` is required.
    noise_variance : float
        Gaussian noise variance ``sigma^2`` in watts.
    rates : sequence of float
        Transmission rate of every player in bits/s.
    efficiency_order : int
        Block length ``M`` of the efficiency function.
    delta : float
        Resolution of the quality-level bisection.
    """

    n_players: int
    n_carriers: int
    noise_variance: float
    rates: tuple[float, ...]
    efficiency_order: int = 100
    delta: float = 1e-3

    def __post_init__(self):
        object.__setattr__(self, "rates", tuple(float(r) for r in self.rates))
        if self.n_players < 1 or self.n_carriers < 1:
            raise DimensionError("n_players and n_carriers must be positive")
        if self.n_carriers < self.n_players:
            raise DimensionError(
                f"need at least as many carriers as players (N={self.n_players}, K={self.n_carriers})"
            )
        if len(self.rates) != self.n_players:
            raise DimensionError(f"expected {self.n_players} rates, got {len(self.rates)}")
        if not self.noise_variance > 0:
            raise DomainError("noise_variance must be positive")
        if any(not r > 0 for r in self.rates):
            raise DomainError("all rates must be positive")
        if not 0 < self.delta < 1:
            raise DomainError("delta must lie in (0, 1)")
        if self.efficiency_order < 2:
            raise UnsupportedOrderError("efficiency_order must be at least 2")

    @classmethod
    def uniform(
        cls,
        n_players: int,
        n_carriers: int | None = None,
        *,
        snr_db: float = 10.0,
        rate: float = 1e6,
        efficiency_order: int = 100,
        delta: float = 1e-3,
    ) -> "GameConfig":
        """Config with a common rate, ``K = N`` by default and noise set from an SNR."""
        return cls(
            n_players=n_players,
            n_carriers=n_players if n_carriers is None else n_carriers,
            noise_variance=noise_variance_from_snr_db(snr_db),
            rates=(rate,) * n_players,
            efficiency_order=efficiency_order,
            delta=delta,
        )

    @property
    def rate_vector(self) -> np.ndarray:
        return np.asarray(self.rates, dtype=float)


# ---------------------------------------------------------------------------
# Efficiency function and gamma_star
# ---------------------------------------------------------------------------


def _check_order(order: int) -> None:
    if int(order) != order or order < 2:
        raise UnsupportedOrderError(
            f"efficiency order M={order} is not supported; x f'(x) = f(x) has a positive root only for M >= 2"
        )


def _first_order_sign(order: int, x: float) -> float:
    # x f'(x) - f(x) = (1 - e^-x)^(M-1) * (M x e^-x - (1 - e^-x)); the first
    # factor is positive for x > 0 and underflows near 0, so only the second
    # factor is used to locate the sign change.
    return order * x * math.exp(-x) + math.expm1(-x)


def first_order_residual(order: int, x: float) -> float:
    """``x f'(x) - f(x)`` for the efficiency function of block length ``order``."""
    success = -math.expm1(-x)
    return success ** (order - 1) * (order * x * math.exp(-x) - success)


@functools.lru_cache(maxsize=64)
def solve_gamma_star(order: int) -> float:
    """Unique positive root of ``x f'(x) = f(x)`` for ``f(x) = (1 - e^-x)^M``.

    The bracket starts at ``[1e-9, 1]``; its upper end doubles until the
    residual turns negative, then plain bisection runs to an absolute width of
    ``1e-12``.

    Raises
    ------
    UnsupportedOrderError
        If ``order < 2``.
    ConvergenceError
        If no sign change is found below ``1e3``.
    """
    _check_order(order)
    order = int(order)
    lo, hi = 1e-9, 1.0
    while _first_order_sign(order, hi) >= 0:
        lo = hi
        hi *= 2.0
        if hi > GAMMA_BRACKET_LIMIT:
            raise ConvergenceError(f"no root of x f'(x) = f(x) below {GAMMA_BRACKET_LIMIT} for M={order}")
    while hi - lo > GAMMA_TOLERANCE:
        mid = 0.5 * (lo + hi)
        if _first_order_sign(order, mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class EfficiencyModel:
    """Efficiency function of block length ``order`` with its cached ``gamma_star``."""

    order: int
    gamma_star: float = field(default=float("nan"))

    def __post_init__(self):
        _check_order(self.order)
        if math.isnan(self.gamma_star):
            object.__setattr__(self, "gamma_star", solve_gamma_star(self.order))
        if not self.gamma_star > 0:
            raise DomainError("gamma_star must be positive")

    @property
    def equilibrium_threshold(self) -> float:
        """``1 / (1 + gamma_star)``; quality levels above it certify an exact equilibrium."""
        return 1.0 / (1.0 + self.gamma_star)

    @property
    def peak_success(self) -> float:
        """``f(gamma_star)``."""
        return float(efficiency_value(self, self.gamma_star))

    def value(self, x):
        return efficiency_value(self, x)

    def derivative(self, x):
        return efficiency_derivative(self, x)


def _check_nonnegative(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise DomainError("efficiency function is defined for x >= 0 only")
    return arr


def efficiency_value(model: EfficiencyModel, x):
    """``(1 - e^-x)^M``; accepts scalars or arrays."""
    arr = _check_nonnegative(x)
    out = (-np.expm1(-arr)) ** model.order
    return float(out) if out.ndim == 0 else out


def efficiency_derivative(model: EfficiencyModel, x):
    """``M e^-x (1 - e^-x)^(M-1)``; accepts scalars or arrays."""
    arr = _check_nonnegative(x)
    m = model.order
    out = m * np.exp(-arr) * (-np.expm1(-arr)) ** (m - 1)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Channels, powers, SINR and utilities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChannelMatrix:
    """``N x K`` non-negative power gains; every row needs one positive entry."""

    gains: np.ndarray

    def __post_init__(self):
        gains = _frozen_array(self.gains, 2, "gains")
        if np.any(~np.isfinite(gains)) or np.any(gains < 0):
            raise DomainError("channel gains must be finite and non-negative")
        if np.any(gains.max(axis=1) <= 0):
            raise DomainError("every player needs at least one carrier with a positive gain")
        object.__setattr__(self, "gains", gains)

    @property
    def shape(self) -> tuple[int, int]:
        return self.gains.shape

    @property
    def best_carriers(self) -> np.ndarray:
        """Index of each player's strongest carrier (lowest index on ties)."""
        return np.argmax(self.gains, axis=1)

    def check(self, config: GameConfig) -> None:
        if self.gains.shape != (config.n_players, config.n_carriers):
            raise DimensionError(
                f"channel matrix is {self.gains.shape}, config expects "
                f"({config.n_players}, {config.n_carriers})"
            )


@dataclass(frozen=True)
class PowerAllocation:
    """``N x K`` non-negative transmit powers in watts."""

    powers: np.ndarray

    def __post_init__(self):
        powers = _frozen_array(self.powers, 2, "powers")
        if np.any(~np.isfinite(powers)) or np.any(powers < 0):
            raise DomainError("powers must be finite and non-negative")
        object.__setattr__(self, "powers", powers)

    @classmethod
    def zeros(cls, n_players: int, n_carriers: int) -> "PowerAllocation":
        return cls(np.zeros((n_players, n_carriers)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.powers.shape

    @property
    def is_complete_coordination(self) -> bool:
        """At most one active carrier per player and no carrier shared."""
        active = self.powers > 0
        if np.any(active.sum(axis=1) > 1):
            return False
        return bool(np.all(active.sum(axis=0) <= 1))


@dataclass(frozen=True)
class SinrProfile:
    sinr: np.ndarray
    effective_gain: np.ndarray


@dataclass(frozen=True)
class UtilityVector:
    utilities: np.ndarray
    throughputs: np.ndarray

    @property
    def welfare(self) -> float:
        return math.fsum(self.utilities)


def _as_channels(channels) -> ChannelMatrix:
    return channels if isinstance(channels, ChannelMatrix) else ChannelMatrix(channels)


def _as_powers(alloc) -> np.ndarray:
    return alloc.powers if isinstance(alloc, PowerAllocation) else np.asarray(alloc, dtype=float)


def _interference(config: GameConfig, gains: np.ndarray, powers: np.ndarray) -> np.ndarray:
    """Noise plus interference from higher levels, per player and carrier."""
    received = gains * powers
    from_above = np.cumsum(received, axis=0) - received
    return config.noise_variance + from_above


def compute_sinr(config: GameConfig, channels, alloc) -> SinrProfile:
    """SINR ``gamma_n^k = p_n^k * h_n^k`` with the hierarchical effective gain ``h_n^k``."""
    channels = _as_channels(channels)
    channels.check(config)
    powers = _as_powers(alloc)
    if powers.shape != channels.shape:
        raise DimensionError(f"powers have shape {powers.shape}, channels {channels.shape}")
    effective = channels.gains / _interference(config, channels.gains, powers)
    return SinrProfile(sinr=effective * powers, effective_gain=effective)


def compute_utilities(config: GameConfig, channels, alloc, model: EfficiencyModel) -> UtilityVector:
    """Energy efficiency (bits/joule) and throughput (bits/s) of every player.

    A player transmitting nothing gets zero utility.
    """
    powers = _as_powers(alloc)
    profile = compute_sinr(config, channels, powers)
    throughput = config.rate_vector * efficiency_value(model, profile.sinr).sum(axis=1)
    total_power = powers.sum(axis=1)
    utilities = np.zeros(config.n_players)
    active = total_power > 0
    utilities[active] = throughput[active] / total_power[active]
    return UtilityVector(utilities=utilities, throughputs=throughput)


def best_response(
    config: GameConfig,
    channels,
    predecessors,
    player: int,
    model: EfficiencyModel,
) -> tuple[int, np.ndarray]:
    """Best response of ``player`` to the powers of the levels above it.

    Parameters
    ----------
    predecessors : PowerAllocation or array_like
        Powers with at least ``player`` rows; only rows ``0 .. player-1``
        are read.
    player : int
        Hierarchy level of the responding player.

    Returns
    -------
    (carrier, power_row) : (int, np.ndarray)
        The carrier with the largest effective gain (lowest index on ties)
        and a one-hot power row placing SINR ``gamma_star`` on it.
    """
    channels = _as_channels(channels)
    channels.check(config)
    if not 0 <= player < config.n_players:
        raise DimensionError(f"player index {player} out of range")
    above = _as_powers(predecessors)[:player]
    if above.shape != (player, config.n_carriers):
        raise DimensionError(f"need powers for the {player} players above, got shape {above.shape}")
    interference = config.noise_variance + (channels.gains[:player] * above).sum(axis=0)
    effective = channels.gains[player] / interference
    carrier = int(np.argmax(effective))
    if effective[carrier] <= 0:
        raise NoUsableCarrierError(f"player {player} has no carrier with a positive gain")
    row = np.zeros(config.n_carriers)
    row[carrier] = model.gamma_star / effective[carrier]
    return carrier, row

