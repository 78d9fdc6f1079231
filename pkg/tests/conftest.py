import numpy as np
import pytest

from hiercoord.game import EfficiencyModel, GameConfig, efficiency_value

# Lines recorded by the acceptance module, echoed at the end of the run.
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def model():
    return EfficiencyModel(100)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def make_config(n, k=None, sigma2=0.1, rate=1e6, delta=1e-3, order=100):
    k = n if k is None else k
    return GameConfig(n, k, sigma2, (rate,) * n, efficiency_order=order, delta=delta)


def random_instances(count, sizes, seed, carriers_extra=0):
    """Yield ``(config, gains)`` pairs with N drawn from ``sizes`` and exponential gains."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.choice(sizes))
        k = n + int(rng.integers(0, carriers_extra + 1))
        yield make_config(n, k), rng.standard_exponential((n, k))


def grid_best_single_carrier(cfg, gains, powers_above, player, model, points):
    """Brute-force best response: scan single-carrier powers on a dense grid."""
    above = np.asarray(powers_above)[:player]
    gains = np.asarray(gains)
    interference = cfg.noise_variance + (gains[:player] * above).sum(axis=0)
    best = (-1.0, None, None, None)
    for k in range(cfg.n_carriers):
        h = gains[player, k] / interference[k]
        if h <= 0:
            continue
        grid = np.linspace(30.0 / h / points, 30.0 / h, points)
        utility = cfg.rates[player] * efficiency_value(model, grid * h) / grid
        i = int(np.argmax(utility))
        if utility[i] > best[0]:
            best = (utility[i], k, grid[i], grid[1] - grid[0])
    return best


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
