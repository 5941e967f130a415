import io
import math

import numpy as np
import pytest

from voterdisc.analytic import fw_variability, theta
from voterdisc.diffusion import coupled_endpoints, endpoint_samples, simulate_fw, write_endpoints


def test_boundary_starts_are_absorbed():
    p = simulate_fw(0.0, 3, 1.0, 1e-3, 0)
    assert p.absorbed and p.absorption_time == 0.0 and np.all(p.values == 0)
    p = simulate_fw(1.0, 3, 1.0, 1e-3, 0)
    assert p.absorbed and np.all(p.values == 1)


def test_parameter_validation():
    with pytest.raises(ValueError):
        simulate_fw(1.5, 3, 1.0)
    with pytest.raises(ValueError):
        simulate_fw(0.5, 3, 1.0, dt=0)
    with pytest.raises(ValueError):
        simulate_fw(0.5, 3, -1.0)
    with pytest.raises(ValueError):
        simulate_fw(0.5, 3, 1.00005, dt=1e-4 * 3)
    with pytest.raises(ValueError):
        coupled_endpoints(0.5, 3, 1.0, 1e-3, 3, 10, 0)


@pytest.mark.parametrize("seed", range(20))
def test_paths_stay_in_range_and_freeze(seed):
    p = simulate_fw(0.1, 5, 4.0, 1e-3, seed)
    assert p.values.min() >= 0 and p.values.max() <= 1
    assert p.s[0] == 0 and p.s[-1] == pytest.approx(4.0)
    if p.absorbed:
        k = int(round(p.absorption_time / p.dt))
        assert np.all(p.values[k:] == p.values[k]) and p.values[k] in (0.0, 1.0)
        assert np.all((p.values[:k] > 0) & (p.values[:k] < 1))


def test_absorption_happens_for_small_start():
    hits = [simulate_fw(0.02, 3, 4.0, 1e-3, s).absorbed for s in range(50)]
    assert any(hits)


def test_zero_horizon():
    b = endpoint_samples(0.3, 3, 0.0, 1e-4, 100, 1)
    assert np.all(b == 0.3)


def test_range_of_discordance_proxy():
    b = endpoint_samples(0.5, 3, 1.0, 1e-3, 5000, 2)
    f = 2 * theta(3) * b * (1 - b)
    assert f.min() >= 0 and f.max() <= theta(3) / 2


@pytest.mark.parametrize("s", [0.25, 0.5, 1.0, 2.0])
def test_martingale(s):
    R = 20_000
    b = endpoint_samples(0.5, 3, s, 1e-3, R, int(100 * s))
    assert abs(b.mean() - 0.5) <= 4 * b.std(ddof=1) / math.sqrt(R)


def test_long_horizon_fixation():
    R = 4000
    b = endpoint_samples(0.3, 3, 20.0, 1e-2, R, 4)
    assert np.all((b == 0) | (b == 1)) or np.mean((b > 0) & (b < 1)) < 0.01
    p = np.mean(b == 1)
    assert abs(p - 0.3) <= 4 * math.sqrt(0.3 * 0.7 / R)


def test_moment_decay_and_coupling():
    R = 40_000
    fine, coarse = coupled_endpoints(0.5, 3, 1.0, 1e-3, 4, R, 6)
    target = fw_variability(0.5, 3, 1.0)
    for b, dt in ((fine, 1e-3), (coarse, 4e-3)):
        v = b * (1 - b)
        se = v.std(ddof=1) / math.sqrt(R)
        assert abs(v.mean() - target) <= 4 * se + 0.1 * dt
    # both schemes share a Brownian path, so endpoints are strongly correlated
    assert np.corrcoef(fine, coarse)[0, 1] > 0.95


def test_coupled_factor_one_is_identical():
    fine, coarse = coupled_endpoints(0.4, 4, 0.5, 1e-3, 1, 100, 3)
    assert np.array_equal(fine, coarse)


def test_reproducible():
    a = endpoint_samples(0.5, 3, 0.5, 1e-3, 50, 9)
    b = endpoint_samples(0.5, 3, 0.5, 1e-3, 50, 9)
    assert np.array_equal(a, b)


def test_write_endpoints(tmp_path):
    vals = np.array([0.0, 0.25, 1 / 3])
    buf = io.StringIO()
    write_endpoints(buf, vals)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "value" and [float(x) for x in lines[1:]] == vals.tolist()
    write_endpoints(tmp_path / "e.csv", vals)
    assert (tmp_path / "e.csv").read_text() == buf.getvalue()
