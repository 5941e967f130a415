"""Small statistics helpers for the experiment layer."""

import numpy as np


def ks_statistic(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("KS statistic needs two non-empty samples")
    pts = np.concatenate([a, b])
    fa = np.searchsorted(a, pts, side="right") / a.size
    fb = np.searchsorted(b, pts, side="right") / b.size
    return float(np.max(np.abs(fa - fb)))


def mean_se(x, axis=0):
    x = np.asarray(x, dtype=float)
    r = x.shape[axis]
    mean = x.mean(axis=axis)
    se = x.std(axis=axis, ddof=1) / np.sqrt(r) if r > 1 else np.zeros_like(mean)
    return mean, se


def linear_fit(x, y, sigma=None):
    """Weighted least squares ``y ~ a + b x``; returns (slope, intercept,
    slope_se, intercept_se).  ``sigma`` are per-point standard errors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = np.ones_like(x) if sigma is None else 1.0 / np.asarray(sigma, dtype=float) ** 2
    X = np.column_stack([np.ones_like(x), x])
    XtW = X.T * w
    cov = np.linalg.inv(XtW @ X)
    intercept, slope = cov @ (XtW @ y)
    if sigma is None:
        resid = y - intercept - slope * x
        dof = max(len(x) - 2, 1)
        cov = cov * (resid @ resid) / dof
    return float(slope), float(intercept), float(np.sqrt(cov[1, 1])), float(np.sqrt(cov[0, 0]))


def log_linear_fit(x, means, ses=None):
    """Fit ``log(mean) ~ a + b x`` with delta-method weights ``se / mean``."""
    means = np.asarray(means, dtype=float)
    if np.any(means <= 0):
        raise ValueError("log-linear fit needs positive means")
    sig = None if ses is None else np.asarray(ses, dtype=float) / means
    if sig is not None and np.any(sig <= 0):
        sig = None
    return linear_fit(x, np.log(means), sig)


def exponential_rate(grid, survival):
    """Rate of an exponential tail from ``(t, S(t))`` pairs: minus the slope of log S."""
    grid = np.asarray(grid, dtype=float)
    s = np.asarray(survival, dtype=float)
    keep = s > 0
    slope, intercept, slope_se, _ = linear_fit(grid[keep], np.log(s[keep]))
    return -slope, intercept, slope_se


def parse_grid(spec: str) -> np.ndarray:
    """``"lin:a:b:k"`` or ``"geo:a:b:k"`` into an array of k points."""
    parts = spec.split(":")
    if len(parts) != 4 or parts[0] not in ("lin", "geo"):
        raise ValueError(f"bad grid spec {spec!r}; expected lin:a:b:k or geo:a:b:k")
    a, b, k = float(parts[1]), float(parts[2]), int(parts[3])
    if k < 1:
        raise ValueError("grid needs at least one point")
    if parts[0] == "lin":
        return np.linspace(a, b, k)
    if a <= 0 or b <= 0:
        raise ValueError("geometric grid needs positive endpoints")
    return np.geomspace(a, b, k)
