"""Closed-form quantities for two walkers on the infinite d-regular tree and
the discordance curve built from them.

Two independent rate-1 walkers started at the ends of a tree edge: their
distance is a rate-2 walk on {0, 1, ...} stepping up with probability
(d-1)/d and down with probability 1/d.  The skeleton chain started at 1
first hits 0 at step 2s+1 with probability ``C_s (1/d)^(s+1) ((d-1)/d)^s``
(``C_s`` the Catalan numbers), so the meeting-time CDF is a Poisson(2t)
mixture of the partial sums of those first-passage weights.
"""

import math
from functools import lru_cache

import numpy as np

CATALAN_EXACT_MAX = 30


def _check_degree(d):
    if d < 3:
        raise ValueError(f"degree must be at least 3, got {d}")


def theta(d):
    """Escape probability ``(d-2)/(d-1)`` of the tree distance walk."""
    _check_degree(d)
    return (d - 2) / (d - 1)


@lru_cache(maxsize=None)
def _catalan_table():
    c = [1]
    for k in range(CATALAN_EXACT_MAX):
        c.append(c[-1] * 2 * (2 * k + 1) // (k + 2))
    return tuple(c)


def catalan(k):
    """Exact Catalan number ``C(2k, k) / (k + 1)``."""
    if k < 0:
        raise ValueError("Catalan index must be non-negative")
    if k <= CATALAN_EXACT_MAX:
        return _catalan_table()[k]
    return math.comb(2 * k, k) // (k + 1)


def first_passage_weights(d, smax):
    """``a[s] = P(skeleton walk from 1 first hits 0 at step 2s+1)``, s <= smax."""
    _check_degree(d)
    q = 1.0 / d
    p = 1.0 - q
    a = np.empty(smax + 1)
    table = _catalan_table()
    for s in range(min(smax, CATALAN_EXACT_MAX) + 1):
        a[s] = table[s] * q ** (s + 1) * p ** s
    # beyond the exact table: C_{s+1}/C_s = 2(2s+1)/(s+2)
    for s in range(CATALAN_EXACT_MAX, smax):
        a[s + 1] = a[s] * 2.0 * (2 * s + 1) / (s + 2) * p * q
    return a


def _poisson_window(lam, eps):
    """Index range and log-weights covering all but ``eps/2`` of Poisson(lam)."""
    sd = math.sqrt(lam)
    lo = 0 if lam <= 700 else int(math.floor(lam - 12.0 * sd))
    hi = int(math.ceil(lam + 12.0 * sd + 10))
    while True:
        # p_{hi+1} / (1 - lam/(hi+2)) bounds the mass above hi
        log_next = -lam + (hi + 1) * math.log(lam) - math.lgamma(hi + 2)
        if math.exp(log_next) / (1.0 - lam / (hi + 2)) < eps / 2:
            break
        hi += int(sd) + 1
    k = np.arange(lo, hi + 1)
    log_fact = math.lgamma(lo + 1) + np.concatenate([[0.0], np.cumsum(np.log(k[1:]))])
    logw = -lam + k * math.log(lam) - log_fact
    return k, logw


def meeting_cdf_tree(d, t, eps=1e-10):
    """P(walkers from adjacent tree vertices have met by time ``t``).

    Absolute error at most ``eps``; the value lies in ``[0, 1/(d-1)]``.
    """
    _check_degree(d)
    if t < 0:
        raise ValueError("time must be non-negative")
    if not 0 < eps < 1:
        raise ValueError("tolerance must lie in (0, 1)")
    if t == 0:
        return 0.0
    lam = 2.0 * t
    k, logw = _poisson_window(lam, eps)
    a = first_passage_weights(d, (int(k[-1]) - 1) // 2 + 1)
    partial = np.concatenate([[0.0], np.cumsum(a)])
    # kappa jumps allow first passage at steps 1, 3, ..., i.e. s <= (kappa-1)//2
    idx = np.where(k >= 1, (k - 1) // 2 + 1, 0)
    val = float(np.sum(np.exp(logw) * partial[idx]))
    return min(max(val, 0.0), 1.0 / (d - 1))


def f_survival(d, t, eps=1e-10):
    """P(walkers from adjacent tree vertices have not met by time ``t``)."""
    return 1.0 - meeting_cdf_tree(d, t, eps)


def expected_discordance(u, d, t, n, eps=1e-10):
    """Predicted mean discordant-edge density ``2u(1-u) f_d(t) exp(-2 theta_d t / n)``."""
    if not 0 <= u <= 1:
        raise ValueError("u must lie in [0, 1]")
    if t < 0 or n < 1:
        raise ValueError("need t >= 0 and n >= 1")
    return 2 * u * (1 - u) * f_survival(d, t, eps) * math.exp(-2 * theta(d) * t / n)


def plateau(u, d):
    """Moderate-time level ``2u(1-u) theta_d``."""
    return 2 * u * (1 - u) * theta(d)


def fw_variability(u, d, s):
    """``E[B(1-B)]`` at diffusion time ``s`` for dB = sqrt(2 theta_d B(1-B)) dW, B_0 = u."""
    if not 0 <= u <= 1 or s < 0:
        raise ValueError("need u in [0, 1] and s >= 0")
    return u * (1 - u) * math.exp(-2 * theta(d) * s)


def gambler_hit_prob(d, z0):
    """P(distance walk from ``z0`` ever reaches 0) = (d-1)^(-z0)."""
    _check_degree(d)
    if z0 < 0:
        raise ValueError("start must be non-negative")
    return (1.0 / (d - 1)) ** z0


def fd_table(d, times, u=0.5, n=None, eps=1e-10):
    """Rows ``(t, f_d(t), prediction)``; without ``n`` the prediction omits the
    finite-size decay factor."""
    rows = []
    for t in times:
        f = f_survival(d, t, eps)
        pred = 2 * u * (1 - u) * f
        if n is not None:
            pred *= math.exp(-2 * theta(d) * t / n)
        rows.append((float(t), f, pred))
    return rows
