"""Euler-Maruyama for the Fisher-Wright diffusion
``dB = sqrt(2 theta_d B (1 - B)) dW`` with absorption at 0 and 1.

Steps that overshoot the boundary are clamped and the path is frozen from
then on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .analytic import theta
from .rng import make_rng

DEFAULT_DT = 1e-4


@dataclass
class DiffusionPath:
    dt: float
    s: np.ndarray
    values: np.ndarray
    absorbed: bool
    absorption_time: float | None

    def rows(self):
        return zip(self.s.tolist(), self.values.tolist())


def _nsteps(horizon, dt):
    if dt <= 0:
        raise ValueError("dt must be positive")
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    k = int(round(horizon / dt))
    if abs(k * dt - horizon) > 1e-9 * max(1.0, horizon):
        raise ValueError(f"horizon {horizon} is not a multiple of dt {dt}")
    return k


@numba.njit(cache=True)
def _em_step(b, coef, z):
    if b <= 0.0 or b >= 1.0:
        return b
    v = b * (1.0 - b)
    b = b + np.sqrt(coef * v) * z
    if b <= 0.0:
        return 0.0
    if b >= 1.0:
        return 1.0
    return b


@numba.njit(cache=True)
def _path(u, coef, nsteps, rng, out):
    b = u
    out[0] = b
    hit = -1
    if b <= 0.0 or b >= 1.0:
        hit = 0
    for i in range(nsteps):
        b = _em_step(b, coef, rng.standard_normal())
        out[i + 1] = b
        if hit < 0 and (b <= 0.0 or b >= 1.0):
            hit = i + 1
    return hit


@numba.njit(cache=True)
def _endpoints(u, coef_fine, nsteps, factor, replicas, rng, fine, coarse):
    # the coarse path uses the sum of `factor` fine increments, so both
    # schemes are driven by the same Brownian path
    scale = 1.0 / np.sqrt(factor)
    coef_coarse = coef_fine * factor
    for r in range(replicas):
        bf = u
        bc = u
        acc = 0.0
        for i in range(nsteps):
            z = rng.standard_normal()
            bf = _em_step(bf, coef_fine, z)
            acc += z
            if (i + 1) % factor == 0:
                bc = _em_step(bc, coef_coarse, acc * scale)
                acc = 0.0
        fine[r] = bf
        coarse[r] = bc


def simulate_fw(u, d, horizon, dt=DEFAULT_DT, seed=0) -> DiffusionPath:
    if not 0 <= u <= 1:
        raise ValueError("u must lie in [0, 1]")
    k = _nsteps(horizon, dt)
    out = np.empty(k + 1)
    hit = _path(float(u), 2.0 * theta(d) * dt, k, make_rng(seed), out)
    s = np.arange(k + 1) * dt
    return DiffusionPath(dt, s, out, hit >= 0, None if hit < 0 else float(s[hit]))


def endpoint_samples(u, d, s, dt=DEFAULT_DT, replicas=1000, seed=0) -> np.ndarray:
    """Independent draws of the diffusion at time ``s``."""
    return coupled_endpoints(u, d, s, dt, 1, replicas, seed)[0]


def coupled_endpoints(u, d, s, dt, factor, replicas, seed):
    """Endpoints at step ``dt`` and at step ``factor * dt`` on shared noise."""
    if not 0 <= u <= 1:
        raise ValueError("u must lie in [0, 1]")
    k = _nsteps(s, dt)
    if k % factor:
        raise ValueError("s must be a multiple of the coarse step")
    fine = np.empty(replicas)
    coarse = np.empty(replicas)
    _endpoints(float(u), 2.0 * theta(d) * dt, k, int(factor), int(replicas), make_rng(seed), fine, coarse)
    return fine, coarse


def write_endpoints(sink, values):
    """Single-column CSV (header ``value``) of endpoint samples."""
    text = "value\n" + "".join(f"{float(v):.17g}\n" for v in values)
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        with open(sink, "w") as fh:
            fh.write(text)
