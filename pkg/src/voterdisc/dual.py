"""Random walks dual to the voter model.

Independent and coalescing rate-1 walkers share one event loop: the next
jump of ``k`` active walkers comes after an Exp(k) time and moves a uniform
walker to a uniform neighbour.  Walkers can only start sharing a vertex when
one of them jumps, so checking the landing vertex is an exact meeting test.
"""

from __future__ import annotations

import numba
import numpy as np

from .graph import RegularGraph
from .rng import make_rng

RUNNING, MET, COALESCED = 0, 1, 2
OUTCOMES = {MET: "met", COALESCED: "coalesced"}


@numba.njit(cache=True)
def _walk(adj, pos, ids, occ, nact, clock, rng, t_stop, coalescing, discrete, stop_at_meet):
    """Run walkers until ``t_stop``, a meeting (if requested) or a single
    survivor in coalescing mode.

    clock = [t, next_jump]; nact = [active walkers].  Returns a status code.
    """
    d = adj.shape[1]
    k = nact[0]
    t_next = clock[1]
    while t_next <= t_stop:
        i = int(rng.random() * k)
        v = pos[i]
        w = adj[v, int(rng.random() * d)]
        occ[v] -= 1
        pos[i] = w
        met = occ[w] > 0
        if met and coalescing:
            # walker i merges into the one already at w
            k -= 1
            pos[i] = pos[k]
            ids[i], ids[k] = ids[k], ids[i]
        else:
            occ[w] += 1
        t_now = t_next
        if discrete:
            t_next = t_now + 1.0
        else:
            t_next = t_now - np.log(1.0 - rng.random()) / k
        if (met and stop_at_meet) or (coalescing and k == 1):
            clock[0] = t_now
            clock[1] = t_next
            nact[0] = k
            return COALESCED if coalescing and k == 1 else MET
    clock[0] = t_stop
    clock[1] = t_next
    nact[0] = k
    return RUNNING


class WalkerSystem:
    """Walkers on a graph with an occupancy index.

    ``mode`` is ``"independent"`` or ``"coalescing"``; ``clock`` is
    ``"continuous"`` (rate-1 walkers) or ``"discrete"`` (one uniformly chosen
    walker moves per unit step).
    """

    def __init__(self, graph: RegularGraph, positions, mode="independent", clock="continuous", seed=0):
        if mode not in ("independent", "coalescing"):
            raise ValueError(f"unknown mode {mode!r}")
        if clock not in ("continuous", "discrete"):
            raise ValueError(f"unknown clock {clock!r}")
        self.graph = graph
        self.mode = mode
        self.clock = clock
        self.rng = make_rng(seed)
        pos = np.asarray(positions, dtype=np.int64).copy()
        ids = np.arange(len(pos), dtype=np.int64)
        if mode == "coalescing":
            _, first = np.unique(pos, return_index=True)
            first.sort()
            pos, ids = pos[first], ids[first]
        self._pos = np.concatenate([pos, np.zeros(0, np.int64)])
        self._ids = ids
        self._occ = np.bincount(pos, minlength=graph.n).astype(np.int64)
        self._nact = np.array([len(pos)], dtype=np.int64)
        self.t = 0.0
        self._next = self._draw_gap()

    def _draw_gap(self):
        if self.clock == "discrete":
            return self.t + 1.0
        k = self._nact[0]
        return self.t + self.rng.standard_exponential() / k if k else np.inf

    @property
    def active(self) -> int:
        return int(self._nact[0])

    @property
    def positions(self) -> np.ndarray:
        return self._pos[: self.active].copy()

    @property
    def walker_ids(self) -> np.ndarray:
        return self._ids[: self.active].copy()

    @property
    def occupancy(self) -> dict[int, set[int]]:
        occ: dict[int, set[int]] = {}
        for v, i in zip(self.positions.tolist(), self.walker_ids.tolist()):
            occ.setdefault(v, set()).add(i)
        return occ

    def occupancy_counts(self) -> np.ndarray:
        return self._occ.copy()

    def has_collision(self) -> bool:
        return bool(np.any(self._occ[self._pos[: self.active]] > 1))

    def run(self, t_stop, stop_at_meet=False):
        """Advance to ``t_stop``; returns ``"met"``, ``"coalesced"`` or ``None``.

        On an early stop ``self.t`` is the time of the deciding jump.
        """
        if self.mode == "coalescing" and self.active <= 1:
            return "coalesced"
        if stop_at_meet and self.mode == "independent" and self.has_collision():
            return "met"
        clock = np.array([self.t, self._next])
        status = _walk(
            self.graph.adjacency, self._pos, self._ids, self._occ, self._nact, clock, self.rng,
            float(t_stop), self.mode == "coalescing", self.clock == "discrete", stop_at_meet,
        )
        self.t, self._next = float(clock[0]), float(clock[1])
        return OUTCOMES.get(status)


def meeting_time_pair(g: RegularGraph, x: int, y: int, t_cap: float, seed):
    """First co-location time of independent walkers from ``x`` and ``y``;
    ``None`` if censored at ``t_cap``."""
    if x == y:
        return 0.0
    ws = WalkerSystem(g, [x, y], "independent", seed=seed)
    return ws.t if ws.run(t_cap, stop_at_meet=True) == "met" else None


def meeting_time_stationary(g: RegularGraph, t_cap: float, seed):
    """Meeting time from two independent uniform starts (equal starts give 0)."""
    rng = make_rng(seed)
    x, y = (int(v) for v in rng.integers(0, g.n, size=2))
    if x == y:
        return 0.0
    ws = WalkerSystem(g, [x, y], "independent", seed=rng)
    return ws.t if ws.run(t_cap, stop_at_meet=True) == "met" else None


def coalescence_time(g: RegularGraph, t_cap: float, seed):
    """Time until one walker is left from one walker per vertex, or ``None``."""
    if g.n == 1:
        return 0.0
    ws = WalkerSystem(g, np.arange(g.n), "coalescing", seed=seed)
    return ws.t if ws.run(t_cap) == "coalesced" else None


def survival_curve(samples, grid, t_cap=None):
    """Empirical ``S(t) = P(tau > t)`` on ``grid``.

    ``samples`` holds times, with ``None`` for runs censored at ``t_cap``.
    All censoring happens at the common cap, so the plain fraction is exact
    below it.
    """
    grid = np.asarray(grid, dtype=float)
    censored = np.array([s is None for s in samples], dtype=bool)
    if censored.any():
        if t_cap is None:
            raise ValueError("censored samples need t_cap")
    if t_cap is not None and grid.size and grid.max() > t_cap:
        raise ValueError("survival grid extends beyond the censoring time")
    times = np.array([np.inf if s is None else s for s in samples], dtype=float)
    if times.size == 0:
        raise ValueError("no samples")
    times.sort()
    # count of samples strictly greater than each grid point
    above = times.size - np.searchsorted(times, grid, side="right")
    return [(float(t), float(a) / times.size) for t, a in zip(grid, above)]


@numba.njit(cache=True)
def _product_chain_visits(adj, steps, replicas, rng):
    n, d = adj.shape
    counts = np.zeros(replicas, dtype=np.int64)
    for r in range(replicas):
        at_diag = True
        x = 0
        y = 0
        c = 0
        for _ in range(steps):
            if at_diag:
                # from the diagonal: a uniform directed edge
                x = int(rng.random() * n)
                y = adj[x, int(rng.random() * d)]
                at_diag = False
            else:
                if rng.random() < 0.5:
                    x = adj[x, int(rng.random() * d)]
                else:
                    y = adj[y, int(rng.random() * d)]
                if x == y:
                    at_diag = True
                    c += 1
        counts[r] = c
    return counts


def product_chain_visits(g: RegularGraph, T: int, replicas: int, seed) -> np.ndarray:
    """Per-replica diagonal visit counts in steps 1..T."""
    return _product_chain_visits(g.adjacency, int(T), int(replicas), make_rng(seed))


def product_chain_returns(g: RegularGraph, T: int, replicas: int, seed):
    """Monte Carlo estimate of the expected number of visits to the diagonal
    in steps ``0..T`` of the asynchronous pair chain started on the diagonal.

    Returns ``(estimate, standard_error)``.
    """
    if T < 0:
        raise ValueError("T must be non-negative")
    if T == 0:
        return 1.0, 0.0
    visits = product_chain_visits(g, T, replicas, seed)
    se = visits.std(ddof=1) / np.sqrt(replicas) if replicas > 1 else np.nan
    return 1.0 + float(visits.mean()), float(se)


def sample_edge_nu(g: RegularGraph, seed):
    """A uniform directed edge: uniform vertex, then uniform neighbour."""
    rng = make_rng(seed)
    x = int(rng.integers(g.n))
    return x, int(g.adjacency[x, rng.integers(g.d)])


@numba.njit(cache=True)
def _interacting(adj, pos, t, rng):
    """Fraction of edges (walkers 2e, 2e+1) meeting another edge's walker by t."""
    d = adj.shape[1]
    w = pos.shape[0]
    K = w // 2
    hit = np.zeros(K, dtype=np.bool_)
    for a in range(w):
        for b in range(a + 1, w):
            if a // 2 != b // 2 and pos[a] == pos[b]:
                hit[a // 2] = True
                hit[b // 2] = True
    s = -np.log(1.0 - rng.random()) / w
    while s <= t:
        a = int(rng.random() * w)
        v = adj[pos[a], int(rng.random() * d)]
        pos[a] = v
        for b in range(w):
            if b // 2 != a // 2 and pos[b] == v:
                hit[a // 2] = True
                hit[b // 2] = True
        s -= np.log(1.0 - rng.random()) / w
    return hit.sum() / K


@numba.njit(cache=True)
def _nu_edges(adj, K, rng):
    n, d = adj.shape
    pos = np.empty(2 * K, dtype=np.int64)
    for e in range(K):
        x = int(rng.random() * n)
        pos[2 * e] = x
        pos[2 * e + 1] = adj[x, int(rng.random() * d)]
    return pos


def interaction_fraction(g: RegularGraph, K: int, t: float, replicas: int, seed):
    """Mean fraction of ``K`` nu-sampled edges whose walkers meet a walker of
    another edge by time ``t`` (independent walkers, two per edge)."""
    if K < 2:
        raise ValueError("need at least two edges")
    rng = make_rng(seed)
    fr = [_interacting(g.adjacency, _nu_edges(g.adjacency, int(K), rng), float(t), rng) for _ in range(replicas)]
    return float(np.mean(fr))


def interaction_fraction_from(g: RegularGraph, edges, t: float, seed):
    """Same statistic for one run from the given endpoint pairs."""
    pos = np.asarray(edges, dtype=np.int64).reshape(-1).copy()
    if pos.size < 4:
        raise ValueError("need at least two edges")
    return float(_interacting(g.adjacency, pos, float(t), make_rng(seed)))
