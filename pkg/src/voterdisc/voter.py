"""Continuous-time voter model with incremental discordance bookkeeping.

Every vertex rings at rate 1 and copies a uniformly chosen neighbour.  The
superposition of the n clocks is a single rate-n Poisson process, so the
event loop draws the next ring time, a uniform vertex and a uniform
neighbour.  A flip at ``x`` only changes the status of the d edges at
``x``, which keeps each event O(d).
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numba
import numpy as np

from .graph import RegularGraph
from .rng import make_rng


@numba.njit(cache=True)
def _flip_delta(adj, op, x):
    # discordant edges at x before the flip is a; after it is d - a
    a = 0
    ox = op[x]
    for k in range(adj.shape[1]):
        if op[adj[x, k]] != ox:
            a += 1
    return adj.shape[1] - 2 * a


@numba.njit(cache=True)
def _advance(adj, op, clock, counts, rng, t_target, stop_at_consensus):
    """Apply all rings with time <= t_target.

    clock = [t, next_ring], counts = [b, disc].  With ``stop_at_consensus``
    the loop halts right after the ring that makes disc zero and returns
    that ring's time; otherwise returns -1.
    """
    n, d = adj.shape
    t_next = clock[1]
    b = counts[0]
    disc = counts[1]
    hit = -1.0
    if b == 0 or b == n:
        # absorbed: nothing can change; keep the clock memoryless
        clock[0] = t_target
        if t_next <= t_target:
            clock[1] = t_target - np.log(1.0 - rng.random()) / n
        return clock[0] if stop_at_consensus else hit
    while t_next <= t_target:
        x = int(rng.random() * n)
        y = adj[x, int(rng.random() * d)]
        if op[x] != op[y]:
            disc += _flip_delta(adj, op, x)
            if op[y] == 1:
                b += 1
            else:
                b -= 1
            op[x] = op[y]
        t_ring = t_next
        t_next = t_ring - np.log(1.0 - rng.random()) / n
        if stop_at_consensus and disc == 0:
            hit = t_ring
            clock[0] = t_ring
            clock[1] = t_next
            counts[0] = b
            counts[1] = disc
            return hit
        if b == 0 or b == n:
            clock[0] = t_target
            if t_next <= t_target:
                t_next = t_target - np.log(1.0 - rng.random()) / n
            clock[1] = t_next
            counts[0] = b
            counts[1] = disc
            return hit
    clock[0] = t_target
    clock[1] = t_next
    counts[0] = b
    counts[1] = disc
    return hit


@numba.njit(cache=True)
def _record(adj, op, clock, counts, rng, times, out_b, out_disc):
    for i in range(times.shape[0]):
        _advance(adj, op, clock, counts, rng, times[i], False)
        out_b[i] = counts[0]
        out_disc[i] = counts[1]


def count_discordant(g: RegularGraph, opinions) -> int:
    """Full recount over the edge list."""
    op = np.asarray(opinions)
    return int(np.count_nonzero(op[g.edges[:, 0]] != op[g.edges[:, 1]]))


@dataclass(eq=False)
class VoterState:
    graph: RegularGraph
    opinions: np.ndarray
    rng: np.random.Generator
    t: float = 0.0
    b_count: int = 0
    disc_count: int = 0
    next_ring: float = field(default=np.nan, repr=False)

    def __post_init__(self):
        if np.isnan(self.next_ring):
            self.next_ring = self.t + self.rng.standard_exponential() / self.graph.n

    @property
    def n(self):
        return self.graph.n

    @property
    def b_density(self):
        return self.b_count / self.graph.n

    @property
    def d_density(self):
        return self.disc_count / self.graph.m if self.graph.m else 0.0

    def is_consensus(self):
        return self.b_count in (0, self.graph.n)

    def recount(self):
        """(b, disc) recomputed from scratch, for checking the incremental counters."""
        return int(self.opinions.sum()), count_discordant(self.graph, self.opinions)

    def _kernel_args(self):
        clock = np.array([self.t, self.next_ring])
        counts = np.array([self.b_count, self.disc_count], dtype=np.int64)
        return clock, counts

    def _store(self, clock, counts):
        self.t, self.next_ring = float(clock[0]), float(clock[1])
        self.b_count, self.disc_count = int(counts[0]), int(counts[1])


def _new_state(g, opinions, rng):
    opinions = np.ascontiguousarray(opinions, dtype=np.uint8)
    return VoterState(g, opinions, rng, 0.0, int(opinions.sum()), count_discordant(g, opinions))


def init_bernoulli(g: RegularGraph, u: float, seed) -> VoterState:
    """Independent Bernoulli(u) opinions; the same stream then drives the dynamics."""
    if not 0 <= u <= 1:
        raise ValueError("u must lie in [0, 1]")
    rng = make_rng(seed)
    return _new_state(g, rng.random(g.n) < u, rng)


def init_explicit(g: RegularGraph, xi, seed=0) -> VoterState:
    xi = np.asarray(xi)
    if xi.shape != (g.n,):
        raise ValueError(f"expected {g.n} opinions, got shape {xi.shape}")
    if not np.all((xi == 0) | (xi == 1)):
        raise ValueError("opinions must be 0/1")
    return _new_state(g, xi, make_rng(seed))


def advance_to(state: VoterState, t_target: float) -> VoterState:
    """Apply every ring in ``(state.t, t_target]`` in place and return the state."""
    if t_target < state.t:
        raise ValueError("cannot run backwards in time")
    clock, counts = state._kernel_args()
    _advance(state.graph.adjacency, state.opinions, clock, counts, state.rng, float(t_target), False)
    state._store(clock, counts)
    return state


def run_until_consensus(state: VoterState, t_cap: float):
    """Time of the ring that leaves no discordant edge, or ``None`` if that
    does not happen by ``t_cap`` (the state is then left at ``t_cap``).

    On a connected graph no discordant edge means consensus.
    """
    if state.disc_count == 0:
        return state.t
    clock, counts = state._kernel_args()
    hit = _advance(state.graph.adjacency, state.opinions, clock, counts, state.rng, float(t_cap), True)
    state._store(clock, counts)
    return None if hit < 0 else float(hit)


@dataclass
class Trajectory:
    t: np.ndarray
    b_density: np.ndarray
    d_density: np.ndarray
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.t)

    def rows(self):
        return zip(self.t.tolist(), self.b_density.tolist(), self.d_density.tolist())

    def to_csv(self, sink=None):
        """CSV with header ``t,b_density,d_density``; returns the text if no sink."""
        buf = io.StringIO()
        buf.write("t,b_density,d_density\n")
        for row in self.rows():
            buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
        text = buf.getvalue()
        if sink is None:
            return text
        if hasattr(sink, "write"):
            sink.write(text)
        else:
            with open(sink, "w") as fh:
                fh.write(text)
        return text


def run_recorded_counts(state: VoterState, sample_times):
    """Raw ``(b_count, disc_count)`` arrays at each sample time."""
    times = np.ascontiguousarray(sample_times, dtype=np.float64)
    if times.size:
        if times[0] < state.t:
            raise ValueError("first sample precedes the current time")
        if np.any(np.diff(times) <= 0):
            raise ValueError("sample times must be strictly increasing")
    out_b = np.empty(times.size, dtype=np.int64)
    out_disc = np.empty(times.size, dtype=np.int64)
    if times.size:
        clock, counts = state._kernel_args()
        _record(state.graph.adjacency, state.opinions, clock, counts, state.rng, times, out_b, out_disc)
        state._store(clock, counts)
    return times, out_b, out_disc


def run_recorded(state: VoterState, sample_times, meta=None) -> Trajectory:
    times, b, disc = run_recorded_counts(state, sample_times)
    g = state.graph
    m = g.m if g.m else 1
    return Trajectory(times, b / g.n, disc / m, dict(meta or {}, n=g.n, d=g.d))


def discordance_at(g: RegularGraph, u: float, seed, sample_times) -> np.ndarray:
    """Discordant-edge density along one fresh Bernoulli(u) run."""
    state = init_bernoulli(g, u, seed)
    _, _, disc = run_recorded_counts(state, sample_times)
    return disc / g.m
