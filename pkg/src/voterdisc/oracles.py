"""Independent reference computations used to check the simulators.

Nothing here shares code with the simulation paths: the tree quantities are
checked against a direct simulation of the distance walk, and the graph
quantities against exact linear algebra on small state spaces.
"""

import itertools

import numba
import numpy as np

from .graph import RegularGraph
from .rng import make_rng


@numba.njit(cache=True)
def _distance_walk_hits(d, t, replicas, rng):
    up = (d - 1.0) / d
    hits = 0
    for _ in range(replicas):
        z = 1
        s = -np.log(1.0 - rng.random()) / 2.0
        while s <= t:
            if rng.random() < up:
                z += 1
            else:
                z -= 1
                if z == 0:
                    hits += 1
                    break
            s -= np.log(1.0 - rng.random()) / 2.0
    return hits


def distance_walk_cdf_mc(d, t, replicas, seed):
    """Monte Carlo P(rate-2 biased walk from 1 hits 0 by ``t``) and its SE."""
    hits = _distance_walk_hits(int(d), float(t), int(replicas), make_rng(seed))
    p = hits / replicas
    return p, float(np.sqrt(p * (1 - p) / replicas))


@numba.njit(cache=True)
def _gambler_hits(d, z0, ceiling, replicas, rng):
    up = (d - 1.0) / d
    hits = 0
    for _ in range(replicas):
        z = z0
        while 0 < z < ceiling:
            if rng.random() < up:
                z += 1
            else:
                z -= 1
        if z == 0:
            hits += 1
    return hits


def gambler_mc(d, z0, replicas, seed, margin=60):
    """Monte Carlo P(skeleton walk from ``z0`` ever hits 0).

    Paths that climb ``margin`` levels above the start count as escaped;
    the chance of coming back from there is (d-1)^-margin.
    """
    if z0 == 0:
        return 1.0, 0.0
    hits = _gambler_hits(int(d), int(z0), int(z0 + margin), int(replicas), make_rng(seed))
    p = hits / replicas
    return p, float(np.sqrt(p * (1 - p) / replicas))


def _rate_matrix(g: RegularGraph):
    """Single-walker transition matrix P (rows sum to 1)."""
    P = np.zeros((g.n, g.n))
    for v in range(g.n):
        for w in g.adjacency[v]:
            P[v, w] += 1.0 / g.d
    return P


def expected_meeting_times(g: RegularGraph) -> np.ndarray:
    """E[meeting time] for every start pair, from the generator of the pair
    of independent rate-1 walkers: ``2 h(x,y) = 1 + sum P h`` off the diagonal."""
    n = g.n
    P = _rate_matrix(g)
    # pair generator: (P - I) (x) I + I (x) (P - I)
    I = np.eye(n)
    Q = np.kron(P - I, I) + np.kron(I, P - I)
    off = np.array([x != y for x in range(n) for y in range(n)])
    A = Q[np.ix_(off, off)]
    h = np.zeros(n * n)
    h[off] = np.linalg.solve(A, -np.ones(off.sum()))
    return h.reshape(n, n)


def expected_stationary_meeting(g: RegularGraph) -> float:
    return float(expected_meeting_times(g).mean())


def expected_coalescence_time(g: RegularGraph) -> float:
    """E[coalescence time] from one walker per vertex, by solving over the
    occupied-set chain (bitmask states)."""
    n = g.n
    full = (1 << n) - 1
    states = [s for s in range(1, full + 1) if bin(s).count("1") >= 2]
    index = {s: i for i, s in enumerate(states)}
    A = np.zeros((len(states), len(states)))
    rhs = np.ones(len(states))
    for s, i in index.items():
        k = bin(s).count("1")
        A[i, i] = k
        for v in range(n):
            if not s >> v & 1:
                continue
            for w in g.adjacency[v]:
                t = (s & ~(1 << v)) | (1 << int(w))
                j = index.get(t)
                if j is not None:
                    A[i, j] -= 1.0 / g.d
    h = np.linalg.solve(A, rhs)
    return float(h[index[full]])


def pair_chain_matrix(g: RegularGraph):
    """Transition matrix of the asynchronous pair chain with the diagonal
    merged into one state (index 0); other states are ordered pairs x != y."""
    n, d = g.n, g.d
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    idx = {p: i + 1 for i, p in enumerate(pairs)}
    M = np.zeros((len(pairs) + 1, len(pairs) + 1))
    for x in range(n):
        for y in g.adjacency[x]:
            M[0, idx[(x, int(y))]] += 1.0 / (n * d)
    for (x, y), i in idx.items():
        for v in g.adjacency[x]:
            M[i, 0 if v == y else idx[(int(v), y)]] += 0.5 / d
        for w in g.adjacency[y]:
            M[i, 0 if w == x else idx[(x, int(w))]] += 0.5 / d
    return M


def expected_diagonal_visits(g: RegularGraph, T: int) -> float:
    """Sum over s = 0..T of P(pair chain on the diagonal at step s | start there)."""
    M = pair_chain_matrix(g)
    row = np.zeros(len(M))
    row[0] = 1.0
    total = 1.0
    for _ in range(T):
        row = row @ M
        total += row[0]
    return float(total)


def voter_one_step_law(g: RegularGraph, xi) -> dict[int, float]:
    """Exact law of the discordant-edge count after one ring from ``xi``."""
    xi = np.asarray(xi)
    law: dict[int, float] = {}
    for x in range(g.n):
        for y in g.adjacency[x]:
            new = xi.copy()
            new[x] = xi[y]
            disc = sum(int(new[a] != new[b]) for a, b in g.edges)
            law[disc] = law.get(disc, 0.0) + 1.0 / (g.n * g.d)
    return law


def small_regular_graphs(max_n=6, min_d=3):
    """All connected d-regular graphs (d >= min_d) with at most ``max_n``
    vertices, one per isomorphism class, by brute force."""
    found = []
    for n in range(min_d + 1, max_n + 1):
        all_edges = list(itertools.combinations(range(n), 2))
        for d in range(min_d, n):
            if n * d % 2:
                continue
            m = n * d // 2
            seen = set()
            for es in itertools.combinations(all_edges, m):
                deg = [0] * n
                for a, b in es:
                    deg[a] += 1
                    deg[b] += 1
                if any(x != d for x in deg):
                    continue
                key = min(
                    tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in es))
                    for p in itertools.permutations(range(n))
                )
                if key in seen:
                    continue
                seen.add(key)
                g = RegularGraph.from_edges(n, es, d)
                if _connected(g):
                    found.append(g)
    return found


def _connected(g):
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in g.adjacency[v]:
            if int(w) not in seen:
                seen.add(int(w))
                stack.append(int(w))
    return len(seen) == g.n


def floyd_warshall(g: RegularGraph) -> np.ndarray:
    n = g.n
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0)
    for a, b in g.edges:
        D[a, b] = D[b, a] = 1
    for k in range(n):
        D = np.minimum(D, D[:, [k]] + D[[k], :])
    return D
