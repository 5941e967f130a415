"""Seed handling.

Every random stream in the package is a PCG64 generator keyed by a master
seed plus a tuple of integer labels, so replicas can be spawned in any order
and still reproduce bit for bit.
"""

import numpy as np

# stream labels, kept distinct so e.g. graph seeds never collide with run seeds
GRAPH = 1
RUN = 2
INIT = 3
AUX = 4


def make_rng(seed, *keys):
    """Return a ``numpy.random.Generator`` for ``(seed, *keys)``."""
    if isinstance(seed, np.random.Generator):
        if keys:
            raise TypeError("cannot derive keyed streams from a Generator")
        return seed
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed, *keys):
    """A 63-bit integer seed derived from ``(seed, *keys)``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))
