"""Keyed random streams.

Every replica draws from its own Philox (counter-based) generator keyed by
``(seed, stream, replica)``, so results do not depend on the order or the
process in which replicas are evaluated.
"""

import numpy as np

# stream tags, so GUE draws and limit-field draws never share a key
GUE_STREAM = 0
LIMIT_STREAM = 1


def replica_rng(seed, replica=0, stream=GUE_STREAM):
    """Independent generator for one replica of an experiment."""
    if seed < 0 or replica < 0:
        raise ValueError("seed and replica index must be nonnegative")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(stream), int(replica)))
    return np.random.Generator(np.random.Philox(ss))
