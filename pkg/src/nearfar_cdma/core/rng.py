from __future__ import annotations

import numpy as np

from nearfar_cdma.errors import DomainError

# Stream tags keep the signature, oracle and trend generators independent
# even when they share a user seed.
SIGNATURE_STREAM = 0
ORACLE_STREAM = 1

MAX_SEED = 2**64 - 1


def stream(seed: int, *index: int) -> np.random.Generator:
    """Counter-based generator for (seed, *index): a pure function of its key."""
    if not (0 <= seed <= MAX_SEED):
        raise DomainError(f"seed must lie in [0, 2**64 - 1], got {seed!r}")
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(i) for i in index))
    return np.random.Generator(np.random.Philox(ss))
