"""Seeded random streams.

Every consumer of randomness draws from its own stream, addressed by a key
path under the run seed, so adding or reordering consumers never shifts the
numbers another consumer sees. Streams are PCG64 generators fed by
``SeedSequence(seed, spawn_key=path)``, which is what ``SeedSequence.spawn``
produces for the same path.
"""

import numpy as np

# Top-level stream keys
PERMUTATION_STREAM = 0
TIE_BREAK_STREAM = 1
ORACLE_STREAM = 2


def stream(seed: int, *path: int) -> np.random.Generator:
    """Return the generator for ``path`` under ``seed``.

    Args:
        seed: Run seed (unsigned 64-bit)
        *path: Stream key, e.g. ``(PERMUTATION_STREAM, cycle)``

    Example:
        >>> a = stream(42, PERMUTATION_STREAM, 3).permutation(5)
        >>> b = stream(42, PERMUTATION_STREAM, 3).permutation(5)
        >>> bool((a == b).all())
        True
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=path)))
