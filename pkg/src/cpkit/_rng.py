"""Seed plumbing.

Every randomized routine accepts ``seed`` as an int, a
:class:`numpy.random.SeedSequence`, a :class:`numpy.random.Generator` or
``None``.  Replicates and restarts draw from children of the caller's seed so
their streams do not depend on execution order.
"""
import zlib

import numpy as np


def seed_sequence(seed):
    if isinstance(seed, np.random.SeedSequence):
        return seed
    if isinstance(seed, np.random.Generator):
        # Derive a sequence from the generator state without consuming draws
        # that the caller might rely on afterwards.
        return np.random.SeedSequence(seed.integers(0, 2**63 - 1, size=4).tolist())
    return np.random.SeedSequence(seed)


def as_generator(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed_sequence(seed))


def spawn(seed, count):
    """Return ``count`` independent child seed sequences of ``seed``."""
    return seed_sequence(seed).spawn(count)


def named_child(seed, name):
    """Child sequence keyed by a stage name.

    Keyed children are independent of how many other stages exist, so adding
    a stage never shifts the randomness of the others.
    """
    parent = seed_sequence(seed)
    key = zlib.crc32(name.encode("utf-8"))
    return np.random.SeedSequence(parent.entropy, spawn_key=tuple(parent.spawn_key) + (key,))
