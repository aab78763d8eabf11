from typing import List

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    """Platform-stable PCG64 stream; every random draw in a run flows from one of these."""
    return np.random.Generator(np.random.PCG64(int(seed)))


def spawn_rngs(seed: int, count: int) -> List[np.random.Generator]:
    """Independent child streams of one seed, for work split into chunks."""
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(int(seed)).spawn(count)]
