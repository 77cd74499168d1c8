"""Seeded random-number streams.

Every stochastic component draws from a counter-based Philox-4x64 generator
keyed by ``(master_seed, stream_index)``. Distinct stream indices give
statistically independent streams, so components can be seeded independently
of evaluation order or thread count: the synthesizer uses one stream per
column, the forest one stream per tree, cross-validation one stream for the
fold shuffle. Reproducing a run needs only the master seed.
"""

from __future__ import annotations

import numpy as np

_U64 = (1 << 64) - 1


def stream(seed: int, index: int) -> np.random.Generator:
    """Return the Philox stream ``index`` under ``seed``.

    Both values are reduced modulo 2**64, matching the generator's key width.
    """
    key = [int(seed) & _U64, int(index) & _U64]
    return np.random.Generator(np.random.Philox(key=key))
