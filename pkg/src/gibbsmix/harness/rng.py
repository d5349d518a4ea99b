"""Counter-based per-replication random streams.

Replication r of a run with master seed s draws from a Philox4x64-10 stream
keyed by the 128-bit key (s, r). Streams are independent of the order and
the thread on which replications are evaluated, so results are bit-identical
for any worker count.

Uniforms use the top 53 bits of each raw 64-bit output, shifted to the
open interval: u = ((raw >> 11) + 0.5) * 2^-53. Gaussians are ndtri(u), one
uniform per draw (no pairing as in Box-Muller).
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

_MASK64 = (1 << 64) - 1
_TWO_M53 = 2.0**-53


def stream(master_seed: int, rep: int) -> np.random.Philox:
    key = np.array([master_seed & _MASK64, rep & _MASK64], dtype=np.uint64)
    return np.random.Philox(key=key)


def uniforms(master_seed: int, rep: int, size: int) -> np.ndarray:
    raw = stream(master_seed, rep).random_raw(size)
    return ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO_M53


def normals(master_seed: int, rep: int, size: int) -> np.ndarray:
    """Standard normal draws for replication ``rep`` by inverse CDF."""
    return ndtri(uniforms(master_seed, rep, size))


def normal_block(master_seed: int, reps: range, size: int) -> np.ndarray:
    """Rows of standard normals, one row per replication index in ``reps``."""
    out = np.empty((len(reps), size))
    for i, r in enumerate(reps):
        out[i] = normals(master_seed, r, size)
    return out
