"""Deterministic random streams for reproducible simulation.

All randomness in this package comes from SplitMix64, a published 64-bit
generator whose k-th output is a pure function of the seed::

    output(seed, k) = finalize(seed + (k + 1) * GOLDEN)   (mod 2**64)

The counter form means a stream can be evaluated sequentially (``Stream``)
or as a numpy array over many trials at once (``stream_outputs``), with
bit-identical results. Uniform floats are the top 53 bits scaled by 2**-53,
so scalar and vectorized paths agree exactly.

Per-trial stream layout used by the simulator:

* output 0 - the initial-consumption draw for the first batch,
* outputs 1, 2, ... - crisis flags, one per batch in batch-id order.

Seeds for trials and sweep cells are derived with ``derive_seed``, which
folds each component through the SplitMix64 finalizer. Derivation uses the
cell's actual (order size, batch size) values, never grid indices, so any
subset of a sweep recomputes identically on its own.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_C1 = 0xBF58476D1CE4E5B9
_MIX_C2 = 0x94D049BB133111EB

# 2**-53; multiplying the top 53 bits by this gives a uniform float in [0, 1)
_UNIT = 2.0**-53


def mix64(z: int) -> int:
    """SplitMix64 finalizer (Steele et al. variant of the MurmurHash3 mixer)."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX_C1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_C2) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def stream_output(seed: int, k: int) -> int:
    """The k-th (0-based) 64-bit output of the stream with the given seed."""
    return mix64((seed + (k + 1) * _GOLDEN) & _MASK64)


def derive_seed(base_seed: int, *components: int) -> int:
    """Mix integer components into ``base_seed``, one finalizer pass each.

    Order matters: derive_seed(s, a, b) != derive_seed(s, b, a) in general.
    """
    h = base_seed & _MASK64
    for c in components:
        h = mix64((h + _GOLDEN + (c & _MASK64)) & _MASK64)
    return h


def unit_float(x: int) -> float:
    """Map a 64-bit output to a uniform float in [0, 1)."""
    return (x >> 11) * _UNIT


def below(x: int, n: int) -> int:
    """Map a 64-bit output to a uniform integer in {0, ..., n-1}."""
    return min(int(unit_float(x) * n), n - 1)


class Stream:
    """Sequential view of a SplitMix64 stream.

    ``next_u64`` returns outputs 0, 1, 2, ... of :func:`stream_output` in
    order; ``skip`` advances past outputs without using them.
    """

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._k = 0

    def next_u64(self) -> int:
        x = stream_output(self.seed, self._k)
        self._k += 1
        return x

    def next_unit(self) -> float:
        return unit_float(self.next_u64())

    def next_below(self, n: int) -> int:
        return below(self.next_u64(), n)

    def skip(self, count: int = 1) -> None:
        self._k += count


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_MIX_C1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_MIX_C2)
    z ^= z >> np.uint64(31)
    return z


def derive_seeds(base_seed: int, components: np.ndarray) -> np.ndarray:
    """Vectorized :func:`derive_seed` for one array of final components."""
    base = np.uint64((base_seed + _GOLDEN) & _MASK64)
    return _mix64_array(base + components.astype(np.uint64))


def stream_outputs(seeds: np.ndarray, n_outputs: int, first: int = 0) -> np.ndarray:
    """Outputs ``first .. first+n_outputs-1`` for every seed.

    Returns a (len(seeds), n_outputs) uint64 array; row i column j equals
    ``stream_output(seeds[i], first + j)``.
    """
    ks = (np.arange(first + 1, first + n_outputs + 1, dtype=np.uint64)
          * np.uint64(_GOLDEN))
    return _mix64_array(seeds.astype(np.uint64)[:, None] + ks[None, :])


def unit_floats(x: np.ndarray) -> np.ndarray:
    """Vectorized :func:`unit_float`."""
    return (x >> np.uint64(11)).astype(np.float64) * _UNIT
