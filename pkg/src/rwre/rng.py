"""Deterministic random number streams.

Every stochastic component of the package draws from a stream derived from a
64-bit ``seed`` and a ``stream_index``.  The derivation is a fixed splitmix64
mixing chain, so a (seed, stream_index) pair maps to the same bit sequence on
every platform, independent of thread count or call order.  Distinct stream
indices map to distinct generator states by construction (the mix is a
bijection composed with an injective affine map), which is what makes
per-replica streams collision free.

The event streams themselves are xoshiro256++ sequences.  Exponential waiting
times are produced as ``-log(u) / rate`` with ``u`` a 53-bit uniform on
(0, 1], never through rejection samplers, so that a stream consumes a fixed
number of raw draws per variate.

Site values of the initial Bernoulli field are *not* taken from the event
stream.  They come from a per-site hash of a dedicated ``site_key`` derived
from the same (seed, stream_index).  Two environments built on the same
stream therefore start from the identical occupancy field regardless of
environment kind and of the order in which sites are first touched.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit, uint64, float64, int64

MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
# Domain separation constant for the per-site hash key.
_SITE_DOMAIN = 0x8BADF00D5EEDC0DE
# Odd multiplier spreading site indices before hashing.
_SITE_STRIDE = 0x2545F4914F6CDD1D

_U64_ONE = uint64(1)
_TWO_NEG53 = 2.0 ** -53
_TWO64_F = 18446744073709551616.0


@njit(uint64(uint64), cache=True)
def splitmix64(z):
    """One splitmix64 scrambling round (a bijection on 64-bit words)."""
    z = (z + uint64(0x9E3779B97F4A7C15)) & uint64(0xFFFFFFFFFFFFFFFF)
    z = ((z ^ (z >> uint64(30))) * uint64(0xBF58476D1CE4E5B9)) & uint64(0xFFFFFFFFFFFFFFFF)
    z = ((z ^ (z >> uint64(27))) * uint64(0x94D049BB133111EB)) & uint64(0xFFFFFFFFFFFFFFFF)
    return z ^ (z >> uint64(31))


@njit(uint64(uint64, uint64), cache=True)
def mix_stream_key(seed, stream_index):
    """Collision-free 64-bit key for stream ``stream_index`` under ``seed``.

    The map ``stream_index -> key`` is injective for a fixed seed: the inner
    affine step uses an odd multiplier (a bijection mod 2**64) and splitmix64
    is itself a bijection.
    """
    base = splitmix64(seed)
    return splitmix64(base ^ ((stream_index * uint64(0x9E3779B97F4A7C15)) & uint64(0xFFFFFFFFFFFFFFFF)))


@njit(cache=True)
def state_from_key(key, state):
    """Fill a 4-word xoshiro256++ state from a stream key."""
    z = key
    nonzero = False
    for i in range(4):
        z = (z + uint64(0x9E3779B97F4A7C15)) & uint64(0xFFFFFFFFFFFFFFFF)
        w = splitmix64(z)
        state[i] = w
        if w != uint64(0):
            nonzero = True
    if not nonzero:
        # The all-zero state is the one fixed point xoshiro cannot leave.
        state[0] = uint64(0x9E3779B97F4A7C15)


@njit(uint64(uint64), cache=True)
def site_key_from_key(key):
    return splitmix64(key ^ uint64(0x8BADF00D5EEDC0DE))


@njit(uint64(uint64, uint64), cache=True, inline="always")
def _rotl(x, k):
    return ((x << k) | (x >> (uint64(64) - k))) & uint64(0xFFFFFFFFFFFFFFFF)


@njit(uint64(uint64[:]), cache=True, inline="always")
def xo_next(s):
    """Advance a xoshiro256++ state in place and return the next word."""
    result = (_rotl((s[0] + s[3]) & uint64(0xFFFFFFFFFFFFFFFF), uint64(23)) + s[0]) & uint64(0xFFFFFFFFFFFFFFFF)
    t = (s[1] << uint64(17)) & uint64(0xFFFFFFFFFFFFFFFF)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], uint64(45))
    return result


@njit(float64(uint64[:]), cache=True, inline="always")
def next_u53(s):
    """53-bit uniform on (0, 1]; never returns 0, so log(u) is finite."""
    return (float64(xo_next(s) >> uint64(11)) + 1.0) * (2.0 ** -53)


@njit(float64(uint64[:], float64), cache=True, inline="always")
def next_exponential(s, rate):
    """Exponential(rate) waiting time as -log(u)/rate with u a 53-bit uniform."""
    return -math.log(next_u53(s)) / rate


@njit(uint64(float64), cache=True)
def threshold_u64(q):
    """Acceptance threshold so that ``xo_next(s) < threshold_u64(q)`` has probability q.

    Exact for q <= 0 and q >= 1; rounded to one part in 2**64 otherwise.
    Callers that need q == 1 to accept the all-ones word must branch on it
    themselves (the rounding here misses a 2**-64 sliver).
    """
    if q <= 0.0:
        return uint64(0)
    if q >= 1.0:
        return uint64(0xFFFFFFFFFFFFFFFF)
    return uint64(q * 18446744073709551616.0)


@njit(uint64(uint64, int64), cache=True, inline="always")
def site_hash_u64(site_key, site):
    """Uniform 64-bit word attached to a lattice site (counter style)."""
    return splitmix64((site_key + (uint64(site) * uint64(0x2545F4914F6CDD1D))) & uint64(0xFFFFFFFFFFFFFFFF))


def bulk_site_occupancy(site_key: int, lo: int, hi: int, rho: float) -> np.ndarray:
    """Vectorised Bernoulli(rho) occupancy for sites lo..hi inclusive.

    Bit-identical to calling :func:`site_hash_u64` per site and comparing
    against :func:`threshold_u64`; the identity is pinned by a test.
    """
    sites = np.arange(lo, hi + 1, dtype=np.int64).view(np.uint64)
    z = (np.uint64(site_key) + sites * np.uint64(_SITE_STRIDE))
    z = (z + np.uint64(GOLDEN))
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    if rho <= 0.0:
        return np.zeros(z.shape, dtype=np.uint8)
    if rho >= 1.0:
        return np.ones(z.shape, dtype=np.uint8)
    return (z < np.uint64(int(rho * _TWO64_F) & MASK64)).astype(np.uint8)


@njit(cache=True)
def fill_u64(state, out):
    for i in range(out.size):
        out[i] = xo_next(state)


class RngStream:
    """A named, reproducible random stream.

    Two instances constructed with equal ``(seed, stream_index)`` produce
    identical draw sequences on any platform.
    """

    def __init__(self, seed: int, stream_index: int = 0):
        self.seed = int(seed) & MASK64
        self.stream_index = int(stream_index) & MASK64
        self.key = int(mix_stream_key(np.uint64(self.seed), np.uint64(self.stream_index)))
        self.site_key = int(site_key_from_key(np.uint64(self.key)))
        self._s = np.empty(4, dtype=np.uint64)
        state_from_key(np.uint64(self.key), self._s)

    def next_u64(self) -> int:
        return int(xo_next(self._s))

    def uniform53(self) -> float:
        """Uniform on (0, 1] with 53-bit resolution."""
        return float(next_u53(self._s))

    def exponential(self, rate: float) -> float:
        if not rate > 0.0:
            from .errors import InvalidArgumentError

            raise InvalidArgumentError(f"exponential rate must be > 0, got {rate}")
        return float(next_exponential(self._s, rate))

    def bernoulli(self, q: float) -> int:
        if q >= 1.0:
            return 1
        if q <= 0.0:
            return 0
        return 1 if int(xo_next(self._s)) < int(threshold_u64(q)) else 0

    def site_occupied(self, site: int, rho: float) -> int:
        """Deterministic Bernoulli(rho) value of a site under this stream's key."""
        if rho >= 1.0:
            return 1
        if rho <= 0.0:
            return 0
        return 1 if int(site_hash_u64(np.uint64(self.site_key), np.int64(site))) < int(threshold_u64(rho)) else 0

    def u64_array(self, size: int) -> np.ndarray:
        out = np.empty(size, dtype=np.uint64)
        fill_u64(self._s, out)
        return out

    @property
    def state(self) -> np.ndarray:
        return self._s.copy()


def derive_state(seed: int, stream_index: int) -> np.ndarray:
    """xoshiro256++ state for a (seed, stream_index) pair."""
    s = np.empty(4, dtype=np.uint64)
    state_from_key(np.uint64(int(mix_stream_key(np.uint64(seed & MASK64), np.uint64(stream_index & MASK64)))), s)
    return s
