"""Exact number-theoretic transform over q = 2^64 - 2^32 + 1.

q - 1 = 2^32 * 3 * 5 * 17 * 257 * 65537, so power-of-two transform lengths
up to 2^32 are available, and q > 2^31 leaves room for correlation counts
of any modulus handled by this package.  All arithmetic is vectorized on
uint64; the 128-bit products are assembled from 32-bit halves and reduced
with 2^64 = 2^32 - 1 and 2^96 = -1 (mod q).
"""

from __future__ import annotations

import numpy as np

from .errors import CapacityError

MODULUS = (1 << 64) - (1 << 32) + 1
GENERATOR = 7  # multiplicative generator of the field mod MODULUS
MAX_LOG2_LEN = 32

_M32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_Q = np.uint64(MODULUS)
_EPSW = np.uint64(0xFFFFFFFF)  # 2^64 mod q


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Elementwise a*b mod q for uint64 arrays with entries < q."""
    with np.errstate(over="ignore"):
        a0 = a & _M32
        a1 = a >> _S32
        b0 = b & _M32
        b1 = b >> _S32
        ll = a0 * b0
        lh = a0 * b1
        hl = a1 * b0
        hh = a1 * b1
        mid = lh + hl
        mid_c = (mid < lh).astype(np.uint64)
        low = ll + ((mid & _M32) << _S32)
        low_c = (low < ll).astype(np.uint64)
        # high < 2^64 because the true 128-bit product is < q^2.
        high = hh + (mid >> _S32) + low_c + (mid_c << _S32)
        # Reduce high*2^64 + low.
        h0 = high & _M32
        h1 = high >> _S32
        t = low - h1
        t -= (low < h1).astype(np.uint64) * _EPSW
        m = (h0 << _S32) - h0
        s = t + m
        s += (s < t).astype(np.uint64) * _EPSW
        return np.where(s >= _Q, s - _Q, s)


def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        d = _Q - b
        return np.where(a >= d, a - d, a + b)


def sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        return np.where(a >= b, a - b, a + (_Q - b))


_stage_cache: dict[tuple[int, bool], list[np.ndarray]] = {}
_rev_cache: dict[int, np.ndarray] = {}


def _bit_reverse(n: int) -> np.ndarray:
    if n not in _rev_cache:
        logn = n.bit_length() - 1
        rev = np.zeros(n, dtype=np.int64)
        for i in range(1, n):
            rev[i] = (rev[i >> 1] >> 1) | ((i & 1) << (logn - 1))
        _rev_cache[n] = rev
    return _rev_cache[n]


def _stage_twiddles(n: int, inverse: bool) -> list[np.ndarray]:
    key = (n, inverse)
    if key not in _stage_cache:
        root = pow(GENERATOR, (MODULUS - 1) // n, MODULUS)
        if inverse:
            root = pow(root, MODULUS - 2, MODULUS)
        stages = []
        m = 2
        while m <= n:
            wm = pow(root, n // m, MODULUS)
            tw = np.empty(m // 2, dtype=np.uint64)
            w = 1
            for j in range(m // 2):
                tw[j] = w
                w = w * wm % MODULUS
            stages.append(tw)
            m <<= 1
        _stage_cache[key] = stages
    return _stage_cache[key]


def ntt(a: np.ndarray, inverse: bool = False) -> np.ndarray:
    """In-order radix-2 transform of a length-2^k uint64 array (k <= 32)."""
    n = a.shape[0]
    if n & (n - 1) or n.bit_length() - 1 > MAX_LOG2_LEN:
        raise CapacityError(f"transform length {n} is not a supported power of two")
    if n == 1:
        return a.copy()
    x = a[_bit_reverse(n)]
    for tw in _stage_twiddles(n, inverse):
        half = tw.shape[0]
        blocks = x.reshape(-1, 2 * half)
        lo = blocks[:, :half]
        hi = mul(blocks[:, half:], tw[None, :])
        s, d = add(lo, hi), sub(lo, hi)
        blocks[:, :half] = s
        blocks[:, half:] = d
    if inverse:
        n_inv = np.uint64(pow(n, MODULUS - 2, MODULUS))
        x = mul(x, np.broadcast_to(n_inv, x.shape))
    return x


def convolve(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    """Length-n cyclic convolution of zero-padded integer sequences.

    Exact provided every convolution coefficient is < q.
    """
    fa = np.zeros(n, dtype=np.uint64)
    fb = np.zeros(n, dtype=np.uint64)
    fa[: a.shape[0]] = a
    fb[: b.shape[0]] = b
    return ntt(mul(ntt(fa), ntt(fb)), inverse=True)
