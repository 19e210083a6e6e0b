"""Dense indicator sets over Z_p and the set constructions built on them.

A DenseSet stores one flag per residue packed into a Python int, so the
shift/OR sumset kernel and popcounts run word-parallel.  All operations
are exact; the only floating-point path (large-operand sumsets through a
real FFT) carries a runtime certificate that rounding cannot flip a count.
"""

from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING, Iterable

import numpy as np
import scipy.fft as _fft

from .errors import DomainError

if TYPE_CHECKING:
    from .field import SubgroupDescriptor

__all__ = [
    "DenseSet",
    "sumset",
    "iterated_sumset",
    "slice_set",
    "popular_differences",
    "dilate",
    "product_set",
    "negate",
    "is_invariant",
]

# Below this many shifts the bitmask kernel beats the FFT support route.
_FFT_MIN_SHIFTS = 768
_FFT_MIN_P = 4096
# Unit roundoff, used in the FFT support certificate.
_EPS = float(np.finfo(np.float64).eps)


class DenseSet:
    """Immutable subset of Z_p with cached cardinality.

    ``mask`` has bit x set iff residue x is in the set.
    """

    __slots__ = ("p", "mask", "card", "_els")

    def __init__(self, p: int, elements: Iterable[int] = ()):
        if p < 1:
            raise DomainError(f"modulus must be positive, got {p}")
        self.p = int(p)
        els = np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements,
                         dtype=np.int64)
        if els.size and (els.min() < 0 or els.max() >= p):
            raise DomainError(f"element out of range [0, {p})")
        if els.size < 64:
            mask = 0
            for e in els.tolist():
                mask |= 1 << e
        else:
            ind = np.zeros(self.p, dtype=np.uint8)
            ind[els] = 1
            mask = int.from_bytes(np.packbits(ind, bitorder="little").tobytes(), "little")
        self.mask = mask
        self.card = mask.bit_count()
        self._els = None

    @classmethod
    def _raw(cls, p: int, mask: int, card: int | None = None) -> "DenseSet":
        obj = object.__new__(cls)
        obj.p = p
        obj.mask = mask
        obj.card = mask.bit_count() if card is None else card
        obj._els = None
        return obj

    @classmethod
    def full(cls, p: int) -> "DenseSet":
        return cls._raw(p, (1 << p) - 1, p)

    @classmethod
    def units(cls, p: int) -> "DenseSet":
        """The nonzero residues 1..p-1."""
        return cls._raw(p, ((1 << p) - 1) ^ 1, p - 1)

    def elements(self) -> np.ndarray:
        """Sorted element array (cached)."""
        if self._els is None:
            nbytes = (self.p + 7) // 8
            raw = np.frombuffer(self.mask.to_bytes(nbytes, "little"), dtype=np.uint8)
            bits = np.unpackbits(raw, bitorder="little", count=self.p)
            self._els = np.flatnonzero(bits).astype(np.int64)
        return self._els

    def indicator(self) -> np.ndarray:
        """0/1 array of length p."""
        ind = np.zeros(self.p, dtype=np.uint8)
        ind[self.elements()] = 1
        return ind

    def min_element(self) -> int:
        if not self.card:
            raise DomainError("empty set has no minimum")
        return (self.mask & -self.mask).bit_length() - 1

    def __len__(self) -> int:
        return self.card

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.p and bool((self.mask >> x) & 1)

    def __eq__(self, other) -> bool:
        return (isinstance(other, DenseSet)
                and self.p == other.p and self.mask == other.mask)

    def __hash__(self) -> int:
        return hash((self.p, self.mask))

    def __repr__(self) -> str:
        if self.card <= 12:
            return f"DenseSet(p={self.p}, {{{', '.join(map(str, self.elements()))}}})"
        return f"DenseSet(p={self.p}, |A|={self.card})"


def _shift(mask: int, a: int, p: int, full: int) -> int:
    """Cyclic left shift of a p-bit mask: bit x moves to (x + a) mod p."""
    if a == 0:
        return mask
    return ((mask << a) & full) | (mask >> (p - a))


def _check_pair(a: DenseSet, b: DenseSet) -> None:
    if a.p != b.p:
        raise DomainError(f"modulus mismatch: {a.p} != {b.p}")


def negate(a: DenseSet) -> DenseSet:
    """The set {-x mod p}."""
    els = a.elements()
    return DenseSet(a.p, (a.p - els) % a.p)


def _sumset_shifts(a: DenseSet, b: DenseSet) -> DenseSet:
    # Shift the bigger mask by each element of the smaller set.
    small, big = (a, b) if a.card <= b.card else (b, a)
    p = a.p
    full = (1 << p) - 1
    acc = 0
    m = big.mask
    for e in small.elements().tolist():
        acc |= _shift(m, e, p, full)
    return DenseSet._raw(p, acc)


def _sumset_fft(a: DenseSet, b: DenseSet) -> DenseSet:
    # Support of the additive convolution; counts are integers, so the
    # result is exact as long as FFT rounding stays below 1/2.
    p = a.p
    length = _fft.next_fast_len(2 * p - 1, real=True)
    fa = _fft.rfft(a.indicator().astype(np.float64), length)
    fb = _fft.rfft(b.indicator().astype(np.float64), length)
    conv = _fft.irfft(fa * fb, length)[: 2 * p - 1]
    counts = conv[:p].copy()
    counts[: p - 1] += conv[p:]
    bound = 32.0 * _EPS * np.log2(length) * np.sqrt(float(a.card) * float(b.card))
    if bound >= 0.5:
        # Fall back to the always-exact kernel rather than risk a flip.
        return _sumset_shifts(a, b)
    ind = (counts > 0.5).astype(np.uint8)
    mask = int.from_bytes(np.packbits(ind, bitorder="little").tobytes(), "little")
    return DenseSet._raw(p, mask)


def sumset(a: DenseSet, b: DenseSet, sign: str = "+") -> DenseSet:
    """The sumset {x + y} (sign '+') or difference set {x - y} (sign '-')."""
    _check_pair(a, b)
    if sign == "-":
        b = negate(b)
    elif sign != "+":
        raise DomainError(f"sign must be '+' or '-', got {sign!r}")
    if not a.card or not b.card:
        raise DomainError("sumset of an empty set is not defined here")
    if min(a.card, b.card) >= _FFT_MIN_SHIFTS and a.p >= _FFT_MIN_P:
        return _sumset_fft(a, b)
    return _sumset_shifts(a, b)


def iterated_sumset(a: DenseSet, l: int) -> DenseSet:
    """The l-fold sumset a + a + ... + a."""
    if l < 1:
        raise DomainError(f"need l >= 1, got {l}")
    if not a.card:
        raise DomainError("iterated sumset of an empty set is not defined")
    acc = a
    for _ in range(l - 1):
        acc = sumset(acc, a, "+")
    return acc


def slice_set(a: DenseSet, s: int) -> DenseSet:
    """The slice a ∩ (a - s); its size equals the autocorrelation at s."""
    p = a.p
    s = s % p
    full = (1 << p) - 1
    shifted = _shift(a.mask, p - s if s else 0, p, full)  # mask of a - s
    return DenseSet._raw(p, a.mask & shifted)


def dilate(a: DenseSet, lam: int) -> DenseSet:
    """The dilate {lam * x mod p}; a bijection on Z_p for lam != 0."""
    lam %= a.p
    if lam == 0:
        raise DomainError("dilation by 0 collapses the set")
    els = (a.elements() * lam) % a.p
    out = DenseSet(a.p, els)
    assert out.card == a.card
    return out


def product_set(a: DenseSet, b: DenseSet) -> DenseSet:
    """The product set {x * y mod p}."""
    _check_pair(a, b)
    ea, eb = a.elements(), b.elements()
    if ea.size * eb.size <= (1 << 22):
        prods = (ea[:, None] * eb[None, :]) % a.p
        return DenseSet(a.p, np.unique(prods))
    ind = np.zeros(a.p, dtype=np.uint8)
    step = max(1, (1 << 22) // max(1, eb.size))
    for i in range(0, ea.size, step):
        prods = (ea[i:i + step, None] * eb[None, :]) % a.p
        ind[prods.ravel()] = 1
    return DenseSet(a.p, np.flatnonzero(ind))


def popular_differences(a: DenseSet, tau) -> DenseSet:
    """Nonzero s whose difference count (a∘a)(s) reaches the threshold tau."""
    tau = Fraction(tau)
    if tau < 0:
        raise DomainError("threshold must be nonnegative")
    from .spectra import autocorrelation

    counts = autocorrelation(a).counts
    # count >= num/den  <=>  count*den >= num, exact in integers
    hits = counts * tau.denominator >= tau.numerator
    hits[0] = False
    return DenseSet(a.p, np.flatnonzero(hits))


def is_invariant(q: DenseSet, sub: "SubgroupDescriptor") -> bool:
    """True iff q is fixed by every dilation from the subgroup.

    Checking one generator suffices since it generates the subgroup.
    """
    if q.p != sub.ctx.p:
        raise DomainError(f"modulus mismatch: {q.p} != {sub.ctx.p}")
    if not q.card:
        return True
    return dilate(q, sub.generator) == q
