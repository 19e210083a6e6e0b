"""Prime-field arithmetic: primality, factorization, primitive roots,
discrete logs, and enumeration of multiplicative subgroups and cosets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError, InvarianceError
from .sets import DenseSet, dilate

__all__ = [
    "is_prime",
    "factorize",
    "primitive_root",
    "primes_in_range",
    "FieldContext",
    "SubgroupDescriptor",
    "subgroup",
    "coset_decomposition",
]

# Discrete-log tables are built eagerly as length-p arrays up to this bound;
# larger fields fall back to baby-step/giant-step per query.
_EAGER_LOG_BOUND = 1 << 27

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_TRIAL_DIVISION_BOUND = 10 ** 6


def is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin witness set, exact for all
    inputs below 3.3e24, in particular for every 64-bit integer)."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d = n - 1
    r = (d & -d).bit_length() - 1
    d >>= r
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """A nontrivial factor of composite odd n."""
    if n % 2 == 0:
        return 2
    seed = 1
    while True:
        y, c, m = (seed * 2 + 1) % n, (seed * 2 + 3) % n, 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        seed += 1


def factorize(n: int) -> list[int]:
    """Prime factors of n with multiplicity, sorted ascending.

    Trial division up to 1e6, then Pollard-Brent on what remains.
    """
    if n < 2:
        raise DomainError(f"factorize needs n >= 2, got {n}")
    out: list[int] = []
    for q in (2, 3, 5):
        while n % q == 0:
            out.append(q)
            n //= q
    f = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f <= _TRIAL_DIVISION_BOUND:
        while n % f == 0:
            out.append(f)
            n //= f
        f += wheel[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out.append(m)
            continue
        g = _pollard_brent(m)
        stack.extend((g, m // g))
    out.sort()
    return out


def primitive_root(p: int) -> int:
    """Smallest generator of the multiplicative group mod p."""
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if p == 2:
        return 1
    qs = sorted(set(factorize(p - 1)))
    exps = [(p - 1) // q for q in qs]
    for g in range(2, p):
        if all(pow(g, e, p) != 1 for e in exps):
            return g
    raise AssertionError("no primitive root found; p cannot be prime")


def primes_in_range(lo: int, hi: int) -> list[int]:
    """Primes in [lo, hi] via a sieve."""
    if hi < 2 or hi < lo:
        return []
    sieve = np.ones(hi + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(hi) + 1):
        if sieve[i]:
            sieve[i * i:: i] = False
    return [int(q) for q in np.flatnonzero(sieve) if q >= lo]


class FieldContext:
    """The field Z_p with a fixed primitive root and optional log table.

    Immutable after construction; power/log tables are built lazily and
    shared freely across threads and subgroups.
    """

    def __init__(self, p: int, g: int | None = None):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        self.p = p
        if g is None:
            g = primitive_root(p)
        else:
            g = int(g) % p
            if not self._has_full_order(p, g):
                raise DomainError(f"{g} does not generate the units mod {p}")
        self.g = g

    @staticmethod
    def _has_full_order(p: int, g: int) -> bool:
        if p == 2:
            return g == 1
        if g in (0, 1) or math.gcd(g, p) != 1:
            return False
        return all(pow(g, (p - 1) // q, p) != 1 for q in set(factorize(p - 1)))

    @cached_property
    def powers(self) -> np.ndarray:
        """powers[i] = g^i mod p for 0 <= i < p-1 (eager for p <= 2^27)."""
        if self.p > _EAGER_LOG_BOUND:
            raise DomainError(f"power table too large for p = {self.p}")
        n = self.p - 1
        base = np.empty(min(64, n), dtype=np.int64)
        v = 1
        for j in range(base.size):
            base[j] = v
            v = v * self.g % self.p
        nblocks = -(-n // base.size)
        stride = pow(self.g, int(base.size), self.p)
        block = np.empty(nblocks, dtype=np.int64)
        w = 1
        for i in range(nblocks):
            block[i] = w
            w = w * stride % self.p
        table = (block[:, None] * base[None, :]) % self.p
        return table.ravel()[:n]

    @cached_property
    def log_table(self) -> np.ndarray:
        """log_table[x] = index of x (g^index = x); -1 at x = 0."""
        ind = np.full(self.p, -1, dtype=np.int64)
        ind[self.powers] = np.arange(self.p - 1, dtype=np.int64)
        return ind

    def discrete_log(self, x: int) -> int:
        """Index of x in base g; table lookup for small p, else BSGS."""
        x %= self.p
        if x == 0:
            raise DomainError("0 has no discrete log")
        if self.p <= _EAGER_LOG_BOUND:
            return int(self.log_table[x])
        m = math.isqrt(self.p - 1) + 1
        baby = {}
        t = 1
        for j in range(m):
            baby.setdefault(t, j)
            t = t * self.g % self.p
        giant = pow(self.g, (self.p - 1 - m) % (self.p - 1), self.p)
        t = x
        for i in range(m + 1):
            if t in baby:
                return (i * m + baby[t]) % (self.p - 1)
            t = t * giant % self.p
        raise AssertionError("BSGS failed; g is not a generator")

    def units(self) -> DenseSet:
        return DenseSet.units(self.p)

    def full(self) -> DenseSet:
        return DenseSet.full(self.p)

    def __repr__(self) -> str:
        return f"FieldContext(p={self.p}, g={self.g})"


@dataclass(frozen=True)
class SubgroupDescriptor:
    """A multiplicative subgroup of order d dividing p-1."""

    ctx: FieldContext
    order: int
    elements: DenseSet = field(compare=False)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def generator(self) -> int:
        """g^((p-1)/d), a generator of the subgroup."""
        return pow(self.ctx.g, (self.ctx.p - 1) // self.order, self.ctx.p)

    def __repr__(self) -> str:
        return f"SubgroupDescriptor(p={self.p}, d={self.order})"


def subgroup(ctx: FieldContext, d: int) -> SubgroupDescriptor:
    """The unique subgroup {g^(k(p-1)/d)} of order d | p-1."""
    p = ctx.p
    if d < 1 or (p - 1) % d != 0:
        raise DomainError(f"{d} does not divide p-1 = {p - 1}")
    if "powers" in ctx.__dict__:
        els = ctx.powers[:: (p - 1) // d]
    else:
        gen = pow(ctx.g, (p - 1) // d, p)
        els = np.empty(d, dtype=np.int64)
        v = 1
        for k in range(d):
            els[k] = v
            v = v * gen % p
    dense = DenseSet(p, els)
    assert dense.card == d
    return SubgroupDescriptor(ctx, d, dense)


def coset_decomposition(q: DenseSet, sub: SubgroupDescriptor) -> list[int]:
    """Smallest-element representatives of the cosets making up q.

    q must avoid 0 and be invariant under the subgroup; the cosets x*R then
    partition q exactly.
    """
    p = sub.ctx.p
    if q.p != p:
        raise DomainError(f"modulus mismatch: {q.p} != {p}")
    if 0 in q:
        raise DomainError("0 cannot lie in a union of multiplicative cosets")
    if not q.card:
        return []
    d = sub.order
    if q.card % d != 0:
        raise InvarianceError(f"|q| = {q.card} is not a multiple of |R| = {d}")
    if p <= _EAGER_LOG_BOUND:
        k = (p - 1) // d
        cidx = sub.ctx.log_table[q.elements()] % k
        order = np.argsort(cidx, kind="stable")  # elements() is ascending
        groups, first, sizes = np.unique(cidx[order], return_index=True,
                                         return_counts=True)
        if not np.all(sizes == d):
            raise InvarianceError("q is not invariant under the subgroup")
        reps = sorted(int(e) for e in q.elements()[order][first])
        return reps
    # Large p: peel cosets off the mask directly.
    reps = []
    remaining = q.mask
    rel = sub.elements.elements()
    while remaining:
        x = (remaining & -remaining).bit_length() - 1
        coset = DenseSet(p, (x * rel) % p)
        if coset.mask & ~remaining:
            raise InvarianceError("q is not invariant under the subgroup")
        remaining ^= coset.mask
        reps.append(x)
    return reps
