"""Independent brute-force references for validating the fast paths.

Shipped with the library (not only the tests) so the CLI can cross-check
small cases on demand.  Cost budgets are hard errors: these routines are
quadratic by design and must not leak into sweeps.
"""

from __future__ import annotations

import math
from collections import Counter

import numpy as np

from .errors import CapacityError, DomainError
from .sets import DenseSet

__all__ = ["naive_energy", "naive_dft", "naive_sumset"]

_ENERGY_BUDGET = 10 ** 6
_SUMSET_BUDGET = 10 ** 8
_DFT_MAX_P = 10 ** 4


def naive_energy(a: DenseSet, b: DenseSet) -> int:
    """Quadruple count with a1 + b1 = a2 + b2, via a pair-sum histogram."""
    if a.p != b.p:
        raise DomainError(f"modulus mismatch: {a.p} != {b.p}")
    if a.card * b.card > _ENERGY_BUDGET:
        raise CapacityError(f"|A||B| = {a.card * b.card} exceeds {_ENERGY_BUDGET}")
    sums = Counter()
    eb = b.elements().tolist()
    for x in a.elements().tolist():
        for y in eb:
            sums[(x + y) % a.p] += 1
    return sum(r * r for r in sums.values())


def naive_dft(a: DenseSet, xi: int) -> float:
    """|sum_{x in A} e(-2 pi i xi x / p)| with compensated exact summation."""
    p = a.p
    if p > _DFT_MAX_P:
        raise CapacityError(f"p = {p} exceeds the oracle bound {_DFT_MAX_P}")
    xi %= p
    re_parts, im_parts = [], []
    for x in a.elements().tolist():
        ang = -2.0 * math.pi * ((xi * x) % p) / p
        re_parts.append(math.cos(ang))
        im_parts.append(math.sin(ang))
    return math.hypot(math.fsum(re_parts), math.fsum(im_parts))


def naive_sumset(a: DenseSet, b: DenseSet, sign: str = "+") -> DenseSet:
    """Sumset or difference set by enumerating every pair."""
    if a.p != b.p:
        raise DomainError(f"modulus mismatch: {a.p} != {b.p}")
    if sign not in ("+", "-"):
        raise DomainError(f"sign must be '+' or '-', got {sign!r}")
    if a.card * b.card > _SUMSET_BUDGET:
        raise CapacityError(f"|A||B| = {a.card * b.card} exceeds {_SUMSET_BUDGET}")
    if not a.card or not b.card:
        raise DomainError("sumset of an empty set is not defined here")
    ea, eb = a.elements(), b.elements()
    out = np.zeros(a.p, dtype=bool)
    for x in ea.tolist():
        pair = (x + eb) % a.p if sign == "+" else (x - eb) % a.p
        out[pair] = True
    return DenseSet(a.p, np.flatnonzero(out))
