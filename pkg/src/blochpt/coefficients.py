"""Exact rational diagram coefficients.

Two coefficient functions weight the staircase diagrams: the vector
coefficient (c) in the normalised eigenvector series and the energy
coefficient (e) in the eigenvalue series.  Both are computed two independent
ways: by the coupled recurrences (CoefficientEngine, memoized) and in closed
form from the diagram's crossing numbers.  All arithmetic is exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import accumulate

from .diagrams import SequenceLike, as_parts, crossing_numbers

ONE = Fraction(1)
ZERO = Fraction(0)


@lru_cache(maxsize=None)
def crossing_weight(n: int) -> Fraction:
    """The central-binomial rational C(2n, n)/4^n in lowest terms.

    This is the vector coefficient of any diagram with n main-diagonal
    down-crossings; crossing_weight(0) == 1.
    """
    if n < 0:
        raise ValueError("crossing weight defined for n >= 0")
    return Fraction(math.comb(2 * n, n), 4**n)


def crossing_weight_float(n: int) -> float:
    """Floating-point crossing weight via log-gamma, usable for huge n."""
    if n < 0:
        raise ValueError("crossing weight defined for n >= 0")
    return math.exp(math.lgamma(n + 0.5) - math.lgamma(n + 1)) / math.sqrt(math.pi)


def c_closed(s: SequenceLike) -> Fraction:
    """Closed-form vector coefficient: crossing_weight of the total down-crossing count."""
    return crossing_weight(sum(crossing_numbers(s).lower))


def e_closed(s: SequenceLike) -> Fraction:
    """Closed-form energy coefficient from the crossing numbers alone.

    Summing over pairs i: [w(A_i) - w(A_{i-1}) + [i == 1]] * w(B_i), where
    A_i accumulates the up-crossing counts from the left, B_i the
    down-crossing counts from the right, and w is crossing_weight.  The empty
    sequence has coefficient 1.
    """
    parts = as_parts(s, allow_empty=True)
    if not parts:
        return ONE
    cn = crossing_numbers(parts)
    total = ZERO
    a = 0
    b = sum(cn.lower)
    for i, (up, down) in enumerate(cn.pairs):
        a_prev = a
        a += up
        jump = crossing_weight(a) - crossing_weight(a_prev) + (ONE if i == 0 else ZERO)
        total += jump * crossing_weight(b)
        b -= down
    return total


class CoefficientEngine:
    """Memoized evaluator of the coupled coefficient recurrences.

    Base cases: c(1) = 1 for the order-1 diagram and e() = 1 for the empty
    sequence.  Caches are keyed on exact part tuples and grow monotonically;
    concurrent queries may race on inserts but always store equal values.
    """

    def __init__(self):
        self._c: dict[tuple[int, ...], Fraction] = {(1,): ONE}
        self._e: dict[tuple[int, ...], Fraction] = {(): ONE}

    def vector_coeff(self, s: SequenceLike) -> Fraction:
        """Recurrence-route vector coefficient (c) of a valid sequence."""
        return self._c_rec(as_parts(s))

    def energy_coeff(self, s: SequenceLike) -> Fraction:
        """Recurrence-route energy coefficient (e); the empty sequence gives 1."""
        return self._e_rec(as_parts(s, allow_empty=True))

    def _c_rec(self, parts: tuple[int, ...]) -> Fraction:
        cached = self._c.get(parts)
        if cached is not None:
            return cached
        n = len(parts)
        k1 = parts[0]
        running = tuple(accumulate(parts))
        if k1 == 0:
            # Split at every main-diagonal passage m with the path at or below
            # the diagonal; the left part is read backwards with its first
            # step replaced, the right part gets the remaining rise.
            value = ZERO
            for m in range(1, n):
                k_m = running[m - 1]
                gap = m - k_m
                if gap < 0 or parts[m] < gap:
                    continue
                weight = 1 - (m == k_m) - (m == running[m])
                if weight == 0:
                    continue
                left = (gap,) + parts[m - 1 : 0 : -1]
                right = (running[m] - m,) + parts[m + 1 :]
                value += Fraction(weight, 2) * self._c_rec(left) * self._c_rec(right)
        elif k1 == 1:
            # A leading unit step never changes the coefficient.
            value = self._c_rec(parts[1:]) if n > 1 else ONE
        else:
            # Split at every zero step p where the path sits exactly on the
            # upper diagonal; the leading step loses one unit on the left,
            # the tail after the zero feeds the energy coefficient.
            value = ZERO
            for p in range(2, n + 1):
                if parts[p - 1] != 0 or running[p - 2] != p:
                    continue
                value += self._c_rec((k1 - 1,) + parts[1 : p - 1]) * self._e_rec(parts[p:])
        self._c[parts] = value
        return value

    def _e_rec(self, parts: tuple[int, ...]) -> Fraction:
        cached = self._e.get(parts)
        if cached is not None:
            return cached
        # c of the same sequence, minus one split per zero step p that sits
        # exactly on the upper diagonal (K_p == p): a zero-prefixed left part
        # times the energy coefficient of the tail.
        value = self._c_rec(parts)
        running = tuple(accumulate(parts))
        for p in range(2, len(parts) + 1):
            if parts[p - 1] != 0 or running[p - 1] != p:
                continue
            value -= self._c_rec((0,) + parts[: p - 1]) * self._e_rec(parts[p:])
        self._e[parts] = value
        return value


_shared = CoefficientEngine()


def c_recurrence(s: SequenceLike) -> Fraction:
    """Recurrence-route vector coefficient using a shared module-level cache."""
    return _shared.vector_coeff(s)


def e_recurrence(s: SequenceLike) -> Fraction:
    """Recurrence-route energy coefficient using a shared module-level cache."""
    return _shared.energy_coeff(s)


def format_rational(value: Fraction) -> str:
    """Serialize as "p/q" in lowest terms, omitting the denominator when 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
