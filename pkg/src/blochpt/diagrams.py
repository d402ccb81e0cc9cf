"""Staircase (Bloch) sequences: enumeration, convexity, crossings, z-strings.

A sequence (k1, ..., kn) of nonnegative integers summing to n draws a
staircase: step i rises k_i units, then runs one unit right.  Everything in
this module is a pure function of such sequences.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, Iterator, Sequence, Union

DEFAULT_CAP = 12
CAP_ENV_VAR = "BLOCH_RSPT_CAP"


class CapExceeded(ValueError):
    """Enumeration was requested above the configured order cap."""


class InvalidCrossingNumbers(ValueError):
    """Crossing-number list violates its shape constraints."""


def enumeration_cap(cap: int | None = None) -> int:
    """Resolve the enumeration cap: explicit argument, then env var, then default."""
    if cap is not None:
        return int(cap)
    env = os.environ.get(CAP_ENV_VAR)
    if env is not None:
        return int(env)
    return DEFAULT_CAP


@dataclass(frozen=True)
class BlochSequence:
    """A composition of n into n nonnegative parts; order n staircase diagram."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(k) for k in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ValueError("a Bloch sequence has at least one step")
        if any(k < 0 for k in parts):
            raise ValueError(f"negative step in {parts}")
        if sum(parts) != len(parts):
            raise ValueError(f"steps {parts} must sum to the order {len(parts)}")

    @property
    def order(self) -> int:
        return len(self.parts)

    def partial_sums(self) -> tuple[int, ...]:
        """Running totals K_1..K_n of the steps."""
        return tuple(accumulate(self.parts))

    @classmethod
    def parse(cls, text: str) -> "BlochSequence":
        """Parse a comma-separated step list, e.g. "2,0,0,2"."""
        return cls(tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok))

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self):
        return "(" + ",".join(str(k) for k in self.parts) + ")"


SequenceLike = Union[BlochSequence, Sequence[int]]


def as_parts(s: SequenceLike, allow_empty: bool = False) -> tuple[int, ...]:
    """Coerce to a validated part tuple.  Empty input is allowed only on request."""
    if isinstance(s, BlochSequence):
        return s.parts
    parts = tuple(int(k) for k in s)
    if not parts:
        if allow_empty:
            return parts
        raise ValueError("empty sequence not allowed here")
    BlochSequence(parts)  # validate
    return parts


def _compositions(total: int, length: int) -> Iterator[tuple[int, ...]]:
    if length == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, length - 1):
            yield (first,) + rest


def iter_sequences(n: int, cap: int | None = None) -> Iterator[BlochSequence]:
    """Yield every order-n sequence once, in ascending lexicographic order."""
    if n < 1:
        raise ValueError("order must be positive")
    limit = enumeration_cap(cap)
    if n > limit:
        raise CapExceeded(f"order {n} exceeds enumeration cap {limit}")
    for parts in _compositions(n, n):
        yield BlochSequence(parts)


def enumerate_sequences(n: int, cap: int | None = None) -> list[BlochSequence]:
    """All C(2n-1, n) order-n sequences as a lexicographically sorted list."""
    return list(iter_sequences(n, cap))


def count_sequences(n: int) -> int:
    """Number of order-n sequences, C(2n-1, n), exactly."""
    if n < 1:
        raise ValueError("order must be positive")
    return math.comb(2 * n - 1, n)


def count_convex(n: int) -> int:
    """Number of convex order-n sequences: the Catalan number (2n)!/(n!(n+1)!)."""
    if n < 1:
        raise ValueError("order must be positive")
    return math.comb(2 * n, n) // (n + 1)


def is_convex(s: SequenceLike) -> bool:
    """True iff every proper prefix sum K_p is at least p (path stays on or above the diagonal)."""
    parts = as_parts(s)
    running = 0
    for p, k in enumerate(parts[:-1], start=1):
        running += k
        if running < p:
            return False
    return True


@dataclass(frozen=True)
class CrossingNumbers:
    """Alternating counts (N_1, n_1), ..., (N_m, n_m) of diagonal crossings.

    N_i counts strict up-crossings of the upper diagonal (the main diagonal
    shifted up one unit), n_i strict down-crossings of the main diagonal, in
    path order.  Only the leading N_1 and trailing n_m may be zero.
    """

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        pairs = tuple((int(a), int(b)) for a, b in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        if not pairs:
            raise InvalidCrossingNumbers("at least one pair required")
        flat = self.flat
        if any(x < 0 for x in flat):
            raise InvalidCrossingNumbers(f"negative entry in {flat}")
        if any(x == 0 for x in flat[1:-1]):
            raise InvalidCrossingNumbers(f"zero interior entry in {flat}")

    @property
    def m(self) -> int:
        return len(self.pairs)

    @property
    def flat(self) -> tuple[int, ...]:
        return tuple(x for pair in self.pairs for x in pair)

    @property
    def upper(self) -> tuple[int, ...]:
        """The upper-diagonal counts N_1..N_m."""
        return tuple(pair[0] for pair in self.pairs)

    @property
    def lower(self) -> tuple[int, ...]:
        """The main-diagonal counts n_1..n_m."""
        return tuple(pair[1] for pair in self.pairs)

    @classmethod
    def from_flat(cls, values: Iterable[int]) -> "CrossingNumbers":
        vals = tuple(int(x) for x in values)
        if len(vals) % 2 != 0:
            raise InvalidCrossingNumbers(f"flat list {vals} must have even length")
        return cls(tuple(zip(vals[::2], vals[1::2])))

    def __str__(self):
        return "(" + ",".join(str(x) for x in self.flat) + ")"


def crossing_numbers(s: SequenceLike) -> CrossingNumbers:
    """Scan the staircase once and collect its crossing numbers.

    An up-crossing at step i means K_i > i while K_{i-1} <= i-1; a
    down-crossing means K_i < i while K_{i-1} >= i-1.  Touching a diagonal
    without these strict changes triggers neither branch.  A new pair opens
    when an up-crossing follows a down-crossing; paths that never cross keep
    the single pair (0, 0).
    """
    parts = as_parts(s)
    pairs: list[list[int]] = [[0, 0]]
    rising = True  # False once the current pair has recorded a down-crossing
    prev = 0
    for i, k in enumerate(parts, start=1):
        cur = prev + k
        if cur > i and prev <= i - 1:
            if not rising:
                pairs.append([0, 0])
                rising = True
            pairs[-1][0] += 1
        elif cur < i and prev >= i - 1:
            pairs[-1][1] += 1
            rising = False
        prev = cur
    return CrossingNumbers(tuple((a, b) for a, b in pairs))


def canonical_diagram(cn: CrossingNumbers | Iterable[int]) -> BlochSequence:
    """Lowest-order sequence realizing the given crossing numbers.

    Built from (2,0) blocks for up-crossings and (0,2) blocks for
    down-crossings, joined by 0,3,0 bridges between pairs; (0,0) maps to the
    trivial diagram (1).
    """
    if not isinstance(cn, CrossingNumbers):
        cn = CrossingNumbers.from_flat(cn)
    if cn.pairs == ((0, 0),):
        return BlochSequence((1,))
    parts: list[int] = []
    last = cn.m - 1
    for i, (up, down) in enumerate(cn.pairs):
        if i > 0:
            parts += [0, 3, 0]
        up_reps = up if i == 0 else up - 1
        down_reps = down if i == last else down - 1
        parts += [2, 0] * up_reps
        parts += [0, 2] * down_reps
    return BlochSequence(tuple(parts))


@dataclass(frozen=True)
class ZDecomposition:
    """The maximal runs of positive steps between zeros, in order.

    A sequence with q-1 zeros splits into q strings (empty strings allowed);
    rejoining them with single zeros restores the sequence exactly.
    """

    strings: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        strings = tuple(tuple(int(k) for k in z) for z in self.strings)
        object.__setattr__(self, "strings", strings)
        if not strings:
            raise ValueError("at least one string required")
        if any(k <= 0 for z in strings for k in z):
            raise ValueError("strings hold strictly positive integers")

    @property
    def q(self) -> int:
        return len(self.strings)

    def reassemble(self) -> BlochSequence:
        parts: list[int] = []
        for i, z in enumerate(self.strings):
            if i > 0:
                parts.append(0)
            parts.extend(z)
        return BlochSequence(tuple(parts))


def z_decompose(s: SequenceLike) -> ZDecomposition:
    """Split the sequence at every zero."""
    parts = as_parts(s)
    strings: list[tuple[int, ...]] = []
    current: list[int] = []
    for k in parts:
        if k == 0:
            strings.append(tuple(current))
            current = []
        else:
            current.append(k)
    strings.append(tuple(current))
    return ZDecomposition(tuple(strings))
