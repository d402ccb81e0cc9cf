"""Operator-equivalence classes of diagrams under z-string permutation.

Two diagrams contribute the same matrix element to the eigenvalue series when
their z-strings are permutations of each other; for the eigenvector series
the first string is pinned and only the remaining strings permute.  Classes
are keyed by a canonical representative (strings sorted descending) and carry
exact summed coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coefficients import c_closed, e_closed
from .diagrams import (
    BlochSequence,
    SequenceLike,
    ZDecomposition,
    count_convex,
    count_sequences,
    is_convex,
    iter_sequences,
    z_decompose,
)

ENERGY = "energy"
VECTOR = "vector"
MODES = (ENERGY, VECTOR)


class EqualStrings(ValueError):
    """The strict string order is undefined on equal strings."""


def string_sort_key(z: tuple[int, ...]):
    """Key realizing the string order: excess (total minus length), then length, then entries."""
    z = tuple(z)
    return (sum(z) - len(z), len(z), z)


def string_less_than(y, z) -> bool:
    """Strict total order on distinct positive-integer strings."""
    y, z = tuple(y), tuple(z)
    if y == z:
        raise EqualStrings(f"strings {y} and {z} are equal")
    return string_sort_key(y) < string_sort_key(z)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def canonicalize(s: SequenceLike, mode: str) -> BlochSequence:
    """Canonical class representative: permutable strings sorted descending.

    Energy mode sorts all strings; vector mode pins the first string and
    sorts the rest.  Idempotent by construction.
    """
    _check_mode(mode)
    strings = list(z_decompose(s).strings)
    if mode == ENERGY:
        strings.sort(key=string_sort_key, reverse=True)
    else:
        strings[1:] = sorted(strings[1:], key=string_sort_key, reverse=True)
    return ZDecomposition(tuple(strings)).reassemble()


@dataclass(frozen=True)
class EquivalenceClass:
    """One permutation class with its exact summed coefficients."""

    representative: BlochSequence
    members: tuple[BlochSequence, ...]
    c_eff: Fraction
    e_eff: Fraction
    mode: str

    @property
    def size(self) -> int:
        return len(self.members)

    def convex_members(self) -> int:
        return sum(1 for member in self.members if is_convex(member))


def group(n: int, mode: str, cap: int | None = None) -> list[EquivalenceClass]:
    """Partition all order-n sequences into equivalence classes.

    Classes come back sorted by representative; members keep enumeration
    order.  Effective coefficients are exact rational sums over the members.
    """
    _check_mode(mode)
    buckets: dict[tuple[int, ...], list[BlochSequence]] = {}
    for seq in iter_sequences(n, cap):
        rep = canonicalize(seq, mode)
        buckets.setdefault(rep.parts, []).append(seq)
    classes = []
    for rep_parts in sorted(buckets):
        members = tuple(buckets[rep_parts])
        classes.append(
            EquivalenceClass(
                representative=BlochSequence(rep_parts),
                members=members,
                c_eff=sum((c_closed(m) for m in members), Fraction(0)),
                e_eff=sum((e_closed(m) for m in members), Fraction(0)),
                mode=mode,
            )
        )
    return classes


def survives_offdiagonal(s: SequenceLike, mode: str) -> bool:
    """Whether the term survives when the perturbation has zero diagonal.

    A zero diagonal kills any term whose operator string picks up a diagonal
    matrix element: sequences ending in zero or containing adjacent zeros
    (both modes), plus sequences starting with zero in energy mode.
    Equivalently: no empty z-string among the permutable ones, and in energy
    mode no empty string at all.  Within a class this is all-or-nothing, so
    the predicate on the representative decides the class.
    """
    _check_mode(mode)
    strings = z_decompose(s).strings
    movable = strings if mode == ENERGY else strings[1:]
    return all(len(z) > 0 for z in movable)


@dataclass(frozen=True)
class TermCountRow:
    """Per-order term counts for the summary table."""

    order: int
    sequences: int
    convex: int
    vector_classes: int
    energy_classes: int
    vector_offdiag: int
    energy_offdiag: int


def term_count_report(n_max: int, cap: int | None = None) -> list[TermCountRow]:
    """Term counts for orders 1..n_max: raw, convex, grouped, off-diagonal-V."""
    rows = []
    for n in range(1, n_max + 1):
        energy_classes = group(n, ENERGY, cap)
        vector_classes = group(n, VECTOR, cap)
        rows.append(
            TermCountRow(
                order=n,
                sequences=count_sequences(n),
                convex=count_convex(n),
                vector_classes=len(vector_classes),
                energy_classes=len(energy_classes),
                vector_offdiag=sum(
                    survives_offdiagonal(cls.representative, VECTOR) for cls in vector_classes
                ),
                energy_offdiag=sum(
                    survives_offdiagonal(cls.representative, ENERGY) for cls in energy_classes
                ),
            )
        )
    return rows
