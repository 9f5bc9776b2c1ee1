"""Integer partitions, interlacing, the normalizers Delta_l and Delta, and the operator L."""

from __future__ import annotations

from itertools import product
from typing import Iterator, Sequence

from .qarith import SYMBOLIC, WeightMode, WeightScalar

__all__ = [
    "Partition",
    "InvalidPartitionError",
    "TooManyPartsError",
    "interlaces",
    "add_box",
    "remove_box",
    "addable_rows",
    "enumerate_partitions",
    "partitions_up_to",
    "interlacing_below",
    "delta",
    "delta_full",
    "L_entry",
    "L_row",
]


class InvalidPartitionError(ValueError):
    pass


class TooManyPartsError(ValueError):
    pass


class Partition(tuple):
    """
    Weakly decreasing tuple of positive integers.  Trailing zeros are dropped
    on construction; ``part(i)`` is 1-indexed and returns 0 past the end.
    """

    __slots__ = ()

    def __new__(cls, parts: Sequence[int] = ()):
        if isinstance(parts, Partition):
            return parts
        p = [int(x) for x in parts]
        while p and p[-1] == 0:
            p.pop()
        for i, x in enumerate(p):
            if x < 0 or (i and x > p[i - 1]):
                raise InvalidPartitionError(f"{tuple(parts)} is not a partition")
        return super().__new__(cls, p)

    @classmethod
    def _trusted(cls, parts):
        return tuple.__new__(cls, parts)

    def part(self, i: int) -> int:
        return self[i - 1] if 1 <= i <= len(self) else 0

    @property
    def size(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def __repr__(self):
        return f"Partition({list(self)})"

    def to_json(self):
        return list(self)


EMPTY = Partition(())


def interlaces(mu: Sequence[int], lam: Sequence[int]) -> bool:
    """True iff mu < lam in the interlacing order: lam_{i+1} <= mu_i <= lam_i."""
    mu, lam = Partition(mu), Partition(lam)
    n = max(len(mu), len(lam)) + 1
    for i in range(1, n + 1):
        m = mu.part(i)
        if not (lam.part(i + 1) <= m <= lam.part(i)):
            return False
    return True


def add_box(lam: Sequence[int], i: int) -> Partition:
    """lam + e_i; raises InvalidPartitionError when the result is not a partition."""
    lam = Partition(lam)
    if i < 1 or i > len(lam) + 1:
        raise InvalidPartitionError(f"cannot add a box in row {i} of {list(lam)}")
    if i > 1 and lam.part(i - 1) == lam.part(i):
        raise InvalidPartitionError(f"cannot add a box in row {i} of {list(lam)}")
    parts = list(lam) + [0]
    parts[i - 1] += 1
    return Partition._trusted(tuple(x for x in parts if x))


def remove_box(lam: Sequence[int], i: int) -> Partition:
    lam = Partition(lam)
    if lam.part(i) == 0 or lam.part(i) == lam.part(i + 1):
        raise InvalidPartitionError(f"cannot remove a box from row {i} of {list(lam)}")
    parts = list(lam)
    parts[i - 1] -= 1
    return Partition._trusted(tuple(x for x in parts if x))


def addable_rows(lam: Sequence[int], l: int) -> list[int]:
    """Rows i <= l where a box can be added keeping a partition."""
    lam = Partition(lam)
    return [i for i in range(1, min(l, len(lam) + 1) + 1) if i == 1 or lam.part(i - 1) > lam.part(i)]


def enumerate_partitions(n: int, l: int) -> list[Partition]:
    """All partitions of n with at most l parts, lexicographically decreasing."""
    if n < 0 or l < 1:
        raise ValueError("need n >= 0 and l >= 1")
    out = []

    def rec(remaining, cap, parts):
        if remaining == 0:
            out.append(Partition._trusted(tuple(parts)))
            return
        if len(parts) == l:
            return
        for p in range(min(remaining, cap), 0, -1):
            parts.append(p)
            rec(remaining - p, p, parts)
            parts.pop()

    rec(n, n, [])
    return out


def partitions_up_to(bound: int, l: int) -> Iterator[Partition]:
    for n in range(bound + 1):
        yield from enumerate_partitions(n, l)


def interlacing_below(lam: Sequence[int], m: int) -> list[Partition]:
    """All mu with mu < lam and at most m parts (lexicographically decreasing)."""
    lam = Partition(lam)
    if lam.part(m + 2) > 0:
        return []
    ranges = [range(lam.part(i), lam.part(i + 1) - 1, -1) for i in range(1, m + 1)]
    return [Partition(c) for c in product(*ranges)]


def _check_parts(lam, l):
    if len(lam) > l:
        raise TooManyPartsError(f"{list(lam)} has more than {l} parts")


def delta(lam: Sequence[int], l: int, mode: WeightMode = SYMBOLIC) -> WeightScalar:
    """Delta_l(lam) = prod_{i<l} (lam_i - lam_{i+1})_q."""
    lam = Partition(lam)
    _check_parts(lam, l)
    out = mode.one
    for i in range(1, l):
        gap = lam.part(i) - lam.part(i + 1)
        if gap:
            out = out * mode.poch(gap)
    return out


def delta_full(lam: Sequence[int], mode: WeightMode = SYMBOLIC) -> WeightScalar:
    """Delta(lam): the product runs over every part, including (lam_last)_q."""
    lam = Partition(lam)
    return delta(lam, len(lam) + 1, mode)


def L_entry(lam: Sequence[int], mu: Sequence[int], l: int, mode: WeightMode = SYMBOLIC) -> WeightScalar:
    """c_i(lam) when mu = lam + e_i (i <= l), else zero."""
    lam, mu = Partition(lam), Partition(mu)
    if len(lam) > l or len(mu) > l or mu.size != lam.size + 1:
        return mode.zero
    for i in range(1, l + 1):
        if mu.part(i) != lam.part(i):
            if mu.part(i) != lam.part(i) + 1 or any(
                mu.part(j) != lam.part(j) for j in range(i + 1, l + 1)
            ):
                return mode.zero
            return _c(lam, i, l, mode)
    return mode.zero


def _c(lam, i, l, mode):
    if i == l:
        return mode.one
    return mode.one_minus_qpow(lam.part(i) - lam.part(i + 1) + 1)


def L_row(lam: Sequence[int], l: int, mode: WeightMode = SYMBOLIC) -> dict[Partition, WeightScalar]:
    """Nonzero entries L(lam, .) keyed by target partition."""
    lam = Partition(lam)
    return {add_box(lam, i): _c(lam, i, l, mode) for i in addable_rows(lam, l)}
