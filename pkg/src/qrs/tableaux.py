"""
Semistandard and standard tableaux stored as shape chains.

A semistandard tableau on the alphabet [l] is the chain lam^1 < lam^2 < ... <
lam^l where lam^i is the shape formed by the entries <= i (a Gelfand-Tsetlin
pattern).  A standard tableau of size n is the saturated chain of shapes
mu^1 c mu^2 c ... c mu^n.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .qarith import SYMBOLIC, WeightMode, WeightScalar
from .shapes import (
    EMPTY,
    Partition,
    TooManyPartsError,
    delta,
    interlaces,
    interlacing_below,
    remove_box,
)

__all__ = [
    "Tableau",
    "StandardTableau",
    "MalformedTableauError",
    "RepeatedEntryError",
    "kappa",
    "kappa_binomial",
    "rho",
    "standardize",
    "check_eq3",
    "enumerate_tableaux",
    "enumerate_all_tableaux",
    "enumerate_standard",
]


class MalformedTableauError(ValueError):
    pass


class RepeatedEntryError(ValueError):
    pass


@dataclass(frozen=True)
class Tableau:
    """Semistandard tableau with entries in [l], as a chain of l partitions."""

    l: int
    chain: tuple

    def __post_init__(self):
        chain = tuple(Partition(p) for p in self.chain)
        object.__setattr__(self, "chain", chain)
        if self.l < 1 or len(chain) != self.l:
            raise MalformedTableauError(f"need exactly l={self.l} shapes, got {len(chain)}")
        prev = EMPTY
        for i, lam in enumerate(chain, start=1):
            if len(lam) > i:
                raise MalformedTableauError(f"level {i} shape {list(lam)} has more than {i} parts")
            if not interlaces(prev, lam):
                raise MalformedTableauError(f"levels {i - 1} and {i} do not interlace")
            prev = lam

    @classmethod
    def _trusted(cls, l, chain):
        t = object.__new__(cls)
        object.__setattr__(t, "l", l)
        object.__setattr__(t, "chain", chain)
        return t

    @classmethod
    def empty(cls, l: int) -> "Tableau":
        return cls._trusted(l, (EMPTY,) * l)

    @property
    def shape(self) -> Partition:
        return self.chain[-1]

    @property
    def size(self) -> int:
        return self.chain[-1].size

    @property
    def type(self) -> tuple:
        sizes = [0] + [lam.size for lam in self.chain]
        return tuple(sizes[i] - sizes[i - 1] for i in range(1, self.l + 1))

    def lam(self, i: int, j: int) -> int:
        """lam^i_j with zeros for undefined entries (i = 0, j = 0 or j > i)."""
        if i < 1 or j < 1 or j > i:
            return 0
        return self.chain[i - 1].part(j)

    def conv(self, i: int, j: int) -> Optional[int]:
        """
        lam^i_j, or None where the pattern entry does not exist (j = 0 or
        j > i).  Any q-exponent involving None is read as a vanishing q-power.
        """
        if j < 1 or j > i:
            return None
        if i < 1:
            return None
        return self.chain[i - 1].part(j)

    def to_rows(self) -> list:
        rows = []
        for r in range(1, len(self.shape) + 1):
            row = []
            prev = 0
            for i, lam in enumerate(self.chain, start=1):
                c = lam.part(r)
                row.extend([i] * (c - prev))
                prev = c
            rows.append(row)
        return rows

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], l: Optional[int] = None) -> "Tableau":
        rows = [list(r) for r in rows if len(r)]
        if l is None:
            l = max((max(r) for r in rows), default=1)
        for r, row in enumerate(rows):
            if r and len(row) > len(rows[r - 1]):
                raise MalformedTableauError(f"row {r + 1} is longer than row {r} at ({r + 1},{len(rows[r - 1]) + 1})")
            for c, x in enumerate(row):
                if not isinstance(x, int) or not 1 <= x <= l:
                    raise MalformedTableauError(f"entry {x!r} at ({r + 1},{c + 1}) outside [1,{l}]")
                if c and row[c - 1] > x:
                    raise MalformedTableauError(f"row {r + 1} decreases at ({r + 1},{c + 1})")
                if r and rows[r - 1][c] >= x:
                    raise MalformedTableauError(f"column {c + 1} not strictly increasing at ({r + 1},{c + 1})")
        chain = tuple(
            Partition([sum(1 for x in row if x <= i) for row in rows]) for i in range(1, l + 1)
        )
        return cls(l, chain)

    def entries(self) -> list:
        return sorted(x for row in self.to_rows() for x in row)

    def key(self) -> tuple:
        return tuple(tuple(p) for p in self.chain)

    def to_json(self) -> dict:
        return {"l": self.l, "shape_chain": [list(p) for p in self.chain]}

    @classmethod
    def from_json(cls, obj: dict, l: Optional[int] = None) -> "Tableau":
        if "rows" in obj:
            return cls.from_rows(obj["rows"], obj.get("l", l))
        return cls(obj["l"], tuple(obj["shape_chain"]))

    def __str__(self):
        rows = self.to_rows()
        return "/".join("".join(map(str, r)) if self.l < 10 else ",".join(map(str, r)) for r in rows) or "()"


@dataclass(frozen=True)
class StandardTableau:
    """Standard tableau of size n, as the saturated chain mu^1 c ... c mu^n."""

    n: int
    chain: tuple

    def __post_init__(self):
        chain = tuple(Partition(p) for p in self.chain)
        object.__setattr__(self, "chain", chain)
        if len(chain) != self.n:
            raise MalformedTableauError(f"need {self.n} shapes, got {len(chain)}")
        prev = EMPTY
        for i, mu in enumerate(chain, start=1):
            if mu.size != i or _added_row(prev, mu) is None:
                raise MalformedTableauError(f"step {i} does not add exactly one box")
            prev = mu

    @classmethod
    def _trusted(cls, n, chain):
        t = object.__new__(cls)
        object.__setattr__(t, "n", n)
        object.__setattr__(t, "chain", chain)
        return t

    @classmethod
    def empty(cls) -> "StandardTableau":
        return cls._trusted(0, ())

    @property
    def shape(self) -> Partition:
        return self.chain[-1] if self.chain else EMPTY

    def extend(self, new_shape: Partition) -> "StandardTableau":
        return StandardTableau._trusted(self.n + 1, self.chain + (new_shape,))

    def rows_of_steps(self) -> list:
        """Row receiving box i, for i = 1..n."""
        out = []
        prev = EMPTY
        for mu in self.chain:
            out.append(_added_row(prev, mu))
            prev = mu
        return out

    def to_rows(self) -> list:
        rows = [[] for _ in self.shape]
        for i, r in enumerate(self.rows_of_steps(), start=1):
            rows[r - 1].append(i)
        return rows

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "StandardTableau":
        rows = [list(r) for r in rows if len(r)]
        n = sum(len(r) for r in rows)
        if sorted(x for r in rows for x in r) != list(range(1, n + 1)):
            raise MalformedTableauError("entries must be 1..n, each once")
        t = Tableau.from_rows(rows, max(n, 1))
        return cls(n, tuple(t.chain[:n]))

    def key(self) -> tuple:
        return tuple(tuple(p) for p in self.chain)

    def to_json(self) -> dict:
        return {"n": self.n, "shape_chain": [list(p) for p in self.chain]}

    @classmethod
    def from_json(cls, obj: dict) -> "StandardTableau":
        if "rows" in obj:
            return cls.from_rows(obj["rows"])
        return cls(obj["n"], tuple(obj["shape_chain"]))

    def __str__(self):
        return "/".join(",".join(map(str, r)) for r in self.to_rows()) or "()"


def _added_row(prev: Partition, mu: Partition) -> Optional[int]:
    diff = [i for i in range(1, len(mu) + 1) if mu.part(i) != prev.part(i)]
    if len(diff) != 1 or mu.part(diff[0]) != prev.part(diff[0]) + 1:
        return None
    return diff[0]


# -- weights ------------------------------------------------------------------------

def kappa(P: Tableau, mode: WeightMode = SYMBOLIC) -> WeightScalar:
    """kappa(P) via the ratio of q-Pochhammer symbols."""
    l = P.l
    num = mode.one
    for j in range(2, l):
        for i in range(1, j):
            num = num * mode.poch(P.lam(j, i) - P.lam(j, i + 1))
    den = mode.one
    for j in range(1, l):
        for i in range(1, j + 1):
            den = den * mode.poch(P.lam(j, i) - P.lam(j + 1, i + 1))
            den = den * mode.poch(P.lam(j + 1, i) - P.lam(j, i))
    return num / den


def kappa_binomial(P: Tableau, mode: WeightMode = SYMBOLIC) -> WeightScalar:
    """kappa(P) via Delta_l(lam)^{-1} times a product of q-binomials."""
    l = P.l
    out = mode.one
    for i in range(2, l + 1):
        for j in range(1, i):
            out = out * mode.qbinom(P.lam(i, j) - P.lam(i, j + 1), P.lam(i, j) - P.lam(i - 1, j))
    return out / delta(P.shape, l, mode)


def rho(Q: StandardTableau, mode: WeightMode = SYMBOLIC) -> WeightScalar:
    """Product over steps of (1 - q^{mu_r - mu_{r+1}}), r the row receiving the box."""
    out = mode.one
    for mu, r in zip(Q.chain, Q.rows_of_steps()):
        out = out * mode.one_minus_qpow(mu.part(r) - mu.part(r + 1))
    return out


def standardize(P: Tableau) -> StandardTableau:
    """Relabel the distinct entries i_1 < ... < i_n of P as 1..n."""
    sizes = [0] + [lam.size for lam in P.chain]
    chain = []
    for i in range(1, P.l + 1):
        step = sizes[i] - sizes[i - 1]
        if step > 1:
            raise RepeatedEntryError(f"entry {i} occurs {step} times")
        if step == 1:
            chain.append(P.chain[i - 1])
    return StandardTableau._trusted(len(chain), tuple(chain))


def check_eq3(P: Tableau) -> bool:
    """kappa(P) == rho(std P) / ((1-q)^n Delta_l(shape)) for distinct-entry P."""
    Q = standardize(P)
    n = Q.n
    rhs = rho(Q) / (SYMBOLIC.one_minus_qpow(1) ** n * delta(P.shape, P.l))
    return kappa(P) == rhs


# -- enumeration ----------------------------------------------------------------------

def enumerate_tableaux(shape: Sequence[int], l: int) -> list:
    """All semistandard tableaux of the given shape with entries in [l]."""
    shape = Partition(shape)
    if len(shape) > l:
        raise TooManyPartsError(f"{list(shape)} has more than {l} parts")
    out = []

    def rec(level, chain_rev):
        if level == 0:
            out.append(Tableau._trusted(l, tuple(reversed(chain_rev))))
            return
        for mu in interlacing_below(chain_rev[-1], level):
            chain_rev.append(mu)
            rec(level - 1, chain_rev)
            chain_rev.pop()

    rec(l - 1, [shape])
    return out


def enumerate_all_tableaux(n: int, l: int) -> Iterator[Tableau]:
    from .shapes import enumerate_partitions

    for lam in enumerate_partitions(n, l):
        yield from enumerate_tableaux(lam, l)


def enumerate_standard(shape: Sequence[int]) -> list:
    """All standard tableaux of the given shape."""
    shape = Partition(shape)
    n = shape.size
    out = []

    def rec(mu, chain_rev):
        if mu.size == 0:
            out.append(StandardTableau._trusted(n, tuple(reversed(chain_rev))))
            return
        for i in range(1, len(mu) + 1):
            if mu.part(i) > mu.part(i + 1):
                nu = remove_box(mu, i)
                if nu:
                    chain_rev.append(nu)
                    rec(nu, chain_rev)
                    chain_rev.pop()
                else:
                    rec(nu, chain_rev)

    if n == 0:
        return [StandardTableau.empty()]
    rec(shape, [shape])
    return out
