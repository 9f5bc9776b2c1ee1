"""
Column insertion and its q-weighted version.

The q-insertion of a letter k into P is a weighted set of outcomes, one per
weakly decreasing row sequence k = j_{k-1} >= j_k >= ... >= j_l >= 1 with
nonzero weight.  Each column i in k..l of the insertion path starts at row
j_{i-1}; a horizontal edge at (i, j) adds a box to row j of lam^i and has
weight f(i, j), a vertical edge (i, j) -> (i, j-1) has weight 1 - f(i, j).
f is f1 on the first site of a column entered horizontally and f0 otherwise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from .qarith import SYMBOLIC, WeightMode, WeightScalar
from .shapes import Partition
from .tableaux import StandardTableau, Tableau

__all__ = [
    "InsertionPath",
    "WeightedOutcome",
    "PairDistribution",
    "LetterOutOfRangeError",
    "InvariantViolation",
    "column_insert",
    "rs_correspondence",
    "local_weight",
    "q_insert_outcomes",
    "q_insert_sample",
    "phi_distribution",
    "iter_word_distributions",
    "run_tableau_chain",
    "mc_chain_shapes",
    "seeded_rng",
]

STANDARD = "standard"
# mutated kernels, used as negative controls
F0_ONLY = "f0-only"  # f1 replaced by f0 everywhere (no effect when l <= 2)
DOUBLED = "doubled"  # every q-exponent of f0 doubled; keeps the support
NO_VERTICAL = "no-vertical"  # vertical edges get weight 1 instead of 1 - f
VARIANTS = (STANDARD, F0_ONLY, DOUBLED, NO_VERTICAL)


class LetterOutOfRangeError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    """A structural assumption of the insertion kernel failed."""


@dataclass(frozen=True)
class InsertionPath:
    """Rows j_k, ..., j_l of an insertion path and its edge factors in path order."""

    letter: int
    rows: tuple
    factors: tuple = ()

    @property
    def weight(self):
        if not self.factors:
            return 1
        w = self.factors[0]
        for f in self.factors[1:]:
            w = w * f
        return w

    def to_json(self):
        return {"letter": self.letter, "rows": list(self.rows)}


@dataclass(frozen=True)
class WeightedOutcome:
    tableau: Tableau
    weight: WeightScalar
    path: InsertionPath


def _check_letter(P: Tableau, k: int):
    if not isinstance(k, int) or not 1 <= k <= P.l:
        raise LetterOutOfRangeError(f"letter {k!r} outside [1, {P.l}]")


def _grow(P: Tableau, k: int, rows: Sequence[int]) -> Tableau:
    chain = list(P.chain)
    for i, j in zip(range(k, P.l + 1), rows):
        lam = chain[i - 1]
        parts = list(lam) + [0]
        parts[j - 1] += 1
        chain[i - 1] = Partition._trusted(tuple(x for x in parts if x))
    return Tableau._trusted(P.l, tuple(chain))


def _grow_checked(P: Tableau, k: int, rows: Sequence[int]) -> Optional[Tableau]:
    chain = list(P.chain)
    for i, j in zip(range(k, P.l + 1), rows):
        parts = list(chain[i - 1]) + [0]
        if j > len(parts):
            return None
        parts[j - 1] += 1
        chain[i - 1] = [x for x in parts if x]
    try:
        return Tableau(P.l, tuple(chain))
    except ValueError:
        return None


# -- classic column insertion -------------------------------------------------------

def column_insert(P: Tableau, k: int) -> tuple:
    """Classic column insertion of k into P; returns (P~, path of the q=0 outcome)."""
    _check_letter(P, k)
    rows = P.to_rows()
    ncols = len(rows[0]) if rows else 0
    cols = [[row[c] for row in rows if len(row) > c] for c in range(ncols)]
    x = k
    c = 0
    while True:
        if c == len(cols):
            cols.append([x])
            break
        col = cols[c]
        pos = next((r for r, y in enumerate(col) if y >= x), None)
        if pos is None:
            col.append(x)
            break
        col[pos], x = x, col[pos]
        c += 1
    new_rows = []
    for r in range(max((len(col) for col in cols), default=0)):
        new_rows.append([col[r] for col in cols if len(col) > r])
    out = Tableau.from_rows(new_rows, P.l)
    path_rows = []
    for i in range(k, P.l + 1):
        before, after = P.chain[i - 1], out.chain[i - 1]
        j = next(j for j in range(1, len(after) + 1) if after.part(j) != before.part(j))
        path_rows.append(j)
    return out, InsertionPath(k, tuple(path_rows))


def rs_correspondence(word: Sequence[int], l: Optional[int] = None) -> tuple:
    """(P, Q) from iterated classic column insertion of the word."""
    word = list(word)
    if l is None:
        l = max(word, default=1)
    P = Tableau.empty(l)
    Q = StandardTableau.empty()
    for k in word:
        P, _ = column_insert(P, k)
        Q = Q.extend(P.shape)
    return P, Q


# -- q-weights ----------------------------------------------------------------------------

def _one_minus_q_diff(mode: WeightMode, hi, lo, scale=1):
    # 1 - q^{hi - lo}; an undefined entry makes the q-power vanish
    if hi is None or lo is None:
        return mode.one
    return mode.one_minus_qpow(scale * (hi - lo))


def local_weight(P: Tableau, i: int, j: int, variant: str, mode: WeightMode = SYMBOLIC,
                 _scale: int = 1) -> WeightScalar:
    """f0(i, j) or f1(i, j) evaluated on the pattern of P."""
    if not 1 <= j <= i <= P.l:
        raise ValueError(f"need 1 <= j <= i <= l, got i={i}, j={j}")
    f0 = _one_minus_q_diff(mode, P.conv(i - 1, j - 1), P.conv(i, j), _scale)
    if variant == "f0":
        return f0
    if variant != "f1":
        raise ValueError(f"unknown variant {variant!r}")
    den = _one_minus_q_diff(mode, P.conv(i - 1, j - 1), P.conv(i - 1, j))
    if den.is_zero():
        raise InvariantViolation(f"f1({i},{j}) has a vanishing denominator on {P.to_rows()}")
    return f0 / den


def q_insert_outcomes(P: Tableau, k: int, mode: WeightMode = SYMBOLIC, variant: str = STANDARD) -> list:
    """Every outcome of q-inserting k into P with its weight, in DFS order (highest path first)."""
    _check_letter(P, k)
    if variant not in VARIANTS:
        raise ValueError(f"unknown kernel variant {variant!r}")
    return _outcomes(P, k, mode, variant)


@lru_cache(maxsize=200_000)
def _outcomes(P, k, mode, variant):
    l = P.l
    use_f1 = variant != F0_ONLY
    scale = 2 if variant == DOUBLED else 1
    keep_vertical = variant != NO_VERTICAL
    out = []

    def walk(i, start, rows, factors, weight):
        if i > l:
            if variant == STANDARD:
                grown = _grow(P, k, rows)
            else:
                # a mutated kernel can leave the set of tableaux; drop those outcomes
                grown = _grow_checked(P, k, rows)
                if grown is None:
                    return
            out.append(WeightedOutcome(grown, weight, InsertionPath(k, rows, factors)))
            return
        entered_horizontally = i != k
        vertical = []
        w = weight
        for j in range(start, 0, -1):
            if use_f1 and j == start and entered_horizontally:
                f = local_weight(P, i, j, "f1", mode, scale)
            else:
                f = local_weight(P, i, j, "f0", mode, scale)
            h = w * f
            if not h.is_zero():
                walk(i + 1, j, rows + (j,), factors + tuple(vertical) + (f,), h)
            if j == 1:
                break
            down = 1 - f if keep_vertical else mode.one
            if down.is_zero():
                break
            w = w * down
            vertical.append(down)

    walk(k, k, (), (), mode.one)
    return out


def q_insert_sample(P: Tableau, k: int, rng, q: float) -> tuple:
    """
    Draw one outcome of q-inserting k, walking the path column by column.

    ``rng`` needs a ``random()`` method (numpy Generator or random.Random).
    """
    _check_letter(P, k)
    q = float(q)
    if not 0 <= q < 1:
        raise ValueError("sampling needs 0 <= q < 1")
    rows = []
    start = k
    for i in range(k, P.l + 1):
        j = start
        horizontal_entry = i != k
        while True:
            if j == 1:
                break
            hi = P.conv(i - 1, j - 1)
            e0 = hi - P.conv(i, j)
            f = 1.0 - q ** e0
            if horizontal_entry:
                lo = P.conv(i - 1, j)
                if lo is not None:
                    d = 1.0 - q ** (hi - lo)
                    if d == 0.0:
                        raise InvariantViolation(f"f1({i},{j}) has a vanishing denominator")
                    f /= d
            if f >= 1.0 or rng.random() < f:
                break
            j -= 1
            horizontal_entry = False
        rows.append(j)
        start = j
    rows = tuple(rows)
    return _grow(P, k, rows), InsertionPath(k, rows)


# -- words ----------------------------------------------------------------------------------

class PairDistribution(dict):
    """Map (Tableau, StandardTableau) -> weight."""

    def __init__(self, *args, mode: WeightMode = SYMBOLIC, **kwargs):
        super().__init__(*args, **kwargs)
        self.mode = mode

    def total(self) -> WeightScalar:
        t = self.mode.zero
        for w in self.values():
            t = t + w
        return t

    def marginal_P(self) -> dict:
        out = {}
        for (P, _), w in self.items():
            out[P] = out.get(P, self.mode.zero) + w
        return out

    def marginal_Q(self) -> dict:
        out = {}
        for (_, Q), w in self.items():
            out[Q] = out.get(Q, self.mode.zero) + w
        return out

    def to_json(self) -> list:
        items = sorted(self.items(), key=lambda kv: (kv[0][0].key(), kv[0][1].key()))
        return [
            {"P": P.to_json(), "Q": Q.to_json(), "weight": w.to_json()} for (P, Q), w in items
        ]


def _step(dist: PairDistribution, k: int, mode: WeightMode, variant: str) -> PairDistribution:
    new = PairDistribution(mode=mode)
    for (P, Q), w in dist.items():
        for o in q_insert_outcomes(P, k, mode, variant):
            key = (o.tableau, Q.extend(o.tableau.shape))
            prev = new.get(key)
            new[key] = w * o.weight if prev is None else prev + w * o.weight
    return new


def phi_distribution(word: Sequence[int], l: Optional[int] = None, mode: WeightMode = SYMBOLIC,
                     variant: str = STANDARD) -> PairDistribution:
    """phi_w(P, Q) for all (P, Q), built letter by letter from the empty pair."""
    word = list(word)
    if l is None:
        l = max(word, default=1)
    dist = PairDistribution({(Tableau.empty(l), StandardTableau.empty()): mode.one}, mode=mode)
    for k in word:
        if not isinstance(k, int) or not 1 <= k <= l:
            raise LetterOutOfRangeError(f"letter {k!r} outside [1, {l}]")
        dist = _step(dist, k, mode, variant)
    return dist


def iter_word_distributions(l: int, n: int, mode: WeightMode = SYMBOLIC, variant: str = STANDARD,
                            letters: Optional[Iterable[int]] = None):
    """
    Yield (word, phi_word) for every word in [l]^n (or every arrangement of
    ``letters`` if given), sharing the work of common prefixes.
    """
    start = PairDistribution({(Tableau.empty(l), StandardTableau.empty()): mode.one}, mode=mode)
    if letters is not None:
        pool = list(letters)

        def rec_perm(prefix, dist, remaining):
            if not remaining:
                yield tuple(prefix), dist
                return
            for idx, k in enumerate(remaining):
                yield from rec_perm(prefix + [k], _step(dist, k, mode, variant),
                                    remaining[:idx] + remaining[idx + 1:])

        yield from rec_perm([], start, pool)
        return

    def rec(prefix, dist):
        if len(prefix) == n:
            yield tuple(prefix), dist
            return
        for k in range(1, l + 1):
            yield from rec(prefix + [k], _step(dist, k, mode, variant))

    yield from rec([], start)


def run_tableau_chain(a: Sequence[float], n: int, rng, q: float) -> list:
    """
    n steps of the tableau Markov chain from the empty tableau: each step
    draws a letter k with probability a_k and q-inserts it.  Returns the
    n + 1 tableaux visited.
    """
    a = [float(x) for x in a]
    if any(x < 0 for x in a) or abs(sum(a) - 1.0) > 1e-12:
        raise ValueError("a must be a probability vector")
    l = len(a)
    P = Tableau.empty(l)
    chain = [P]
    cum = []
    s = 0.0
    for x in a:
        s += x
        cum.append(s)
    for _ in range(n):
        u = rng.random() * s
        k = next((i + 1 for i, c in enumerate(cum) if u < c), l)
        while a[k - 1] == 0:
            k -= 1
        P, _ = q_insert_sample(P, k, rng, q)
        chain.append(P)
    return chain


def _chain_block(args, start, stop):
    a, q, n, seed = args
    from collections import Counter

    return Counter(run_tableau_chain(a, n, seeded_rng(seed, r), q)[-1].shape for r in range(start, stop))


def mc_chain_shapes(a: Sequence[float], q: float, n: int, runs: int, seed: int, threads: int = 1):
    """Counter of sh P(n) over ``runs`` independent chains; run r uses stream r."""
    from ._parallel import run_blocks

    return run_blocks(_chain_block, (tuple(float(x) for x in a), float(q), n, seed), runs, threads)


def seeded_rng(seed: int, stream: int = 0):
    """Independent generator for run ``stream`` under master ``seed``."""
    import numpy as np

    return np.random.default_rng([seed, stream])


def python_rng(seed: int, stream: int = 0) -> random.Random:
    return random.Random(f"{seed}:{stream}")
