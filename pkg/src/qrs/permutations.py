"""
Permutation inputs: the alphabet is [n] and every letter is used once, so
both tableaux of a pair are standard.

zeta_{P,Q}(q) is the total weight of (P, Q) over all n! permutation words,
F_sigma(q) is zeta at the classic column-insertion pair of sigma, and
theta_lam(q) sums zeta over pairs of shape lam.  theta / n! is a probability
measure on partitions of n for 0 <= q < 1.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations as _perms
from math import factorial
from typing import Sequence

from .insertion import STANDARD, iter_word_distributions, rs_correspondence
from .qarith import SYMBOLIC, WeightMode, WeightScalar
from .shapes import Partition, delta_full, enumerate_partitions
from .tableaux import StandardTableau, rho, standardize
from .whittaker.core import f_lambda_q

__all__ = [
    "Permutation",
    "ShapeMismatchError",
    "zeta",
    "zeta_brute_force",
    "F_sigma",
    "theta",
    "mu_q",
    "shape_law",
    "sample_shape",
]


class ShapeMismatchError(ValueError):
    pass


class Permutation(tuple):
    """One-line notation sigma(1) ... sigma(n)."""

    __slots__ = ()

    def __new__(cls, values: Sequence[int]):
        if isinstance(values, Permutation):
            return values
        v = tuple(int(x) for x in values)
        if sorted(v) != list(range(1, len(v) + 1)):
            raise ValueError(f"{v} is not a permutation of 1..{len(v)}")
        return super().__new__(cls, v)

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """'213' or '2,1,3'."""
        text = text.strip()
        parts = text.split(",") if "," in text else list(text)
        return cls(int(p) for p in parts if p.strip())

    @classmethod
    def all(cls, n: int) -> list:
        return [cls(p) for p in _perms(range(1, n + 1))]

    @property
    def n(self) -> int:
        return len(self)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, v in enumerate(self, start=1):
            inv[v - 1] = i
        return Permutation(inv)

    def inverse_word(self) -> tuple:
        """sigma^{-1}(1) ... sigma^{-1}(n)."""
        return tuple(self.inverse())

    def __str__(self):
        sep = "," if len(self) >= 10 else ""
        return sep.join(map(str, self))


def _check_pair(P: StandardTableau, Q: StandardTableau):
    if P.shape != Q.shape:
        raise ShapeMismatchError(f"shapes {list(P.shape)} and {list(Q.shape)} differ")


def zeta(P: StandardTableau, Q: StandardTableau, mode: WeightMode = SYMBOLIC) -> WeightScalar:
    """rho(P) rho(Q) / ((1-q)^n Delta(lam)), a polynomial in q."""
    _check_pair(P, Q)
    n = P.n
    return rho(P, mode) * rho(Q, mode) / (mode.one_minus_qpow(1) ** n * delta_full(P.shape, mode))


def zeta_brute_force(n: int, mode: WeightMode = SYMBOLIC, variant: str = STANDARD) -> dict:
    """{(P, Q): sum over sigma of phi_sigma(P, Q)} from the q-insertion of every permutation word."""
    out = {}
    for _, dist in iter_word_distributions(n, n, mode, variant, letters=range(1, n + 1)):
        for (P, Q), w in dist.items():
            key = (standardize(P), Q)
            prev = out.get(key)
            out[key] = w if prev is None else prev + w
    return out


def F_sigma(sigma: Sequence[int], mode: WeightMode = SYMBOLIC) -> WeightScalar:
    """zeta at the classic column-insertion pair of the word sigma(1) ... sigma(n)."""
    sigma = Permutation(sigma)
    if sigma.n == 0:
        return mode.one
    P, Q = rs_correspondence(sigma, sigma.n)
    return zeta(standardize(P), Q, mode)


def theta(lam: Sequence[int], mode: WeightMode = SYMBOLIC) -> WeightScalar:
    """f^lam(q)^2 / ((1-q)^n Delta(lam))."""
    lam = Partition(lam)
    f = f_lambda_q(lam, mode)
    return f * f / (mode.one_minus_qpow(1) ** lam.size * delta_full(lam, mode))


def _point_mode(q) -> WeightMode:
    if isinstance(q, WeightMode):
        return q
    if isinstance(q, float):
        return WeightMode.floating(q)
    return WeightMode.exact(Fraction(q))


def mu_q(lam: Sequence[int], q):
    """theta_lam(q) / n! at a rational (exact) or float q."""
    lam = Partition(lam)
    mode = _point_mode(q)
    return (theta(lam, mode) / mode.const(factorial(lam.size))).value


def shape_law(n: int, q) -> list:
    """[(lam, mu_q(lam))] over partitions of n, lexicographically decreasing."""
    mode = _point_mode(q)
    if mode.q is not None and not 0 <= mode.q < 1:
        raise ValueError("mu_q is a probability measure only for 0 <= q < 1")
    nf = mode.const(factorial(n))
    return [(lam, (theta(lam, mode) / nf).value) for lam in enumerate_partitions(n, max(n, 1))]


def sample_shape(n: int, q, rng, size: int = 1) -> list:
    """Draw ``size`` shapes from mu_q using the exact theta weights."""
    law = shape_law(n, q)
    cum = []
    s = 0.0
    for _, p in law:
        s += float(p)
        cum.append(s)
    out = []
    for _ in range(size):
        u = rng.random() * s
        idx = next((i for i, c in enumerate(cum) if u < c), len(cum) - 1)
        out.append(law[idx][0])
    return out
