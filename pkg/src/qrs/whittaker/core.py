"""q-Whittaker functions and the shape-level quantities built from them."""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence

from ..qarith import SYMBOLIC, WeightMode, WeightScalar
from ..shapes import (
    EMPTY,
    Partition,
    TooManyPartsError,
    L_entry,
    delta,
    delta_full,
    enumerate_partitions,
    interlaces,
    interlacing_below,
    remove_box,
)
from ..tableaux import enumerate_standard, enumerate_tableaux, kappa, rho

__all__ = [
    "WhittakerContext",
    "NonProbabilityContextError",
    "psi",
    "psi_enumerate",
    "kappa_hat",
    "f_lambda_q",
    "f_lambda_enumerate",
    "k_lambda_mu",
    "transition_p",
    "nu",
    "conditional_P",
    "conditional_type",
    "a_power",
    "prop1_limit",
]


class NonProbabilityContextError(ValueError):
    pass


class WhittakerContext:
    """
    Alphabet size, the parameter vector a and the weight mode, plus memo
    tables for Psi at every level of the branching recursion.
    """

    def __init__(self, a: Sequence, mode: WeightMode = SYMBOLIC):
        if mode.kind == "float":
            a = tuple(float(x) for x in a)
        else:
            a = tuple(x if isinstance(x, Fraction) else Fraction(x) for x in a)
        if not a:
            raise ValueError("a must have at least one entry")
        self.a = a
        self.l = len(a)
        self.mode = mode
        self._psi = {}
        self._apow = {}

    def __repr__(self):
        return f"WhittakerContext(a={[str(x) for x in self.a]}, mode={self.mode})"

    @property
    def total(self):
        return sum(self.a)

    def is_probability(self) -> bool:
        if any(x < 0 for x in self.a):
            return False
        if self.mode.kind == "float":
            return abs(self.total - 1.0) < 1e-12
        return self.total == 1

    def require_probability(self):
        if not self.is_probability():
            raise NonProbabilityContextError(f"a = {self.a} is not a probability vector")

    def apow(self, i: int, e: int) -> WeightScalar:
        """a_i ** e as a weight (1-indexed)."""
        key = (i, e)
        w = self._apow.get(key)
        if w is None:
            w = self.mode.const(self.a[i - 1] ** e)
            self._apow[key] = w
        return w

    def restrict(self, m: int) -> "WhittakerContext":
        return WhittakerContext(self.a[:m], self.mode)


def a_power(ctx: WhittakerContext, composition: Sequence[int]) -> WeightScalar:
    out = ctx.mode.one
    for i, e in enumerate(composition, start=1):
        if e:
            out = out * ctx.apow(i, e)
    return out


def kappa_hat(lam: Sequence[int], mu: Sequence[int], l: int, mode: WeightMode = SYMBOLIC) -> WeightScalar:
    """The one-level factor of kappa for the top two rows (lam at level l, mu at level l-1)."""
    lam, mu = Partition(lam), Partition(mu)
    if l < 2:
        raise ValueError("kappa_hat needs l >= 2")
    if len(lam) > l or len(mu) > l - 1 or not interlaces(mu, lam):
        raise ValueError(f"{list(mu)} does not interlace {list(lam)}")
    num = mode.one
    for i in range(1, l - 1):
        num = num * mode.poch(mu.part(i) - mu.part(i + 1))
    den = mode.one
    for i in range(1, l):
        den = den * mode.poch(mu.part(i) - lam.part(i + 1)) * mode.poch(lam.part(i) - mu.part(i))
    return num / den


def psi(lam: Sequence[int], ctx: WhittakerContext) -> WeightScalar:
    """Psi_a(lam) by the branching recursion over the top level of the pattern."""
    lam = Partition(lam)
    if len(lam) > ctx.l:
        raise TooManyPartsError(f"{list(lam)} has more than {ctx.l} parts")
    return _psi_level(ctx, ctx.l, lam)


def _psi_level(ctx, m, lam):
    key = (m, lam)
    hit = ctx._psi.get(key)
    if hit is not None:
        return hit
    mode = ctx.mode
    if len(lam) > m:
        val = mode.zero
    elif m == 1:
        val = ctx.apow(1, lam.part(1))
    else:
        val = mode.zero
        size = lam.size
        for mu in interlacing_below(lam, m - 1):
            below = _psi_level(ctx, m - 1, mu)
            if below.is_zero():
                continue
            val = val + ctx.apow(m, size - mu.size) * kappa_hat(lam, mu, m, mode) * below
    ctx._psi[key] = val
    return val


def psi_enumerate(lam: Sequence[int], ctx: WhittakerContext) -> WeightScalar:
    """Psi_a(lam) as the tableau sum of a^P kappa(P) (reference implementation)."""
    total = ctx.mode.zero
    for P in enumerate_tableaux(lam, ctx.l):
        total = total + a_power(ctx, P.type) * kappa(P, ctx.mode)
    return total


_F_CACHE = {}


def f_lambda_q(lam: Sequence[int], mode: WeightMode = SYMBOLIC) -> WeightScalar:
    """
    f^lam(q) = sum of rho(Q) over standard Q of shape lam, by dynamic
    programming over Young's lattice: the step factor only depends on the
    shape after the step.
    """
    lam = Partition(lam)
    key = (mode, lam)
    hit = _F_CACHE.get(key)
    if hit is not None:
        return hit
    if lam.size == 0:
        val = mode.one
    else:
        val = mode.zero
        for r in range(1, len(lam) + 1):
            if lam.part(r) > lam.part(r + 1):
                step = mode.one_minus_qpow(lam.part(r) - lam.part(r + 1))
                val = val + f_lambda_q(remove_box(lam, r), mode) * step
    _F_CACHE[key] = val
    return val


def f_lambda_enumerate(lam: Sequence[int], mode: WeightMode = SYMBOLIC) -> WeightScalar:
    total = mode.zero
    for Q in enumerate_standard(lam):
        total = total + rho(Q, mode)
    return total


def k_lambda_mu(lam: Sequence[int], mu: Sequence[int], l: int, mode: WeightMode = SYMBOLIC) -> WeightScalar:
    """Delta_l(lam) times the kappa-sum over tableaux of shape lam and type mu."""
    lam = Partition(lam)
    mu = tuple(mu) + (0,) * (l - len(mu))
    if len(mu) > l:
        if any(mu[l:]):
            return mode.zero
        mu = mu[:l]
    if lam.size != sum(mu):
        raise ValueError(f"|lambda| = {lam.size} but |mu| = {sum(mu)}")
    total = mode.zero
    for P in enumerate_tableaux(lam, l):
        if P.type == mu:
            total = total + kappa(P, mode)
    return total * delta(lam, l, mode)


# -- Markov chain quantities --------------------------------------------------------------

def _lam_l_poch(lam: Partition, l: int, mode: WeightMode) -> WeightScalar:
    return mode.poch(lam.part(l))


def transition_p(mu: Sequence[int], lam: Sequence[int], ctx: WhittakerContext) -> WeightScalar:
    """Shape-chain transition probability Psi(lam)/Psi(mu) L(mu, lam)."""
    ctx.require_probability()
    mu, lam = Partition(mu), Partition(lam)
    L = L_entry(mu, lam, ctx.l, ctx.mode)
    if L.is_zero():
        return ctx.mode.zero
    return psi(lam, ctx) / psi(mu, ctx) * L


def nu(lam: Sequence[int], ctx: WhittakerContext) -> WeightScalar:
    """Law of the shape after |lam| insertions: Psi(lam) f^lam(q) / (lam_l)_q."""
    lam = Partition(lam)
    return psi(lam, ctx) * f_lambda_q(lam, ctx.mode) / _lam_l_poch(lam, ctx.l, ctx.mode)


def conditional_P(lam: Sequence[int], P, ctx: WhittakerContext) -> WeightScalar:
    """Conditional law of the tableau given the shape history ending at lam."""
    from .kernels import K_entry

    return K_entry(lam, P, ctx) / psi(lam, ctx)


def conditional_type(lam: Sequence[int], mu: Sequence[int], ctx: WhittakerContext) -> WeightScalar:
    """
    Conditional law of the type given the shape history ending at lam.
    k_lambda_mu carries a factor Delta_l(lam), divided out here so the law
    sums to one and agrees with summing conditional_P over the type.
    """
    lam = Partition(lam)
    k = k_lambda_mu(lam, mu, ctx.l, ctx.mode)
    return a_power(ctx, mu) * k / (delta(lam, ctx.l, ctx.mode) * psi(lam, ctx))


def prop1_limit(lam: Sequence[int], mode: WeightMode) -> WeightScalar:
    """f^lam(q) / (n! (1-q)^n Delta(lam))."""
    lam = Partition(lam)
    n = lam.size
    return f_lambda_q(lam, mode) / (
        mode.const(factorial(n)) * mode.one_minus_qpow(1) ** n * delta_full(lam, mode)
    )
