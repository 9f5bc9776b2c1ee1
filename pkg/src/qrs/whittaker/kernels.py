"""
Kernels K, M (tableau level) and their one-level versions K-hat, M-hat.

K-hat / M-hat act on pairs (lam, mu) with mu < lam, lam at level l and mu at
level l-1.  The three M-hat moves are: only lam grows (by e_k, 1 <= k <= l);
both grow by e_k (k <= l-1); lam grows by e_k and mu by e_m with k < m <= l-1.
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..insertion import STANDARD, q_insert_outcomes
from ..qarith import WeightScalar
from ..shapes import Partition, add_box, addable_rows, interlaces
from ..tableaux import Tableau, kappa
from .core import WhittakerContext, a_power, kappa_hat

__all__ = [
    "K_entry",
    "M_entry",
    "M_row",
    "hatK_entry",
    "hatM_entry",
    "hatM_row",
    "HAT_F0_ONLY",
    "HAT_DOUBLED",
]

# mutated one-level kernels, used as negative controls
HAT_F0_ONLY = "f0-only"  # f1 denominators dropped
HAT_DOUBLED = "doubled"  # exponents of the (1 - q^{mu_{k-1} - lam_k}) factors doubled


def K_entry(lam: Sequence[int], P: Tableau, ctx: WhittakerContext) -> WeightScalar:
    """a^P kappa(P) when sh P = lam, else zero."""
    if Partition(lam) != P.shape:
        return ctx.mode.zero
    return a_power(ctx, P.type) * kappa(P, ctx.mode)


def M_row(P: Tableau, ctx: WhittakerContext, variant: str = STANDARD) -> dict:
    """Nonzero entries of M(P, .) = sum_k a_k I_k(P, .)."""
    row = {}
    for k in range(1, P.l + 1):
        ak = ctx.apow(k, 1)
        if ak.is_zero():
            continue
        for o in q_insert_outcomes(P, k, ctx.mode, variant):
            w = ak * o.weight
            prev = row.get(o.tableau)
            row[o.tableau] = w if prev is None else prev + w
    return row


def M_entry(P: Tableau, P_tilde: Tableau, ctx: WhittakerContext, variant: str = STANDARD) -> WeightScalar:
    return M_row(P, ctx, variant).get(P_tilde, ctx.mode.zero)


# -- one-level kernels ------------------------------------------------------------------

def hatK_entry(lam: Sequence[int], pair: tuple, ctx: WhittakerContext) -> WeightScalar:
    """a_l^{|lam| - |mu|} kappa_hat(lam, mu) when pair = (lam, mu), else zero."""
    lam = Partition(lam)
    top, mu = Partition(pair[0]), Partition(pair[1])
    l = ctx.l
    if top != lam or not interlaces(mu, lam) or len(mu) > l - 1 or len(lam) > l:
        return ctx.mode.zero
    return ctx.apow(l, lam.size - mu.size) * kappa_hat(lam, mu, l, ctx.mode)


def _in_T(lam, mu, l):
    return len(lam) <= l and len(mu) <= l - 1 and interlaces(mu, lam)


class _Site:
    """Boundary-aware access to the two levels; None marks a missing entry."""

    def __init__(self, lam, mu, l):
        self.lam, self.mu, self.l = lam, mu, l

    def top(self, j):
        if j < 1 or j > self.l:
            return None
        return self.lam.part(j)

    def low(self, j):
        if j < 1 or j > self.l - 1:
            return None
        return self.mu.part(j)


def _omq(mode, hi, lo, shift=0):
    # 1 - q^{hi - lo + shift}; a missing entry makes the q-power vanish
    if hi is None or lo is None:
        return mode.one
    return mode.one_minus_qpow(hi - lo + shift)


def _qp(mode, hi, lo):
    if hi is None or lo is None:
        return mode.zero
    return mode.qpow(hi - lo)


def hatM_row(src: tuple, ctx: WhittakerContext, variant: Optional[str] = None) -> dict:
    """Nonzero entries of M-hat((lam, mu), .)."""
    lam, mu = Partition(src[0]), Partition(src[1])
    l = ctx.l
    mode = ctx.mode
    s = _Site(lam, mu, l)
    f0_only = variant == HAT_F0_ONLY
    sc = 2 if variant == HAT_DOUBLED else 1
    row = {}

    def entry_factor(k):
        hi, lo = s.low(k - 1), s.top(k)
        if hi is None or lo is None:
            return mode.one
        return mode.one_minus_qpow(sc * (hi - lo))

    def put(target, w):
        if not w.is_zero():
            row[target] = w

    for k in addable_rows(lam, l):
        new_lam = add_box(lam, k)
        # only the top level moves
        if _in_T(new_lam, mu, l):
            w = ctx.apow(l, 1) * entry_factor(k)
            for i in range(k, l):
                w = w * _qp(mode, s.low(i), s.top(i + 1))
            put((new_lam, mu), w)
        # both levels move by e_k
        if k <= l - 1 and (k == 1 or mu.part(k - 1) > mu.part(k)):
            new_mu = add_box(mu, k)
            if _in_T(new_lam, new_mu, l):
                w = _omq(mode, s.low(k), s.low(k + 1), 1) * entry_factor(k)
                if not f0_only:
                    w = w / _omq(mode, s.low(k - 1), s.low(k))
                put((new_lam, new_mu), w)
        # top by e_k, lower by e_m, k < m <= l-1
        for m in range(k + 1, l):
            if mu.part(m - 1) == mu.part(m):
                continue
            new_mu = add_box(mu, m)
            if not _in_T(new_lam, new_mu, l):
                continue
            w = _omq(mode, s.low(m), s.low(m + 1), 1) * _omq(mode, s.top(m), s.low(m))
            if not f0_only:
                w = w / _omq(mode, s.low(m - 1), s.low(m))
            w = w * entry_factor(k)
            for i in range(k + 1, m + 1):
                w = w * _qp(mode, s.low(i - 1), s.top(i))
            put((new_lam, new_mu), w)
    return row


def hatM_entry(src: tuple, dst: tuple, ctx: WhittakerContext, variant: Optional[str] = None) -> WeightScalar:
    dst = (Partition(dst[0]), Partition(dst[1]))
    return hatM_row(src, ctx, variant).get(dst, ctx.mode.zero)
