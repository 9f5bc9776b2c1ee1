"""
Executable identity checks.

Every check returns a Report.  With ``negative_control=True`` the check runs
against a deliberately mutated ingredient and is expected to fail; a
negative control that passes means the check cannot see the mutation.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

from ..insertion import (
    DOUBLED,
    F0_ONLY,
    NO_VERTICAL,
    STANDARD,
    column_insert,
    iter_word_distributions,
    q_insert_outcomes,
)
from ..qarith import SYMBOLIC, WeightMode
from ..shapes import (
    L_row,
    Partition,
    add_box,
    addable_rows,
    delta,
    delta_full,
    enumerate_partitions,
    interlacing_below,
    partitions_up_to,
)
from ..tableaux import (
    enumerate_all_tableaux,
    enumerate_standard,
    enumerate_tableaux,
    kappa,
    rho,
    standardize,
)
from .core import WhittakerContext, a_power, f_lambda_q, k_lambda_mu, nu, prop1_limit, psi
from .kernels import HAT_DOUBLED, HAT_F0_ONLY, K_entry, M_row, hatK_entry, hatM_row

__all__ = [
    "Report",
    "kernel_mutation",
    "verify_intertwining",
    "verify_hat_intertwining",
    "verify_theorem2",
    "eigen_check",
    "cauchy_check",
    "corollary3_check",
    "proposition1_check",
    "eq3_check",
    "stochastic_check",
    "compositions",
]


@dataclass
class Report:
    name: str
    passed: bool
    checked: int
    failures: int = 0
    counterexample: Optional[dict] = None
    params: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "failures": self.failures,
            "params": self.params,
        }
        if self.details:
            out["details"] = self.details
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.checked} checked, {self.failures} failed"


class _Tally:
    """Collects comparisons; keeps the first mismatch as a certificate."""

    def __init__(self):
        self.checked = 0
        self.failures = 0
        self.first = None

    def compare(self, lhs, rhs, where):
        self.checked += 1
        if lhs != rhs:
            self.failures += 1
            if self.first is None:
                self.first = {"at": where, "lhs": lhs.to_json(), "rhs": rhs.to_json()}
            return False
        return True

    def report(self, name, params, details=None):
        ok = self.failures == 0
        return Report(name, ok, self.checked, self.failures, self.first, params, details or {})


def _mode_str(mode: WeightMode) -> str:
    return str(mode)


def _ctx_params(ctx: WhittakerContext, **extra) -> dict:
    return {"l": ctx.l, "a": [str(x) for x in ctx.a], "mode": _mode_str(ctx.mode), **extra}


def kernel_mutation(l: int) -> str:
    """
    Mutation used by the kernel negative controls.  Replacing f1 by f0 is the
    natural mistake, but for l <= 2 every reachable f1 equals f0, so there
    the exponents of f0 are doubled instead.
    """
    return F0_ONLY if l >= 3 else DOUBLED


def _hat_mutation(l: int) -> str:
    return HAT_F0_ONLY if l >= 3 else HAT_DOUBLED


def _tab(P) -> dict:
    return {"rows": P.to_rows(), **P.to_json()}


def compositions(n: int, l: int):
    """All weak compositions of n into l parts, lexicographically decreasing."""
    if l == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, l - 1):
            yield (first,) + rest


def _merge(acc, key, w):
    prev = acc.get(key)
    acc[key] = w if prev is None else prev + w


# -- intertwining ---------------------------------------------------------------------

def verify_intertwining(ctx: WhittakerContext, bound: int, negative_control: bool = False,
                        mutation: Optional[str] = None) -> Report:
    """(KM)(lam, P~) == (LK)(lam, P~) for every |lam| <= bound and every reachable P~."""
    mode, l = ctx.mode, ctx.l
    variant = STANDARD
    if negative_control:
        variant = mutation or kernel_mutation(l)
    tally = _Tally()
    for lam in partitions_up_to(bound, l):
        lhs = {}
        for P in enumerate_tableaux(lam, l):
            k = K_entry(lam, P, ctx)
            for target, w in M_row(P, ctx, variant).items():
                _merge(lhs, target, k * w)
        rhs = {}
        for nxt, c in L_row(lam, l, mode).items():
            for Pt in enumerate_tableaux(nxt, l):
                _merge(rhs, Pt, c * K_entry(nxt, Pt, ctx))
        for target in sorted(set(lhs) | set(rhs), key=lambda P: P.key()):
            tally.compare(lhs.get(target, mode.zero), rhs.get(target, mode.zero),
                          {"lambda": list(lam), "P_tilde": _tab(target)})
    params = _ctx_params(ctx, bound=bound, kernel=variant)
    return tally.report("intertwining KM=LK", params)


def verify_hat_intertwining(ctx: WhittakerContext, bound: int, negative_control: bool = False,
                            mutation: Optional[str] = None) -> Report:
    """The one-level relation K-hat M-hat = L K-hat on pairs (lam, mu), mu < lam."""
    mode, l = ctx.mode, ctx.l
    if l < 2:
        raise ValueError("the one-level kernels need l >= 2")
    variant = None
    if negative_control:
        variant = mutation or _hat_mutation(l)
    tally = _Tally()
    for lam in partitions_up_to(bound, l):
        lhs = {}
        for mu in interlacing_below(lam, l - 1):
            kh = hatK_entry(lam, (lam, mu), ctx)
            for target, w in hatM_row((lam, mu), ctx, variant).items():
                _merge(lhs, target, kh * w)
        rhs = {}
        for nxt, c in L_row(lam, l, mode).items():
            for mu in interlacing_below(nxt, l - 1):
                _merge(rhs, (nxt, mu), c * hatK_entry(nxt, (nxt, mu), ctx))
        for target in sorted(set(lhs) | set(rhs)):
            tally.compare(lhs.get(target, mode.zero), rhs.get(target, mode.zero),
                          {"lambda": list(lam), "target": [list(target[0]), list(target[1])]})
    params = _ctx_params(ctx, bound=bound, kernel=variant or STANDARD)
    return tally.report("intertwining KhatMhat=LKhat", params)


# -- word sums -------------------------------------------------------------------------

def _word_type(word, l):
    c = Counter(word)
    return tuple(c.get(i, 0) for i in range(1, l + 1))


def verify_theorem2(ctx: WhittakerContext, n: int, negative_control: bool = False,
                    mutation: Optional[str] = None) -> Report:
    """sum_w a^w phi_w(P, Q) == (lam_l)_q^{-1} a^P kappa(P) rho(Q) for every shape-matched (P, Q)."""
    mode, l = ctx.mode, ctx.l
    variant = STANDARD
    if negative_control:
        variant = mutation or kernel_mutation(l)
    lhs = {}
    words = 0
    for word, dist in iter_word_distributions(l, n, mode, variant):
        words += 1
        aw = a_power(ctx, _word_type(word, l))
        for key, w in dist.items():
            _merge(lhs, key, aw * w)
    tally = _Tally()
    seen = set()
    for lam in enumerate_partitions(n, l):
        pref = mode.one / mode.poch(lam.part(l))
        Qs = enumerate_standard(lam)
        rhos = [rho(Q, mode) for Q in Qs]
        for P in enumerate_tableaux(lam, l):
            base = pref * a_power(ctx, P.type) * kappa(P, mode)
            for Q, r in zip(Qs, rhos):
                seen.add((P, Q))
                tally.compare(lhs.get((P, Q), mode.zero), base * r,
                              {"P": _tab(P), "Q": Q.to_rows()})
    for key, w in lhs.items():
        if key not in seen:
            tally.compare(w, mode.zero, {"P": _tab(key[0]), "Q": key[1].to_rows()})
    params = _ctx_params(ctx, n=n, kernel=variant)
    return tally.report("word-sum identity", params, details={"words": words})


# -- shape-level identities ---------------------------------------------------------------

def _L_row_mutated(lam, l, mode):
    # c_i with the +1 dropped from the exponent
    out = {}
    for i in addable_rows(lam, l):
        c = mode.one if i == l else mode.one_minus_qpow(lam.part(i) - lam.part(i + 1))
        out[add_box(lam, i)] = c
    return out


def eigen_check(ctx: WhittakerContext, bound: int, negative_control: bool = False) -> Report:
    """sum_i c_i(lam) Psi(lam + e_i) == (sum a) Psi(lam) for |lam| <= bound."""
    mode, l = ctx.mode, ctx.l
    total = mode.const(ctx.total)
    tally = _Tally()
    for lam in partitions_up_to(bound, l):
        row = _L_row_mutated(lam, l, mode) if negative_control else L_row(lam, l, mode)
        lhs = mode.zero
        for nxt, c in row.items():
            if not c.is_zero():
                lhs = lhs + c * psi(nxt, ctx)
        tally.compare(lhs, total * psi(lam, ctx), {"lambda": list(lam)})
    params = _ctx_params(ctx, bound=bound, mutated=negative_control)
    return tally.report("eigenrelation L Psi = (sum a) Psi", params)


def cauchy_check(ctx: WhittakerContext, n_max: int, negative_control: bool = False) -> Report:
    """
    sum_{lam |- n} (lam_l)_q^{-1} Psi(lam) f^lam(q) == (sum a)^n for n <= n_max.
    For a probability vector this is the statement that nu has mass one.
    """
    mode, l = ctx.mode, ctx.l
    tally = _Tally()
    total = mode.const(ctx.total)
    for n in range(n_max + 1):
        s = mode.zero
        for lam in enumerate_partitions(n, l):
            if negative_control:
                s = s + psi(lam, ctx) * f_lambda_q(lam, mode)
            else:
                s = s + nu(lam, ctx)
        tally.compare(s, total ** n, {"n": n})
    params = _ctx_params(ctx, n_max=n_max, mutated=negative_control)
    return tally.report("Cauchy-Littlewood sum", params)


def corollary3_check(ctx: WhittakerContext, n: int, negative_control: bool = False,
                     mutation: Optional[str] = None, permutations: bool = True) -> Report:
    """
    With H_Q(w) = Delta(lam)/rho(Q) sum_P phi_w(P, Q) and
    G_P(w) = (lam_l)_q/kappa(P) sum_Q phi_w(P, Q), check for every lam |- n:

    * sum_w H_Q(w) a^w == Delta_l(lam) Psi(lam)  (= P_lam(a; q, 0)) for each Q,
    * sum over words of type mu of H_Q(w) == k_{lam mu}(q) for each Q and mu,
    * sum_w G_P(w) == f^lam(q) for each P,

    and, with l = n over permutation words, (1/n!) sum_sigma H_P(sigma) ==
    f^lam(q)/(n! (1-q)^n) for each standard P.
    """
    mode, l = ctx.mode, ctx.l
    variant = STANDARD
    if negative_control:
        variant = mutation or kernel_mutation(max(l, n))
    h_a, h_type, g = {}, {}, {}
    for word, dist in iter_word_distributions(l, n, mode, variant):
        ty = _word_type(word, l)
        aw = a_power(ctx, ty)
        for (P, Q), w in dist.items():
            _merge(h_a, Q, aw * w)
            _merge(h_type, (Q, ty), w)
            _merge(g, P, w)

    tally = _Tally()
    literal_mismatch = 0
    for lam in enumerate_partitions(n, l):
        dfull = delta_full(lam, mode)
        target = delta(lam, l, mode) * psi(lam, ctx)
        if target != dfull * psi(lam, ctx):
            literal_mismatch += 1
        f = f_lambda_q(lam, mode)
        kost = {mu: k_lambda_mu(lam, mu, l, mode) for mu in compositions(n, l)}
        for Q in enumerate_standard(lam):
            scale = dfull / rho(Q, mode)
            tally.compare(scale * h_a.get(Q, mode.zero), target,
                          {"identity": "H_Q a-sum", "lambda": list(lam), "Q": Q.to_rows()})
            for mu, k in kost.items():
                tally.compare(scale * h_type.get((Q, mu), mode.zero), k,
                              {"identity": "H_Q type sum", "lambda": list(lam), "Q": Q.to_rows(),
                               "mu": list(mu)})
        lam_l = mode.poch(lam.part(l))
        for P in enumerate_tableaux(lam, l):
            tally.compare(lam_l / kappa(P, mode) * g.get(P, mode.zero), f,
                          {"identity": "G_P sum", "P": _tab(P)})

    if permutations:
        _permutation_average(n, mode, variant, tally)
    params = _ctx_params(ctx, n=n, kernel=variant)
    details = {"shapes_where_Delta_differs_from_Delta_l": literal_mismatch}
    return tally.report("word marginals", params, details=details)


def _permutation_average(n, mode, variant, tally):
    # words sigma^{-1}(1)...sigma^{-1}(n) run over all of S_n, so summing over
    # arrangements of 1..n is the same as summing over sigma
    h = {}
    for _, dist in iter_word_distributions(n, n, mode, variant, letters=range(1, n + 1)):
        for (_, Q), w in dist.items():
            _merge(h, Q, w)
    nf = mode.const(factorial(n))
    for lam in enumerate_partitions(n, n):
        dfull = delta_full(lam, mode)
        f = f_lambda_q(lam, mode)
        rhs = f / (nf * mode.one_minus_qpow(1) ** n)
        for S in enumerate_standard(lam):
            lhs = dfull / rho(S, mode) * h.get(S, mode.zero) / nf
            tally.compare(lhs, rhs, {"identity": "permutation average", "P": S.to_rows()})


# -- convergence ------------------------------------------------------------------------

def proposition1_check(lam: Sequence[int], q, ls: Sequence[int] = (3, 6, 12, 24),
                       negative_control: bool = False, max_ratio: Fraction = Fraction(3, 4)) -> Report:
    """
    eps_l = |Psi_{(1/l)^l}(lam) - f^lam(q)/(n! (1-q)^n Delta(lam))| in exact
    arithmetic.  Passes when eps is zero throughout or shrinks by at least
    ``max_ratio`` at every step of ``ls``.  The negative control drops
    Delta(lam) from the limit.
    """
    lam = Partition(lam)
    mode = WeightMode.exact(q)
    limit = prop1_limit(lam, mode)
    if negative_control:
        limit = limit * delta_full(lam, mode)
    eps = []
    for l in ls:
        if len(lam) > l:
            raise ValueError(f"{list(lam)} has more than {l} parts")
        ctx = WhittakerContext([Fraction(1, l)] * l, mode)
        eps.append(abs(psi(lam, ctx).value - limit.value))
    failures = 0
    first = None
    for i in range(1, len(eps)):
        prev, cur = eps[i - 1], eps[i]
        if prev == 0 and cur == 0:
            continue
        if not (cur < prev and cur <= max_ratio * prev):
            failures += 1
            if first is None:
                first = {"l": [ls[i - 1], ls[i]], "eps": [str(prev), str(cur)]}
    params = {"lambda": list(lam), "q": str(mode.q), "ls": list(ls), "mutated": negative_control}
    details = {"limit": str(limit.value), "eps": [str(e) for e in eps],
               "eps_float": [float(e) for e in eps]}
    return Report("uniform-alphabet convergence", failures == 0, max(len(eps) - 1, 0), failures,
                  first, params, details)


# -- tableau-level checks ------------------------------------------------------------------

def eq3_check(n_max: int, l_max: int, mode: WeightMode = SYMBOLIC, negative_control: bool = False) -> Report:
    """kappa(P) (1-q)^n Delta_l(lam) == rho(std P) on every distinct-entry tableau."""
    tally = _Tally()
    for l in range(1, l_max + 1):
        for n in range(0, min(n_max, l) + 1):
            for P in enumerate_all_tableaux(n, l):
                if any(x > 1 for x in P.type):
                    continue
                norm = delta_full(P.shape, mode) if negative_control else delta(P.shape, l, mode)
                lhs = kappa(P, mode) * mode.one_minus_qpow(1) ** n * norm
                tally.compare(lhs, rho(standardize(P), mode), {"P": _tab(P)})
    params = {"n_max": n_max, "l_max": l_max, "mode": _mode_str(mode), "mutated": negative_control}
    return tally.report("kappa/rho identity on distinct entries", params)


def stochastic_check(l_max: int, max_size: int, mode: WeightMode = SYMBOLIC,
                     negative_control: bool = False) -> Report:
    """
    For every P with |sh P| <= max_size, l <= l_max and every letter k, the
    q-insertion weights sum to one, and at q = 0 the only outcome is classic
    column insertion with weight one.
    """
    variant = NO_VERTICAL if negative_control else STANDARD
    zero_q = WeightMode.exact(0)
    tally = _Tally()
    for l in range(1, l_max + 1):
        for n in range(max_size + 1):
            for P in enumerate_all_tableaux(n, l):
                for k in range(1, l + 1):
                    outs = q_insert_outcomes(P, k, mode, variant)
                    s = mode.zero
                    for o in outs:
                        s = s + o.weight
                    where = {"P": _tab(P), "k": k}
                    tally.compare(s, mode.one, {**where, "identity": "mass"})
                    classic, _ = column_insert(P, k)
                    at0 = [o for o in q_insert_outcomes(P, k, zero_q, variant)]
                    tally.checked += 1
                    if len(at0) != 1 or at0[0].tableau != classic or at0[0].weight != zero_q.one:
                        tally.failures += 1
                        if tally.first is None:
                            tally.first = {"at": {**where, "identity": "q=0 support"},
                                           "support": [_tab(o.tableau) for o in at0]}
    params = {"l_max": l_max, "max_size": max_size, "mode": _mode_str(mode), "kernel": variant}
    return tally.report("stochasticity and q=0 degeneration", params)
