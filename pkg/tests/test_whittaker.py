from fractions import Fraction
from itertools import combinations_with_replacement, permutations
from math import comb

import pytest

from qrs.insertion import iter_word_distributions
from qrs.qarith import SYMBOLIC, WeightMode
from qrs.shapes import Partition, delta, enumerate_partitions, partitions_up_to
from qrs.tableaux import Tableau, enumerate_all_tableaux, enumerate_standard, enumerate_tableaux, kappa
from qrs.whittaker import (
    M_entry,
    NonProbabilityContextError,
    WhittakerContext,
    conditional_P,
    conditional_type,
    cauchy_check,
    compositions,
    corollary3_check,
    eigen_check,
    eq3_check,
    f_lambda_enumerate,
    f_lambda_q,
    k_lambda_mu,
    kappa_hat,
    nu,
    proposition1_check,
    psi,
    psi_enumerate,
    stochastic_check,
    transition_p,
    verify_hat_intertwining,
    verify_intertwining,
    verify_theorem2,
)

omq = SYMBOLIC.one_minus_qpow
HALF = WeightMode.exact(Fraction(1, 2))
F = Fraction


def test_psi_examples():
    ctx = WhittakerContext([F(1, 3), F(2, 3)])
    assert psi((1,), ctx) == SYMBOLIC.one / omq(1)
    assert psi((), ctx) == SYMBOLIC.one
    one = WhittakerContext([F(1, 2)])
    for n in range(5):
        assert psi((n,), one) == SYMBOLIC.const(F(1, 2) ** n)
    with pytest.raises(ValueError):
        psi((1, 1, 1), ctx)


@pytest.mark.parametrize("mode", [SYMBOLIC, HALF], ids=str)
def test_psi_recursion_matches_enumeration(mode):
    ctx = WhittakerContext([F(1, 2), F(1, 3), F(1, 6)], mode)
    for lam in partitions_up_to(5, 3):
        assert psi(lam, ctx) == psi_enumerate(lam, ctx)


def test_kappa_hat_examples():
    assert kappa_hat((1,), (), 2) == SYMBOLIC.one / omq(1)
    assert kappa_hat((1,), (1,), 2) == SYMBOLIC.one / omq(1)
    assert kappa_hat((1, 1), (1,), 2) == SYMBOLIC.one
    with pytest.raises(ValueError):
        kappa_hat((2,), (3,), 2)


def test_kappa_factorizes_over_levels():
    for l in range(2, 5):
        for n in range(5):
            for P in enumerate_all_tableaux(n, l):
                lower = Tableau.from_rows([[x for x in row if x < l] for row in P.to_rows()], l - 1)
                assert kappa(P) == kappa_hat(P.chain[-1], P.chain[-2], l) * kappa(lower)


def test_f_lambda_examples():
    assert f_lambda_q(()) == SYMBOLIC.one
    assert f_lambda_q((1,)) == omq(1)
    assert f_lambda_q((2,)) == omq(1) * omq(2)
    assert f_lambda_q((1, 1)) == omq(1) ** 2
    assert f_lambda_q((2, 1)) == omq(1) ** 2 * (omq(2) + omq(1))


def test_f_lambda_dp_vs_enumeration():
    zero = WeightMode.exact(0)
    for n in range(7):
        for lam in enumerate_partitions(n, n or 1):
            assert f_lambda_q(lam) == f_lambda_enumerate(lam)
            assert f_lambda_q(lam, zero).value == len(enumerate_standard(lam))


def kostka(lam, mu):
    return sum(1 for P in enumerate_tableaux(lam, len(mu)) if P.type == tuple(mu))


def test_k_lambda_mu():
    assert k_lambda_mu((1,), (1,), 1) == SYMBOLIC.one
    # P_(2)(x; q, 0) = m_2 + (1 + q) m_11
    assert k_lambda_mu((2,), (1, 1), 2) == omq(2) / omq(1)
    assert k_lambda_mu((2, 1), (1, 1, 1), 3, WeightMode.exact(0)).value == 2
    assert k_lambda_mu((1, 1), (1, 1), 2) == SYMBOLIC.one
    zero = WeightMode.exact(0)
    for n in range(1, 6):
        for lam in enumerate_partitions(n, 3):
            for mu in compositions(n, 3):
                k = k_lambda_mu(lam, mu, 3)
                assert k.rational.is_polynomial()
                assert k_lambda_mu(lam, mu, 3, zero).value == kostka(lam, mu)
                # symmetric in the type
                for perm in set(permutations(mu)):
                    assert k_lambda_mu(lam, perm, 3) == k
            if len(lam) <= 3:
                # monic: the leading monomial has coefficient 1
                assert k_lambda_mu(lam, tuple(lam) + (0,) * (3 - len(lam)), 3) == SYMBOLIC.one


def test_M_entry_example():
    ctx = WhittakerContext([F(1, 2), F(1, 2)])
    P = Tableau.from_rows([[1, 1, 2, 2], [2]], 2)
    Pt = Tableau.from_rows([[1, 1, 2, 2], [2, 2]], 2)
    assert M_entry(P, Pt, ctx) == SYMBOLIC.const(F(1, 2)) * omq(1)


def test_transition_rows_sum_to_one():
    for mode in (SYMBOLIC, HALF):
        ctx = WhittakerContext([F(1, 2), F(1, 4), F(1, 4)], mode)
        for mu in partitions_up_to(4, 3):
            total = mode.zero
            for r in range(1, 4):
                lam = list(mu) + [0] * (3 - len(mu))
                lam[r - 1] += 1
                if r == 1 or lam[r - 1] <= lam[r - 2]:
                    total = total + transition_p(mu, lam, ctx)
            assert total == mode.one


def test_non_probability_context_rejected():
    ctx = WhittakerContext([F(1, 2), F(1, 3)])
    with pytest.raises(NonProbabilityContextError):
        transition_p((), (1,), ctx)


def test_conditionals_are_probability_vectors():
    ctx = WhittakerContext([F(1, 2), F(1, 3), F(1, 6)], HALF)
    for lam in partitions_up_to(4, 3):
        tabs = enumerate_tableaux(lam, 3)
        assert sum((conditional_P(lam, P, ctx) for P in tabs), HALF.zero) == HALF.one
        types = compositions(lam.size, 3)
        assert sum((conditional_type(lam, mu, ctx) for mu in types), HALF.zero) == HALF.one
        for mu in compositions(lam.size, 3):
            by_P = sum((conditional_P(lam, P, ctx) for P in tabs if P.type == mu), HALF.zero)
            assert conditional_type(lam, mu, ctx) == by_P


def h(k, a):
    return sum((_prod(c) for c in combinations_with_replacement(a, k)), F(0)) if k >= 0 else F(0)


def _prod(xs):
    out = F(1)
    for x in xs:
        out *= x
    return out


def schur_jacobi_trudi(lam, a):
    # det [h_{lam_i - i + j}] by cofactor expansion; tiny sizes only
    m = len(lam)
    mat = [[h(lam[i] - i + j, a) for j in range(m)] for i in range(m)]

    def det(M):
        if not M:
            return F(1)
        return sum(((-1) ** j * M[0][j] * det([row[:j] + row[j + 1:] for row in M[1:]])
                    for j in range(len(M))), F(0))

    return det(mat)


def test_psi_at_q0_is_schur():
    a = [F(1, 2), F(1, 3), F(1, 6)]
    ctx = WhittakerContext(a, WeightMode.exact(0))
    for lam in partitions_up_to(5, 3):
        assert psi(lam, ctx).value == schur_jacobi_trudi(tuple(lam), a)


def test_nu_is_phi_marginal():
    a = [F(1, 3), F(2, 3)]
    ctx = WhittakerContext(a, HALF)
    for n in range(5):
        marg = {}
        for w, dist in iter_word_distributions(2, n, HALF):
            aw = _prod(a[x - 1] for x in w)
            for (P, _), wt in dist.items():
                marg[P.shape] = marg.get(P.shape, 0) + aw * wt.value
        for lam in enumerate_partitions(n, 2):
            assert nu(lam, ctx).value == marg.get(lam, 0)


def test_distinct_entry_kappa_sum():
    # the kappa-sum over tableaux with distinct letters from [l]
    for n in range(1, 5):
        for l in range(n + 1, n + 4):
            for lam in enumerate_partitions(n, l):
                total = SYMBOLIC.zero
                for P in enumerate_tableaux(lam, l):
                    if max(P.type) <= 1:
                        total = total + kappa(P)
                want = SYMBOLIC.const(comb(l, n)) * f_lambda_q(lam) / (omq(1) ** n * delta(lam, l))
                assert total == want


# -- verification suites and their negative controls ---------------------------------

CTX2 = WhittakerContext([F(1, 2), F(1, 2)])
CTX3 = WhittakerContext([F(1, 2), F(1, 3), F(1, 6)])


@pytest.mark.parametrize("ctx", [CTX2, CTX3], ids=["l2", "l3"])
def test_intertwining_and_control(ctx):
    assert verify_intertwining(ctx, 3).passed
    assert not verify_intertwining(ctx, 3, negative_control=True).passed
    assert verify_hat_intertwining(ctx, 3).passed
    assert not verify_hat_intertwining(ctx, 3, negative_control=True).passed


@pytest.mark.parametrize("ctx", [CTX2, CTX3], ids=["l2", "l3"])
def test_theorem2_and_control(ctx):
    r = verify_theorem2(ctx, 3)
    assert r.passed and r.checked > 0
    bad = verify_theorem2(ctx, 3, negative_control=True)
    assert not bad.passed and bad.counterexample is not None


def test_eigen_cauchy_and_controls():
    for ctx in (CTX2, CTX3):
        assert eigen_check(ctx, 4).passed
        assert not eigen_check(ctx, 4, negative_control=True).passed
        assert cauchy_check(ctx, 4).passed
        assert not cauchy_check(ctx, 4, negative_control=True).passed


def test_corollary3_and_control():
    r = corollary3_check(CTX2, 3)
    assert r.passed
    assert r.details["shapes_where_Delta_differs_from_Delta_l"] > 0
    assert not corollary3_check(CTX2, 3, negative_control=True).passed


def test_proposition1():
    r = proposition1_check((2, 1), F(1, 2))
    assert r.passed
    assert r.details["eps"] == ["11/27", "5/27", "19/216", "37/864"]
    r = proposition1_check((3,), F(1, 2))
    assert r.passed
    assert r.details["eps"] == ["92/189", "44/189", "43/378", "85/1512"]
    assert proposition1_check((1,), F(1, 2)).passed
    assert not proposition1_check((2, 1), F(1, 2), negative_control=True).passed
    assert not proposition1_check((3,), F(1, 2), negative_control=True).passed


def test_eq3_and_stochastic_suites():
    assert eq3_check(4, 5).passed
    assert not eq3_check(4, 5, negative_control=True).passed
    assert stochastic_check(3, 4).passed
    assert not stochastic_check(3, 4, negative_control=True).passed


def test_report_json():
    r = eigen_check(CTX2, 2)
    obj = r.to_json()
    assert obj["passed"] and obj["params"]["l"] == 2
    assert r.line().startswith("PASS ")
