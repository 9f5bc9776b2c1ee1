from fractions import Fraction
from math import factorial

import pytest

from qrs.insertion import rs_correspondence, seeded_rng
from qrs.qarith import SYMBOLIC, QPolynomial, QRationalFunction, WeightMode
from qrs.shapes import delta_full, enumerate_partitions
from qrs.tableaux import enumerate_standard, rho
from qrs.whittaker.verify import kernel_mutation
from qrs.permutations import (
    F_sigma,
    Permutation,
    ShapeMismatchError,
    mu_q,
    sample_shape,
    shape_law,
    theta,
    zeta,
    zeta_brute_force,
)



def P_(expr):
    # products of parenthesised factors, with optional integer powers
    out = QPolynomial([1])
    for factor in expr.split("*"):
        base, _, power = factor.strip().partition(")^")
        poly = QPolynomial.parse(base.strip("()"))
        out = out * poly ** (int(power) if power else 1)
    return QRationalFunction(out)

F_TABLE = {
    "12": "1 - q",
    "21": "1 + q",
    "123": "(1 - q)^2",
    "132": "1 - q",
    "213": "(1 + q)*(1 - q^2)",
    "231": "1 - q^2",
    "312": "1 - q^2",
    "321": "(1 + q)*(1 + q + q^2)",
}
THETA_TABLE = {
    (2,): "1 + q",
    (1, 1): "1 - q",
    (3,): "(1 + q)*(1 + q + q^2)",
    (2, 1): "(1 - q)*(2 + q)^2",
    (1, 1, 1): "(1 - q)^2",
}


def test_permutation_parsing():
    assert Permutation.parse("213") == (2, 1, 3)
    assert Permutation.parse("2,1,3") == (2, 1, 3)
    assert Permutation((3, 1, 2)).inverse() == (2, 3, 1)
    with pytest.raises(ValueError):
        Permutation((1, 1))
    assert len(Permutation.all(4)) == 24


@pytest.mark.parametrize("word, expr", sorted(F_TABLE.items()))
def test_F_sigma_table(word, expr):
    assert F_sigma(Permutation.parse(word)).rational == P_(expr)


@pytest.mark.parametrize("lam, expr", sorted(THETA_TABLE.items()))
def test_theta_table(lam, expr):
    assert theta(lam).rational == P_(expr)


def test_F_sigma_convention_irrelevant_to_tables():
    # the inverse word swaps P and Q, and zeta is symmetric
    for n in range(1, 6):
        for s in Permutation.all(n):
            assert F_sigma(s) == F_sigma(s.inverse())


@pytest.mark.parametrize("n", range(1, 5))
def test_zeta_brute_force(n):
    brute = zeta_brute_force(n)
    assert len(brute) == factorial(n)
    for (P, Q), w in brute.items():
        assert w == zeta(P, Q)


def test_zeta_brute_force_control():
    brute = zeta_brute_force(3, variant=kernel_mutation(3))
    assert any(w != zeta(P, Q) for (P, Q), w in brute.items())


def test_zeta_shape_mismatch():
    a = enumerate_standard((2,))[0]
    b = enumerate_standard((1, 1))[0]
    with pytest.raises(ShapeMismatchError):
        zeta(a, b)


def test_integrality_and_sums():
    for n in range(1, 7):
        total = SYMBOLIC.zero
        for lam in enumerate_partitions(n, n):
            t = theta(lam)
            assert t.rational.is_polynomial()
            total = total + t
            assert theta(lam, WeightMode.exact(0)).value == len(enumerate_standard(lam)) ** 2
            for Q in enumerate_standard(lam):
                r = rho(Q).polynomial
                assert (QPolynomial([1, -1]) ** n).divides(r)
                assert delta_full(lam).polynomial.divides(r)
        if n <= 5:
            assert total == SYMBOLIC.const(factorial(n))


def test_zeta_integral_small():
    for n in range(1, 5):
        for lam in enumerate_partitions(n, n):
            tabs = enumerate_standard(lam)
            for P in tabs:
                for Q in tabs:
                    assert zeta(P, Q).rational.is_polynomial()


def test_F_sigma_sum():
    for n in range(1, 6):
        total = SYMBOLIC.zero
        for s in Permutation.all(n):
            total = total + F_sigma(s)
        assert total == SYMBOLIC.const(factorial(n))


@pytest.mark.parametrize("q", [0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
def test_mu_q_is_probability(q):
    for n in range(1, 8):
        law = shape_law(n, q)
        assert sum(p for _, p in law) == 1
        assert all(p >= 0 for _, p in law)
        assert law[0][1] == mu_q(law[0][0], q)


def test_mu_q_at_zero_is_plancherel():
    for lam, p in shape_law(5, 0):
        assert p == Fraction(len(enumerate_standard(lam)) ** 2, 120)


def test_sample_shape():
    rng = seeded_rng(0)
    draws = sample_shape(4, Fraction(1, 2), rng, size=4000)
    law = dict(shape_law(4, Fraction(1, 2)))
    for lam, p in law.items():
        emp = draws.count(lam) / len(draws)
        assert abs(emp - float(p)) <= 4 * (float(p) * (1 - float(p)) / len(draws)) ** 0.5 + 1e-9
    with pytest.raises(ValueError):
        shape_law(3, 1)


def test_F_sigma_matches_theta_sum():
    # each shape-matched pair is hit by exactly one permutation
    for n in range(1, 5):
        by_shape = {}
        for s in Permutation.all(n):
            P, _ = rs_correspondence(s, n)
            by_shape[P.shape] = by_shape.get(P.shape, SYMBOLIC.zero) + F_sigma(s)
        for lam, w in by_shape.items():
            assert w == theta(lam)
