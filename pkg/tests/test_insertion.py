import math
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qrs.insertion import (
    F0_ONLY,
    InvariantViolation,
    LetterOutOfRangeError,
    PairDistribution,
    column_insert,
    iter_word_distributions,
    local_weight,
    mc_chain_shapes,
    phi_distribution,
    q_insert_outcomes,
    q_insert_sample,
    rs_correspondence,
    run_tableau_chain,
    seeded_rng,
)
from qrs.qarith import SYMBOLIC, QRationalFunction, WeightMode
from qrs.shapes import enumerate_partitions
from qrs.tableaux import StandardTableau, Tableau, enumerate_all_tableaux
from qrs.whittaker import WhittakerContext, nu

omq = SYMBOLIC.one_minus_qpow
FIG_P = [[1, 2, 2, 2, 3, 5], [2, 3, 4, 5], [3, 4], [5]]


def rows(P):
    return P.to_rows()


def test_column_insert_example():
    P = Tableau.from_rows([[1, 1, 2, 3], [2, 3, 3], [3]], 3)
    out, path = column_insert(P, 2)
    assert out.to_rows() == [[1, 1, 2, 3, 3], [2, 2, 3], [3]]
    assert path.rows == (2, 1)


def test_column_insert_into_empty():
    for l in range(1, 5):
        for k in range(1, l + 1):
            out, _ = column_insert(Tableau.empty(l), k)
            assert out.to_rows() == [[k]]


def test_rs_example():
    P, Q = rs_correspondence([1, 1, 4, 3, 2, 3, 2])
    assert P.to_rows() == [[1, 1, 3, 4], [2, 2], [3]]
    assert Q.to_rows() == [[1, 2, 5, 7], [3, 4], [6]]
    P0, Q0 = rs_correspondence([], 2)
    assert P0 == Tableau.empty(2) and Q0 == StandardTableau.empty()


def test_rs_injective():
    for n in range(1, 6):
        pairs = {rs_correspondence(w, 2) for w in product([1, 2], repeat=n)}
        assert len(pairs) == 2 ** n


def test_letter_range():
    with pytest.raises(LetterOutOfRangeError):
        column_insert(Tableau.empty(2), 3)
    with pytest.raises(LetterOutOfRangeError):
        q_insert_outcomes(Tableau.empty(2), 0)
    with pytest.raises(LetterOutOfRangeError):
        phi_distribution([1, 3], 2)


def test_local_weight_examples():
    P = Tableau.from_rows([[1, 1, 2, 2], [2]], 2)
    for i in (1, 2):
        assert local_weight(P, i, 1, "f0") == SYMBOLIC.one
        assert local_weight(P, i, 1, "f1") == SYMBOLIC.one
    assert local_weight(P, 2, 2, "f0") == omq(1)


def test_f1_guard_raises_off_path():
    # lam^2 = (1, 1): the f1(3, 2) denominator is 1 - q^0
    P = Tableau.from_rows([[1], [2]], 3)
    with pytest.raises(InvariantViolation):
        local_weight(P, 3, 2, "f1")


def test_two_outcome_insertion():
    P = Tableau.from_rows([[1, 1, 2, 2], [2]], 2)
    outs = {tuple(map(tuple, rows(o.tableau))): o.weight for o in q_insert_outcomes(P, 2)}
    assert outs == {
        ((1, 1, 2, 2), (2, 2)): omq(1),
        ((1, 1, 2, 2, 2), (2,)): SYMBOLIC.qpow(1),
    }
    one = q_insert_outcomes(P, 1)
    assert len(one) == 1 and one[0].weight == SYMBOLIC.one


def test_four_outcome_insertion():
    P = Tableau.from_rows(FIG_P, 5)
    outs = {tuple(map(tuple, rows(o.tableau))): o.weight for o in q_insert_outcomes(P, 3)}
    a = omq(2)
    b = omq(2) / omq(3)
    c = omq(1) / omq(2)
    expected = {
        ((1, 2, 2, 2, 3, 5), (2, 3, 3, 4, 5), (3, 4), (5,)): a * b * c,
        ((1, 2, 2, 2, 3, 5, 5), (2, 3, 3, 4), (3, 4), (5,)): a * b * (1 - c),
        ((1, 2, 2, 2, 3, 4, 5), (2, 3, 3, 5), (3, 4), (5,)): a * (1 - b),
        ((1, 2, 2, 2, 3, 3, 5), (2, 3, 4, 5), (3, 4), (5,)): SYMBOLIC.qpow(2),
    }
    assert outs == expected
    # the same weights as reduced rational functions
    assert outs[((1, 2, 2, 2, 3, 5), (2, 3, 3, 4, 5), (3, 4), (5,))].rational == \
        QRationalFunction.parse("(1 - q^2)/(1 + q + q^2)")


def test_outcome_bookkeeping_and_highest_path():
    for l in range(1, 4):
        for n in range(5):
            for P in enumerate_all_tableaux(n, l):
                for k in range(1, l + 1):
                    outs = q_insert_outcomes(P, k)
                    classic, path0 = column_insert(P, k)
                    assert outs[0].tableau == classic
                    for o in outs:
                        assert o.tableau.type == tuple(t + (i == k) for i, t in enumerate(P.type, 1))
                        j = o.path.rows[-1]
                        assert j <= k
                        assert o.tableau.shape.size == P.shape.size + 1
                        assert o.tableau.shape.part(j) == P.shape.part(j) + 1
                        assert list(o.path.rows) == sorted(o.path.rows, reverse=True)
                        assert all(a >= b for a, b in zip(path0.rows, o.path.rows))
                        assert o.path.weight == o.weight


def test_phi_examples():
    d = phi_distribution([2], 2)
    ((P, Q), w), = d.items()
    assert P.to_rows() == [[2]] and Q.to_rows() == [[1]] and w == SYMBOLIC.one
    d = phi_distribution([1, 2], 2)
    by_shape = {tuple(P.shape): w for (P, _), w in d.items()}
    assert by_shape == {(1, 1): omq(1), (2,): SYMBOLIC.qpow(1)}


def test_phi_mass_one():
    for l in range(1, 4):
        for n in range(6 if l < 3 else 5):
            for _, dist in iter_word_distributions(l, n):
                assert dist.total() == SYMBOLIC.one
                for P, Q in dist:
                    assert P.shape == Q.shape


def test_phi_at_q0_is_rs():
    zero = WeightMode.exact(0)
    for w, dist in iter_word_distributions(3, 4, zero):
        assert dict(dist) == {rs_correspondence(w, 3): zero.one}


def test_f0_only_changes_nothing_for_two_letters():
    # every reachable f1 equals f0 when l = 2, which is why the negative
    # controls switch mutation there
    for n in range(6):
        for P in enumerate_all_tableaux(n, 2):
            for k in (1, 2):
                a = [(o.tableau, o.weight) for o in q_insert_outcomes(P, k)]
                b = [(o.tableau, o.weight) for o in q_insert_outcomes(P, k, SYMBOLIC, F0_ONLY)]
                assert a == b


def test_sampling_q0_is_classic():
    rng = seeded_rng(3)
    for P in enumerate_all_tableaux(4, 3):
        for k in (1, 2, 3):
            assert q_insert_sample(P, k, rng, 0.0)[0] == column_insert(P, k)[0]


def test_sampling_rejects_bad_q():
    with pytest.raises(ValueError):
        q_insert_sample(Tableau.empty(2), 1, seeded_rng(0), 1.0)


def _check_sampler(P, k, q, draws, seed):
    exact = {o.tableau: float(o.weight) for o in q_insert_outcomes(P, k, WeightMode.exact(Fraction(q)))}
    rng = seeded_rng(seed)
    counts = {}
    for _ in range(draws):
        t, _ = q_insert_sample(P, k, rng, q)
        counts[t] = counts.get(t, 0) + 1
    assert set(counts) <= set(exact)
    for t, p in exact.items():
        emp = counts.get(t, 0) / draws
        assert abs(emp - p) <= 4 * math.sqrt(p * (1 - p) / draws) + 1e-12


def test_sampling_two_outcomes():
    P = Tableau.from_rows([[1, 1, 2, 2], [2]], 2)
    _check_sampler(P, 2, 0.5, 100_000, seed=11)


@pytest.mark.parametrize("rows_, l, k", [
    (FIG_P, 5, 3),
    ([[1, 1, 2, 3], [2, 3, 3], [3]], 3, 2),
    ([[1, 2, 2, 4], [2, 3], [4]], 4, 3),
])
def test_sampling_matches_exact(rows_, l, k):
    _check_sampler(Tableau.from_rows(rows_, l), k, 0.5, 20_000, seed=l * 10 + k)


def test_seeded_streams_reproducible():
    a = run_tableau_chain([0.5, 0.5], 6, seeded_rng(5, 2), 0.5)
    b = run_tableau_chain([0.5, 0.5], 6, seeded_rng(5, 2), 0.5)
    assert a == b


def test_chain_single_letter():
    chain = run_tableau_chain([1.0], 5, seeded_rng(0), 0.7)
    assert [c.to_rows() for c in chain[1:]] == [[[1] * i] for i in range(1, 6)]


def test_chain_q0_follows_rs():
    for run in range(200):
        chain = run_tableau_chain([0.5, 0.5], 4, seeded_rng(9, run), 0.0)
        word = []
        for before, after in zip(chain, chain[1:]):
            word.append(next(i for i, (x, y) in enumerate(zip(before.type, after.type), 1) if y > x))
        assert chain[-1] == rs_correspondence(word, 2)[0]


def test_chain_shape_law_vs_nu():
    runs = 20_000
    counts = mc_chain_shapes([0.5, 0.5], 0.5, 4, runs, seed=1)
    ctx = WhittakerContext([Fraction(1, 2)] * 2, WeightMode.exact(Fraction(1, 2)))
    for lam in enumerate_partitions(4, 2):
        p = float(nu(lam, ctx))
        emp = counts.get(lam, 0) / runs
        assert abs(emp - p) <= 4 * math.sqrt(p * (1 - p) / runs)


def test_chain_counts_independent_of_threads():
    a = mc_chain_shapes([0.5, 0.25, 0.25], 0.5, 3, 400, seed=4, threads=1)
    b = mc_chain_shapes([0.5, 0.25, 0.25], 0.5, 3, 400, seed=4, threads=3)
    assert a == b


def test_pair_distribution_marginals():
    d = phi_distribution([2, 1, 2], 2)
    assert isinstance(d, PairDistribution)
    total = SYMBOLIC.zero
    for w in d.marginal_P().values():
        total = total + w
    assert total == SYMBOLIC.one
    assert len(d.to_json()) == len(d)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=0, max_size=5), st.fractions(0, Fraction(9, 10), max_denominator=10))
def test_phi_mass_exact_random_words(word, q):
    mode = WeightMode.exact(q)
    assert phi_distribution(word, 3, mode).total() == mode.one
