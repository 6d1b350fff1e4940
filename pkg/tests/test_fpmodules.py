"""Delta counts, p-binomials, solvability and the counting formula."""

import random

import pytest

from pgal.errors import BadIndex, Mismatch, NotSolvable
from pgal.fpmodules import (
    INFINITE,
    FpGModule,
    NormData,
    count_solutions,
    delta,
    ei_solvability,
    mss_quotient,
    p_binomial,
    solvable,
)


def test_delta_paper_example():
    A = FpGModule(3, 1, {3: 1})
    assert [delta(A, i) for i in (1, 2, 3, 4)] == [1, 1, 1, 0]


def test_delta_zero_module_and_sums():
    Z = FpGModule(3, 1, {})
    assert all(delta(Z, i) == 0 for i in (1, 2, 3, 4))
    B = FpGModule(2, 1, {1: 2, 2: 1})
    assert delta(B, 1) == 3
    with pytest.raises(BadIndex):
        delta(B, 5)


def test_p_binomial_piecewise_and_values():
    assert p_binomial(3, -1, 2) == 0
    assert p_binomial(3, 4, 2) == 0
    assert p_binomial(2, 1, 2) == 3
    assert p_binomial(3, 2, 3) == 13
    assert p_binomial(5, 0, 7) == 1


def test_p_binomial_pascal_oracle():
    for p in (2, 3, 5):
        for n in range(1, 11):
            for m in range(0, 11):
                lhs = p_binomial(n, m, p)
                rhs = p_binomial(n - 1, m, p) + p ** (n - m) * p_binomial(n - 1, m - 1, p)
                assert lhs == rhs


def test_p_binomial_nonnegative_integer():
    for p in (2, 3, 5):
        for n in range(0, 13):
            for m in range(0, 13):
                assert p_binomial(n, m, p) >= 0


def test_norm_data_block_rule():
    NormData.from_levels(3, 1, [2, 2])
    with pytest.raises(Mismatch):
        NormData(3, 1, {1: 2, 2: 2, 3: 1})
    with pytest.raises(Mismatch):
        NormData(3, 1, {1: 2, 2: 2})  # missing i=3


def test_solvable_paper_iff():
    A = FpGModule(3, 1, {3: 1})
    yes = NormData.from_levels(3, 1, [2, 2], i_invariant=0)
    no = NormData.from_levels(3, 1, [2, 0], i_invariant=0)
    assert solvable(A, yes)
    assert not solvable(A, no)


def test_solvable_zero_module_and_top_failure():
    Z = FpGModule(2, 1, {})
    assert solvable(Z, NormData.from_levels(2, 1, [0, 0]))
    A = FpGModule(2, 1, {2: 1})
    assert not solvable(A, NormData.from_levels(2, 1, [1, 0]))


def test_solvable_monotone_in_dims():
    rng = random.Random(31)
    for _ in range(100):
        p, n = rng.choice([(2, 1), (3, 1), (2, 2)])
        top = p ** n
        d = {i: rng.randint(0, 2) for i in rng.sample(range(1, top + 1), k=min(2, top))}
        A = FpGModule(p, n, d)
        lv = [rng.randint(0, 3) for _ in range(n + 1)]
        nd1 = NormData.from_levels(p, n, lv)
        nd2 = NormData.from_levels(p, n, [v + 1 for v in lv])
        if solvable(A, nd1):
            assert solvable(A, nd2)


def test_count_infinite():
    A = FpGModule(3, 1, {3: 1})
    nd = NormData.from_levels(3, 1, [2, 2], i_invariant=0, base_quotient_finite=False)
    assert count_solutions(A, nd) is INFINITE


def test_count_zero_module_is_one():
    Z = FpGModule(3, 1, {})
    nd = NormData.from_levels(3, 1, [2, 2], i_invariant=None)
    assert count_solutions(Z, nd) == 1


def test_count_paper_instance():
    # p=3, n=1, one length-3 summand, dims (2,2,2), i(K/k)=0:
    # i=3 contributes binom(2,1)_3 = 4 and the power 3^1; total 12
    A = FpGModule(3, 1, {3: 1})
    nd = NormData.from_levels(3, 1, [2, 2], i_invariant=0)
    assert count_solutions(A, nd) == 12


def test_count_monotone_in_dims():
    A = FpGModule(3, 1, {3: 1})
    lo = count_solutions(A, NormData.from_levels(3, 1, [2, 2], i_invariant=0))
    hi = count_solutions(A, NormData.from_levels(3, 1, [3, 3], i_invariant=0))
    assert hi >= lo >= 1


def test_count_requires_solvable():
    A = FpGModule(3, 1, {3: 1})
    nd = NormData.from_levels(3, 1, [2, 0], i_invariant=0)
    with pytest.raises(NotSolvable):
        count_solutions(A, nd)


def test_count_positive_on_margin_safe_inputs():
    rng = random.Random(17)
    for _ in range(60):
        p, n = rng.choice([(2, 1), (3, 1), (5, 1), (2, 2)])
        top = p ** n
        d = {}
        for _ in range(rng.randint(0, 2)):
            d[rng.randint(1, top)] = rng.randint(1, 2)
        A = FpGModule(p, n, d)
        margin = delta(A, 1) + 1
        nd = NormData.from_levels(p, n, [margin] * (n + 1),
                                  i_invariant=rng.choice([None] + list(range(n))))
        assert solvable(A, nd)
        c = count_solutions(A, nd)
        assert c >= 1


def test_ei_solvability():
    assert ei_solvability(3, True) == [True, True]
    assert ei_solvability(3, False) == [False, False]
    assert ei_solvability(2, True) == [True]


def test_mss_quotient():
    M = mss_quotient(9, 3, 2)
    assert M.d == {9: 1}
    assert mss_quotient(1, 3, 2).d == {1: 1}
    with pytest.raises(BadIndex):
        mss_quotient(10, 3, 2)


def test_mismatched_pn():
    A = FpGModule(3, 1, {1: 1})
    nd = NormData.from_levels(2, 1, [1, 1])
    with pytest.raises(Mismatch):
        solvable(A, nd)
