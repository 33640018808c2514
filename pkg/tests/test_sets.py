import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mulcomp.arith import build_factor_table, squarefree_part
from mulcomp.errors import InvalidArgumentError, OutOfRangeError, ParseError
from mulcomp.lang import parse_int_set, parse_prime_set
from mulcomp.sets import (
    ALL_PRIMES,
    AllInts,
    EvenValuationAtFirstK,
    ExplicitInts,
    ExplicitPrimes,
    Intervals,
    ResidueClass,
    SquarefreeOverFirstK,
    SquarefreeOverQ,
    SquarefreePartAvoidsQ,
    Thinned,
    count,
    counting_series,
    indicator,
    member,
    reciprocal_sum_abel,
)

from oracles import is_prime, is_squarefree, trial_factor

SQUAREFREE = SquarefreeOverQ(ALL_PRIMES)
SQUARES = SquarefreePartAvoidsQ(ALL_PRIMES)
_T = build_factor_table(20_000)


def test_member_examples(table):
    assert member(SQUAREFREE, 30, table) and not member(SQUAREFREE, 12, table)
    assert member(SQUARES, 49, table) and not member(SQUARES, 18, table)
    ev = EvenValuationAtFirstK(2)
    assert member(ev, 36, table) and not member(ev, 12, table)
    with pytest.raises(OutOfRangeError):
        member(SQUAREFREE, 10**6 + 1, table)


def test_one_belongs_to_both_lemma_sets(table):
    q = ResidueClass(4, 1)
    assert member(SquarefreeOverQ(q), 1, table)
    assert member(SquarefreePartAvoidsQ(q), 1, table)


def test_count_examples(table):
    assert count(SQUAREFREE, 100, table) == sum(is_squarefree(n) for n in range(1, 101)) == 61
    assert count(SQUARES, 100, table) == 10
    assert count(EvenValuationAtFirstK(1), 12, table) == 8
    assert np.flatnonzero(indicator(EvenValuationAtFirstK(1), 12, table)).tolist() == [
        1, 3, 4, 5, 7, 9, 11, 12]


def test_counting_series_examples(table):
    assert counting_series(AllInts(), [10, 100], table).counts == (10, 100)
    assert counting_series(SQUAREFREE, [10, 100], table).counts == (7, 61)
    assert counting_series(SQUARES, [10, 100, 10**4], table).counts == (3, 10, 100)
    with pytest.raises(InvalidArgumentError):
        counting_series(SQUARES, [100, 10], table)


def test_counting_series_single_pass_matches_count(table):
    d = SquarefreePartAvoidsQ(ResidueClass(4, 1))
    cps = [1, 17, 999, 65536, 10**6]
    assert counting_series(d, cps, table).counts == tuple(count(d, x, table) for x in cps)


def test_abel_examples(table):
    direct, abel = reciprocal_sum_abel(SQUAREFREE, 10, table)
    assert direct == pytest.approx(2.442857142857143, abs=1e-12)
    assert abs(direct - abel) < 1e-10
    assert reciprocal_sum_abel(ExplicitInts((1,)), 5, table) == pytest.approx((1.0, 1.0))
    direct, abel = reciprocal_sum_abel(SQUARES, 100, table)
    assert direct == pytest.approx(1.5497677311665408, abs=1e-12)
    assert abs(direct - abel) < 1e-10


_PRIME_SETS = [
    ALL_PRIMES,
    ResidueClass(4, 1),
    ResidueClass(3, 2),
    Intervals(((2, 29),)),
    Intervals(((5, 11), (40, 100))),
    ExplicitPrimes(()),
    ExplicitPrimes((3, 7, 101)),
    Thinned(ALL_PRIMES, 3),
]


def _brute_member(d, n):
    fs = trial_factor(n)
    if isinstance(d, SquarefreeOverQ):
        return all(e == 1 and d.q.contains(p, _T) for p, e in fs)
    if isinstance(d, SquarefreePartAvoidsQ):
        return not any(e % 2 and d.q.contains(p, _T) for p, e in fs)
    if isinstance(d, EvenValuationAtFirstK):
        small = [p for p in range(2, 100) if is_prime(p)][: d.k]
        return all(e % 2 == 0 for p, e in fs if p in small)
    raise AssertionError(d)


@pytest.mark.parametrize("q", _PRIME_SETS, ids=str)
def test_scalar_and_vector_membership_agree_with_brute_force(q):
    for d in (SquarefreeOverQ(q), SquarefreePartAvoidsQ(q)):
        ind = indicator(d, 3000, _T)
        for n in range(1, 3001):
            expect = _brute_member(d, n)
            assert member(d, n, _T) == expect == bool(ind[n]), (str(d), n)


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_evenval_against_brute_force(k):
    d = EvenValuationAtFirstK(k)
    ind = indicator(d, 3000, _T)
    for n in range(1, 3001):
        assert member(d, n, _T) == _brute_member(d, n) == bool(ind[n])


@given(st.sampled_from(_PRIME_SETS), st.integers(1, 20_000))
def test_lemma_decomposition_total(q, n):
    mask = q.mask(_T)
    a = math.prod(p for p, e in trial_factor(n) if e % 2 and mask[p])
    b = n // a
    assert a * b == n
    assert member(SquarefreeOverQ(q), a, _T)
    assert member(SquarefreePartAvoidsQ(q), b, _T)


def test_monotone_in_q():
    small, big = Intervals(((2, 29),)), ALL_PRIMES
    a_small = indicator(SquarefreeOverQ(small), 20_000, _T)
    a_big = indicator(SquarefreeOverQ(big), 20_000, _T)
    b_small = indicator(SquarefreePartAvoidsQ(small), 20_000, _T)
    b_big = indicator(SquarefreePartAvoidsQ(big), 20_000, _T)
    assert np.all(a_big[a_small]) and np.all(b_small[b_big])


@given(st.sampled_from(_PRIME_SETS), st.integers(1, 20_000))
def test_counts_bounded(q, x):
    assert count(AllInts(), x, _T) == x
    assert 0 <= count(SquarefreeOverQ(q), x, _T) <= x


def test_evenval_density(table):
    for k in (1, 2, 3, 4):
        ps = [2, 3, 5, 7][:k]
        density = math.prod(p / (p + 1) for p in ps)
        ratio = count(EvenValuationAtFirstK(k), 10**6, table) / 10**6
        assert abs(ratio / density - 1) < 0.01
        assert ratio <= math.pi**2 / 6 * math.prod(1 - 1 / p for p in ps)


def test_sf_first_k_elements():
    assert SquarefreeOverFirstK(3).elements() == [1, 2, 3, 5, 6, 10, 15, 30]
    assert len(SquarefreeOverFirstK(8).elements()) == 256


def test_thinned_picks_every_n0th():
    base = ExplicitPrimes((2, 3, 5, 7, 11, 13, 17))
    assert Thinned(base, 3).enumerate(_T).tolist() == [5, 13]
    assert Thinned(base, 1).enumerate(_T).tolist() == list(base.primes)


def test_prime_set_validation():
    with pytest.raises(InvalidArgumentError):
        ExplicitPrimes((5, 3))
    with pytest.raises(InvalidArgumentError):
        ExplicitPrimes((4,))
    with pytest.raises(InvalidArgumentError):
        Intervals(((2, 29), (20, 40)))
    with pytest.raises(InvalidArgumentError):
        Thinned(ALL_PRIMES, 0)


def test_prime_set_reciprocal_sum():
    q = Intervals(((2, 29),))
    assert q.reciprocal_sum(0, 20_000, _T) == pytest.approx(1.033438771872032, abs=1e-14)


@pytest.mark.parametrize("text", [
    "sf-over-q(intervals:(2,29])",
    "evenval(k=2)",
    "sf-first-k(k=3)",
    "sfpart-avoids-q(residue:1 mod 4)",
    "sf-over-q(all)",
    "sf-over-q(thinned(intervals:(2,29],(40,100],n0=2))",
    "sf-over-q(explicit:[])",
    "explicit(1,4,9)",
    "all",
])
def test_int_set_text_round_trip(text):
    d = parse_int_set(text)
    assert str(d) == text
    assert parse_int_set(str(d)) == d


_prime_desc = st.recursive(
    st.one_of(
        st.builds(ResidueClass, st.integers(1, 12), st.integers(0, 11)),
        st.lists(st.sampled_from([2, 3, 5, 7, 11, 13, 97]), unique=True).map(
            lambda ps: ExplicitPrimes(tuple(sorted(ps)))),
        st.lists(st.integers(0, 500), min_size=2, max_size=6, unique=True).map(sorted).filter(
            lambda xs: len(xs) % 2 == 0).map(
            lambda xs: Intervals(tuple(zip(xs[::2], xs[1::2])))),
    ),
    lambda inner: st.builds(Thinned, inner, st.integers(1, 9)),
    max_leaves=3,
)


@given(_prime_desc)
def test_prime_set_round_trip(q):
    assert parse_prime_set(str(q)) == q
    assert parse_int_set(str(SquarefreePartAvoidsQ(q))) == SquarefreePartAvoidsQ(q)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse_int_set("evenval(k=two)")
    assert e.value.pos == 10
    with pytest.raises(ParseError):
        parse_prime_set("intervals:(5,3]")
    with pytest.raises(ParseError):
        parse_int_set("sf-over-q(all) trailing")
