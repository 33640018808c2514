import math

import numpy as np
import pytest

from mulcomp.analytic import (
    EULER_GAMMA,
    EXP_GAMMA,
    EXP_NEG_GAMMA,
    build_buchstab,
    eval_buchstab,
    loglog_deviation,
    phi_rough,
    sqrt_window_sum,
    warlimont_error_ratio,
    warlimont_estimate,
)
from mulcomp.arith import mertens_product, primes_in
from mulcomp.errors import InvalidArgumentError, OutOfRangeError

from oracles import is_prime, rough_count


@pytest.fixture(scope="module")
def omega():
    return build_buchstab(20.0, 1e-3)


def closed_form(u):
    return (1 + math.log(u - 1)) / u


def test_constants():
    assert math.exp(EULER_GAMMA) == pytest.approx(EXP_GAMMA, rel=1e-15)
    assert math.exp(-EULER_GAMMA) == pytest.approx(EXP_NEG_GAMMA, rel=1e-15)


def test_buchstab_examples(omega):
    assert eval_buchstab(omega, 1.5) == pytest.approx(2 / 3, abs=1e-15)
    assert eval_buchstab(omega, 2.0) == 0.5
    assert eval_buchstab(omega, 1.0) == 1.0
    assert eval_buchstab(omega, 2.5) == pytest.approx(0.5621860432432657, abs=1e-6)
    assert eval_buchstab(omega, 3.0) == pytest.approx(0.5643823935199818, abs=1e-6)


def test_exact_on_first_interval(omega):
    u = omega.grid[omega.grid <= 2.0]
    assert np.allclose(omega.values[: len(u)], 1 / u, rtol=0, atol=1e-15)


def test_closed_form_on_second_interval(omega):
    for u in np.linspace(2, 3, 777):
        assert abs(eval_buchstab(omega, u) - closed_form(u)) < 1e-6


def test_values_bounded(omega):
    assert omega.values.min() >= 0.5 and omega.values.max() <= 1.0
    assert omega.lipschitz < 1.01
    assert np.all(np.abs(np.diff(omega.values)) <= omega.lipschitz * omega.h + 1e-15)


def test_tail_tends_to_exp_neg_gamma(omega):
    assert eval_buchstab(omega, 20.0) == pytest.approx(EXP_NEG_GAMMA, abs=1e-6)


def test_grid_refinement_second_order():
    h = 0.01
    coarse, fine = build_buchstab(8.0, h), build_buchstab(8.0, h / 2)
    for u in np.linspace(1, 8, 301):
        assert abs(eval_buchstab(coarse, u) - eval_buchstab(fine, u)) < 4 * h * h


def test_bad_parameters():
    with pytest.raises(InvalidArgumentError):
        build_buchstab(5, 0.02)
    with pytest.raises(InvalidArgumentError):
        build_buchstab(5, 0)
    with pytest.raises(InvalidArgumentError):
        build_buchstab(1.5, 0.01)
    with pytest.raises(OutOfRangeError):
        eval_buchstab(build_buchstab(3, 0.01), 3.5)


@pytest.mark.parametrize("x, y", [(100, 2), (100, 10), (30, 4), (1000, 7), (500, 23), (1, 5)])
def test_phi_against_brute_force(small_table, x, y):
    assert phi_rough(x, y, small_table) == rough_count(x, y)


def test_phi_examples(small_table):
    assert phi_rough(100, 2, small_table) == 100
    assert phi_rough(100, 10, small_table) == 22
    assert phi_rough(30, 4, small_table) == 10


def test_phi_properties(small_table):
    x = 5000
    vals = [phi_rough(x, y, small_table) for y in range(2, 200)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    pi = lambda n: sum(is_prime(k) for k in range(2, n + 1))
    for y in (72, 100, 150, 1000):
        assert phi_rough(x, y, small_table) == 1 + pi(x) - pi(y - 1)


def test_warlimont_at_u_two(table, omega):
    y = 101
    x = y * y
    expected = EXP_GAMMA * 0.5 * x * mertens_product(y, table)
    assert warlimont_estimate(x, y, omega, table) == pytest.approx(expected, rel=1e-12)


def test_warlimont_at_u_one(table, omega):
    x = 10**4
    expected = EXP_GAMMA * x * mertens_product(x, table)
    assert warlimont_estimate(x, x, omega, table) == pytest.approx(expected, rel=1e-12)


def test_warlimont_close_to_exact(table, omega):
    exact = phi_rough(10**6, 10, table)
    assert abs(warlimont_estimate(10**6, 10, omega, table) - exact) < 0.25 * exact
    assert warlimont_error_ratio(10**6, 10, omega, table) <= 10


def test_warlimont_ratio_bounded_without_growth(table, omega):
    ratios = [warlimont_error_ratio(x, 30, omega, table) for x in (10**3, 10**4, 10**5, 10**6)]
    assert all(0 <= r <= max(ratios) for r in ratios)
    assert ratios[-1] < ratios[0]


def test_warlimont_out_of_table(table):
    tiny = build_buchstab(3, 0.01)
    with pytest.raises(OutOfRangeError):
        warlimont_estimate(10**6, 2, tiny, table)


def test_loglog_deviation(table):
    assert loglog_deviation(10, table) == pytest.approx(0.34215803094252006, abs=1e-12)
    for n in (10**3, 10**4, 10**5, 10**6):
        assert 0.2 <= loglog_deviation(n, table) <= 0.32


def test_sqrt_window(table):
    ps = primes_in(1000, 10**6, table)
    assert sqrt_window_sum(10**6, table) == pytest.approx(sum(1 / p for p in ps), abs=1e-12)
    assert abs(sqrt_window_sum(10**6, table) - math.log(2)) < 0.15
