import json
from fractions import Fraction

import pytest

from galconf.exact_algebra import equal, factor_power, jet, param, total_time_derivative, var
from galconf.group_action import C, Conformal
from galconf.model import ModelConfig
from galconf.quasi_invariance import (CoeffTable, boundary_function, falling_coefficients,
                                      identity_check, recurrence_constructive, recurrence_direct,
                                      transformed_lagrangian_change, trinomial,
                                      verify_total_derivative)

F = Fraction


def test_n1_table_and_boundary_function():
    cfg = ModelConfig(1, 3)
    assert recurrence_direct(cfg)[(0, 0)] == 1
    c, m = var(C), var(param("m"))
    f = boundary_function(cfg, Conformal(c))
    expected = sum((F(1, 2) * m * c * var(jet(0, a)) ** 2 for a in cfg.comps), var(C) * 0) * factor_power(-c, -1)
    assert equal(f, expected)
    assert equal(total_time_derivative(f), transformed_lagrangian_change(cfg, Conformal(c)))


def test_n3_table():
    tab = recurrence_direct(ModelConfig(3, 3))
    assert tab.as_matrix() == [["3", "3/2"], ["3/2", "1"]]


def test_n5_table():
    tab = recurrence_direct(ModelConfig(5, 3))
    assert tab.as_matrix() == [["80", "40", "20/3"], ["40", "64/3", "4"], ["20/3", "4", "1"]]


@pytest.mark.parametrize("N", [1, 3, 5, 7, 9, 11])
def test_direct_equals_constructive(N):
    cfg = ModelConfig(N, 3)
    direct = recurrence_direct(cfg)
    assert direct == recurrence_constructive(cfg)
    assert direct.is_symmetric()


def test_falling_coefficients_reproduce_product():
    N, R = 7, 4
    beta = falling_coefficients(N)
    for l in range(R + 1):
        prod = 1
        for k in range(R + 1, N + 1):
            prod *= k - l
        falling = [1]
        for n in range(1, len(beta)):
            falling.append(falling[-1] * (l - n + 1))
        assert sum(b * f for b, f in zip(beta, falling)) == prod


def test_trinomial_identity():
    assert trinomial(2, 1, 1) + trinomial(2, 0, 1) + trinomial(2, 1, 0) == 6 == trinomial(3, 1, 1)
    assert identity_check(12) == []


def test_table_serialises_as_strings():
    text = json.dumps(recurrence_direct(ModelConfig(3, 3)).as_matrix())
    assert text == '[["3", "3/2"], ["3/2", "1"]]'
    assert CoeffTable(3)[(5, 5)] == 0


@pytest.mark.parametrize("N,d", [(3, 3), (2, 2)])
def test_symbolic_conformal_total_derivative(N, d):
    assert verify_total_derivative(ModelConfig(N, d), Conformal(var(C))).ok
