from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from galconf.exact_algebra import T, Poly, jet, param, var
from galconf.model import ModelConfig
from galconf.noether import (D, InfSymmetry, LagrangianModel, NotASymmetry, NotATotalDerivative,
                             antiderivative, euler_lagrange, free_lagrangian, noether_charge,
                             on_shell_reduce, ostrogradski, standard_symmetries, symmetry_residual)

m = var(param("m"))


def q(n, a=1):
    return var(jet(n, a))


JETS = [jet(n, a) for n in range(3) for a in (1, 2)] + [T]


@st.composite
def jet_polys(draw):
    out = Poly()
    for _ in range(draw(st.integers(0, 4))):
        mono = draw(st.lists(st.sampled_from(JETS), max_size=3))
        term = Poly.const(draw(st.fractions(min_value=-4, max_value=4, max_denominator=3)))
        for v in mono:
            term = term * var(v)
        out = out + term
    return out


def test_euler_lagrange_examples():
    assert euler_lagrange(free_lagrangian(ModelConfig(1, 3)))[0] == -m * q(2)
    assert euler_lagrange(free_lagrangian(ModelConfig(3, 3)))[0] == m * q(4)
    assert euler_lagrange(free_lagrangian(ModelConfig(2, 2)))[0] == -m * q(3, 2)


def test_ostrogradski_n3():
    momenta, H = ostrogradski(free_lagrangian(ModelConfig(3, 3)))
    assert momenta[0][0] == -m * q(3)
    assert momenta[1][0] == m * q(2)
    expected = sum((-m * q(1, a) * q(3, a) + Fraction(1, 2) * m * q(2, a) ** 2 for a in (1, 2, 3)), Poly())
    assert H == expected


def test_ostrogradski_n1_is_kinetic_energy():
    cfg = ModelConfig(1, 3)
    Lm = free_lagrangian(cfg)
    _, H = ostrogradski(Lm)
    assert H == Lm.L


@given(jet_polys())
@settings(max_examples=40, deadline=None)
def test_euler_lagrange_kills_total_derivatives(P):
    Lm = LagrangianModel(D(P), 3, 2)
    assert all(e.is_zero() for e in euler_lagrange(Lm))


@given(jet_polys())
@settings(max_examples=40, deadline=None)
def test_antiderivative_round_trip(P):
    E = D(P)
    assert D(antiderivative(E)) == E


def test_antiderivative_rejects_non_derivative():
    with pytest.raises(NotATotalDerivative):
        antiderivative(q(1) ** 2)


def test_boost_needs_its_boundary_term():
    cfg = ModelConfig(1, 3)
    Lm = free_lagrangian(cfg)
    bare = InfSymmetry((var(T), Poly(), Poly()), Poly(), Poly())
    assert not symmetry_residual(Lm, bare).is_zero()
    with pytest.raises(NotASymmetry):
        noether_charge(Lm, bare)


@pytest.mark.parametrize("N,d", [(1, 3), (3, 3), (2, 2)])
def test_standard_symmetries_are_exact(N, d):
    cfg = ModelConfig(N, d)
    Lm = free_lagrangian(cfg)
    for label, s in standard_symmetries(cfg):
        assert symmetry_residual(Lm, s).is_zero(), label
        charge = noether_charge(Lm, s)
        assert on_shell_reduce(D(charge), cfg).is_zero(), label


def test_on_shell_reduce():
    cfg = ModelConfig(3, 3)
    assert on_shell_reduce(q(4) + q(3), cfg) == q(3)
    assert on_shell_reduce(q(5) * q(0), cfg).is_zero()


def test_time_dependent_generator_validated():
    with pytest.raises(ValueError):
        InfSymmetry((q(1),), Poly(), Poly())
