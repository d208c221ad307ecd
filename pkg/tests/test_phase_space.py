from fractions import Fraction
from math import factorial

import pytest

from galconf.exact_algebra import T, Poly, param, phase_p, phase_q, var
from galconf.model import ModelConfig
from galconf.phase_space import (SpanSolver, build_charges, canonical_bracket, express_in_span,
                                 infinitesimal_action, q_vec, structure_constants)

m = var(param("m"))


def test_canonical_pair():
    cfg = ModelConfig(3, 3)
    assert canonical_bracket(var(phase_q(0, 1)), var(phase_p(0, 1)), cfg) == Poly.const(1)
    assert canonical_bracket(var(phase_q(1, 2)), var(phase_p(1, 1)), cfg).is_zero()


def test_even_branch_top_coordinates_do_not_commute():
    cfg = ModelConfig(2, 2)
    a, b = q_vec(cfg, 1)
    assert canonical_bracket(a, b, cfg) == -var(param("m"), -1)


def test_schrodinger_central_charge():
    cfg = ModelConfig(1, 3)
    cs = build_charges(cfg)
    for a in cfg.comps:
        for b in cfg.comps:
            val = canonical_bracket(cs.c[(0, a)], cs.c[(1, b)], cfg)
            assert val == (-m if a == b else Poly())


@pytest.mark.parametrize("N", [1, 3, 5])
def test_central_extension_formula(N):
    cfg = ModelConfig(N, 3)
    cs = build_charges(cfg)
    for j in range(N + 1):
        for k in range(N + 1):
            expected = Poly()
            if j + k == N:
                expected = (-1) ** (((k - j + 1) // 2) % 2) * factorial(j) * factorial(k) * m
            assert canonical_bracket(cs.c[(j, 1)], cs.c[(k, 1)], cfg) == expected
            assert canonical_bracket(cs.c[(j, 1)], cs.c[(k, 2)], cfg).is_zero()


def test_dilation_hamiltonian_bracket():
    cfg = ModelConfig(1, 3)
    cs = build_charges(cfg)
    assert canonical_bracket(cs.d, cs.h, cfg) == cs.h


def test_structure_constant_rule():
    cfg = ModelConfig(3, 3)
    lin, cen = structure_constants(("h",), ("c", 2, 1), cfg)
    assert lin == {("c", 1, 1): Fraction(-2)} and cen == 0


def test_free_particle_action():
    cfg = ModelConfig(1, 3)
    cs = build_charges(cfg)
    q, p = var(phase_q(0, 1)), var(phase_p(0, 1))
    assert infinitesimal_action(cs.h, q, cfg) == -p * var(param("m"), -1)
    assert infinitesimal_action(cs.h, p, cfg).is_zero()


def test_span_solver():
    t = var(T)
    basis = [t, t + 1, t * t]
    coeffs = express_in_span(3 * t * t + 2, basis)
    assert sum((Fraction(a) * b for a, b in zip(coeffs, basis)), Poly()) == 3 * t * t + 2
    assert SpanSolver(basis[:2]).solve(t * t) is None
