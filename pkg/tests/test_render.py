from galconf.exact_algebra import param, var
from galconf.model import ModelConfig
from galconf.noether import free_lagrangian, ostrogradski
from galconf.phase_space import build_charges
from galconf.render import render_named, render_poly, render_scalar


def test_schrodinger_charges_render():
    cfg = ModelConfig(1, 3)
    cs = build_charges(cfg)
    assert render_scalar(cs.h, cfg.d) == "1/2*m^-1*p0^2"
    assert render_scalar(cs.k, cfg.d) == "1/2*m^-1*t^2*p0^2 - t*q0.p0 + 1/2*m*q0^2"
    assert render_named("c_1", [cs.c[(1, a)] for a in cfg.comps]) == ["c_1 = -t*p0 + m*q0"]


def test_momentum_renders_with_primes():
    momenta, _ = ostrogradski(free_lagrangian(ModelConfig(3, 3)))
    assert render_named("p0", momenta[0]) == ["p0 = -m*q'''"]


def test_component_fallback():
    cfg = ModelConfig(2, 2)
    momenta, _ = ostrogradski(free_lagrangian(cfg))
    lines = render_named("p0", momenta[0])
    assert lines == ["p0^1 = m*q''_2", "p0^2 = -m*q''_1"]
    assert render_poly(var(param("m")) * 0) == "0"
