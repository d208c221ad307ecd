from functools import lru_cache

import pytest
from hypothesis import strategies as st

from galconf import suites
from galconf.exact_algebra import T, Poly, jet, param
from galconf.model import ModelConfig


@lru_cache(maxsize=None)
def _report(N, d, suite):
    return suites.run(ModelConfig(N, d), suite)


@pytest.fixture(scope="session")
def suite_report():
    """Cached suites.run(cfg, suite) shared across test modules."""
    return lambda cfg, suite: _report(cfg.N, cfg.d, suite)


VARIABLES = [T, jet(0, 1), jet(1, 1), jet(2, 1), jet(0, 2), jet(3, 2)]
PARAMS = [param("m"), param("c")]

coefficients = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def monomials(draw):
    mono = {}
    for v in draw(st.lists(st.sampled_from(VARIABLES), max_size=3)):
        mono[v] = mono.get(v, 0) + 1
    for p in draw(st.lists(st.sampled_from(PARAMS), max_size=2)):
        mono[p] = mono.get(p, 0) + draw(st.sampled_from([-1, 1]))
    return tuple(sorted((v, e) for v, e in mono.items() if e))


@st.composite
def polys(draw, max_terms=4):
    terms = draw(st.lists(st.tuples(monomials(), coefficients), max_size=max_terms))
    out = Poly()
    for mono, coef in terms:
        out = out + Poly({mono: coef})
    return out

