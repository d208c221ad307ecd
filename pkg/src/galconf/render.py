"""Human-readable rendering of charges: q' q'' for jets, q0 p0 for phase
coordinates, and vector notation when all components are relabelings."""
from __future__ import annotations

from fractions import Fraction

from .exact_algebra import JET, PARAM, PHASE_P, PHASE_Q, T, Poly, VarId, as_poly

_COMPONENT_KINDS = (JET, PHASE_Q, PHASE_P)


def var_name(v: VarId, vector: bool = False) -> str:
    if v == T:
        return "t"
    if v.kind == JET:
        base = "q" + "'" * v.level if v.level <= 3 else f"q^({v.level})"
    elif v.kind == PHASE_Q:
        base = f"q{v.level}"
    elif v.kind == PHASE_P:
        base = f"p{v.level}"
    else:
        return v.text()
    return base if vector else f"{base}_{v.comp}"


def _factor(v, e, vector):
    name = var_name(v, vector)
    return name if e == 1 else f"{name}^{e}"


def _term_key(mono):
    powers = dict(mono)
    rest = tuple((v, e) for v, e in mono if v != T and v.kind != PARAM)
    return (-powers.get(T, 0), rest)


def _monomial_text(mono, coef: Fraction, vector: bool, dot: bool) -> str:
    params = [_factor(v, e, vector) for v, e in mono if v.kind == PARAM]
    time = [_factor(v, e, vector) for v, e in mono if v == T]
    others = [(v, e) for v, e in mono if v != T and v.kind != PARAM]
    if dot and len(others) == 2 and all(e == 1 for _, e in others):
        rest = [f"{var_name(others[0][0], True)}.{var_name(others[1][0], True)}"]
    else:
        rest = [_factor(v, e, vector) for v, e in others]
    factors = params + time + rest
    mag = abs(coef)
    if not factors:
        return str(mag)
    if mag != 1:
        factors.insert(0, str(mag))
    return "*".join(factors)


def render_poly(p, vector: bool = False, dot: bool = False) -> str:
    p = as_poly(p)
    if p.is_zero():
        return "0"
    parts = []
    for mono, coef in sorted(p.items(), key=lambda mc: _term_key(mc[0])):
        text = _monomial_text(mono, coef, vector, dot)
        if not parts:
            parts.append(("-" if coef < 0 else "") + text)
        else:
            parts.append(("- " if coef < 0 else "+ ") + text)
    return " ".join(parts)


def relabel(p, a: int) -> Poly:
    """Send every component-1 coordinate to component a."""
    out = {}
    for mono, coef in as_poly(p).items():
        new = tuple(sorted(((v._replace(comp=a) if v.kind in _COMPONENT_KINDS and v.comp == 1 else v), e)
                           for v, e in mono))
        out[new] = coef
    return Poly(out)


def _only_first(p) -> bool:
    return all(v.comp == 1 for v in as_poly(p).variables() if v.kind in _COMPONENT_KINDS)


def render_vector(components) -> str | None:
    """Vector form of a component list, or None when it is not a relabeling."""
    first = as_poly(components[0])
    if not _only_first(first):
        return None
    if all(relabel(first, a) == as_poly(c) for a, c in enumerate(components, start=1)):
        return render_poly(first, vector=True)
    return None


def render_scalar(p, d: int) -> str:
    """Write sum_a T(component a) with dot products where that is exact."""
    p = as_poly(p)
    first = Poly({m: c for m, c in p.items()
                  if all(v.comp == 1 for v, _ in m if v.kind in _COMPONENT_KINDS)})
    degrees_ok = all(sum(e for v, e in m if v.kind in _COMPONENT_KINDS) == 2 for m, _ in first.items())
    if first and degrees_ok:
        total = sum((relabel(first, a) for a in range(1, d + 1)), Poly())
        if total == p:
            return render_poly(first, vector=True, dot=True)
    return render_poly(p)


def render_named(name: str, components) -> list[str]:
    """Lines ``name = ...``, collapsing to vector notation when possible."""
    vec = render_vector(components)
    if vec is not None:
        return [f"{name} = {vec}"]
    return [f"{name}^{a} = {render_poly(c)}" for a, c in enumerate(components, start=1)]
