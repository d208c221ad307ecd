"""Poisson structure, conserved charges and the centrally extended algebra
on phase space."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial

from .exact_algebra import (JET, T, KindError, Poly, as_poly, invert, param, phase_p,
                            phase_q, var)
from .model import ModelConfig, levi_civita
from .report import Report


def _dot(u, v) -> Poly:
    out = Poly()
    for a, b in zip(u, v):
        out = out + a * b
    return out


def _cross(u, v, d: int) -> list[Poly]:
    if d == 2:
        return [u[0] * v[1] - u[1] * v[0]]
    return [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]


def q_vec(cfg: ModelConfig, k: int) -> list[Poly]:
    return [var(phase_q(k, a)) for a in cfg.comps]


def p_vec(cfg: ModelConfig, k: int) -> list[Poly]:
    """Momentum at level k; in the even branch the top momentum is
    (m/2) eps^{ba} q^b of the self-conjugate top coordinate."""
    if not cfg.odd and k == cfg.top:
        half_m = cfg.mass * Fraction(1, 2)
        return [half_m * sum((levi_civita(b, a) * var(phase_q(k, b)) for b in cfg.comps), Poly())
                for a in cfg.comps]
    return [var(phase_p(k, a)) for a in cfg.comps]


def canonical_levels(cfg: ModelConfig) -> range:
    return range(cfg.top + 1) if cfg.odd else range(cfg.top)


def canonical_bracket(A, B, cfg: ModelConfig) -> Poly:
    """{A, B} = sum dA/dq dB/dp - dA/dp dB/dq, plus the constrained top-level
    term {q_top^a, q_top^b} = eps^{ba}/m in the even branch."""
    A, B = as_poly(A), as_poly(B)
    if JET in A.kinds() or JET in B.kinds():
        raise KindError("Poisson bracket of a jet-space expression")
    out = Poly()
    for k in canonical_levels(cfg):
        for a in cfg.comps:
            qv, pv = phase_q(k, a), phase_p(k, a)
            dAq, dAp = A.diff(qv), A.diff(pv)
            dBq, dBp = B.diff(qv), B.diff(pv)
            if dAq and dBp:
                out = out + dAq * dBp
            if dAp and dBq:
                out = out - dAp * dBq
    if not cfg.odd:
        inv_m = invert(cfg.mass)
        top = cfg.top
        for a in cfg.comps:
            dA = A.diff(phase_q(top, a))
            if not dA:
                continue
            for b in cfg.comps:
                eps = levi_civita(b, a)
                if eps:
                    dB = B.diff(phase_q(top, b))
                    if dB:
                        out = out + dA * dB * inv_m * eps
    return out


@dataclass(frozen=True)
class ChargeSet:
    h: Poly
    d: Poly
    k: Poly
    j: tuple  # 3 components (d=3) or one scalar (d=2)
    c: dict   # (level, component) -> Poly
    h_t: Poly  # time-independent parts h(t), d(t), k(t)
    d_t: Poly
    k_t: Poly

    def named(self) -> list[tuple[tuple, Poly]]:
        """Charges keyed by generator label: ('h',), ('d',), ('k',), ('j', a), ('c', level, a)."""
        out = [(("h",), self.h), (("d",), self.d), (("k",), self.k)]
        if len(self.j) == 1:
            out.append((("j", 3), self.j[0]))
        else:
            out += [(("j", a + 1), ja) for a, ja in enumerate(self.j)]
        out += [(("c",) + key, self.c[key]) for key in sorted(self.c)]
        return out

    def as_dict(self) -> dict:
        return dict(self.named())


def label_text(label: tuple) -> str:
    if label[0] == "c":
        return f"c{label[1]}^{label[2]}"
    if label[0] == "j":
        return f"j^{label[1]}"
    return label[0]


def build_charges(cfg: ModelConfig) -> ChargeSet:
    N, L, m = cfg.N, cfg.top, cfg.mass
    t = var(T)
    q = [q_vec(cfg, k) for k in range(L + 1)]
    p = [p_vec(cfg, k) for k in range(L + 1)]
    half = Fraction(1, 2)
    if cfg.odd:
        h_t = _dot(p[L], p[L]) * invert(m) * half
        for k in range(1, L + 1):
            h_t = h_t + _dot(q[k], p[k - 1])
        d_t = sum((_dot(q[k], p[k]) * (Fraction(N, 2) - k) for k in range(L + 1)), Poly())
        k_t = m * half * Fraction(N + 1, 2) ** 2 * _dot(q[L], q[L])
        for k in range(L):
            k_t = k_t - _dot(q[k], p[k + 1]) * ((N - k) * (k + 1))
    else:
        h_t = sum((_dot(p[k], q[k + 1]) for k in range(L)), Poly())
        d_t = sum((_dot(p[k], q[k]) * (Fraction(N, 2) - k) for k in range(L)), Poly())
        k_t = Poly()
        for k in range(1, L):
            k_t = k_t - _dot(p[k], q[k - 1]) * ((N - k + 1) * k)
        k_t = k_t - _dot(q[L - 1], p[L]) * (N * (Fraction(N, 2) + 1))
    j = [Poly() for _ in range(1 if cfg.d == 2 else 3)]
    for k in range(L + 1):
        j = [a + b for a, b in zip(j, _cross(q[k], p[k], cfg.d))]

    h = h_t
    d = d_t - t * h_t
    kk = k_t - 2 * t * d_t + t ** 2 * h_t

    c = {}
    for jl in range(N + 1):
        for ai, a in enumerate(cfg.comps):
            if cfg.odd:
                sign = -1 if (jl - L) % 2 else 1
                p_top = L
                q_start = L + 1
            else:
                sign = -1 if (jl + L + 1) % 2 else 1
                p_top = L - 1
                q_start = L
            val = Poly()
            for k in range(min(jl, p_top) + 1):
                val = val + t ** (jl - k) * p[k][ai] * (sign * Fraction(factorial(jl), factorial(jl - k)))
            for k in range(q_start, jl + 1):
                coef = (-1 if (jl - k) % 2 else 1) * Fraction(factorial(jl), factorial(jl - k))
                if cfg.odd:
                    qv = q[N - k][ai]
                else:
                    qv = sum((levi_civita(a, b) * q[N - k][bi] for bi, b in enumerate(cfg.comps)), Poly())
                val = val + m * t ** (jl - k) * qv * coef
            c[(jl, a)] = val
    return ChargeSet(h, d, kk, tuple(j), c, h_t, d_t, k_t)


def infinitesimal_action(charge, z, cfg: ModelConfig) -> Poly:
    """delta z = {G, z} for a parameter-weighted generator G."""
    return canonical_bracket(charge, var(z) if not isinstance(z, Poly) else z, cfg)


def boost_generator(cfg: ModelConfig, charges: ChargeSet | None = None) -> Poly:
    """sum_j x_j . c_j with symbolic boost parameters x{j}_{a}."""
    charges = charges or build_charges(cfg)
    return sum((var(param("x", j, a)) * val for (j, a), val in charges.c.items()), Poly())


def rotation_generator(cfg: ModelConfig, charges: ChargeSet | None = None) -> Poly:
    """omega . j with symbolic angles omega_{a} (a single omega_3 in the plane)."""
    charges = charges or build_charges(cfg)
    if cfg.d == 2:
        return var(param("omega", 0, 3)) * charges.j[0]
    return sum((var(param("omega", 0, a + 1)) * ja for a, ja in enumerate(charges.j)), Poly())


# ---------------------------------------------------------------------------
# Structure constants, classical image of [A, B] = iC as {a, b} = c.

def structure_constants(x: tuple, y: tuple, cfg: ModelConfig) -> tuple[dict, Fraction]:
    """Expected {x, y} as ({label: coefficient}, coefficient of m)."""
    rule = _rule(x, y, cfg)
    if rule is not None:
        return rule
    rule = _rule(y, x, cfg)
    if rule is not None:
        lin, cen = rule
        return {k: -v for k, v in lin.items()}, -cen
    return {}, Fraction(0)


def _rule(x, y, cfg):
    N = cfg.N
    zero = Fraction(0)
    if x == ("d",) and y == ("h",):
        return {("h",): Fraction(1)}, zero
    if x == ("d",) and y == ("k",):
        return {("k",): Fraction(-1)}, zero
    if x == ("k",) and y == ("h",):
        return {("d",): Fraction(2)}, zero
    if x[0] == "j" and y[0] == "j":
        if cfg.d == 2:
            return {}, zero
        out = {}
        for c in cfg.comps:
            e = levi_civita(x[1], y[1], c)
            if e:
                out[("j", c)] = Fraction(e)
        return out, zero
    if x[0] == "j" and y[0] == "c":
        _, lev, b = y
        out = {}
        for c in cfg.comps:
            e = levi_civita(b, c) if cfg.d == 2 else levi_civita(x[1], b, c)
            if e:
                out[("c", lev, c)] = Fraction(e)
        return out, zero
    if y[0] == "c" and x[0] in ("h", "d", "k"):
        _, j, a = y
        if x[0] == "h":
            return ({("c", j - 1, a): Fraction(-j)} if j > 0 else {}), zero
        if x[0] == "d":
            return {("c", j, a): Fraction(N, 2) - j}, zero
        return ({("c", j + 1, a): Fraction(N - j)} if j < N else {}), zero
    if x[0] == "c" and y[0] == "c":
        _, j, a = x
        _, k, b = y
        if j + k != N:
            return {}, zero
        if cfg.odd:
            if a != b:
                return {}, zero
            sign = -1 if ((k - j + 1) // 2) % 2 else 1
            return {}, Fraction(sign * factorial(j) * factorial(k))
        sign = -1 if ((j - k) // 2) % 2 else 1
        return {}, Fraction(-levi_civita(a, b) * sign * factorial(j) * factorial(k))
    return None


def _evaluate(lin: dict, cen: Fraction, charges: dict, cfg: ModelConfig) -> Poly:
    out = cfg.mass * cen
    for label, coef in lin.items():
        out = out + charges[label] * coef
    return out


def bracket_table(cfg: ModelConfig, charges: ChargeSet | None = None) -> dict:
    charges = charges or build_charges(cfg)
    named = charges.named()
    return {(x, y): canonical_bracket(a, b, cfg)
            for (x, a), (y, b) in combinations(named, 2)}


def verify_structure_constants(cfg: ModelConfig, table: dict | None = None) -> Report:
    charges = build_charges(cfg)
    table = table if table is not None else bracket_table(cfg, charges)
    cd = charges.as_dict()
    rep = Report(cfg.as_dict())
    ref = "centrally extended algebra, classical image {a,b}=c of [A,B]=iC"
    for (x, y), value in table.items():
        lin, cen = structure_constants(x, y, cfg)
        expected = _evaluate(lin, cen, cd, cfg)
        rep.add_identity(f"algebra/{label_text(x)},{label_text(y)}",
                         f"{{{label_text(x)}, {label_text(y)}}} matches structure constants",
                         ref, value - expected)
    return rep


def verify_conservation(cfg: ModelConfig) -> Report:
    charges = build_charges(cfg)
    rep = Report(cfg.as_dict())
    for label, C in charges.named():
        residual = C.diff(T) + canonical_bracket(C, charges.h, cfg)
        rep.add_identity(f"conservation/{label_text(label)}",
                         f"dC/dt + {{C, h}} = 0 for C = {label_text(label)}",
                         "phase-space Noether charges", residual)
    return rep


class SpanSolver:
    """Sparse echelon form of a list of polynomials, for repeated exact
    membership and coordinate queries."""

    def __init__(self, basis: list[Poly]):
        self.n = len(basis)
        self.rows: dict = {}  # pivot monomial -> (vector, combination)
        for i, b in enumerate(basis):
            vec, comb = self._reduce(dict(b.terms), {i: Fraction(1)})
            if vec:
                pivot = min(vec)
                scale = vec[pivot]
                self.rows[pivot] = ({m: c / scale for m, c in vec.items()},
                                    {j: c / scale for j, c in comb.items()})

    def _reduce(self, vec: dict, comb: dict):
        vec, comb = dict(vec), dict(comb)
        while True:
            hits = [m for m in vec if m in self.rows]
            if not hits:
                return vec, comb
            pivot = min(hits)
            f = vec[pivot]
            rv, rc = self.rows[pivot]
            for m, c in rv.items():
                v = vec.get(m, 0) - f * c
                if v:
                    vec[m] = v
                else:
                    vec.pop(m, None)
            for j, c in rc.items():
                v = comb.get(j, 0) - f * c
                if v:
                    comb[j] = v
                else:
                    comb.pop(j, None)

    def solve(self, target: Poly) -> list[Fraction] | None:
        vec, comb = self._reduce(dict(target.terms), {})
        if vec:
            return None
        return [-comb.get(j, Fraction(0)) for j in range(self.n)]


def express_in_span(target: Poly, basis: list[Poly]) -> list[Fraction] | None:
    """Exact rational coefficients x with sum x_i basis_i == target, or None."""
    return SpanSolver(basis).solve(target)


def verify_closure(cfg: ModelConfig, table: dict | None = None) -> Report:
    """Every bracket lies in the rational span of the charges and the constant m."""
    charges = build_charges(cfg)
    table = table if table is not None else bracket_table(cfg, charges)
    basis = [c for _, c in charges.named()] + [cfg.mass]
    rep = Report(cfg.as_dict())
    solver = SpanSolver(basis)
    outside = [(x, y) for (x, y), v in table.items() if solver.solve(v) is None]
    rep.add("algebra/closure", "all pairwise brackets lie in span(charges, m)",
            "centrally extended algebra", not outside,
            "; ".join(f"{label_text(x)},{label_text(y)}" for x, y in outside) or None)
    return rep


def verify_actions(cfg: ModelConfig) -> Report:
    """Bracket-computed variations against their closed forms."""
    from . import reference_forms as ref

    charges = build_charges(cfg)
    gens = {
        "c": boost_generator(cfg, charges),
        "h": var(ref.TAU) * charges.h,
        "d": var(ref.LAM) * charges.d,
        "k": var(ref.C) * charges.k,
    }
    rep = Report(cfg.as_dict())
    if cfg.odd:
        closed = {"c": ref.boost_action, "h": ref.time_shift_action,
                  "d": ref.dilation_action, "k": ref.conformal_action}
        for name, G in gens.items():
            for n in range(cfg.top + 1):
                for a in cfg.comps:
                    dq, dp = closed[name](cfg, n, a)
                    rep.add_identity(f"action/{name}/q{n}^{a}", f"delta q_{n}^{a} under {name}",
                                     "infinitesimal canonical actions",
                                     infinitesimal_action(G, phase_q(n, a), cfg) - dq)
                    rep.add_identity(f"action/{name}/p{n}^{a}", f"delta p_{n}^{a} under {name}",
                                     "infinitesimal canonical actions",
                                     infinitesimal_action(G, phase_p(n, a), cfg) - dp)
    else:
        for a in cfg.comps:
            closed = ref.even_q0_actions(cfg, a)
            for name, G in gens.items():
                rep.add_identity(f"action/{name}/q0^{a}", f"delta q_0^{a} under {name}",
                                 "infinitesimal actions on q_0, planar case",
                                 infinitesimal_action(G, phase_q(0, a), cfg) - closed[name])
    return rep


def verify_schrodinger(cfg: ModelConfig) -> Report:
    """At N=1 the charges are the Schroedinger-group charges."""
    rep = Report(cfg.as_dict())
    if cfg.N != 1:
        return rep
    cs = build_charges(cfg)
    q, p, t, m = q_vec(cfg, 0), p_vec(cfg, 0), var(T), cfg.mass
    h = _dot(p, p) * invert(m) * Fraction(1, 2)
    qp = _dot(q, p) * Fraction(1, 2)
    expected = {
        ("h",): h,
        ("d",): -t * h + qp,
        ("k",): t ** 2 * h - 2 * t * qp + m * Fraction(1, 2) * _dot(q, q),
    }
    for a, ja in enumerate(_cross(q, p, cfg.d), start=1):
        expected[("j", a)] = ja
    for a in cfg.comps:
        expected[("c", 0, a)] = p[a - 1]
        expected[("c", 1, a)] = -t * p[a - 1] + m * q[a - 1]
    charges = cs.as_dict()
    for label, value in expected.items():
        rep.add_identity(f"schrodinger/{label_text(label)}",
                         f"{label_text(label)} is the Schroedinger-group charge",
                         "first-order member of the family", charges[label] - value)
    return rep
