"""Higher-order Lagrangian machinery: Euler-Lagrange operator, Ostrogradski
momenta, the symmetry condition and the Noether charge, specialized to the
free Lagrangians of the model."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .exact_algebra import (JET, PARAM, T, AlgebraError, Expr, Frac, Poly, UnsupportedOperation,
                            as_poly, invert, is_zero, jet, phase_p, phase_q, substitute,
                            total_time_derivative, var)
from .model import ModelConfig, levi_civita
from .report import Report


class NotASymmetry(AlgebraError):
    """The symmetry condition does not hold; no conserved charge is attached."""

    def __init__(self, residual):
        self.residual = residual
        super().__init__(f"nonzero symmetry residual: {residual.to_text()}")


class NotATotalDerivative(AlgebraError):
    pass


@dataclass(frozen=True)
class LagrangianModel:
    L: Poly
    R: int
    d: int

    def __post_init__(self):
        if self.R < 1:
            raise ValueError("the Lagrangian must contain at least first derivatives")
        if not isinstance(self.L, Poly):
            raise TypeError("the Lagrangian must be polynomial")

    @property
    def comps(self) -> range:
        return range(1, self.d + 1)


@dataclass(frozen=True)
class InfSymmetry:
    """q' = q + eps chi(q, t), t' = t + eps g(t), L dt'/dt = L + eps d(delta_f)/dt."""
    chi: tuple
    g: Poly = field(default_factory=Poly)
    delta_f: Poly = field(default_factory=Poly)

    def __post_init__(self):
        for c in self.chi:
            if any(v.kind == JET and v.level > 0 for v in as_poly(c).variables()):
                raise ValueError("chi may depend on q only through order-0 jets")
        if any(v != T and v.kind != PARAM for v in as_poly(self.g).variables()):
            raise ValueError("g must depend on t only")


def D(p, n: int = 1) -> Expr:
    for _ in range(n):
        p = total_time_derivative(p)
    return p


def _jets(n: int, comps) -> list[Poly]:
    return [var(jet(n, a)) for a in comps]


def _dot(u, v) -> Poly:
    return sum((x * y for x, y in zip(u, v)), Poly())


def free_lagrangian(cfg: ModelConfig) -> LagrangianModel:
    """(m/2)(q^(R))^2 for odd N; (m/2) eps_ab q^(N/2)a q^(N/2+1)b for even N."""
    m = cfg.mass * Fraction(1, 2)
    if cfg.odd:
        R = cfg.order
        q = _jets(R, cfg.comps)
        return LagrangianModel(m * _dot(q, q), R, cfg.d)
    L = cfg.top
    u, w = _jets(L, cfg.comps), _jets(L + 1, cfg.comps)
    return LagrangianModel(m * (u[0] * w[1] - u[1] * w[0]), L + 1, cfg.d)


def _dL(Lm: LagrangianModel, n: int) -> list[Poly]:
    return [Lm.L.diff(jet(n, a)) for a in Lm.comps]


def euler_lagrange(Lm: LagrangianModel) -> list[Poly]:
    """sum_k (-d/dt)^k dL/dq^(k), one entry per component."""
    out = [Poly() for _ in Lm.comps]
    for k in range(Lm.R + 1):
        sign = -1 if k % 2 else 1
        out = [o + sign * D(x, k) for o, x in zip(out, _dL(Lm, k))]
    return out


def ostrogradski(Lm: LagrangianModel) -> tuple[list[list[Poly]], Poly]:
    """Momenta p_n, n = 0..R-1, and the Hamiltonian sum_l p_l q^(l+1) - L, in jets."""
    momenta = []
    for n in range(Lm.R):
        p = [Poly() for _ in Lm.comps]
        for j in range(Lm.R - n):
            sign = -1 if j % 2 else 1
            p = [x + sign * D(y, j) for x, y in zip(p, _dL(Lm, n + j + 1))]
        momenta.append(p)
    H = sum((_dot(p, _jets(l + 1, Lm.comps)) for l, p in enumerate(momenta)), Poly()) - Lm.L
    return momenta, H


def _variation(Lm: LagrangianModel, s: InfSymmetry, n: int) -> list[Poly]:
    """First-order variation of q^(n): chi^(n) - sum_{k<n} d^k/dt^k (g' q^(n-k))."""
    gdot = as_poly(s.g).diff(T)
    out = [D(c, n) for c in s.chi]
    for k in range(n):
        out = [o - D(gdot * q, k) for o, q in zip(out, _jets(n - k, Lm.comps))]
    return out


def symmetry_residual(Lm: LagrangianModel, s: InfSymmetry) -> Poly:
    """O(eps) part of  L(q', dq'/dt', ...) dt'/dt - L - eps d(delta_f)/dt, divided by eps."""
    gdot = as_poly(s.g).diff(T)
    out = gdot * Lm.L + as_poly(s.g) * Lm.L.diff(T) - D(s.delta_f)
    for n in range(Lm.R + 1):
        out = out + _dot(_dL(Lm, n), _variation(Lm, s, n))
    return out


def _boundary_sum(Lm: LagrangianModel, s: InfSymmetry, literal: bool) -> Poly:
    """Triple sum over n, k, l.  The default reads the l-th factor as
    (-d/dt)^l; ``literal`` reads it as -(d/dt)^l."""
    gdot = as_poly(s.g).diff(T)
    out = Poly()
    for n in range(2, Lm.R + 1):
        P = _dL(Lm, n)
        for k in range(1, n):
            left = [D(gdot * q, 0) for q in _jets(n - k, Lm.comps)]
            for l in range(k):
                sign = -1 if literal else (-1 if l % 2 else 1)
                lhs = [D(x, k - l - 1) for x in left]
                out = out + sign * _dot(lhs, [D(p, l) for p in P])
    return out


def noether_charge(Lm: LagrangianModel, s: InfSymmetry, literal: bool = False) -> Poly:
    """C = H g - sum_k p_k chi^(k) + (boundary sum) + delta_f."""
    residual = symmetry_residual(Lm, s)
    if not residual.is_zero():
        raise NotASymmetry(residual)
    momenta, H = ostrogradski(Lm)
    C = H * as_poly(s.g) + _boundary_sum(Lm, s, literal) + as_poly(s.delta_f)
    for k, p in enumerate(momenta):
        C = C - _dot(p, [D(c, k) for c in s.chi])
    return C


def on_shell_reduce(p, cfg: ModelConfig) -> Expr:
    """Set q^(n) = 0 for n > N."""
    p = as_poly(p)
    zero = {v: 0 for v in p.variables() if v.kind == JET and v.level > cfg.N}
    return substitute(p, zero) if zero else p


def antiderivative(E: Expr) -> Expr:
    """F with dF/dt = E, no constant term; raises NotATotalDerivative.

    Peels off the highest jet order M: E must be affine in q^(M) with a
    closed coefficient form in q^(M-1), which the radial homotopy integrates.
    The jet-free remainder is integrated in t."""
    F: Expr = Poly()
    last = None
    while not is_zero(E):
        num = E.num if isinstance(E, Frac) else E
        jets = [v for v in num.variables() if v.kind == JET]
        if not jets:
            if isinstance(E, Frac):
                raise UnsupportedOperation("time integration of a rational function")
            step = Poly({_with_t(mono, 1): coef / (dict(mono).get(T, 0) + 1)
                         for mono, coef in E.items()})
            return F + step
        M = max(v.level for v in jets)
        if M == 0 or (last is not None and M >= last):
            raise NotATotalDerivative(f"not a total time derivative: {to_text_short(E)}")
        last = M
        top = {v for v in jets if v.level == M}
        terms: dict = {}
        for mono, coef in num.items():
            powers = dict(mono)
            order = sum(powers.get(v, 0) for v in top)
            if order == 0:
                continue
            if order > 1:
                raise NotATotalDerivative("not affine in the highest derivative")
            (hv,) = [v for v in top if powers.get(v)]
            lv = jet(M - 1, hv.comp)
            deg = sum(e for v, e in mono if v.kind == JET and v.level == M - 1)
            new = dict(powers)
            del new[hv]
            new[lv] = new.get(lv, 0) + 1
            key = tuple(sorted(new.items()))
            terms[key] = terms.get(key, 0) + Fraction(coef) / (deg + 1)
        piece = Poly(terms)
        if isinstance(E, Frac):
            piece = Frac._make(piece, dict(E.den))
        F = F + piece
        E = E - total_time_derivative(piece)
    return F


def _with_t(mono, k):
    powers = dict(mono)
    powers[T] = powers.get(T, 0) + k
    return tuple(sorted(powers.items()))


def to_text_short(E, limit: int = 200) -> str:
    text = E.to_text()
    return text if len(text) <= limit else text[:limit] + " ..."


# ---------------------------------------------------------------------------
# The free model

def _unit(a: int, comps) -> list[Poly]:
    return [Poly.const(1) if b == a else Poly() for b in comps]


def boost_delta_f(cfg: ModelConfig, k: int, a: int) -> Poly:
    """Boundary term of the level-k boost along axis a (odd branch closed form)."""
    N, R, t, m = cfg.N, cfg.order, var(T), cfg.mass
    return sum((m * (-t) ** (k - n) * Fraction(factorial(k), factorial(k - n)) * var(jet(N - n, a))
                for n in range(R, k + 1)), Poly())


def conformal_delta_f(cfg: ModelConfig) -> Poly:
    q = _jets(cfg.top, cfg.comps)
    return cfg.mass * Fraction(1, 2) * Fraction(cfg.N + 1, 2) ** 2 * _dot(q, q)


def _solve_delta_f(Lm: LagrangianModel, chi, g) -> Poly:
    """delta_f making the symmetry condition hold, by integrating the O(eps) change of L."""
    return antiderivative(symmetry_residual(Lm, InfSymmetry(tuple(chi), g)))


def rotation_chi(cfg: ModelConfig, axis: int) -> list[Poly]:
    """chi = omega x q with omega the unit vector along ``axis`` (axis 3 in the plane)."""
    q = _jets(0, cfg.comps)
    out = []
    for c in cfg.comps:
        coef = Poly()
        for b in cfg.comps:
            e = levi_civita(axis, b, c) if cfg.d == 3 else levi_civita(b, c)
            if e:
                coef = coef + e * q[b - 1]
        out.append(coef)
    return out


def standard_symmetries(cfg: ModelConfig) -> list[tuple[tuple, InfSymmetry]]:
    """(generator label, symmetry) for boosts at every level and axis, time
    shift, dilation, conformal transformation and rotations."""
    Lm = free_lagrangian(cfg)
    N, t = cfg.N, var(T)
    q = _jets(0, cfg.comps)
    out = []
    for k in range(N + 1):
        for a in cfg.comps:
            chi = [cfg.boost_sign(k) * t ** k * e for e in _unit(a, cfg.comps)]
            df = boost_delta_f(cfg, k, a) if cfg.odd else _solve_delta_f(Lm, chi, Poly())
            out.append((("c", k, a), InfSymmetry(tuple(chi), Poly(), df)))
    out.append((("h",), InfSymmetry(tuple(Poly() for _ in q), Poly.const(1))))
    out.append((("d",), InfSymmetry(tuple(-Fraction(N, 2) * x for x in q), -t)))
    chi_k = [N * t * x for x in q]
    df = conformal_delta_f(cfg) if cfg.odd else _solve_delta_f(Lm, chi_k, t ** 2)
    out.append((("k",), InfSymmetry(tuple(chi_k), t ** 2, df)))
    axes = [3] if cfg.d == 2 else list(cfg.comps)
    for axis in axes:
        out.append((("j", axis), InfSymmetry(tuple(rotation_chi(cfg, axis)))))
    return out


# Lagrangian charge = PHASE_SIGN[label] * (phase-space charge with momenta in jets)
PHASE_SIGN = {"h": 1, "d": 1, "k": 1, "c": 1, "j": -1}


def phase_to_jets(cfg: ModelConfig) -> dict:
    """q_k -> q^(k), p_k -> Ostrogradski momentum of the free Lagrangian."""
    momenta, _ = ostrogradski(free_lagrangian(cfg))
    out = {}
    for k in range(cfg.top + 1):
        for a in cfg.comps:
            out[phase_q(k, a)] = var(jet(k, a))
            out[phase_p(k, a)] = momenta[k][a - 1]
    return out


def jets_to_phase(cfg: ModelConfig) -> dict:
    """Inverse substitution on the solution space: jets of order <= top become
    q_k, higher jets are solved from the momenta."""
    m_inv = invert(cfg.mass)
    L = cfg.top
    out = {}
    for k in range(L + 1):
        for a in cfg.comps:
            out[jet(k, a)] = var(phase_q(k, a))
    if cfg.odd:
        for n in range(L + 1):
            for a in cfg.comps:
                sign = -1 if (L - n) % 2 else 1
                out[jet(cfg.N - n, a)] = sign * m_inv * var(phase_p(n, a))
    else:
        for n in range(L):
            sign = -1 if (L - 1 - n) % 2 else 1
            for b in cfg.comps:
                s = sum((levi_civita(a, b) * var(phase_p(n, a)) for a in cfg.comps), Poly())
                out[jet(cfg.N - n, b)] = sign * m_inv * s
    return out


def lagrangian_charges(cfg: ModelConfig) -> dict:
    Lm = free_lagrangian(cfg)
    return {label: noether_charge(Lm, s) for label, s in standard_symmetries(cfg)}


def correspondence_check(cfg: ModelConfig) -> Report:
    from . import reference_forms as rf
    from .phase_space import build_charges, canonical_bracket, label_text, structure_constants

    rep = Report(cfg.as_dict())
    Lm = free_lagrangian(cfg)
    momenta, H = ostrogradski(Lm)
    to_jets = phase_to_jets(cfg)
    phase = build_charges(cfg).as_dict()
    m, N, L = cfg.mass, cfg.N, cfg.top

    if cfg.odd:
        printed = rf.momenta_odd(cfg)
        for n, (p, pp) in enumerate(zip(momenta, printed)):
            rep.add_identity(f"noether/momentum{n}", f"Ostrogradski momentum p_{n} matches the closed form",
                             "generalized momenta of the free Lagrangian",
                             sum((x - y for x, y in zip(p, pp)), Poly()))
        rep.add_comparison("noether/hamiltonian-printed",
                           "Ostrogradski Hamiltonian against the printed closed form",
                           "free Hamiltonian in jet variables", H == rf.hamiltonian_printed(cfg),
                           H - rf.hamiltonian_printed(cfg))
    else:
        for a in cfg.comps:
            expected = sum((Fraction(1, 2) * levi_civita(b, a) * m * var(jet(L, b)) for b in cfg.comps), Poly())
            rep.add_identity(f"noether/top-momentum^{a}",
                             "top Ostrogradski momentum equals the constrained momentum",
                             "auxiliary momentum of the planar model", momenta[L][a - 1] - expected)

    el = euler_lagrange(Lm)
    rep.add_identity("noether/hamiltonian-conserved", "dH/dt vanishes on shell",
                     "Ostrogradski Hamiltonian", on_shell_reduce(D(H), cfg))
    for a, e in zip(cfg.comps, el):
        rep.add_identity(f"noether/el^{a}", f"Euler-Lagrange expression {a} is proportional to q^(N+1)",
                         "free equation of motion", on_shell_reduce(e, cfg))

    charges = {}
    for label, s in standard_symmetries(cfg):
        name = label_text(label)
        res = symmetry_residual(Lm, s)
        rep.add_identity(f"noether/residual/{name}", f"{name}: symmetry condition holds",
                         "symmetry condition", res)
        if not res.is_zero():
            continue
        C = noether_charge(Lm, s)
        charges[label] = C
        rep.add_identity(f"noether/conserved/{name}", f"{name}: Noether charge conserved on shell",
                         "integral of motion", on_shell_reduce(D(C), cfg))
        target = PHASE_SIGN[label[0]] * substitute(phase[label], to_jets)
        rep.add_identity(f"noether/correspondence/{name}",
                         f"{name}: Noether charge equals the phase-space charge in jets",
                         "charges obtained from the Hamiltonian level", C - target)
        literal = noether_charge(Lm, s, literal=True)
        rep.add_comparison(f"noether/literal-sum/{name}",
                           f"{name}: boundary sum read as -(d/dt)^l gives the same charge",
                           "general integral of motion", literal == C, literal - C)
        if not cfg.odd and label[0] in ("c", "k"):
            rep.add_identity(f"noether/delta-f/{name}", f"{name}: integrated boundary term has order < R",
                             "boundary term of the planar model",
                             Poly() if all(v.level < Lm.R for v in s.delta_f.variables()
                                           if v.kind == JET) else s.delta_f)

    if cfg.odd:
        for k in range(N + 1):
            for a in cfg.comps:
                C = charges.get(("c", k, a))
                if C is None:
                    continue
                rep.add_identity(f"noether/boost-normative/c{k}^{a}",
                                 f"boost charge c{k}^{a} equals the sum with q^(N-n) inside",
                                 "boost integrals of motion", C - rf.boost_charge_normative(cfg, k, a))
                printed = rf.boost_charge_printed(cfg, k, a)
                rep.add_comparison(f"noether/boost-printed/c{k}^{a}",
                                   f"boost charge c{k}^{a} against the printed q^(N-k) index",
                                   "boost integrals of motion", printed == C, printed - C)
        if ("d",) in charges:
            rep.add_identity("noether/dilation-closed-form", "dilation charge matches -tH + D(t)",
                             "dilation integral of motion", charges[("d",)] - rf.dilation_charge(cfg, H))
        if ("k",) in charges:
            fixed = rf.conformal_charge(cfg, H, printed=False)
            printed = rf.conformal_charge(cfg, H, printed=True)
            rep.add_identity("noether/conformal-closed-form",
                             "conformal charge matches t^2 H - 2t D(t) + K(t) with q^(N-j-1)",
                             "conformal integral of motion", charges[("k",)] - fixed)
            rep.add_comparison("noether/conformal-printed",
                               "conformal charge against the printed q^(N-j+1) index",
                               "conformal integral of motion", printed == charges[("k",)],
                               printed - charges[("k",)])
        J = rf.angular_momentum(cfg)
        for a in cfg.comps:
            C = charges.get(("j", a))
            if C is not None:
                rep.add_identity(f"noether/angular/{a}", f"rotation charge about axis {a} equals -J^{a}",
                                 "angular momentum", C + J[a - 1])
        for k in range(N + 1):
            rep.add_identity(f"noether/boost-delta-f/{k}",
                             f"closed-form boundary term of the level-{k} boost is the integrated one",
                             "boost boundary terms",
                             boost_delta_f(cfg, k, 1) - _solve_delta_f(
                                 Lm, [cfg.boost_sign(k) * var(T) ** k * e for e in _unit(1, cfg.comps)],
                                 Poly()))

    back = jets_to_phase(cfg)
    boosts = sorted(lab for lab in charges if lab[0] == "c")
    for i, x in enumerate(boosts):
        for y in boosts[i:]:
            _, cen = structure_constants(x, y, cfg)
            value = canonical_bracket(substitute(charges[x], back), substitute(charges[y], back), cfg)
            rep.add_identity(f"noether/involution/{label_text(x)},{label_text(y)}",
                             f"{{{label_text(x)}, {label_text(y)}}} from Lagrangian charges is central",
                             "central extension", value - cen * cfg.mass)
    return rep
