"""Finite point transformations, the conformal jet flow, prolongation and
the vector-field realization of the algebra."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Union

from .exact_algebra import (T, Expr, Frac, Poly, UnsupportedOperation, as_expr, as_poly,
                            factor_power, invert, is_zero, jet, param, partial_derivative,
                            substitute, total_time_derivative, var)
from .model import ModelConfig, levi_civita
from .report import Report

C, TAU, SIGMA = param("c"), param("tau"), param("sigma")
Value = Union[int, Fraction, Poly]


class OffShellError(ValueError):
    """Trajectory degree exceeds N, so it does not solve the free equation."""


# ---------------------------------------------------------------------------
# Transformation specs

@dataclass(frozen=True)
class Boost:
    level: int
    x: tuple


@dataclass(frozen=True)
class TimeShift:
    tau: Value


@dataclass(frozen=True)
class Dilation:
    sigma: Value

    def __post_init__(self):
        if is_zero(as_poly(self.sigma)):
            raise ValueError("dilation parameter must be nonzero")


@dataclass(frozen=True)
class Conformal:
    c: Value


@dataclass(frozen=True)
class Rotation:
    matrix: tuple  # rows

    def __post_init__(self):
        R = [[as_poly(v) for v in row] for row in self.matrix]
        n = len(R)
        for i in range(n):
            for j in range(n):
                s = sum((R[k][i] * R[k][j] for k in range(n)), Poly())
                if s != (1 if i == j else 0):
                    raise ValueError("rotation matrix is not orthogonal")
        if _det(R) != 1:
            raise ValueError("rotation matrix must have determinant +1")


TransformSpec = Union[Boost, TimeShift, Dilation, Conformal, Rotation]


def _det(R):
    if len(R) == 2:
        return R[0][0] * R[1][1] - R[0][1] * R[1][0]
    return (R[0][0] * (R[1][1] * R[2][2] - R[1][2] * R[2][1])
            - R[0][1] * (R[1][0] * R[2][2] - R[1][2] * R[2][0])
            + R[0][2] * (R[1][0] * R[2][1] - R[1][1] * R[2][0]))


def plane_rotation(d: int, plane: str, cos, sin) -> Rotation:
    axes = {"x": 0, "y": 1, "z": 2}
    i, j = axes[plane[0]], axes[plane[1]]
    R = [[Fraction(int(r == s)) for s in range(d)] for r in range(d)]
    R[i][i], R[i][j], R[j][i], R[j][j] = cos, -sin, sin, cos
    return Rotation(tuple(tuple(row) for row in R))


def parse_spec(text: str, d: int) -> TransformSpec:
    """Parse ``boost:k=2,x=1/2,0,0``, ``shift:tau=1/3``, ``dilate:sigma=2``,
    ``conformal:c=1/2`` or ``rotate:xy=3/5,4/5``."""
    tag, _, body = text.partition(":")
    key, _, value = body.partition("=")
    try:
        if tag == "boost":
            level_text, _, rest = body.partition(",")
            k = int(level_text.split("=")[1])
            if not rest.startswith("x="):
                raise ValueError("expected x=...")
            x = tuple(Fraction(v) for v in rest[2:].split(","))
            if len(x) != d:
                raise ValueError(f"boost vector needs {d} components")
            return Boost(k, x)
        if tag == "shift" and key == "tau":
            return TimeShift(Fraction(value))
        if tag == "dilate" and key == "sigma":
            return Dilation(Fraction(value))
        if tag == "conformal" and key == "c":
            return Conformal(Fraction(value))
        if tag == "rotate":
            cos, sin = (Fraction(v) for v in value.split(","))
            if len(key) != 2 or not set(key) <= set("xyz"[:d]):
                raise ValueError(f"bad rotation plane {key!r}")
            return plane_rotation(d, key, cos, sin)
    except (IndexError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse transform {text!r}") from exc
    raise ValueError(f"cannot parse transform {text!r}")


def compose(s1: TransformSpec, s2: TransformSpec) -> TransformSpec:
    """s1 after s2, for two elements of the same one-parameter family."""
    if type(s1) is not type(s2):
        raise UnsupportedOperation("composition across transformation types")
    if isinstance(s1, Conformal):
        return Conformal(_add(s1.c, s2.c))
    if isinstance(s1, TimeShift):
        return TimeShift(_add(s1.tau, s2.tau))
    if isinstance(s1, Dilation):
        return Dilation(_mul(s1.sigma, s2.sigma))
    if isinstance(s1, Boost):
        if s1.level != s2.level:
            raise UnsupportedOperation("composition of boosts at different levels")
        return Boost(s1.level, tuple(_add(a, b) for a, b in zip(s1.x, s2.x)))
    R1 = [[as_poly(v) for v in row] for row in s1.matrix]
    R2 = [[as_poly(v) for v in row] for row in s2.matrix]
    n = len(R1)
    prod = tuple(tuple(_simplify(sum((R1[i][k] * R2[k][j] for k in range(n)), Poly()))
                       for j in range(n)) for i in range(n))
    return Rotation(prod)


def _simplify(p: Poly):
    return p.constant_value() if p.is_constant() else p


def _add(a, b):
    return _simplify(as_poly(a) + as_poly(b))


def _mul(a, b):
    return _simplify(as_poly(a) * as_poly(b))


def identity_spec(spec: TransformSpec, d: int) -> TransformSpec:
    if isinstance(spec, Boost):
        return Boost(spec.level, (0,) * d)
    if isinstance(spec, TimeShift):
        return TimeShift(0)
    if isinstance(spec, Dilation):
        return Dilation(1)
    if isinstance(spec, Conformal):
        return Conformal(0)
    return Rotation(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))


# ---------------------------------------------------------------------------
# Trajectories

@dataclass(frozen=True)
class PolyTrajectory:
    components: tuple  # Poly in t (and parameters), one per spatial component

    @classmethod
    def from_coeffs(cls, coeffs) -> "PolyTrajectory":
        """``coeffs[i][a]`` is the t**i coefficient of component a."""
        d = len(coeffs[0]) if coeffs else 0
        comps = [sum((as_poly(Fraction(row[a]) if isinstance(row[a], str) else row[a]) * var(T, i)
                      for i, row in enumerate(coeffs)), Poly()) for a in range(d)]
        return cls(tuple(comps))

    def degree(self) -> int:
        return max((c.degree(T) for c in self.components), default=0)

    def coeffs(self) -> list[list]:
        deg = self.degree()
        return [[_simplify(c.coefficient(T, i)) for c in self.components] for i in range(deg + 1)]

    def derivative(self, n: int) -> list[Poly]:
        out = list(self.components)
        for _ in range(n):
            out = [c.diff(T) for c in out]
        return out

    def __eq__(self, other):
        return isinstance(other, PolyTrajectory) and all(
            a == b for a, b in zip(self.components, other.components))

    def __hash__(self):
        return hash(self.components)


def generic_trajectory(cfg: ModelConfig, name: str = "a") -> PolyTrajectory:
    """Degree-N trajectory with symbolic coefficients name{i}_{a}."""
    return PolyTrajectory(tuple(
        sum((var(param(name, i, a)) * var(T, i) for i in range(cfg.N + 1)), Poly())
        for a in cfg.comps))


def _matvec(matrix, vec):
    R = [[as_expr(v) for v in row] for row in matrix]
    return [sum((R[i][j] * vec[j] for j in range(len(vec))), Poly()) for i in range(len(vec))]


def apply_point_transform(spec: TransformSpec, traj: PolyTrajectory, cfg: ModelConfig) -> PolyTrajectory:
    """Image q'(t') of an on-shell trajectory, returned as a polynomial in t'
    (written with the time variable t)."""
    if traj.degree() > cfg.N:
        raise OffShellError(f"off-shell trajectory: degree {traj.degree()} exceeds N={cfg.N}")
    t = var(T)
    comps = list(traj.components)
    if isinstance(spec, Boost):
        s = cfg.boost_sign(spec.level)
        out = [q + s * t ** spec.level * as_poly(x) for q, x in zip(comps, spec.x)]
    elif isinstance(spec, TimeShift):
        out = [substitute(q, {T: t - as_poly(spec.tau)}, simultaneous=True) for q in comps]
    elif isinstance(spec, Dilation):
        sigma = as_poly(spec.sigma)
        out = [sigma ** cfg.N * substitute(q, {T: t * invert(sigma) ** 2}, simultaneous=True)
               for q in comps]
    elif isinstance(spec, Conformal):
        c = as_poly(spec.c)
        inv = factor_power(c, -1)
        scale = factor_power(c, cfg.N)
        out = [scale * substitute(q, {T: t * inv}, simultaneous=True) for q in comps]
    else:
        out = _matvec(spec.matrix, comps)
    for q in out:
        if isinstance(q, Frac):
            raise OffShellError("transformed trajectory is not polynomial")
    result = PolyTrajectory(tuple(as_poly(q) for q in out))
    if result.degree() > cfg.N:
        raise OffShellError("transformed trajectory left the solution space")
    return result


# ---------------------------------------------------------------------------
# Jet-space images

def time_jacobian(spec: TransformSpec) -> Expr:
    """dt/dt' as a function of the original time."""
    if isinstance(spec, Dilation):
        return invert(as_poly(spec.sigma)) ** 2
    if isinstance(spec, Conformal):
        return factor_power(-as_poly(spec.c), 2)
    return Poly.const(1)


def time_dilation(spec: TransformSpec) -> Expr:
    """dt'/dt as a function of the original time."""
    if isinstance(spec, Dilation):
        return as_poly(spec.sigma) ** 2
    if isinstance(spec, Conformal):
        return factor_power(-as_poly(spec.c), -2)
    return Poly.const(1)


def point_image(spec: TransformSpec, cfg: ModelConfig) -> list[Expr]:
    """q'(t') in terms of t and the order-0 jets q[0]."""
    q = [var(jet(0, a)) for a in cfg.comps]
    t = var(T)
    if isinstance(spec, Boost):
        s = cfg.boost_sign(spec.level)
        return [qa + s * t ** spec.level * as_poly(x) for qa, x in zip(q, spec.x)]
    if isinstance(spec, TimeShift):
        return q
    if isinstance(spec, Dilation):
        return [as_poly(spec.sigma) ** cfg.N * qa for qa in q]
    if isinstance(spec, Conformal):
        f = factor_power(-as_poly(spec.c), -cfg.N)
        return [qa * f for qa in q]
    return _matvec(spec.matrix, q)


def prolonged_jets(spec: TransformSpec, cfg: ModelConfig, upto: int) -> list[list[Expr]]:
    """d^n q'/dt'^n for n = 0..upto via d/dt' = (dt/dt') d/dt."""
    jac = time_jacobian(spec)
    out = [point_image(spec, cfg)]
    for _ in range(upto):
        out.append([jac * total_time_derivative(e) for e in out[-1]])
    return out


def _integrate_c(expr: Expr) -> Expr:
    """int_0^c of a sum of terms  k c^j t^i (1-ct)^-(j+2).  The antiderivative
    of each is  k t^i c^(j+1) / ((j+1) (1-ct)^(j+1))."""
    if isinstance(expr, Poly):
        if expr.is_zero():
            return expr
        raise UnsupportedOperation("unexpected polynomial integrand in the conformal flow")
    den = expr.den_dict()
    key = (Fraction(-1), ((C, 1),))
    if set(den) != {key}:
        raise UnsupportedOperation("integrand denominator must be a power of (1-ct)")
    P = den[key]
    out: Expr = Poly()
    for mono, coef in expr.num.items():
        j = dict(mono).get(C, 0)
        if j + 2 != P:
            raise UnsupportedOperation("integrand outside the c^j (1-ct)^-(j+2) family")
        rest = Poly({tuple((v, e) for v, e in mono if v != C): coef})
        out = out + rest * var(C, j + 1) * Fraction(1, j + 1) * factor_power(-var(C), -(j + 1))
    return out


@lru_cache(maxsize=None)
def _flow(N: int, n: int) -> tuple:
    if n == 0:
        return (factor_power(-var(C), -N),)
    prev = _flow(N, n - 1)
    weight = factor_power(-var(C), 2 * n - N)
    inv_weight = factor_power(-var(C), N - 2 * n)
    coeffs = [weight]
    for k in range(1, n + 1):
        integral = _integrate_c(inv_weight * prev[k - 1])
        coeffs.append(weight * integral * (n * (N - n + 1)))
    return tuple(coeffs)


def conformal_jet_flow(cfg: ModelConfig, n: int) -> list[Expr]:
    """Coefficients A[k], k = 0..n, with q'_n = sum_k A[k] q_{n-k}, solving
    dq_n/dc = n(N-n+1) q_{n-1} + 2t/(1-ct) (N/2-n) q_n with q_n(c=0) = q_n."""
    return list(_flow(cfg.N, n))


def flow_ode_residuals(cfg: ModelConfig, n: int) -> list[Expr]:
    """d A_{n,k}/dc minus the right-hand side of the flow equation, per k."""
    N = cfg.N
    A = conformal_jet_flow(cfg, n)
    prev = conformal_jet_flow(cfg, n - 1) if n else []
    drift = 2 * var(T) * factor_power(-var(C), -1) * (Fraction(N, 2) - n)
    out = []
    for k in range(n + 1):
        rhs = drift * A[k]
        if k:
            rhs = rhs + prev[k - 1] * (n * (N - n + 1))
        out.append(partial_derivative(A[k], C) - rhs)
    return out


def level_images(spec: TransformSpec, cfg: ModelConfig) -> list[list[Expr]]:
    """Finite images q'_n, n = 0..top, of the enlarged coordinates, written
    with jets q_n = q[n]."""
    N, t = cfg.N, var(T)
    levels = range(cfg.top + 1)
    out = []
    for n in levels:
        q = [var(jet(n, a)) for a in cfg.comps]
        if isinstance(spec, Boost):
            j = spec.level
            if j >= n:
                s = cfg.boost_sign(j)  # (-1)^{k+n-(N+1)/2} with k+n = j
                coef = s * Fraction(factorial(j), factorial(j - n))
                q = [qa + coef * t ** (j - n) * as_poly(x) for qa, x in zip(q, spec.x)]
            out.append(q)
        elif isinstance(spec, TimeShift):
            out.append(q)
        elif isinstance(spec, Dilation):
            out.append([as_poly(spec.sigma) ** (N - 2 * n) * qa for qa in q])
        elif isinstance(spec, Conformal):
            A = conformal_jet_flow(cfg, n)
            c_val = as_poly(spec.c)
            A = [substitute(a, {C: c_val}) if c_val != var(C) else a for a in A]
            out.append([sum((A[k] * var(jet(n - k, a)) for k in range(n + 1)), Poly())
                        for a in cfg.comps])
        else:
            out.append(_matvec(spec.matrix, q))
    return out


def verify_prolongation(cfg: ModelConfig, spec: TransformSpec) -> Report:
    rep = Report(cfg.as_dict())
    images = level_images(spec, cfg)
    jac = time_jacobian(spec)
    name = type(spec).__name__.lower()
    reduced = point_image(spec, cfg)
    rep.add_identity(f"prolongation/{name}/reduced",
                     f"{name}: level-0 image equals the reduced point transformation",
                     "reduction to t and q", sum((x - y for x, y in zip(images[0], reduced)), Poly()))
    for n in range(len(images) - 1):
        for ai, a in enumerate(cfg.comps):
            residual = images[n + 1][ai] - jac * total_time_derivative(images[n][ai])
            rep.add_identity(f"prolongation/{name}/n{n}^{a}",
                             f"{name}: q'_{n + 1} = dq'_{n}/dt' (component {a})",
                             "prolongation property", residual)
    return rep


def standard_specs(cfg: ModelConfig) -> list[TransformSpec]:
    """Symbolic one-parameter transformations plus a rational rotation."""
    specs = [Boost(k, tuple(var(param("x", k, a)) for a in cfg.comps)) for k in range(cfg.N + 1)]
    specs += [TimeShift(var(TAU)), Dilation(var(SIGMA)), Conformal(var(C))]
    specs.append(plane_rotation(cfg.d, "xy", Fraction(3, 5), Fraction(4, 5)))
    if cfg.d == 3:
        specs.append(plane_rotation(3, "yz", Fraction(5, 13), Fraction(12, 13)))
    return specs


def spec_name(spec: TransformSpec) -> str:
    if isinstance(spec, Boost):
        return f"boost{spec.level}"
    return type(spec).__name__.lower()


# ---------------------------------------------------------------------------
# Vector fields on (t, q)

@dataclass(frozen=True)
class VectorField:
    t_coeff: Poly
    q_coeffs: tuple

    def apply(self, f) -> Poly:
        out = self.t_coeff * as_poly(f).diff(T)
        for a, coef in enumerate(self.q_coeffs, start=1):
            out = out + coef * as_poly(f).diff(jet(0, a))
        return out

    def __add__(self, other):
        return VectorField(self.t_coeff + other.t_coeff,
                           tuple(a + b for a, b in zip(self.q_coeffs, other.q_coeffs)))

    def __mul__(self, k):
        return VectorField(self.t_coeff * k, tuple(a * k for a in self.q_coeffs))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self) -> bool:
        return self.t_coeff.is_zero() and all(c.is_zero() for c in self.q_coeffs)

    def to_text(self) -> str:
        parts = [f"({self.t_coeff.to_text()})d_t"]
        parts += [f"({c.to_text()})d_q{a}" for a, c in enumerate(self.q_coeffs, start=1)]
        return " + ".join(parts)


def commutator(a: VectorField, b: VectorField) -> VectorField:
    return VectorField(a.apply(b.t_coeff) - b.apply(a.t_coeff),
                       tuple(a.apply(bq) - b.apply(aq) for aq, bq in zip(a.q_coeffs, b.q_coeffs)))


def _parse_label(name) -> tuple:
    if isinstance(name, tuple):
        return name
    s = name.strip()
    if s in ("H", "D", "K"):
        return (s.lower(),)
    if s == "J":
        return ("j", 3)
    if s.startswith("J"):
        return ("j", int(s[1:]))
    if s.startswith("C"):
        level, _, comp = s[1:].partition("^")
        return ("c", int(level), int(comp or 1))
    raise ValueError(f"unknown generator {name!r}")


def generator_field(name, cfg: ModelConfig) -> VectorField:
    """Real field X with operator = i X: X_H = d_t, X_D = -(N/2) q d_q - t d_t,
    X_K = N t q d_q + t^2 d_t, X_{C_k} = (-1)^{k-(N-1)/2} t^k d_q (odd N;
    (-1)^{k-N/2+1} for even N), X_{J^a} = -eps_abc q^b d_c."""
    label = _parse_label(name)
    N, t, d = cfg.N, var(T), cfg.d
    q = [var(jet(0, a)) for a in cfg.comps]
    zero = tuple(Poly() for _ in cfg.comps)
    if label == ("h",):
        return VectorField(Poly.const(1), zero)
    if label == ("d",):
        return VectorField(-t, tuple(-Fraction(N, 2) * qa for qa in q))
    if label == ("k",):
        return VectorField(t ** 2, tuple(N * t * qa for qa in q))
    if label[0] == "c":
        _, k, a = label
        if not 0 <= k <= N or a not in cfg.comps:
            raise ValueError(f"unknown generator {name!r}")
        sign = -cfg.boost_sign(k)
        return VectorField(Poly(), tuple(sign * t ** k if b == a else Poly() for b in cfg.comps))
    if label[0] == "j":
        axis = label[1]
        if d == 2 and axis != 3:
            raise ValueError("planar rotations have a single generator J")
        comps = []
        for c_ in cfg.comps:
            coef = Poly()
            for b in cfg.comps:
                e = levi_civita(b, c_) if d == 2 else levi_civita(axis, b, c_)
                if e:
                    coef = coef - e * q[b - 1]
            comps.append(coef)
        return VectorField(Poly(), tuple(comps))
    raise ValueError(f"unknown generator {name!r}")


def generator_labels(cfg: ModelConfig) -> list[tuple]:
    labels = [("h",), ("d",), ("k",)]
    labels += [("j", 3)] if cfg.d == 2 else [("j", a) for a in cfg.comps]
    labels += [("c", k, a) for k in range(cfg.N + 1) for a in cfg.comps]
    return labels


def verify_vector_fields(cfg: ModelConfig) -> Report:
    """[X_A, X_B] = X_C whenever [A, B] = iC; the central term is absent."""
    from .phase_space import label_text, structure_constants

    rep = Report(cfg.as_dict())
    labels = generator_labels(cfg)
    fields = {lab: generator_field(lab, cfg) for lab in labels}
    for i, x in enumerate(labels):
        for y in labels[i:]:
            lin, _ = structure_constants(x, y, cfg)
            expected = VectorField(Poly(), tuple(Poly() for _ in cfg.comps))
            for lab, coef in lin.items():
                expected = expected + fields[lab] * coef
            diff = commutator(fields[x], fields[y]) - expected
            rep.add(f"fields/{label_text(x)},{label_text(y)}",
                    f"[X_{label_text(x)}, X_{label_text(y)}] reproduces the algebra",
                    "differential realization", diff.is_zero(), diff.to_text())
    return rep


def verify_group_laws(cfg: ModelConfig) -> Report:
    """Composition laws, identity at the unit parameter and on-shell closure,
    on a generic degree-N trajectory with symbolic coefficients."""
    rep = Report(cfg.as_dict())
    traj = generic_trajectory(cfg)
    one = "one-parameter subgroups"

    def same(a: PolyTrajectory, b: PolyTrajectory):
        return sum((x - y for x, y in zip(a.components, b.components)), Poly())

    pairs = [
        (Conformal(var(C)), Conformal(var(C))),
        (Conformal(Fraction(1, 2)), Conformal(Fraction(-1, 3))),
        (TimeShift(var(param("tau", 1))), TimeShift(var(param("tau", 2)))),
        (Dilation(var(param("sigma", 1))), Dilation(var(param("sigma", 2)))),
        (plane_rotation(cfg.d, "xy", Fraction(3, 5), Fraction(4, 5)),
         plane_rotation(cfg.d, "xy", Fraction(5, 13), Fraction(12, 13))),
    ]
    pairs += [(Boost(k, tuple(var(param("x", k, a)) for a in cfg.comps)),
               Boost(k, tuple(var(param("y", k, a)) for a in cfg.comps))) for k in range(cfg.N + 1)]
    for s1, s2 in pairs:
        name = spec_name(s1)
        chained = apply_point_transform(s1, apply_point_transform(s2, traj, cfg), cfg)
        direct = apply_point_transform(compose(s1, s2), traj, cfg)
        rep.add_identity(f"group/{name}/compose", f"{name}: composition law", one, same(chained, direct))
    for spec in standard_specs(cfg):
        name = spec_name(spec)
        image = apply_point_transform(spec, traj, cfg)
        rep.add(f"group/{name}/on-shell", f"{name}: degree <= N preserved",
                "reduced point transformations", image.degree() <= cfg.N, str(image.degree()))
        ident = apply_point_transform(identity_spec(spec, cfg.d), traj, cfg)
        rep.add_identity(f"group/{name}/identity", f"{name}: unit parameter acts trivially",
                         one, same(ident, traj))
    return rep


def verify_infinitesimal_consistency(cfg: ModelConfig) -> Report:
    """First-order expansion of the point transformations on q_0 agrees with
    the canonical action once momenta are replaced by Ostrogradski momenta."""
    from .noether import phase_to_jets
    from .phase_space import boost_generator, build_charges, infinitesimal_action
    from .exact_algebra import phase_q

    rep = Report(cfg.as_dict())
    charges = build_charges(cfg)
    traj = generic_trajectory(cfg)
    on_traj = {jet(n, a): traj.derivative(n)[a - 1]
               for n in range(cfg.N + 2) for a in cfg.comps}
    to_jets = phase_to_jets(cfg)

    def phase_delta(G, a):
        delta = infinitesimal_action(G, phase_q(0, a), cfg)
        return substitute(substitute(delta, to_jets), on_traj)

    lam = param("lambda")
    cases = [
        ("shift", TimeShift(var(TAU)), TAU, 0, var(TAU) * charges.h, TAU, 1),
        ("dilation", Dilation(var(SIGMA)), SIGMA, 1, var(lam) * charges.d, lam, -2),
        ("conformal", Conformal(var(C)), C, 0, var(C) * charges.k, C, 1),
    ]
    for name, spec, p, at, G, gp, scale in cases:
        image = apply_point_transform(spec, traj, cfg)
        for ai, a in enumerate(cfg.comps):
            first = substitute(image.components[ai].diff(p), {p: at})
            expected = partial_derivative(phase_delta(G, a), gp) * scale
            rep.add_identity(f"consistency/{name}^{a}",
                             f"{name}: first-order point action equals canonical action on q_0^{a}",
                             "on-shell coincidence of point and canonical actions",
                             first - expected)
    boost_all = boost_generator(cfg, charges)
    for k in range(cfg.N + 1):
        xs = tuple(var(param("x", k, a)) for a in cfg.comps)
        image = apply_point_transform(Boost(k, xs), traj, cfg)
        only_k = {param("x", j, a): 0 for j in range(cfg.N + 1) if j != k for a in cfg.comps}
        G = substitute(boost_all, only_k)
        for ai, a in enumerate(cfg.comps):
            rep.add_identity(f"consistency/boost{k}^{a}",
                             f"boost level {k}: point shift equals canonical action on q_0^{a}",
                             "on-shell coincidence of point and canonical actions",
                             image.components[ai] - traj.components[ai] - phase_delta(G, a))
    return rep


def verify_conformal_flow(cfg: ModelConfig) -> Report:
    """Flow equation residuals, the prolongation property at every level and
    comparisons with the printed closed form and the rewritten coefficient."""
    from . import reference_forms as rf

    rep = Report(cfg.as_dict())
    for n in range(cfg.top + 1):
        for k, r in enumerate(flow_ode_residuals(cfg, n)):
            rep.add_identity(f"flow/ode/n{n}k{k}", f"A[{n},{k}] solves the conformal flow equation",
                             "flow equation of the special conformal transformation", r)
        A = conformal_jet_flow(cfg, n)
        printed = rf.conformal_jets_printed(cfg, n)
        diff = sum((a - b for a, b in zip(A, printed)), Poly())
        rep.add_comparison(f"flow/printed/n{n}", f"level-{n} flow against the printed closed form",
                           "closed form of the conformal jet transformation",
                           all(a == b for a, b in zip(A, printed)), diff)
        if n:
            derived = partial_derivative(A[1], C)
            derived = substitute(derived, {C: 0})
            printed_coef = rf.conformal_q_coefficient_rewritten(cfg, n)
            rep.add_comparison(f"flow/rewritten-coefficient/n{n}",
                               f"coefficient of c q_{n - 1} in the rewritten variation of q_{n}",
                               "rewritten conformal variation", derived == printed_coef,
                               f"derived {derived.to_text()}, printed {printed_coef}")
    rep.extend(verify_prolongation(cfg, Conformal(var(C))))
    return rep
