"""Exact multivariate Laurent polynomials over the rationals, plus a small
rational-function class whose denominators are products of ``(1 + a*t)``.

Variables carry a kind (time, jet coordinate, phase-space coordinate, group
parameter).  Only parameters may carry negative exponents.  All values are
immutable.
"""
from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple, Union

TIME, JET, PHASE_Q, PHASE_P, PARAM = range(5)
_KIND_NAMES = {TIME: "time", JET: "jet", PHASE_Q: "phase-q", PHASE_P: "phase-p", PARAM: "param"}


class AlgebraError(Exception):
    """Base class for errors raised by the exact algebra."""


class UnsupportedOperation(AlgebraError):
    pass


class KindError(AlgebraError):
    pass


class CyclicBindingError(AlgebraError):
    pass


class VarId(NamedTuple):
    """A variable. Tuple order is the canonical order: (kind, level, comp, name)."""

    kind: int
    level: int = 0
    comp: int = 0
    name: str = ""

    def text(self) -> str:
        if self.kind == TIME:
            return "t"
        if self.kind == JET:
            return f"q[{self.level}]_{self.comp}"
        if self.kind == PHASE_Q:
            return f"q{self.level}_{self.comp}"
        if self.kind == PHASE_P:
            return f"p{self.level}_{self.comp}"
        if self.level == 0 and self.comp == 0:
            return self.name
        if self.level == 0 and self.name != "x":
            return f"{self.name}_{self.comp}"
        return f"{self.name}{self.level}_{self.comp}"


T = VarId(TIME)


def jet(n: int, a: int) -> VarId:
    return VarId(JET, n, a)


def phase_q(k: int, a: int) -> VarId:
    return VarId(PHASE_Q, k, a)


def phase_p(k: int, a: int) -> VarId:
    return VarId(PHASE_P, k, a)


def param(name: str, level: int = 0, comp: int = 0) -> VarId:
    return VarId(PARAM, level, comp, name)


Monomial = tuple  # tuple[tuple[VarId, int], ...] sorted by VarId
Scalar = Union[int, Fraction]
ONE_MONO: Monomial = ()


@lru_cache(maxsize=1 << 18)
def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        s = exps.get(v, 0) + e
        if s:
            exps[v] = s
        else:
            del exps[v]
    return tuple(sorted(exps.items()))


def _mono_scale(a: Monomial, k: int) -> Monomial:
    if k == 0:
        return ONE_MONO
    return tuple((v, e * k) for v, e in a)


def _mono_drop(a: Monomial, var: VarId) -> Monomial:
    return tuple((v, e) for v, e in a if v != var)


def _mono_exp(a: Monomial, var: VarId) -> int:
    for v, e in a:
        if v == var:
            return e
    return 0


def _with_exp(a: Monomial, var: VarId, e: int) -> Monomial:
    rest = dict(a)
    rest.pop(var, None)
    if e:
        rest[var] = e
    return tuple(sorted(rest.items()))


class Poly:
    """Immutable sparse polynomial ``{monomial: Fraction}`` with no zero entries."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for mono, coef in terms.items():
                if coef:
                    for v, e in mono:
                        if e < 0 and v.kind != PARAM:
                            raise UnsupportedOperation(f"negative exponent of {v.text()}")
                    clean[mono] = Fraction(coef)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls._raw({ONE_MONO: Fraction(c)} if c else {})

    @classmethod
    def var(cls, v: VarId, exp: int = 1) -> "Poly":
        if exp < 0 and v.kind != PARAM:
            raise UnsupportedOperation(f"negative exponent of {v.text()}")
        return cls._raw({((v, exp),) if exp else ONE_MONO: Fraction(1)})

    @classmethod
    def monomial(cls, mono: Iterable[tuple[VarId, int]], coef: Scalar = 1) -> "Poly":
        return cls({tuple(sorted((v, e) for v, e in mono if e)): coef})

    # -- inspection -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return self._terms

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == ONE_MONO for m in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get(ONE_MONO, Fraction(0))

    def variables(self) -> frozenset:
        return frozenset(v for mono in self._terms for v, _ in mono)

    def degree(self, var: VarId) -> int:
        return max((_mono_exp(m, var) for m in self._terms), default=0)

    def kinds(self) -> frozenset:
        return frozenset(v.kind for v in self.variables())

    def __len__(self):
        return len(self._terms)

    def sorted_terms(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0])

    # -- comparison -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == Poly.const(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for mono, c in small.items():
            s = out.get(mono, 0) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw({})
            return Poly._raw({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return invert(self) ** (-k)
        if len(self._terms) == 1:
            (mono, coef), = self._terms.items()
            return Poly._raw({_mono_scale(mono, k): coef ** k})
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, (Poly, Frac)):
            return self * invert(other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return invert(self) * other
        return NotImplemented

    # -- calculus ---------------------------------------------------------
    def diff(self, var: VarId) -> "Poly":
        out: dict = {}
        for mono, c in self._terms.items():
            e = _mono_exp(mono, var)
            if e:
                m = _with_exp(mono, var, e - 1)
                out[m] = out.get(m, 0) + c * e
        return Poly._raw({m: c for m, c in out.items() if c})

    def coefficient(self, var: VarId, e: int) -> "Poly":
        """Coefficient of ``var**e`` viewing self as a polynomial in ``var``."""
        out = {}
        for mono, c in self._terms.items():
            if _mono_exp(mono, var) == e:
                out[_mono_drop(mono, var)] = c
        return Poly._raw(out)

    def collect(self, var: VarId) -> dict[int, "Poly"]:
        groups: dict[int, dict] = {}
        for mono, c in self._terms.items():
            e = _mono_exp(mono, var)
            groups.setdefault(e, {})[_mono_drop(mono, var)] = c
        return {e: Poly._raw(t) for e, t in groups.items()}

    # -- text -------------------------------------------------------------
    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            if mono:
                parts.append(f"{c}*" + "*".join(f"{v.text()}^{e}" for v, e in mono))
            else:
                parts.append(str(c))
        return " + ".join(parts)

    def __repr__(self):
        return f"Poly({self.to_text()!r})"

    __str__ = to_text


Expr = Union[Poly, "Frac"]


def as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    if isinstance(x, VarId):
        return Poly.var(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Poly")


def as_expr(x) -> Expr:
    if isinstance(x, Frac):
        return x
    return as_poly(x)


def var(v: VarId, exp: int = 1) -> Poly:
    return Poly.var(v, exp)


# ---------------------------------------------------------------------------
# Denominator factors 1 + alpha*t, alpha = rational * parameter monomial.
# A factor is keyed by (alpha_coef, alpha_mono).

def _param_monomial(p: Poly):
    """Return (coef, mono) if p is a single term in parameters only, else None."""
    if len(p) != 1:
        return None
    (mono, coef), = p.items()
    if any(v.kind != PARAM for v, _ in mono):
        return None
    return coef, mono


def _factor_key(p: Poly):
    """Return alpha key if p == 1 + alpha*t with alpha a parameter monomial."""
    if len(p) != 2 or p.terms.get(ONE_MONO) != 1:
        return None
    (mono, coef), = [(m, c) for m, c in p.items() if m != ONE_MONO]
    if _mono_exp(mono, T) != 1:
        return None
    alpha = _mono_drop(mono, T)
    if any(v.kind != PARAM for v, _ in alpha):
        return None
    return coef, alpha


def factor_poly(key) -> Poly:
    coef, alpha = key
    return Poly._raw({ONE_MONO: Fraction(1), _mono_mul(alpha, ((T, 1),)): coef})


def linear_factor(alpha) -> Poly:
    """The polynomial ``1 + alpha*t``; ``alpha`` must be a parameter monomial."""
    a = as_poly(alpha)
    if a.is_zero():
        return Poly.const(1)
    if _param_monomial(a) is None:
        raise UnsupportedOperation("factor coefficient must be a parameter monomial")
    return Poly.const(1) + a * var(T)


def factor_power(alpha, k: int) -> Expr:
    """``(1 + alpha*t)**k`` for any integer k."""
    return linear_factor(alpha) ** k


def _divide_by_factor(num: Poly, key) -> Poly | None:
    """Exact quotient num / (1 + alpha*t) or None if not divisible."""
    coef, alpha = key
    inv_alpha = Poly._raw({_mono_scale(alpha, -1): Fraction(1) / coef})
    groups = num.collect(T)
    top = max(groups)
    if top == 0:
        return None
    quot: dict[int, Poly] = {}
    q_next = Poly._raw({})
    for i in range(top, 0, -1):
        q_prev = (groups.get(i, Poly._raw({})) - q_next) * inv_alpha
        quot[i - 1] = q_prev
        q_next = q_prev
    if not (groups.get(0, Poly._raw({})) - quot[0]).is_zero():
        return None
    out = Poly._raw({})
    for i, q in quot.items():
        if q:
            out = out + q * var(T, i) if i else out + q
    return out


def invert(x) -> Expr:
    """Multiplicative inverse for parameter monomials, linear factors and
    fractions whose numerator is one of those."""
    if isinstance(x, (int, Fraction)):
        return Poly.const(Fraction(1) / Fraction(x))
    if isinstance(x, Poly):
        pm = _param_monomial(x)
        if pm is not None:
            coef, mono = pm
            return Poly._raw({_mono_scale(mono, -1): Fraction(1) / coef})
        key = _factor_key(x)
        if key is not None:
            return Frac._make(Poly.const(1), {key: 1})
        raise UnsupportedOperation(f"cannot invert {x.to_text()}")
    if isinstance(x, Frac):
        return x.den_poly() * invert(x.num)
    raise TypeError(type(x).__name__)


class Frac:
    """``num / prod (1 + alpha_i t)**k_i``; construct through arithmetic or
    :func:`factor_power`.  Operations return a :class:`Poly` whenever the
    denominator cancels completely."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: tuple):
        self.num = num
        self.den = den

    @staticmethod
    def _make(num: Poly, den: Mapping) -> Expr:
        den = {k: p for k, p in den.items() if p}
        if num.is_zero():
            return Poly._raw({})
        for key in sorted(den):
            p = den[key]
            while p:
                q = _divide_by_factor(num, key)
                if q is None:
                    break
                num, p = q, p - 1
            den[key] = p
        den = {k: p for k, p in den.items() if p}
        if not den:
            return num
        return Frac(num, tuple(sorted(den.items())))

    def den_dict(self) -> dict:
        return dict(self.den)

    def den_poly(self) -> Poly:
        out = Poly.const(1)
        for key, p in self.den:
            out = out * factor_poly(key) ** p
        return out

    def factors(self) -> list[tuple[Poly, int]]:
        return [(factor_poly(k), p) for k, p in self.den]

    def variables(self) -> frozenset:
        out = set(self.num.variables())
        for key, _ in self.den:
            out |= factor_poly(key).variables()
        return frozenset(out)

    def is_zero(self) -> bool:
        return False

    def kinds(self) -> frozenset:
        return frozenset(v.kind for v in self.variables())

    # -- arithmetic -------------------------------------------------------
    @staticmethod
    def _parts(x):
        if isinstance(x, Frac):
            return x.num, dict(x.den)
        return as_poly(x), {}

    @staticmethod
    def _common(a, b):
        na, da = Frac._parts(a)
        nb, db = Frac._parts(b)
        den = dict(da)
        for k, p in db.items():
            den[k] = max(den.get(k, 0), p)
        for k, p in den.items():
            if p > da.get(k, 0):
                na = na * factor_poly(k) ** (p - da.get(k, 0))
            if p > db.get(k, 0):
                nb = nb * factor_poly(k) ** (p - db.get(k, 0))
        return na, nb, den

    def __add__(self, other):
        if not isinstance(other, (Frac, Poly, int, Fraction)):
            return NotImplemented
        na, nb, den = Frac._common(self, other)
        return Frac._make(na + nb, den)

    __radd__ = __add__

    def __neg__(self):
        return Frac(-self.num, self.den)

    def __sub__(self, other):
        if not isinstance(other, (Frac, Poly, int, Fraction)):
            return NotImplemented
        return self + (-as_expr(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, (Frac, Poly, int, Fraction)):
            return NotImplemented
        nb, db = Frac._parts(other)
        den = dict(self.den)
        for k, p in db.items():
            den[k] = den.get(k, 0) + p
        return Frac._make(self.num * nb, den)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return invert(self) ** (-k)
        return Frac._make(self.num ** k, {key: p * k for key, p in self.den})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, (Poly, Frac)):
            return self * invert(other)
        return NotImplemented

    def __rtruediv__(self, other):
        return as_expr(other) * invert(self)

    def __eq__(self, other):
        if not isinstance(other, (Frac, Poly, int, Fraction)):
            return NotImplemented
        na, nb, _ = Frac._common(self, other)
        return na == nb

    def __hash__(self):
        return hash((self.num, self.den))

    def to_text(self) -> str:
        dens = " * ".join(f"[{factor_poly(k).to_text()}]^{p}" for k, p in self.den)
        return f"[{self.num.to_text()}] / {dens}"

    def __repr__(self):
        return f"Frac({self.to_text()!r})"

    __str__ = to_text


def is_zero(x) -> bool:
    if isinstance(x, Poly):
        return x.is_zero()
    if isinstance(x, Frac):
        return False
    return x == 0


def equal(a, b) -> bool:
    """Exact equality of Poly/Frac values (cross-multiplication for Frac)."""
    return as_expr(a) == as_expr(b)


# ---------------------------------------------------------------------------
# Calculus

def partial_derivative(p, v: VarId) -> Expr:
    if isinstance(p, Frac):
        out = Frac._make(p.num.diff(v), dict(p.den))
        for key, k in p.den:
            dfac = factor_poly(key).diff(v)
            if dfac:
                den = dict(p.den)
                den[key] = den[key] + 1
                out = out + Frac._make(p.num * dfac * (-k), den)
        return out
    return as_poly(p).diff(v)


def _poly_total_derivative(p: Poly) -> Poly:
    out: dict = {}
    for mono, c in p.items():
        for v, e in mono:
            if v.kind == PARAM:
                continue
            if v.kind in (PHASE_Q, PHASE_P):
                raise KindError("total time derivative of a phase-space expression")
            lowered = _with_exp(mono, v, e - 1)
            if v.kind == JET:
                lowered = _mono_mul(lowered, ((VarId(JET, v.level + 1, v.comp), 1),))
            s = out.get(lowered, 0) + c * e
            if s:
                out[lowered] = s
            else:
                out.pop(lowered, None)
    return Poly._raw(out)


def total_time_derivative(p) -> Expr:
    """d/dt with q[n] -> q[n+1], t -> 1 and parameters constant."""
    if isinstance(p, Frac):
        out = Frac._make(_poly_total_derivative(p.num), dict(p.den))
        for key, k in p.den:
            coef, alpha = key
            den = dict(p.den)
            den[key] = den[key] + 1
            out = out + Frac._make(p.num * Poly._raw({alpha: coef * -k}), den)
        return out
    return _poly_total_derivative(as_poly(p))


def nth_time_derivative(p, n: int) -> Expr:
    for _ in range(n):
        p = total_time_derivative(p)
    return p


# ---------------------------------------------------------------------------
# Substitution

def _check_acyclic(bindings: Mapping[VarId, Expr]) -> None:
    graph = {v: [w for w in as_expr(val).variables() if w in bindings] for v, val in bindings.items()}
    state: dict = {}

    def visit(v):
        state[v] = 1
        for w in graph[v]:
            if state.get(w) == 1:
                raise CyclicBindingError(f"cyclic binding through {w.text()}")
            if w not in state:
                visit(w)
        state[v] = 2

    for v in graph:
        if v not in state:
            visit(v)


def _subs_poly(p: Poly, bindings: Mapping[VarId, Expr]) -> Expr:
    power_cache: dict = {}

    def power(v, e):
        key = (v, e)
        if key not in power_cache:
            power_cache[key] = bindings[v] ** e
        return power_cache[key]

    free: dict = {}
    bound_terms = []
    for mono, c in p.items():
        if not any(v in bindings for v, _ in mono):
            free[mono] = c
            continue
        keep = tuple((v, e) for v, e in mono if v not in bindings)
        acc = Poly._raw({keep: c})
        for v, e in mono:
            if v in bindings:
                acc = acc * power(v, e)
                if is_zero(acc):
                    break
        bound_terms.append(acc)
    out: Expr = Poly._raw(free)
    polys = [x for x in bound_terms if isinstance(x, Poly)]
    fracs = [x for x in bound_terms if isinstance(x, Frac)]
    for x in polys:
        out = out + x
    if fracs:
        # Bring all fractions over one common denominator before adding.
        den: dict = {}
        for x in fracs:
            for k, pw in x.den:
                den[k] = max(den.get(k, 0), pw)
        num = as_poly(0)
        for x in fracs:
            factor = Poly.const(1)
            xd = dict(x.den)
            for k, pw in den.items():
                if pw > xd.get(k, 0):
                    factor = factor * factor_poly(k) ** (pw - xd.get(k, 0))
            num = num + x.num * factor
        out = out + Frac._make(num, den)
    return out


def _subs_once(p, bindings):
    if isinstance(p, Frac):
        out = _subs_poly(p.num, bindings)
        for key, k in p.den:
            out = out * _subs_poly(factor_poly(key), bindings) ** (-k)
        return out
    return _subs_poly(as_poly(p), bindings)


def substitute(p, bindings: Mapping[VarId, object], simultaneous: bool = False) -> Expr:
    """Replace variables by expressions.

    By default bindings are applied until no bound variable remains, which
    requires them to be acyclic.  With ``simultaneous=True`` a single parallel
    pass is made and bindings may mention their own variables (``t -> t/(1+ct)``).
    """
    b = {v: as_expr(val) for v, val in bindings.items()}
    b = {v: val for v, val in b.items() if not (isinstance(val, Poly) and val == var(v))}
    if not b:
        return as_expr(p)
    if simultaneous:
        return _subs_once(p, b)
    _check_acyclic(b)
    out = _subs_once(p, b)
    while out.variables() & b.keys():
        out = _subs_once(out, b)
    return out


# ---------------------------------------------------------------------------
# Text serialization

_VAR_PATTERNS = [
    (re.compile(r"^t$"), lambda m: T),
    (re.compile(r"^q\[(\d+)\]_(\d+)$"), lambda m: jet(int(m[1]), int(m[2]))),
    (re.compile(r"^q(\d+)_(\d+)$"), lambda m: phase_q(int(m[1]), int(m[2]))),
    (re.compile(r"^p(\d+)_(\d+)$"), lambda m: phase_p(int(m[1]), int(m[2]))),
    (re.compile(r"^([A-Za-z]+)(\d+)_(\d+)$"), lambda m: param(m[1], int(m[2]), int(m[3]))),
    (re.compile(r"^([A-Za-z]+)_(\d+)$"), lambda m: param(m[1], 0, int(m[2]))),
    (re.compile(r"^([A-Za-z]+)$"), lambda m: param(m[1])),
]


def parse_var(s: str) -> VarId:
    for pat, build in _VAR_PATTERNS:
        m = pat.match(s)
        if m:
            return build(m)
    raise ValueError(f"bad variable name {s!r}")


def parse_poly(s: str) -> Poly:
    s = s.strip()
    if s == "0":
        return Poly._raw({})
    terms: dict = {}
    for part in s.split(" + "):
        coef_text, *factors = part.strip().split("*")
        mono = []
        for f in factors:
            name, _, e = f.partition("^")
            mono.append((parse_var(name), int(e) if e else 1))
        m = tuple(sorted(mono))
        terms[m] = terms.get(m, 0) + Fraction(coef_text)
    return Poly(terms)


def parse_expr(s: str) -> Expr:
    s = s.strip()
    if not s.startswith("["):
        return parse_poly(s)
    num_text, _, rest = s[1:].partition("] / ")
    out = Frac._make(parse_poly(num_text), {})
    for chunk in rest.split(" * "):
        fac_text, _, p = chunk.strip()[1:].partition("]^")
        out = out * factor_power(_alpha_of(parse_poly(fac_text)), -int(p))
    return out


def _alpha_of(fac: Poly) -> Poly:
    key = _factor_key(fac)
    if key is None:
        raise ValueError(f"not a linear factor: {fac.to_text()}")
    coef, alpha = key
    return Poly._raw({alpha: coef})


def to_text(x) -> str:
    return as_expr(x).to_text()
