"""Closed forms transcribed verbatim from the literature, including their
misprints.  Nothing here is used to compute results; these exist only to be
compared against independently computed expressions."""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .exact_algebra import (T, Expr, Poly, factor_power, invert, jet, param, phase_p, phase_q,
                            var)
from .model import ModelConfig

TAU, LAM, C = param("tau"), param("lambda"), param("c")


def _sgn(e: int) -> int:
    return -1 if e % 2 else 1


def _x(j: int, a: int) -> Poly:
    return var(param("x", j, a))


def _ff(a: int, b: int) -> Fraction:
    return Fraction(factorial(a), factorial(b))


# -- infinitesimal canonical actions, odd branch -------------------------------

def boost_action(cfg: ModelConfig, n: int, a: int) -> tuple[Poly, Poly]:
    N, t, m = cfg.N, var(T), cfg.mass
    dq = sum((_x(k + n, a) * t ** k * (_sgn(k + n - (N + 1) // 2) * _ff(k + n, k))
              for k in range(N - n + 1)), Poly())
    dp = sum((m * _x(k + N - n, a) * t ** k * (_sgn(k) * _ff(k + N - n, k))
              for k in range(n + 1)), Poly())
    return dq, dp


def _top_velocity(cfg, n, a):
    L = cfg.top
    if n == L:
        return var(phase_p(L, a)) * invert(cfg.mass)
    return var(phase_q(n + 1, a))


def time_shift_action(cfg: ModelConfig, n: int, a: int) -> tuple[Poly, Poly]:
    tau = var(TAU)
    dq = -tau * _top_velocity(cfg, n, a)
    dp = tau * var(phase_p(n - 1, a)) if n else Poly()
    return dq, dp


def dilation_action(cfg: ModelConfig, n: int, a: int) -> tuple[Poly, Poly]:
    lam, t, N = var(LAM), var(T), cfg.N
    dq = lam * (-(Fraction(N, 2) - n) * var(phase_q(n, a)) + t * _top_velocity(cfg, n, a))
    dp = lam * ((Fraction(N, 2) - n) * var(phase_p(n, a))
                - (t * var(phase_p(n - 1, a)) if n else Poly()))
    return dq, dp


def conformal_action(cfg: ModelConfig, n: int, a: int) -> tuple[Poly, Poly]:
    c, t, N, L, m = var(C), var(T), cfg.N, cfg.top, cfg.mass
    dq = 2 * t * (Fraction(N, 2) - n) * var(phase_q(n, a)) - t ** 2 * _top_velocity(cfg, n, a)
    if n:
        dq = dq + n * (N - n + 1) * var(phase_q(n - 1, a))
    if n == L:
        dp = m * Fraction(N + 1, 2) ** 2 * var(phase_q(L, a))
    else:
        dp = -(N - n) * (n + 1) * var(phase_p(n + 1, a))
    dp = dp - 2 * t * (Fraction(N, 2) - n) * var(phase_p(n, a))
    if n:
        dp = dp + t ** 2 * var(phase_p(n - 1, a))
    return c * dq, c * dp


def conformal_q_coefficient_rewritten(cfg: ModelConfig, n: int) -> int:
    """Coefficient of c*q_{n-1} in the rewritten conformal variation, as printed: n(N-n-1)."""
    return n * (cfg.N - n - 1)


# -- even branch, variations of q_0 --------------------------------------------

def even_q0_actions(cfg: ModelConfig, a: int) -> dict[str, Poly]:
    N, t = cfg.N, var(T)
    q0, q1 = var(phase_q(0, a)), var(phase_q(1, a))
    return {
        "c": sum((t ** j * _x(j, a) * _sgn(j - N // 2) for j in range(N + 1)), Poly()),
        # printed as -tau * dq_1/dt; the q_1 reading is used here
        "h": -var(TAU) * q1,
        "d": var(LAM) * (t * q1 - Fraction(N, 2) * q0),
        "k": var(C) * (t * q0 * N - t ** 2 * q1),
    }


# -- conformal jet transformation as printed -----------------------------------

def conformal_jets_printed(cfg: ModelConfig, n: int) -> list[Expr]:
    """Coefficients of q_{n-k}, k = 0..n, of the printed closed form:
    binom(n,k) (N+k-1)!/(N-1)! c^k / (1-ct)^(N+k)."""
    N, c = cfg.N, var(C)
    return [comb(n, k) * _ff(N + k - 1, N - 1) * c ** k * factor_power(-c, -(N + k))
            for k in range(n + 1)]


# -- Lagrangian side, odd branch -----------------------------------------------

def _jet_vec(cfg, n):
    return [var(jet(n, a)) for a in cfg.comps]


def _jdot(u, v):
    return sum((x * y for x, y in zip(u, v)), Poly())


def momenta_odd(cfg: ModelConfig) -> list[list[Poly]]:
    """p_n = m (-1)^{(N-1)/2-n} q^{(N-n)}."""
    N, L, m = cfg.N, cfg.top, cfg.mass
    return [[m * _sgn(L - n) * q for q in _jet_vec(cfg, N - n)] for n in range(L + 1)]


def hamiltonian_printed(cfg: ModelConfig) -> Poly:
    """Free Ostrogradski Hamiltonian as printed (first sum without the mass)."""
    N, L = cfg.N, cfg.top
    out = cfg.mass * Fraction(1, 2) * _jdot(_jet_vec(cfg, L + 1), _jet_vec(cfg, L + 1))
    for n in range(L):
        out = out + _sgn(L - n) * _jdot(_jet_vec(cfg, N - n), _jet_vec(cfg, n + 1))
    return out


def boost_charge_printed(cfg: ModelConfig, k: int, a: int) -> Poly:
    """m sum_n (-t)^{k-n} k!/(k-n)! q^{(N-k)}: the derivative index as printed."""
    N, t, m = cfg.N, var(T), cfg.mass
    return sum((m * (-t) ** (k - n) * _ff(k, k - n) * var(jet(N - k, a)) for n in range(k + 1)), Poly())


def boost_charge_normative(cfg: ModelConfig, k: int, a: int) -> Poly:
    """Same sum with q^{(N-n)} inside the sum."""
    N, t, m = cfg.N, var(T), cfg.mass
    return sum((m * (-t) ** (k - n) * _ff(k, k - n) * var(jet(N - n, a)) for n in range(k + 1)), Poly())


def dilation_charge(cfg: ModelConfig, H: Poly) -> Poly:
    N, L, m, t = cfg.N, cfg.top, cfg.mass, var(T)
    out = -t * H
    for k in range(L + 1):
        out = out + m * _sgn(L - k) * (Fraction(N, 2) - k) * _jdot(_jet_vec(cfg, N - k), _jet_vec(cfg, k))
    return out


def conformal_charge(cfg: ModelConfig, H: Poly, printed: bool) -> Poly:
    """t^2 H - 2t D(t) + K(t); ``printed`` keeps the index q^{(N-j+1)},
    otherwise q^{(N-j-1)}."""
    N, L, m, t = cfg.N, cfg.top, cfg.mass, var(T)
    d_t = dilation_charge(cfg, H) + t * H
    k_t = m * Fraction(1, 2) * Fraction(N + 1, 2) ** 2 * _jdot(_jet_vec(cfg, L), _jet_vec(cfg, L))
    for j in range(L):
        other = N - j + 1 if printed else N - j - 1
        k_t = k_t + m * (j + 1) * (N - j) * _sgn(L - j) * _jdot(_jet_vec(cfg, j), _jet_vec(cfg, other))
    return t ** 2 * H - 2 * t * d_t + k_t


def angular_momentum(cfg: ModelConfig) -> list[Poly]:
    N, L, m = cfg.N, cfg.top, cfg.mass
    out = [Poly() for _ in range(3)]
    for k in range(L + 1):
        u, v = _jet_vec(cfg, k), _jet_vec(cfg, N - k)
        cr = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]]
        out = [o + m * _sgn(L - k) * x for o, x in zip(out, cr)]
    return out


def boost_delta_f(cfg: ModelConfig, k: int) -> Poly:
    """Infinitesimal boundary term of the level-k boost, dotted into x_k."""
    N, R, t, m = cfg.N, cfg.order, var(T), cfg.mass
    out = Poly()
    for n in range(R, k + 1):
        for a in cfg.comps:
            out = out + m * (-t) ** (k - n) * _ff(k, k - n) * var(jet(N - n, a)) * _x(k, a)
    return out


def conformal_delta_f(cfg: ModelConfig) -> Poly:
    L = cfg.top
    q = _jet_vec(cfg, L)
    return cfg.mass * Fraction(1, 2) * Fraction(cfg.N + 1, 2) ** 2 * _jdot(q, q)


# -- finite boundary functions and the coefficient recurrence --------------------

def boost_boundary(cfg: ModelConfig, k: int) -> Poly:
    """Finite boundary function of the level-k boost q -> q + s t^k x_k."""
    N, R, t, m = cfg.N, cfg.order, var(T), cfg.mass
    if k < R:
        return Poly()
    x2 = sum((_x(k, a) ** 2 for a in cfg.comps), Poly())
    quad = m * Fraction(1, 2) * _ff(k, k - R) ** 2 * Fraction(1, 2 * k - N) * t ** (2 * k - N) * x2
    return boost_delta_f(cfg, k) + quad


def recurrence_rhs_printed(cfg: ModelConfig, l: int, lp: int) -> Fraction:
    """(N-l)!(N-l')! / (l! l'! ((N+1)/2-l) ((N+1)/2-l')!) with the first factor not a factorial."""
    N, R = cfg.N, cfg.order
    return Fraction(factorial(N - l) * factorial(N - lp),
                    factorial(l) * factorial(lp) * (R - l) * factorial(R - lp))


def conformal_difference_printed(cfg: ModelConfig, normalized: bool) -> Expr | None:
    """Double-sum form of L' dt'/dt - L for the finite conformal map.

    ``normalized=False`` keeps the printed reading (no m/2 prefactor, the
    first ((N+1)/2 - l) not a factorial) and returns None when that reading
    divides by zero; ``normalized=True`` multiplies by m/2 and reads both
    factors as factorials."""
    N, R, c = cfg.N, cfg.order, var(C)
    out: Expr = Poly()
    for l in range(R + 1):
        for lp in range(R + 1):
            if l + lp >= N + 1:
                continue
            first = factorial(R - l) if normalized else (R - l)
            if first == 0:
                return None
            coef = Fraction(R ** 2 * factorial(N - l) * factorial(N - lp),
                            factorial(l) * factorial(lp) * first * factorial(R - lp))
            e = N + 1 - l - lp
            qq = _jdot(_jet_vec(cfg, l), _jet_vec(cfg, lp))
            out = out + coef * c ** e * factor_power(-c, -e) * qq
    if normalized:
        out = out * (cfg.mass * Fraction(1, 2))
    return out


def trinomial(n: int, l1: int, l2: int) -> int:
    """n! / (l1! l2! (n-l1-l2)!), zero when any index is negative."""
    if l1 < 0 or l2 < 0 or n - l1 - l2 < 0 or n < 0:
        return 0
    return factorial(n) // (factorial(l1) * factorial(l2) * factorial(n - l1 - l2))

