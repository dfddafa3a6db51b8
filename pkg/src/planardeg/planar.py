"""Planar graphs: the full network / 3-connected-core pipeline.

Everything is driven by closed forms written once over generic ring elements
(mpmath scalars, dual numbers, or truncated series), so the same expressions
serve scalar evaluation, singular-expansion engines and w-series extraction:

* ``T(x,z,w)`` for edge-rooted 3-connected cores (from maps3's root-valency
  machinery), with its primitive ``integral_T`` in elementary terms,
* the network equations for ``E(x,y)`` and ``D(x,y,w)``,
* the closed form of ``B(x,y,w)`` for rooted 2-connected planar graphs,
* singular expansions at z = tau(x) resp. x = R(y), composed through the
  critical substitution z -> E(x,y) (the square-root data of u,v drives
  half-integer powers; the composition factor alpha = -(E2 + R tau'(R))/E0
  converts Z-powers into X-powers).

The distribution formulas are the X^3-coefficient ratios (2-connected), the
two-term critical-composition limit (connected), and T3 ratios (3-connected),
each evaluated as a w-series and tail-completed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .numerics import Real, SolverConfig, solve_scalar, differentiate
from .series import Series, Dual, newton_solve, fixed_point
from . import maps3


class BranchLost(Exception):
    pass


class SaddleOutOfRange(Exception):
    pass


# ---------------------------------------------------------------------------
# generic ring helpers: the closed forms below run on mpf, Dual, or Series
# ---------------------------------------------------------------------------

def _sqrt(a):
    return a.sqrt() if hasattr(a, "sqrt") else mpmath.sqrt(a)


def _log(a):
    return a.log() if hasattr(a, "log") else mpmath.log(a)


def _exp(a):
    return a.exp() if hasattr(a, "exp") else mpmath.exp(a)


def u0_of_z(z):
    """The branch value u at x = r(z): -1/3 + sqrt(4/9 + 1/(3z))."""
    return _sqrt((4 * z + 3) / (9 * z)) - mp.mpf(1) / 3


def r_of_z(z):
    """Singularity x = r(z) of the map core in the vertex variable."""
    ut = u0_of_z(z)
    return ut / (z * (1 + z * (1 + ut) ** 2) ** 2)


def r_prime(z):
    """dr/dz, by forward-mode differentiation of the closed form."""
    d = Dual.variable(mp.mpf(z))
    return r_of_z(d).der


def tau_of_x(x, digits=30):
    """Functional inverse of r: the singularity of z -> u(x,z)."""
    cfg = SolverConfig(target_digits=digits, max_iterations=400,
                       bracket=(mp.mpf("1e-6"), mp.mpf("1e6")))
    return solve_scalar(lambda z: r_of_z(z.value) - x, cfg).value


def u0_of_x(x, digits=30):
    """Root u > 1/3 of x = (1+u)(3u-1)^3 / (16u)."""
    cfg = SolverConfig(target_digits=digits, max_iterations=400,
                       bracket=(mp.mpf(1) / 3 + mp.mpf("1e-12"), mp.mpf(30)))
    return solve_scalar(
        lambda u: (1 + u.value) * (3 * u.value - 1) ** 3 / (16 * u.value) - x,
        cfg).value


# ---------------------------------------------------------------------------
# singular expansions of u and v (closed-form tables)
# ---------------------------------------------------------------------------

def uv_expansions_fixed_x(u):
    """(u_0..u_3, v_0..v_3) at fixed x, Z = sqrt(1 - z/tau(x)), u = u0(x)."""
    s = _sqrt(2 * u * (u + 1))
    u0 = u
    u1 = -s
    u2 = (1 + u) * (7 * u + 1) / (2 * (1 + 3 * u))
    u3 = -(1 + u) * (67 * u ** 2 + 50 * u + 11) * u / (4 * (1 + 3 * u) ** 2 * s)
    v0 = (1 + u) / (3 * u - 1)
    v1 = -2 * s / (3 * u - 1)
    v2 = 2 * u * (3 + 5 * u) / ((3 * u - 1) * (1 + 3 * u))
    # sqrt(2) u(1+u)/sqrt(u(1+u)) collapses onto s = sqrt(2u(u+1))
    v3 = -s * (79 * u ** 2 + 42 * u + 7) / (4 * (1 + 3 * u) ** 2 * (3 * u - 1))
    return (u0, u1, u2, u3), (v0, v1, v2, v3)


def uv_expansions_fixed_z(ut):
    """(u~_0..u~_3, v~_0..v~_3) at fixed z, X = sqrt(1 - x/r(z)), ut = u~0(z)."""
    s1 = _sqrt(1 + ut)
    s3 = _sqrt(1 + 3 * ut)
    u0 = ut
    u1 = -2 * ut * s1 / s3
    u2 = 2 * (1 + ut) * ut * (2 * ut + 1) / (1 + 3 * ut) ** 2
    u3 = -2 * ut * (10 * ut ** 3 + 11 * ut ** 2 + 5 * ut + 1) * s1 / \
        ((1 + 3 * ut) ** 3 * s3)
    v0 = (1 + ut) / (3 * ut - 1)
    v1 = -4 * ut * s1 / ((3 * ut - 1) * s3)
    v2 = 4 * ut * (5 * ut ** 2 + 4 * ut + 1) / ((3 * ut - 1) * (1 + 3 * ut) ** 2)
    v3 = -4 * ut * (2 * ut + 1) * (11 * ut ** 2 + 5 * ut + 1) * s1 / \
        ((3 * ut - 1) * (1 + 3 * ut) ** 3 * s3)
    return (u0, u1, u2, u3), (v0, v1, v2, v3)


def uv_expansions(at, x=None, z=None, digits=30):
    """Closed-form singular expansion coefficients of (u, v).

    ``at="fixed_x"`` expands in Z = sqrt(1-z/tau(x)); ``at="fixed_z"`` in
    X = sqrt(1-x/r(z))."""
    with mp.workdps(2 * digits + 10):
        if at == "fixed_x":
            return uv_expansions_fixed_x(u0_of_x(mp.mpf(x), digits))
        if at == "fixed_z":
            return uv_expansions_fixed_z(u0_of_z(mp.mpf(z)))
    raise ValueError(at)


# ---------------------------------------------------------------------------
# T and its integral, ring-generically (u, v supplied by the caller)
# ---------------------------------------------------------------------------

def T_core(x, z, w, u, v):
    # the 1/w of the map-root term cancels one power of the w^2 prefactor;
    # written multiplied out so series-in-w arguments divide safely
    disc = maps3.w2_poly(u, v, w)
    xzzz = x ** 2 * z ** 2
    part_a = xzzz * w ** 2 / 2 * (1 / (1 + w * z) + 1 / (1 + x * z) - 1)
    part_b = (xzzz * w / 2) * (u + 1) ** 2 \
        * (maps3.w1_poly(u, v, w) - (u - w + 1) * _sqrt(disc)) \
        / (2 * (v * w + u ** 2 + 2 * u + 1) * (1 + u + v) ** 3)
    return part_a - part_b


def integral_core(x, z, w, u, v):
    """int_0^w T(x,z,t)/t dt in elementary closed form (branch-safe ratios)."""
    a = u ** 2 * v ** 2
    b = -2 * u * v * (2 * u ** 2 * v + 6 * u * v + 2 * v ** 3 + 3 * u * v ** 2
                      + 5 * v ** 2 + u ** 2 + 2 * u + 4 * v + 1)
    C1 = u + 2 * v + 1 + v ** 2
    c = (u + 1) ** 2 * C1 ** 2
    m = (u + 1) ** 2
    K = (u + 1) * (u + v + 1)
    sa = u * v
    A2 = a / v ** 2
    A1 = (b * v - 2 * a * m) / v ** 2
    A0 = (a * m ** 2 - b * m * v + c * v ** 2) / v ** 2
    sA0 = _sqrt(A0)
    sA2 = _sqrt(A2)

    def q_of(t):
        return (a * t + b) * t + c

    def pieces(t):
        s = _sqrt(q_of(t))
        L = v * t + m
        T1 = (2 * a * t + b) * s / (4 * a)
        T1a = 2 * sa * s + 2 * a * t + b
        I1a = 2 * sA2 * s + 2 * A2 * L + A1
        I0a = (2 * A0 + A1 * L + 2 * sA0 * s) / L
        return s, T1, T1a, I1a, I0a

    zero = w * 0
    s_w, T1_w, T1a_w, I1a_w, I0a_w = pieces(w)
    s_0, T1_0, T1a_0, I1a_0, I0a_0 = pieces(zero)
    disc = (4 * a * c - b * b) / (8 * a * sa)
    T1def = (T1_w - T1_0) + disc * _log(T1a_w / T1a_0)
    I1def = _log(I1a_w / I1a_0) / sA2
    I0def = -(_log(I0a_w / I0a_0)) / sA0
    T2def = (s_w - s_0 + A1 * I1def / 2 + A0 * I0def) / v
    Jalg = (K * T2def - T1def) / v
    # rational part of the integrand, polynomial-divided by L
    beta = (1 + 4 * v + 3 * u * v ** 2 + 5 * v ** 2 + u ** 2 + 2 * u
            + 2 * v ** 3 + 3 * u ** 2 * v + 7 * u * v)
    gamma = m * C1
    e = -(beta + u * m) / v
    f = -gamma - e * m
    Rat = u * w ** 2 / 2 + e * w + (f / v) * _log((v * w + m) / m)
    J = -(Rat + Jalg) / (2 * (v + 1) ** 2)
    part2 = -(x * u * v / 2) * J / (1 + u + v) ** 3
    xz = x * z
    lg = _log(1 + w * z)
    num1 = (z ** 3 * x * w ** 2 - 2 * w * z - 2 * xz * z * w + (2 + 2 * xz) * lg)
    part1 = -(x ** 2) * num1 / (4 * (1 + xz))
    return part1 + part2


def integral_T(x, z, w, digits=30):
    """The closed-form primitive, evaluated with (u,v) = solve_RS(xz, z)."""
    with mp.workdps(2 * digits + 10):
        u, v = maps3.solve_RS(mp.mpf(x) * z, mp.mpf(z))
        return integral_core(mp.mpf(x), mp.mpf(z), mp.mpf(w), u, v)


# ---------------------------------------------------------------------------
# network scalars
# ---------------------------------------------------------------------------

_TINY = lambda: mp.mpf(10) ** (-mp.dps + 12)


def _newton3(F, t, maxit=200):
    h = mp.mpf(10) ** (-(mp.dps * 2) // 5)
    for _ in range(maxit):
        fx = F(t)
        Jc = []
        for j in range(3):
            tp = list(t)
            tm = list(t)
            tp[j] += h
            tm[j] -= h
            fp, fm = F(tp), F(tm)
            Jc.append([(fp[i] - fm[i]) / (2 * h) for i in range(3)])
        A = [[Jc[j][i] for j in range(3)] + [fx[i]] for i in range(3)]
        for col in range(3):
            piv = max(range(col, 3), key=lambda r: abs(A[r][col]))
            A[col], A[piv] = A[piv], A[col]
            for r in range(col + 1, 3):
                fac = A[r][col] / A[col][col]
                for cc in range(col, 4):
                    A[r][cc] -= fac * A[col][cc]
        dx = [mp.mpf(0)] * 3
        for r in (2, 1, 0):
            ss = A[r][3] - sum(A[r][cq] * dx[cq] for cq in range(r + 1, 3))
            dx[r] = ss / A[r][r]
        t = [t[i] - dx[i] for i in range(3)]
        if sum(abs(d) for d in dx) < _TINY():
            return t
    return t


def E_planar(x, y, seed=None, steps=None):
    """Solve the planar network equation for E(x,y) jointly with (u,v)."""
    if seed is None:
        E, u, v = mp.mpf(y), mp.mpf(0), mp.mpf(0)
        steps = steps or 48
    else:
        E, u, v = seed
        steps = steps or 1

    for i in range(1, steps + 1):
        xx = mp.mpf(x) * i / steps

        def F(t):
            E_, u_, v_ = t
            That = T_core(xx, E_, mp.mpf(1), u_, v_)
            g1 = mpmath.log((1 + E_) / (1 + y)) - xx * E_ ** 2 / (1 + xx * E_) \
                - That / (xx ** 2 * E_)
            g2 = u_ - xx * E_ * (1 + v_) ** 2
            g3 = v_ - E_ * (1 + u_) ** 2
            return (g1, g2, g3)

        E, u, v = _newton3(F, [E, u, v])
    return E, (u, v)


def D_planar(x, y, w, E, uvE, seed=None, steps=None):
    """D(x,y,w) on the D(x,y,0)=0 branch at fixed x, by w-continuation."""
    D = seed if seed is not None else mp.mpf(y) * w * mp.mpf("0.8")
    steps = steps or (24 if seed is None else 4)
    h = mp.mpf(10) ** (-(mp.dps * 2) // 5)
    for i in range(1, steps + 1):
        ww = mp.mpf(w) * i / steps

        def G(D_):
            return (mpmath.log((1 + D_) / (1 + y * ww)) - x * E * D_ / (1 + x * E)
                    - T_core(x, E, D_ / E, *uvE) / (x ** 2 * D_))

        for _ in range(200):
            g = G(D)
            d = (G(D + h) - G(D - h)) / (2 * h)
            step = g / d
            D -= step
            if abs(step) < _TINY():
                break
    return D


def broot_planar(x, y, w, digits=30):
    """B(x,y,w) by the closed form (network solves + integral primitive)."""
    with mp.workdps(2 * digits + 10):
        x, y, w = mp.mpf(x), mp.mpf(y), mp.mpf(w)
        E, uv = E_planar(x, y)
        D = D_planar(x, y, w, E, uv)
        return _B_closed(x, y, w, E, uv, D)


def _B_closed(x, y, w, E, uv, D):
    u, v = uv
    TD = T_core(x, E, D / E, u, v)
    ID = integral_core(x, E, D / E, u, v)
    return (x * (D - x * E * D / (1 + x * E) * (1 + D / 2))
            - (1 + D) / (x * D) * TD + ID / x)


# ---------------------------------------------------------------------------
# t(y) parametrization and critical composition point
# ---------------------------------------------------------------------------

def y_of_t(t):
    """Edge weight reaching criticality with parameter t in (0,1).

    The extracted source shows (1-2t) in the numerator; (1+2t) is required
    to reproduce the stated t(1) and the R(y) parametrization, and is used.
    """
    return ((1 + 2 * t) / ((1 + 3 * t) * (1 - t))
            * mpmath.exp(-(t ** 2 * (1 - t) * (18 + 36 * t + 5 * t ** 2))
                         / (2 * (3 + t) * (1 + 2 * t) * (1 + 3 * t) ** 2)) - 1)


def t_of_y(y, digits=30):
    cfg = SolverConfig(target_digits=digits, max_iterations=600,
                       bracket=(mp.mpf("0.02"), mp.mpf("0.98")))
    return solve_scalar(lambda t: y_of_t(t.value) - y, cfg).value


def _crit_eq(u, y):
    """Residual of the E-equation along the criticality parametrization."""
    E = 1 / ((1 + u) * (3 * u - 1))
    v = (1 + u) / (3 * u - 1)
    x = u / (E * (1 + v) ** 2)
    That = T_core(x, E, mp.mpf(1), u, v)
    return mpmath.log((1 + E) / (1 + y)) - x * E ** 2 / (1 + x * E) \
        - That / (x ** 2 * E)


def critical_point(y, digits=30):
    """(R(y), E0(y), u*, v*) from the critical-composition system.

    The system couples the E-equation with x = r(E); on the criticality
    curve both are parametrized by u, leaving one scalar equation.  The root
    consistent with the regular E-branch is selected; the t(y)
    parametrization is asserted as an independent cross-check."""
    us = [mp.mpf(1) / 3 + mp.mpf(k) / 200 for k in range(1, 134)]
    vals = [_crit_eq(uu, y) for uu in us]
    roots = []
    for i in range(len(us) - 1):
        if (vals[i] > 0) != (vals[i + 1] > 0):
            lo, hi = us[i], us[i + 1]
            flo = vals[i]
            for _ in range(int(mp.dps * 3.5)):
                mid = (lo + hi) / 2
                fm = _crit_eq(mid, y)
                if (fm > 0) == (flo > 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            roots.append((lo + hi) / 2)
    best = None
    for u in roots:
        E = 1 / ((1 + u) * (3 * u - 1))
        v = (1 + u) / (3 * u - 1)
        x = u / (E * (1 + v) ** 2)
        with mp.workdps(25):  # branch identification only needs low precision
            Echk, _ = E_planar(x * (1 - mp.mpf(10) ** (-8)), y, steps=None)
        if abs(Echk - E) < mp.mpf("0.05") * abs(E):
            best = (x, E, u, v)
    if best is None:
        raise BranchLost(f"no critical root matches the regular branch at y={y}")
    t = t_of_y(y, digits)
    assert abs(3 * t * best[2] - 1) < mp.mpf(10) ** (-digits + 6), \
        "t-parametrization cross-check failed"
    return best


_crit_cache = {}


def _crit_cached(y, dps):
    key = (mpmath.nstr(mp.mpf(y), 30), dps)
    if key not in _crit_cache:
        _crit_cache[key] = critical_point(y, digits=(dps - 10) // 2)
    return _crit_cache[key]


def R_of_y(y, digits=30):
    with mp.workdps(2 * digits + 10):
        return _crit_cached(y, mp.dps)[0]


def _D0_scalar(y, w, R, E0, uv, steps=24):
    D = mp.mpf(y) * w * mp.mpf("0.8")
    h = mp.mpf(10) ** (-(mp.dps * 2) // 5)
    for i in range(1, steps + 1):
        ww = mp.mpf(w) * i / steps

        def G(D_):
            return (mpmath.log((1 + D_) / (1 + y * ww)) - R * E0 * D_ / (1 + R * E0)
                    - T_core(R, E0, D_ / E0, *uv) / (R ** 2 * D_))

        for _ in range(200):
            g = G(D)
            d = (G(D + h) - G(D - h)) / (2 * h)
            D -= g / d
            if abs(g) < _TINY():
                break
    return D


def B0_of(y, w, digits=30):
    """B_0(y,w): the value of B at the singular point x = R(y)."""
    with mp.workdps(2 * digits + 10):
        R, E0, u, v = _crit_cached(y, mp.dps)
        D0 = E0 if w == 1 else _D0_scalar(y, w, R, E0, (u, v))
        return _B_closed(R, mp.mpf(y), mp.mpf(w), E0, (u, v), D0)


def rho_of_y(y, digits=30):
    """rho(y) = R(y) exp(-B_0(y,1)): radius of connected planar graphs."""
    with mp.workdps(2 * digits + 10):
        R, E0, u, v = _crit_cached(y, mp.dps)
        B0 = _B_closed(R, mp.mpf(y), mp.mpf(1), E0, (u, v), E0)
        return R * mpmath.exp(-B0)


# ---------------------------------------------------------------------------
# appendix t-form of D0 and the printed D2, D3 (verified against fits)
# ---------------------------------------------------------------------------

def _D0_equation_parts(t, D0, y, w):
    S = (D0 * t - D0 + t) * (D0 * (t - 1) ** 3 + t * (t + 3) ** 2)
    expo = (_sqrt(S) * (D0 * (t - 1) + t) / (4 * (3 * t + 1) * (D0 + 1))
            - (D0 ** 2 * (t ** 4 - 12 * t ** 2 + 20 * t - 9)
               + D0 * (2 * t ** 4 + 6 * t ** 3 - 6 * t ** 2 + 10 * t - 12)
               + t ** 4 + 6 * t ** 3 + 9 * t ** 2)
            / (4 * (t + 3) * (D0 + 1) * (3 * t + 1)))
    return (1 + y * w) * _exp(expo) - 1 - D0


def D0_appendix_scalar(y, w, t, steps=24):
    """D0(y,w) from the t-form implicit equation, continued from w=0."""
    D0 = mp.mpf(y) * w * mp.mpf("0.8")
    for i in range(1, steps + 1):
        ww = mp.mpf(w) * i / steps
        for _ in range(200):
            d = Dual.variable(D0)
            F = _D0_equation_parts(t, d, mp.mpf(y), ww)
            step = F.val / F.der
            D0 -= step
            if abs(step) < _TINY():
                break
    return D0


def D0_series_w(y, t, K):
    """w-series of D0(y, .) by Newton on the t-form equation."""
    w = Series.identity("w", K, like=mp.mpf(0))

    def f(D):
        return _D0_equation_parts(t, Dual(D, D.zeros_like()), mp.mpf(y), w).val

    def df(D):
        return _D0_equation_parts(t, Dual.variable(D), mp.mpf(y), w).der

    seed = Series("w", [mp.mpf(0)] * (K + 1))
    return newton_solve(f, df, seed)


def D23_printed(t, D0):
    """Printed closed forms for D2, D3 in terms of t and D0 (any ring)."""
    S = (D0 * t - D0 + t) * (D0 * (t - 1) ** 3 + t * (t + 3) ** 2)
    sS = _sqrt(S)
    quint = 17 * t ** 5 + 237 * t ** 4 + 1155 * t ** 3 + 2527 * t ** 2 + 1808 * t + 400
    beta = 3 * t * (1 + t) * quint
    S21 = (-D0 ** 2 * (t - 1) ** 4 * (t + 3)
           * (11 * t ** 5 + 102 * t ** 4 + 411 * t ** 3 + 588 * t ** 2 + 352 * t + 72)
           - D0 * t * (t - 1) * (t + 3)
           * (22 * t ** 7 + 231 * t ** 6 + 1059 * t ** 5 + 2277 * t ** 4
              + 2995 * t ** 3 + 3272 * t ** 2 + 2000 * t + 432)
           - t ** 2 * (t + 3) ** 3
           * (11 * t ** 5 + 85 * t ** 4 + 252 * t ** 3 + 108 * t ** 2 - 48 * t - 24))
    S22 = (D0 * (t - 1)
           * (11 * t ** 7 + 124 * t ** 6 + 582 * t ** 5 + 968 * t ** 4
              - 977 * t ** 3 - 4828 * t ** 2 - 4112 * t - 984)
           + t * (t + 3) ** 2
           * (11 * t ** 5 + 85 * t ** 4 + 252 * t ** 3 + 108 * t ** 2 - 48 * t - 24))
    S23 = -(t + 3) * (D0 * t - D0 + t) * (
        D0 ** 2 * (t - 1) ** 4 + 2 * D0 * (t - 1) * (t ** 3 - t ** 2 + 5 * t - 1)
        + t * (t ** 3 - 3 * t - 14))
    S24 = (D0 ** 2 * (t ** 2 + 2 * t - 9) * (t - 1) ** 2
           + D0 * (2 * t ** 4 - 12 * t ** 2 + 80 * t - 6)
           + t * (t ** 3 - 3 * t + 50))
    D2 = (4 * (D0 + 1) ** 2 * (t - 1) * (S21 + S22 * sS)) / (quint * (S23 + S24 * sS))
    S31 = -5 * t ** 5 + 6 * t ** 4 + 135 * t ** 3 + 664 * t ** 2 + 592 * t + 144
    S32 = (D0 ** 3 * (81 * t ** 11 + 135 * t ** 10 - 828 * t ** 9 - 180 * t ** 8
                      + 1982 * t ** 7 + 1090 * t ** 6 - 5196 * t ** 5 + 2108 * t ** 4
                      + 2425 * t ** 3 - 1617 * t ** 2 - 256 * t + 256)
           + D0 ** 2 * (243 * t ** 11 + 1313 * t ** 10 + 1681 * t ** 9 - 51 * t ** 8
                        - 5269 * t ** 7 - 7325 * t ** 6 + 2571 * t ** 5
                        + 10271 * t ** 4 + 1846 * t ** 3 - 3888 * t ** 2 - 1392 * t)
           + D0 * (243 * t ** 11 + 2221 * t ** 10 + 8135 * t ** 9 + 15609 * t ** 8
                   + 12953 * t ** 7 - 3929 * t ** 6 - 12627 * t ** 5 - 13293 * t ** 4
                   - 7680 * t ** 3 - 1632 * t ** 2)
           + 81 * t ** 11 + 1043 * t ** 10 + 5626 * t ** 9 + 16806 * t ** 8
           + 30165 * t ** 7 + 30663 * t ** 6 + 13344 * t ** 5 + 1008 * t ** 4
           - 432 * t ** 3)
    S33 = (D0 * (81 * t ** 8 + 378 * t ** 7 + 63 * t ** 6 - 1044 * t ** 5
                 + 1087 * t ** 4 - 646 * t ** 3 - 687 * t ** 2 + 512 * t + 256)
           + 81 * t ** 8 + 800 * t ** 7 + 3226 * t ** 6 + 7128 * t ** 5
           + 8781 * t ** 4 + 4320 * t ** 3 + 384 * t ** 2 - 144 * t)
    S34 = (D0 ** 2 * (t ** 4 - 12 * t ** 2 + 20 * t - 9)
           + D0 * (2 * t ** 4 - 12 * t ** 2 + 80 * t - 6)
           + t ** 4 - 3 * t ** 2 + 50 * t)
    S35 = (D0 ** 2 * (t ** 4 - 4 * t ** 3 + 6 * t ** 2 - 4 * t + 1)
           + D0 * (2 * t ** 4 - 4 * t ** 3 + 12 * t ** 2 - 12 * t + 2)
           + t ** 4 - 3 * t ** 2 - 14 * t)
    # S31 and beta depend on t only, hence stay scalar
    s31 = mpmath.sqrt(S31)
    beta52 = beta ** 2 * mpmath.sqrt(beta)
    D3 = (24 * (t + 3) * (D0 + 1) ** 2 * (t - 1) * t ** 2 * (t + 1) ** 2
          * (S31 * s31) * (S32 - S33 * (D0 * t - D0 + t) * sS)) / \
        (beta52 * (D0 * t - D0 + t)
         * (S34 * sS - (t + 3) * (D0 * t - D0 + t) * S35))
    return D2, D3


def D_singular_coeffs(y, w, digits=30):
    """(D0, D2, D3) at (y, w) via the t-form equation and printed closed
    forms (both independently validated against sampling fits)."""
    with mp.workdps(2 * digits + 10):
        t = t_of_y(y, digits)
        D0 = D0_appendix_scalar(y, mp.mpf(w), t)
        D2, D3 = D23_printed(t, D0)
        return D0, D2, D3


def E_coeffs(y, digits=30):
    """(E0, E2, E3): the w=1 values of the D-coefficients."""
    return D_singular_coeffs(y, 1, digits)


# ---------------------------------------------------------------------------
# the X-series composition engine for B-coefficients
# ---------------------------------------------------------------------------

def _lift(val, K):
    """Lift a scalar to a w-series constant if K is not None."""
    return Series.constant("w", mp.mpf(val), K) if K is not None else mp.mpf(val)


def B_engine(y, w, digits=30, K=None):
    """(B0, B2, B3) at (y, w): scalar w (K=None) or w-series of order K.

    Composes x = R(1-X^2), E = E0+E2 X^2+E3 X^3, D = D0+D2 X^2+D3 X^3 and the
    branch data of (u, v) through the closed form of B, entirely in truncated
    X-series whose coefficients are scalars or w-series."""
    with mp.workdps(2 * digits + 10):
        R, E0, ustar, vstar = _crit_cached(y, mp.dps)
        t = t_of_y(y, digits)
        E0a, E2, E3 = E_coeffs(y, digits)
        assert abs(E0a - E0) < mp.mpf(10) ** (-digits)
        if K is None:
            D0, D2, D3 = D_singular_coeffs(y, w, digits)
            wv = mp.mpf(w)
        else:
            D0 = D0_series_w(y, t, K)
            D2, D3 = D23_printed(t, D0)
            wv = Series.identity("w", K, like=mp.mpf(0))

        NX = 4

        def XS(coeffs):
            """X-series from a coefficient list (scalars or w-series)."""
            if K is None:
                out = [mp.mpf(c) for c in coeffs]
                pad = mp.mpf(0)
            else:
                out = [c if isinstance(c, Series) else _lift(c, K) for c in coeffs]
                pad = _lift(0, K)
            return Series("X", out + [pad] * (NX + 1 - len(out)))

        x = XS([R, 0, -R])
        E = XS([E0, 0, E2, E3])
        D = XS([D0, 0, D2, D3])
        one = XS([1])
        # Z^2 = 1 - E/tau(x); on the critical branch tau(x) is r^{-1}, so the
        # ratio is evaluated as x / r(E)
        Xz2 = one - x / r_of_z(E)
        zero_c = Xz2.coeffs[0] * 0
        for cc in Xz2.coeffs[:2]:
            top = abs(cc) if K is None else max(abs(t2) for t2 in cc.coeffs)
            assert top < mp.mpf(10) ** (-digits + 6), "Xz^2 must have valuation 2"
        shifted = Series("X", list(Xz2.coeffs[2:]) + [zero_c, zero_c])
        Xz = Series.identity("X", NX, like=zero_c) * shifted.sqrt()
        ut = u0_of_z(E)
        (u0s, u1s, u2s, u3s), (v0s, v1s, v2s, v3s) = uv_expansions_fixed_z(ut)
        u = u0s + u1s * Xz + u2s * Xz ** 2 + u3s * Xz ** 3
        v = v0s + v1s * Xz + v2s * Xz ** 2 + v3s * Xz ** 3
        wp = D / E
        II = integral_core(x, E, wp, u, v)
        xE = x * E
        G = xE * D * (one + D / 2) / (one + xE)
        Lam = (one + D).log() - _lift_logyw(y, wv, one) - xE * D / (one + xE)
        B = x * (D - G) - x * (one + D) * Lam + II / x
        b1 = B.coeffs[1]
        tops = abs(b1) if K is None else max(abs(t2) for t2 in b1.coeffs)
        assert tops < mp.mpf(10) ** (-digits + 6), "odd X coefficient must vanish"
        return B.coeffs[0], B.coeffs[2], B.coeffs[3]


def _lift_logyw(y, wv, template):
    """log(1 + y*w) lifted to the X-series coefficient domain."""
    if isinstance(wv, Series):
        val = (1 + mp.mpf(y) * wv).log()
    else:
        val = mpmath.log(1 + mp.mpf(y) * wv)
    return template.zeros_like() + val


def alpha_of_y(y, digits=30):
    """Composition factor alpha = -(E2 + R/r'(E0))/E0 turning Z^2 into X^2."""
    with mp.workdps(2 * digits + 10):
        R, E0, _, _ = _crit_cached(y, mp.dps)
        _, E2, _ = E_coeffs(y, digits)
        taup = 1 / r_prime(E0)
        return -(E2 + R * taup) / E0


# ---------------------------------------------------------------------------
# Z-direction engine for T and its integral at fixed x
# ---------------------------------------------------------------------------

def _Z_engine(func, x, w, digits=30, K=None, NZ=4):
    """Singular Z-expansion of func(x, z, w, u, v) at z = tau(x), fixed x.

    ``func`` is T_core or integral_core; w may be scalar (K=None) or the
    identity w-series of order K.  Returns the Z-series."""
    x = mp.mpf(x)
    tau = tau_of_x(x, digits)
    u0 = u0_of_z(tau)
    (u0s, u1s, u2s, u3s), (v0s, v1s, v2s, v3s) = uv_expansions_fixed_x(u0)

    if K is None:
        def lift(c):
            return mp.mpf(c)
        wv = mp.mpf(w)
    else:
        def lift(c):
            return Series.constant("w", mp.mpf(c), K)
        wv = Series.identity("w", K, like=mp.mpf(0))

    def ZS(coeffs):
        out = [lift(c) if not isinstance(c, Series) or K is None else c
               for c in coeffs]
        if K is not None:
            out = [c if isinstance(c, Series) else lift(c) for c in coeffs]
        return Series("Z", out + [lift(0)] * (NZ + 1 - len(out)))

    Z = ZS([0, 1])
    xs = ZS([x])
    zs = ZS([tau, 0, -tau])
    ws = Series("Z", [wv] + [lift(0)] * NZ)
    u = ZS([u0s, u1s, u2s, u3s])
    v = ZS([v0s, v1s, v2s, v3s])
    return func(xs, zs, ws, u, v)


def T_singular_coeffs(x, w, digits=30):
    """(T0, T2, T3) of T(x, z, w) at z = tau(x), by series composition."""
    with mp.workdps(2 * digits + 10):
        ser = _Z_engine(T_core, x, w, digits)
        t1 = abs(ser.coeffs[1])
        assert t1 < mp.mpf(10) ** (-digits + 6), "odd Z coefficient must vanish"
        return ser.coeffs[0], ser.coeffs[2], ser.coeffs[3]


def T_printed_coeffs(u, w):
    """The appendix closed forms for T0, T2, T3 (as extracted; T3 is
    inconsistent -- it vanishes identically at w=1 -- and is reported only)."""
    Pv = (u + 1 - w) * (-(3 * u - 1) ** 2 * w + 81 * u ** 3 + 99 * u ** 2 + 19 * u + 1)
    sP = _sqrt(Pv)
    P0 = ((27 * u ** 2 + 6 * u + 1) * w ** 2
          + (-126 * u ** 3 - 150 * u ** 2 - 26 * u - 2) * w
          + 81 * u ** 4 + 180 * u ** 3 + 118 * u ** 2 + 20 * u + 1)
    P20 = ((1458 * u ** 5 + 3807 * u ** 4 + 900 * u ** 3 + 114 * u ** 2 - 6 * u - 1) * w ** 3
           + (6561 * u ** 7 + 20898 * u ** 6 + 8532 * u ** 5 - 7281 * u ** 4
              - 1635 * u ** 3 - 132 * u ** 2 + 30 * u + 3) * w ** 2
           + (-3645 * u ** 8 - 30942 * u ** 7 - 46494 * u ** 6 - 13230 * u ** 5
              + 7536 * u ** 4 + 1590 * u ** 3 - 18 * u ** 2 - 42 * u - 3) * w
           + 13122 * u ** 9 + 47385 * u ** 8 + 61560 * u ** 7 + 30708 * u ** 6
           - 228 * u ** 5 - 4530 * u ** 4 - 872 * u ** 3 + 36 * u ** 2 + 18 * u + 1)
    P21 = ((-54 * u ** 4 - 45 * u ** 3 + 57 * u ** 2 - 15 * u + 1) * w ** 4
           + (-243 * u ** 6 + 27 * u ** 5 + 1278 * u ** 4 + 858 * u ** 3
              - 111 * u ** 2 + 35 * u - 4) * w ** 3
           + (1944 * u ** 7 + 6507 * u ** 6 + 5553 * u ** 5 - 576 * u ** 4
              - 1530 * u ** 3 + 15 * u ** 2 - 15 * u + 6) * w ** 2
           + (-1215 * u ** 8 - 6561 * u ** 7 - 11439 * u ** 6 - 7005 * u ** 5
              + 231 * u ** 4 + 1229 * u ** 3 + 75 * u ** 2 - 15 * u - 4) * w
           + 1458 * u ** 9 + 6561 * u ** 8 + 11376 * u ** 7 + 8988 * u ** 6
           + 2388 * u ** 5 - 794 * u ** 4 - 512 * u ** 3 - 36 * u ** 2 + 10 * u + 1)
    P3 = (-(3 * u - 1) ** 3 * w ** 3
          + (162 * u ** 4 + 135 * u ** 3 - 27 * u ** 2 - 3 * u - 3) * w ** 2
          + (81 * u ** 5 + 243 * u ** 4 + 270 * u ** 3 + 138 * u ** 2 + 33 * u + 3) * w
          - 81 * u ** 5 - 261 * u ** 4 - 298 * u ** 3 - 138 * u ** 2 - 21 * u - 1)
    T0 = (-(3 * u - 1) ** 6 * w / (27648 * (3 * u ** 2 + 2 * u - 1 + w) * (u + 1) * u ** 4)
          * (P0 / (9 * u + 1) - (u + 1 - w) * sP))
    T2 = ((3 * u - 1) ** 6 * w / (82944 * (3 * u ** 2 + 2 * u - 1 + w) ** 2
                                  * (u + 1) ** 2 * u ** 5)
          * (P20 / (9 * u + 1) ** 2 - P21 / sP))
    T3 = (-(3 * u - 1) ** 6 * w * _sqrt(2 * u * (u + 1)) * (3 * u + 1)
          / (373248 * (u + 1) ** 3 * u ** 6)
          * ((3 * u - 1) ** 2 * w - 9 * u ** 2 - 10 * u - 1
             + P3 / ((u + 1 - w) * sP)))
    return T0, T2, T3


# ---------------------------------------------------------------------------
# I_{i,j}: X-composition coefficients of the integral's Z-expansion
# ---------------------------------------------------------------------------

def I_coeffs(y, w, digits=30):
    """The six I_{i,j}(y,w): coefficients of I_i(x, D/E) Z^i expanded in X.

    I_i are the Z-coefficients of the integral at fixed (x, w'); their x- and
    w'-partials enter the even/odd X terms, and the Z->X conversion brings
    alpha and -E3/E0 for Z^2 and alpha^(3/2) for Z^3."""
    with mp.workdps(2 * digits + 10):
        R, E0, _, _ = _crit_cached(y, mp.dps)
        E0a, E2, E3 = E_coeffs(y, digits)
        D0, D2, D3 = D_singular_coeffs(y, w, digits)
        alpha = alpha_of_y(y, digits)
        d0 = D0 / E0
        d2 = (D2 * E0 - D0 * E2) / E0 ** 2
        d3 = (D3 * E0 - D0 * E3) / E0 ** 2
        h = mp.mpf(10) ** (-(mp.dps * 2) // 5)

        def IZ(xv, wv):
            ser = _Z_engine(integral_core, xv, wv, digits)
            return ser.coeffs[0], ser.coeffs[2], ser.coeffs[3]

        I0, I2, I3 = IZ(R, d0)
        I0_xp = IZ(R + h, d0)[0]
        I0_xm = IZ(R - h, d0)[0]
        I0_wp = IZ(R, d0 + h)[0]
        I0_wm = IZ(R, d0 - h)[0]
        dI0_dx = (I0_xp - I0_xm) / (2 * h)
        dI0_dw = (I0_wp - I0_wm) / (2 * h)
        zeta3 = -E3 / E0
        return {
            "I00": I0,
            "I02": -R * dI0_dx + d2 * dI0_dw,
            "I03": d3 * dI0_dw,
            "I22": alpha * I2,
            "I23": zeta3 * I2,
            "I33": alpha ** mp.mpf("1.5") * I3,
        }


def B_singular_coeffs(y, w, digits=30):
    """(B0, B2, B3) at (y, w) via the X-series composition engine."""
    return B_engine(y, w, digits=digits)


# ---------------------------------------------------------------------------
# constants bundle
# ---------------------------------------------------------------------------

@dataclass
class PlanarConstants:
    r1: Real
    u0: Real
    t0: Real
    R1: Real
    E0: Real
    rho: Real
    w3: Real
    q1: Real
    q2: Real
    q3: Real
    alpha3: Real
    kappa: Real
    c1: Real
    c2: Real
    c3: Real
    digits: int


def w3_of_y(y, digits=30):
    """Dominant w-singularity of D0(y, .): explicit inversion of the t-form
    equation at the radicand vanishing point D0 = t/(1-t)."""
    with mp.workdps(2 * digits + 10):
        t = t_of_y(y, digits)
        D0 = t / (1 - t)
        # equation: 1 + D0 = (1+yw) exp(Theta); at D0 the sqrt term vanishes
        theta = -(D0 ** 2 * (t ** 4 - 12 * t ** 2 + 20 * t - 9)
                  + D0 * (2 * t ** 4 + 6 * t ** 3 - 6 * t ** 2 + 10 * t - 12)
                  + t ** 4 + 6 * t ** 3 + 9 * t ** 2) / \
            (4 * (t + 3) * (D0 + 1) * (3 * t + 1))
        return ((1 + D0) * mpmath.exp(-theta) - 1) / y


_pc_cache = {}


def constants_planar(digits=30) -> PlanarConstants:
    if digits in _pc_cache:
        return _pc_cache[digits]
    with mp.workdps(2 * digits + 10):
        s7 = mpmath.sqrt(7)
        r1 = r_of_z(mp.mpf(1))
        u0 = u0_of_z(mp.mpf(1))
        t0 = t_of_y(1, digits)
        R1, E0, _, _ = _crit_cached(1, mp.dps)
        rho = rho_of_y(1, digits)
        w3 = w3_of_y(1, digits)
        q3 = s7 - 2
        alpha3 = (s7 + 7) / 2
        cfg = SolverConfig(target_digits=min(digits, 14), max_iterations=80)
        rp = differentiate(lambda t_: rho_of_y(t_.value, digits=14), mp.mpf(1), cfg)
        kappa = -rp.value / rho
        # tail amplitudes from the computed series
        e_dist, d3dist = pgf_planar_3conn(64, digits=digits, _skip_constants=True)
        from .asymptotics import fit_tail_power_geometric
        c3 = fit_tail_power_geometric(e_dist.dk, q3, mp.mpf("0.5"), 32, 64)
        d2dist = pgf_planar_2conn(64, digits=digits)
        c2f = fit_tail_power_geometric(d2dist.dk, 1 / w3, mp.mpf("-0.5"), 32, 64)
        d1dist = pgf_planar_conn(64, digits=digits)
        c1f = fit_tail_power_geometric(d1dist.dk, 1 / w3, mp.mpf("-0.5"), 32, 64)
        cons = PlanarConstants(
            r1=Real(r1, digits), u0=Real(u0, digits), t0=Real(t0, digits),
            R1=Real(R1, digits), E0=Real(E0, digits), rho=Real(rho, digits),
            w3=Real(w3, digits), q1=Real(1 / w3, digits), q2=Real(1 / w3, digits),
            q3=Real(q3, digits), alpha3=Real(alpha3, digits),
            kappa=Real(kappa, digits), c1=Real(c1f, digits), c2=Real(c2f, digits),
            c3=Real(c3, digits), digits=digits)
    _pc_cache[digits] = cons
    return cons


# ---------------------------------------------------------------------------
# degree distributions
# ---------------------------------------------------------------------------

from .asymptotics import DegreeDistribution, TailModel, fit_tail_power_geometric


def pgf_planar_3conn(K, digits=30, z=1, _skip_constants=False):
    """(e-distribution, d-distribution) for 3-connected planar graphs at
    edge weight z (z=1 for the uniform model)."""
    with mp.workdps(2 * digits + 10):
        z = mp.mpf(z)
        x = r_of_z(z)
        ser = _Z_engine(T_core, x, 1, digits, K=K)
        T3w = ser.coeffs[3]
        T0s, T2s, T3s = T_singular_coeffs(x, 1, digits)
        ek = [c / T3s for c in T3w.coeffs]
        # clamp solver-level noise so counting coefficients stay clean zeros
        thresh = max(abs(c) for c in ek) * mp.mpf(10) ** (-digits)
        ek = [c if abs(c) > thresh else mp.mpf(0) for c in ek]
        u0 = u0_of_z(z)
        q = 1 / (u0 + 1)
        if z == 1:
            s7 = mpmath.sqrt(7)
            alpha = (s7 + 7) / 2
        else:
            alpha = -2 * z * r_prime(z) / r_of_z(z)
        etail = dtail = None
        if K >= 16:
            ce = fit_tail_power_geometric(ek, q, mp.mpf("0.5"), max(8, K // 2), K)
            etail = TailModel(kind="power_geometric", q=q, c=ce, a=mp.mpf("0.5"))
            dtail = TailModel(kind="power_geometric", q=q, c=ce * alpha,
                              a=mp.mpf("-0.5"))
        e_dist = DegreeDistribution("planar", "3conn-edge-rooted", K, ek, etail)
        dk = [mp.mpf(0) if k == 0 else alpha * ek[k] / k for k in range(K + 1)]
        d_dist = DegreeDistribution("planar", "3conn", K, dk, dtail)
        return e_dist, d_dist


def pgf_planar_2conn(K, digits=30, y=1) -> DegreeDistribution:
    with mp.workdps(2 * digits + 10):
        _, _, B3w = B_engine(y, None, digits=digits, K=K)
        _, _, B3s = B_engine(y, 1, digits=digits)
        p = B3w / B3s
        dk = list(p.coeffs[:K + 1])
        thresh = max(abs(c) for c in dk) * mp.mpf(10) ** (-digits)
        dk = [c if abs(c) > thresh else mp.mpf(0) for c in dk]
        q = 1 / w3_of_y(y, digits)
        tail = None
        if K >= 16:
            ct = fit_tail_power_geometric(dk, q, mp.mpf("-0.5"), max(8, K // 2), K)
            tail = TailModel(kind="power_geometric", q=q, c=ct, a=mp.mpf("-0.5"))
        return DegreeDistribution("planar", "2conn", K, dk, tail)


def pgf_planar_conn(K, digits=30, y=1) -> DegreeDistribution:
    with mp.workdps(2 * digits + 10):
        B0w, B2w, B3w = B_engine(y, None, digits=digits, K=K)
        B0s, B2s, B3s = B_engine(y, 1, digits=digits)
        expf = (B0w - B0s).exp()
        p = expf * (-B2w + ((1 + B2s) / B3s) * B3w)
        dk = list(p.coeffs[:K + 1])
        thresh = max(abs(c) for c in dk) * mp.mpf(10) ** (-digits)
        dk = [c if abs(c) > thresh else mp.mpf(0) for c in dk]
        dk[0] = mp.mpf(0)
        q = 1 / w3_of_y(y, digits)
        tail = None
        if K >= 16:
            ct = fit_tail_power_geometric(dk, q, mp.mpf("-0.5"), max(8, K // 2), K)
            tail = TailModel(kind="power_geometric", q=q, c=ct, a=mp.mpf("-0.5"))
        return DegreeDistribution("planar", "connected", K, dk, tail)


# ---------------------------------------------------------------------------
# edge-density conditioning
# ---------------------------------------------------------------------------

def _log_deriv(f, y0):
    h = mp.mpf(10) ** (-(mp.dps * 2) // 5)
    return (f(y0 + h) - f(y0 - h)) / (2 * h) / f(y0)


def saddle_parameter(family, mu, digits=30):
    """Weight y (or z for 3conn) solving the saddle equation for density mu."""
    mu = mp.mpf(mu)
    with mp.workdps(2 * digits + 10):
        if family in ("connected", "conn", "1conn"):
            if not 1 < mu < 3:
                raise SaddleOutOfRange(f"mu={mu} outside (1,3)")
            f = lambda y: rho_of_y(y, digits=min(digits, 16))
        elif family in ("2conn", "two_connected"):
            if not 1 < mu < 3:
                raise SaddleOutOfRange(f"mu={mu} outside (1,3)")
            f = lambda y: R_of_y(y, digits=min(digits, 16))
        elif family in ("3conn", "three_connected"):
            if not mp.mpf("1.5") < mu < 3:
                raise SaddleOutOfRange(f"mu={mu} outside (3/2,3)")
            f = r_of_z
        else:
            raise ValueError(family)
        target = lambda s: -s.value * _log_deriv(f, s.value) - mu
        lo, hi = mp.mpf("0.3"), mp.mpf("3.5")
        flo, fhi = target(Real(lo, 30)), target(Real(hi, 30))
        tries = 0
        while (flo > 0) == (fhi > 0) and tries < 8:
            lo, hi = lo * mp.mpf("0.6"), hi * mp.mpf("1.7")
            flo, fhi = target(Real(lo, 30)), target(Real(hi, 30))
            tries += 1
        cfg = SolverConfig(target_digits=min(digits, 14), max_iterations=200,
                           bracket=(lo, hi))
        return solve_scalar(target, cfg).value


def density_pgf(family, mu, K, digits=30) -> DegreeDistribution:
    """Degree distribution conditioned on edge density mu."""
    with mp.workdps(2 * digits + 10):
        s = saddle_parameter(family, mu, digits)
        if family in ("3conn", "three_connected"):
            _, d = pgf_planar_3conn(K, digits=digits, z=s)
            d.level = f"3conn@mu={mpmath.nstr(mp.mpf(mu), 8)}"
            return d
        if family in ("2conn", "two_connected"):
            d = pgf_planar_2conn(K, digits=digits, y=s)
        else:
            d = pgf_planar_conn(K, digits=digits, y=s)
        d.level = f"{family}@mu={mpmath.nstr(mp.mpf(mu), 8)}"
        return d


# ---------------------------------------------------------------------------
# exact rational pipeline (the enumeration-anchored oracle)
# ---------------------------------------------------------------------------

def exact_network_series(N, K):
    """Exact (E(x), D(x,w)) for planar networks at y=1 over rationals.

    E and D are x-series; D's coefficients are w-polynomials.  The
    3-connected core contribution comes from maps3.T_series_coeffs."""
    from .maps3 import T_series_coeffs
    # the 1/x^2 in the core substitution shifts T's x-powers down: order-N
    # output needs the core coefficients through n = N + 2
    P = T_series_coeffs(N + 2, K)
    x = Series.identity("x", N)

    def T_of_E(E):
        """sum_n x^(n-2) P_n(E, 1) / E  (the T(x,E,1)/(x^2 E) term)."""
        out = Series.zero("x", N)
        for n in range(4, N + 3):
            Pn1 = Series("z", [sum(c.coeffs, Fraction(0)) for c in P[n].coeffs])
            val = Series.constant("x", Pn1.coeffs[-1], N)
            for cz in reversed(Pn1.coeffs[:-1]):
                val = val * E + cz
            out = out + val.shift_up(n - 2)
        return out / E

    def phi_E(g):
        E = g + 1
        s = (x * E * E) / (1 + x * E) + T_of_E(E)
        return 2 * s.exp() - 1 - 1

    E = fixed_point(phi_E, Series.zero("x", N), N) + 1

    w = Series.identity("w", K)
    Ew = Series("x", [Series.constant("w", c, K) for c in E.coeffs])
    xw = Series("x", [Series.constant("w", Fraction(1) if k == 1 else Fraction(0), K)
                      for k in range(N + 1)])
    yw = Series.constant("x", w, N)

    def T_powers(DE):
        """[DE^k for k in 0..K]: powers of D/E (w-valuation 1 each)."""
        pows = [Series.constant("x", Series.constant("w", Fraction(1), K), N)]
        for k in range(1, K + 1):
            pows.append((pows[-1] * DE).truncate(N))
        return pows

    def phi_D(g):
        D = g + yw
        DE = D / Ew
        pows = T_powers(DE)
        # T(x,E,D/E)/(x^2 D) = sum_n x^(n-2) sum_k P_nk(E) (D/E)^(k-1) / E:
        # the 1/D is absorbed into one lower power, so no series division
        Tdiv = Series("x", [Series.zero("w", K) for _ in range(N + 1)])
        for n in range(4, N + 3):
            val = Series("x", [Series.zero("w", K) for _ in range(N + 1)])
            for zd in range(len(P[n].coeffs)):
                wpoly = P[n].coeffs[zd]
                if wpoly.is_zero():
                    continue
                Ez = _series_pow(Ew, zd, N)
                acc = Series("x", [Series.zero("w", K) for _ in range(N + 1)])
                for k, c in enumerate(wpoly.coeffs):
                    if c:
                        acc = acc + pows[k - 1] * c
                val = val + Ez * acc
            Tdiv = Tdiv + val.shift_up(n - 2)
        s = (xw * Ew * D) / (1 + xw * Ew) + Tdiv / Ew
        return (1 + yw) * s.exp() - 1 - yw

    D = fixed_point(phi_D, Series("x", [Series.zero("w", K) for _ in range(N + 1)]), N) + yw
    return E, D, P


def _series_pow(s, k, N):
    out = None
    if k == 0:
        return Series.constant("x", Series.constant("w", Fraction(1), s[0].order), N)
    base = s
    out = base
    for _ in range(k - 1):
        out = (out * base).truncate(N)
    return out


def exact_broot_series(N, K):
    """Exact B(x,1,w) for planar graphs: x-series with w-polynomials."""
    E, D, P = exact_network_series(N, K)
    x = Series.identity("x", N)
    Ew = Series("x", [Series.constant("w", c, K) for c in E.coeffs])
    xw = Series("x", [Series.constant("w", Fraction(1) if k == 1 else Fraction(0), K)
                      for k in range(N + 1)])
    DE = D / Ew
    pows = [Series.constant("x", Series.constant("w", Fraction(1), K), N)]
    for k in range(1, K + 1):
        pows.append((pows[-1] * DE).truncate(N))
    # T/(xD) = sum_n x^(n-1) sum_k P_nk(E) (D/E)^(k-1)/E ;  I/x uses /k
    TdivD = Series("x", [Series.zero("w", K) for _ in range(N + 1)])
    Isub = Series("x", [Series.zero("w", K) for _ in range(N + 1)])
    for n in range(4, N + 2):
        valT = Series("x", [Series.zero("w", K) for _ in range(N + 1)])
        valI = Series("x", [Series.zero("w", K) for _ in range(N + 1)])
        for zd in range(len(P[n].coeffs)):
            wpoly = P[n].coeffs[zd]
            if wpoly.is_zero():
                continue
            Ez = _series_pow(Ew, zd, N)
            accT = Series("x", [Series.zero("w", K) for _ in range(N + 1)])
            accI = Series("x", [Series.zero("w", K) for _ in range(N + 1)])
            for k, c in enumerate(wpoly.coeffs):
                if c:
                    accT = accT + pows[k - 1] * c
                    accI = accI + pows[k] * (Fraction(c) / k)
            valT = valT + Ez * accT
            valI = valI + Ez * accI
        TdivD = TdivD + valT.shift_up(n - 1)
        Isub = Isub + valI.shift_up(n - 1)
    B = xw * (D - (xw * Ew * D) / (1 + xw * Ew) * (1 + D / 2))
    B = B - (1 + D) * (TdivD / Ew) + Isub
    return B


def exact_cprime_series(N):
    """Exact C'(x) for connected planar graphs."""
    bw = exact_broot_series(N, N + 1)
    bprime = Series("x", [sum(c.coeffs, Fraction(0)) for c in bw.coeffs])
    x = Series.identity("x", N)

    def phi(g):
        xg = (x * (g + 1)).truncate(N)
        acc = Series.constant("x", bprime.coeffs[-1], N)
        for c in reversed(bprime.coeffs[:-1]):
            acc = acc * xg + c
        return acc.exp()

    g = fixed_point(lambda s: phi(s) - 1, Series.zero("x", N), N)
    return g + 1


def exact_croot_series(N, K):
    """Exact C(x,w) = exp(B(xC'(x),1,w)) with w-polynomial coefficients."""
    cp = exact_cprime_series(N)
    x = Series.identity("x", N)
    z = (x * cp).truncate(N)
    bw = exact_broot_series(N, K)
    zl = Series("x", [Series.constant("w", c, K) for c in z.coeffs])
    acc = Series.constant("x", bw.coeffs[-1], N)
    for c in reversed(bw.coeffs[:-1]):
        acc = acc * zl + Series.constant("x", c, N)
    return acc.exp()


# ---------------------------------------------------------------------------
# documented printed-formula discrepancies
# ---------------------------------------------------------------------------

def discrepancy_report(digits=30):
    """Printed 2-connected q formula vs the authoritative D0-condition, and
    the printed T3 at w=1 (identically zero) vs the engine value."""
    with mp.workdps(2 * digits + 10):
        cons = constants_planar(digits)
        t0 = cons.t0.value
        # printed: exp((t0-1)(t0+6)/(6 t0^2+20 t0+6)), missing a factor t0
        w3_printed = (1 / (1 - t0)) * mpmath.exp(
            (t0 - 1) * (t0 + 6) / (6 * t0 ** 2 + 20 * t0 + 6)) - 1
        w3_fixed = (1 / (1 - t0)) * mpmath.exp(
            t0 * (t0 - 1) * (t0 + 6) / (6 * t0 ** 2 + 20 * t0 + 6)) - 1
        u0 = u0_of_z(mp.mpf(1))
        T3_printed = T_printed_coeffs(u0, mp.mpf(1))[2]
        T3_engine = T_singular_coeffs(cons.r1.value, 1, digits)[2]
        return {
            "planar_2conn_q_printed": (1 / w3_printed, cons.q2.value),
            "planar_2conn_q_with_t_factor": (1 / w3_fixed, cons.q2.value),
            "planar_T3_printed_at_w1": (T3_printed, T3_engine),
        }


# ---------------------------------------------------------------------------
# finite-sampling fits near singular points (the independent oracle)
# ---------------------------------------------------------------------------

def _walk_to(xs, y, digits):
    """E(x,y) along an ascending list of x targets, with continuation."""
    res = {}
    x0 = xs[0] * mp.mpf("0.9")
    E, uv = E_planar(x0, y)
    seed = (E, uv[0], uv[1])
    prev = x0
    for x in xs:
        nst = 8
        for i in range(1, nst + 1):
            xx = prev + (x - prev) * i / nst
            E, uv = E_planar(xx, y, seed=seed)
            seed = (E, uv[0], uv[1])
        res[x] = (E, uv)
        prev = x
    return res


def sample_fit_E(y=1, digits=80, npts=8):
    """(E0, E2, E3, ...) of E(x,y) at R(y) by high-precision sampling."""
    from .asymptotics import fit_singular_expansion
    with mp.workdps(2 * digits + 10):
        R, _, _, _ = _crit_cached(y, mp.dps)
        powers = [0, 2, 3, 4, 5, 6, 7, 8]
        Xs = [mp.mpf(10) ** (mp.mpf("-1.4") - mp.mpf(j) / 4) for j in range(len(powers))]
        targets = [R * (1 - X ** 2) for X in Xs]
        sols = _walk_to(sorted(targets), y, digits)
        samples = [(Xs[j], sols[targets[j]][0]) for j in range(len(powers))]
        return fit_singular_expansion(samples, powers)


def sample_fit_D(y, w, digits=80, npts=8):
    """(D0, D2, D3, ...) of D(x,y,w) at R(y) by sampling."""
    from .asymptotics import fit_singular_expansion
    with mp.workdps(2 * digits + 10):
        R, _, _, _ = _crit_cached(y, mp.dps)
        powers = [0, 2, 3, 4, 5, 6, 7, 8]
        Xs = [mp.mpf(10) ** (mp.mpf("-1.4") - mp.mpf(j) / 4) for j in range(len(powers))]
        targets = [R * (1 - X ** 2) for X in Xs]
        sols = _walk_to(sorted(targets), y, digits)
        samples = []
        for j, X in enumerate(Xs):
            E, uv = sols[targets[j]]
            D = D_planar(targets[j], y, mp.mpf(w), E, uv)
            samples.append((X, D))
        return fit_singular_expansion(samples, powers)


def sample_fit_B(y, w, digits=80, npts=8):
    """(B0, B2, B3, ...) of B(x,y,w) at R(y) by sampling."""
    from .asymptotics import fit_singular_expansion
    with mp.workdps(2 * digits + 10):
        R, _, _, _ = _crit_cached(y, mp.dps)
        powers = [0, 2, 3, 4, 5, 6, 7, 8]
        Xs = [mp.mpf(10) ** (mp.mpf("-1.4") - mp.mpf(j) / 4) for j in range(len(powers))]
        targets = [R * (1 - X ** 2) for X in Xs]
        sols = _walk_to(sorted(targets), y, digits)
        samples = []
        for j, X in enumerate(Xs):
            E, uv = sols[targets[j]]
            D = E if w == 1 else D_planar(targets[j], y, mp.mpf(w), E, uv)
            samples.append((X, _B_closed(targets[j], mp.mpf(y), mp.mpf(w), E, uv, D)))
        return fit_singular_expansion(samples, powers)


def sample_fit_T(x, w, digits=80):
    """(T0, T1, T2, T3, ...) of T(x,z,w) at tau(x) by sampling in z."""
    from .asymptotics import fit_singular_expansion
    with mp.workdps(2 * digits + 10):
        x = mp.mpf(x)
        tau = tau_of_x(x, digits)
        powers = [0, 1, 2, 3, 4, 5, 6, 7]
        Zs = [mp.mpf(10) ** (mp.mpf("-1.6") - mp.mpf(j) / 4) for j in range(len(powers))]
        samples = []
        prev = tau * mp.mpf("0.85")
        uv = maps3.solve_RS(x * prev, prev)
        for Z in sorted(Zs, reverse=True):
            z = tau * (1 - Z ** 2)
            for i in range(1, 9):
                zz = prev + (z - prev) * mp.mpf(i) / 8
                uv = maps3.solve_RS(x * zz, zz, seed=uv, steps=1)
            prev = z
            samples.append((Z, T_core(x, z, mp.mpf(w), uv[0], uv[1])))
        return fit_singular_expansion(samples, powers)


def sample_fit_uv(z, digits=80):
    """(u-coeff list, v-coeff list) of u,v at x = r(z) by sampling in x."""
    from .asymptotics import fit_singular_expansion
    with mp.workdps(2 * digits + 10):
        z = mp.mpf(z)
        rz = r_of_z(z)
        powers = [0, 1, 2, 3, 4, 5, 6, 7]
        Xs = [mp.mpf(10) ** (mp.mpf("-1.6") - mp.mpf(j) / 4) for j in range(len(powers))]
        su, sv = [], []
        prev = rz * mp.mpf("0.9")
        uv = maps3.solve_RS(prev * z, z)
        for X in sorted(Xs, reverse=True):
            x = rz * (1 - X ** 2)
            for i in range(1, 9):
                xx = prev + (x - prev) * mp.mpf(i) / 8
                uv = maps3.solve_RS(xx * z, z, seed=uv, steps=1)
            prev = x
            su.append((X, uv[0]))
            sv.append((X, uv[1]))
        return (fit_singular_expansion(su, powers),
                fit_singular_expansion(sv, powers))


def sample_fit_uv_fixed_x(x, digits=80):
    """(u-coeffs, v-coeffs) of u,v at z = tau(x) by sampling in z."""
    from .asymptotics import fit_singular_expansion
    with mp.workdps(2 * digits + 10):
        x = mp.mpf(x)
        tau = tau_of_x(x, digits)
        powers = [0, 1, 2, 3, 4, 5, 6, 7]
        Zs = [mp.mpf(10) ** (mp.mpf("-1.6") - mp.mpf(j) / 4) for j in range(len(powers))]
        su, sv = [], []
        prev = tau * mp.mpf("0.85")
        uv = maps3.solve_RS(x * prev, prev)
        for Z in sorted(Zs, reverse=True):
            z = tau * (1 - Z ** 2)
            for i in range(1, 9):
                zz = prev + (z - prev) * mp.mpf(i) / 8
                uv = maps3.solve_RS(x * zz, zz, seed=uv, steps=1)
            prev = z
            su.append((Z, uv[0]))
            sv.append((Z, uv[1]))
        return (fit_singular_expansion(su, powers),
                fit_singular_expansion(sv, powers))


def sample_fit_I(y, w, digits=80):
    """(I^(0), I^(2), I^(3), ...): X-expansion of the composed integral
    int_0^{D/E} T(x,E,t)/t dt by sampling; the groups sum the I_{i,j}."""
    from .asymptotics import fit_singular_expansion
    with mp.workdps(2 * digits + 10):
        R, _, _, _ = _crit_cached(y, mp.dps)
        powers = [0, 2, 3, 4, 5, 6, 7, 8]
        Xs = [mp.mpf(10) ** (mp.mpf("-1.4") - mp.mpf(j) / 4) for j in range(len(powers))]
        targets = [R * (1 - X ** 2) for X in Xs]
        sols = _walk_to(sorted(targets), y, digits)
        samples = []
        for j, X in enumerate(Xs):
            E, uv = sols[targets[j]]
            D = E if w == 1 else D_planar(targets[j], y, mp.mpf(w), E, uv)
            samples.append((X, integral_core(targets[j], E, D / E, uv[0], uv[1])))
        return fit_singular_expansion(samples, powers)
