"""Rooted simple quadrangulations and 3-connected planar graphs by root
degree.

The closed form rests on the algebraic pair R = X(S+1)^2, S = Y(R+1)^2, the
root-valency quadratic of rooted non-separable maps, and the substitution
T(x,z,w) = (xw/2) Q(xz, z, w).  The quadratic's relevant root is

    w(R,S,W) = (w1 - (R-W+1) sqrt(w2)) / (2 (S+1)^2 (SW + R^2 + 2R + 1)),

the branch vanishing at W=0 and giving nonnegative counting coefficients (the
sign is pinned by re-deriving the quadratic's discriminant, which factors as
R^2 S^2 (R-W+1)^2 w2).  An independent functional-equation iteration
(`quad_system_oracle`) reproduces everything coefficient-exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .numerics import Real
from .series import Series, fixed_point

_ZERO = Fraction(0)


class BranchLost(Exception):
    pass


class NegativeDiscriminant(Exception):
    pass


# ---------------------------------------------------------------------------
# scalar closed forms
# ---------------------------------------------------------------------------

def w1_poly(R, S, W):
    return (-R * S * W ** 2
            + W * (1 + 4 * S + 3 * R * S ** 2 + 5 * S ** 2 + R ** 2 + 2 * R
                   + 2 * S ** 3 + 3 * R ** 2 * S + 7 * R * S)
            + (R + 1) ** 2 * (R + 2 * S + 1 + S ** 2))


def w2_poly(R, S, W):
    return (R ** 2 * S ** 2 * W ** 2
            - 2 * W * R * S * (2 * R ** 2 * S + 6 * R * S + 2 * S ** 3
                               + 3 * R * S ** 2 + 5 * S ** 2 + R ** 2 + 2 * R
                               + 4 * S + 1)
            + (R + 1) ** 2 * (R + 2 * S + 1 + S ** 2) ** 2)


def solve_RS(X, Y, seed=None, steps=None):
    """Small branch of R = X(S+1)^2, S = Y(R+1)^2 with R(0,0)=S(0,0)=0."""
    X, Y = mp.mpf(X), mp.mpf(Y)
    R, S = seed if seed else (mp.mpf(0), mp.mpf(0))
    steps = steps if steps is not None else (48 if seed is None else 1)
    tol = mp.mpf(10) ** (-mp.dps + 6)
    for i in range(1, steps + 1):
        XX, YY = X * i / steps, Y * i / steps
        for _ in range(200):
            f1 = R - XX * (1 + S) ** 2
            f2 = S - YY * (1 + R) ** 2
            a12 = -2 * XX * (1 + S)
            a21 = -2 * YY * (1 + R)
            det = 1 - a12 * a21
            if det == 0:
                raise BranchLost("singular Jacobian in (R,S) Newton")
            dR = (f1 - f2 * a12) / det
            dS = (f2 - a21 * f1) / det
            R, S = R - dR, S - dS
            if abs(dR) + abs(dS) < tol:
                break
        else:
            raise BranchLost("no convergence on the small (R,S) branch")
    return R, S


def w_root(R, S, W):
    """The W->0 root of the root-valency quadratic (counting branch)."""
    disc = w2_poly(R, S, W)
    if disc < 0:
        raise NegativeDiscriminant(f"w2(R,S,W) = {mpmath.nstr(disc, 8)} < 0")
    return ((w1_poly(R, S, W) - (R - W + 1) * mpmath.sqrt(disc))
            / (2 * (S + 1) ** 2 * (S * W + R ** 2 + 2 * R + 1)))


def F1_of(R, S):
    return R * S / (1 + R + S) ** 3


def Q_eval(X, Y, W, rs=None):
    """Simple-quadrangulation series value via the closed form."""
    R, S = rs if rs else solve_RS(X, Y)
    return (X * Y * W * (1 / (1 + W * Y) + 1 / (1 + X) - 1)
            - F1_of(R, S) * w_root(R, S, W))


def T_root(x, z, w, uv=None):
    """Directed edge-rooted 3-connected planar graphs: (xw/2) Q(xz, z, w)."""
    u, v = uv if uv else solve_RS(x * z, z)
    disc = w2_poly(u, v, w)
    if disc < 0:
        raise NegativeDiscriminant(f"w2(u,v,w) = {mpmath.nstr(disc, 8)} < 0")
    core = (1 / (1 + w * z) + 1 / (1 + x * z) - 1
            - (u + 1) ** 2 * (w1_poly(u, v, w) - (u - w + 1) * mpmath.sqrt(disc))
            / (2 * w * (v * w + u ** 2 + 2 * u + 1) * (1 + u + v) ** 3))
    return x ** 2 * z ** 2 * w ** 2 / 2 * core


def quadratic_residual(R, S, W, w):
    """Residual of the root-valency quadratic at a claimed root w."""
    X = R / (S + 1) ** 2
    Y = S / (R + 1) ** 2
    F1 = F1_of(R, S)
    lhs = Y * (1 - w) * (X - w * F1) * W
    rhs = w * F1 * (-X * Y * W ** 2 + X * Y * W - X * W + 1 - w + X)
    return lhs - rhs


@dataclass
class MapGfPoint:
    X: Real
    Y: Real
    W: Real
    R: Real
    S: Real
    F1: Real
    w: Real
    Q: Real


def map_point(X, Y, W, digits=30) -> MapGfPoint:
    with mp.workdps(2 * digits + 10):
        R, S = solve_RS(X, Y)
        F1 = F1_of(R, S)
        w = w_root(R, S, W)
        Q = Q_eval(X, Y, W, rs=(R, S))
        d = digits
        return MapGfPoint(Real(X, d), Real(Y, d), Real(W, d), Real(R, d),
                          Real(S, d), Real(F1, d), Real(w, d), Real(Q, d))


# ---------------------------------------------------------------------------
# exact trivariate series
# ---------------------------------------------------------------------------

def _tri_zero(nx, ny, nw):
    return Series("x", [Series("y", [Series.zero("w", nw) for _ in range(ny + 1)])
                        for _ in range(nx + 1)])


def _tri_mono(nx, ny, nw, i, j, k, value=Fraction(1)):
    s = _tri_zero(nx, ny, nw)
    if i <= nx and j <= ny and k <= nw:
        s.coeffs[i].coeffs[j].coeffs[k] = Fraction(value)
    return s


def Q_closed_series(NX, NY, NW) -> Series:
    """Closed-form Q(X,Y,W) as an exact trivariate series (X outer, then Y,
    then W): R,S by fixed point, the quadratic root by series sqrt."""
    X = _tri_mono(NX, NY, NW, 1, 0, 0)
    Y = _tri_mono(NX, NY, NW, 0, 1, 0)
    W = _tri_mono(NX, NY, NW, 0, 0, 1)

    # joint fixed point on the algebraic pair
    R = X.zeros_like()
    S = X.zeros_like()
    for _ in range(NX + NY + 3):
        R_new = X * (S + 1) ** 2
        S_new = Y * (R + 1) ** 2
        if (R_new - R).is_zero() and (S_new - S).is_zero():
            break
        R, S = R_new, S_new
    F1 = (R * S) / (1 + R + S) ** 3
    disc = w2_poly(R, S, W)
    wbt = (w1_poly(R, S, W) - (R - W + 1) * disc.sqrt()) / \
        (2 * (S + 1) ** 2 * (S * W + R ** 2 + 2 * R + 1))
    return X * Y * W * (1 / (1 + W * Y) + 1 / (1 + X) - 1) - F1 * wbt


def quad_system_oracle(Nx, Ny, Nw):
    """Iterate the diagonal-decomposition system plus the root-valency
    quadratic as formal series; returns (F, Q_oracle, Q_closed_composed).

    Variables (x, y, w) mark black vertices - 1, white vertices - 1 and root
    degree - 1.  The oracle Q comes from the simple-quadrangulation
    substitution F_N - xyw = (xy/F(1)) Q(F(1)/y, F(1)/x, F/F(1)); the closed
    form is composed with the same series arguments for an exact comparison.
    """
    nw_int = Nw + Nx + Ny + 2  # internal w-order so that F(w=1) is exact
    x = _tri_mono(Nx, Ny, nw_int, 1, 0, 0)
    y = _tri_mono(Nx, Ny, nw_int, 0, 1, 0)
    w = _tri_mono(Nx, Ny, nw_int, 0, 0, 1)

    def at_w1(F):
        return Series("x", [Series("y", [
            Series.constant("w", sum(c.coeffs, Fraction(0)), nw_int)
            for c in xc.coeffs]) for xc in F.coeffs])

    def shift_x(F):
        return Series("x", list(F.coeffs[1:]))

    def shift_y(F):
        return Series("x", [yc.shift_down(1) for yc in F.coeffs])

    F = x.zeros_like()
    for _ in range(Nx + Ny + nw_int + 4):
        F1w = at_w1(F)
        rhs = (-w * F * F + w * (F1w - x) * F + x * w * (y * (1 - w) + F1w)) \
            / ((1 - w) * (1 - y * w))
        if (rhs - F).is_zero():
            break
        F = rhs
    F1w = at_w1(F)
    # F_N from the diagonal decomposition (F/x and F(1)/y by exact shifts)
    FN = F * (1 / (1 + shift_x(F)) + 1 / (1 + shift_y(F1w)) - 1)
    Q_oracle = shift_y(shift_x(FN - x * y * w)) * F1w

    # closed form composed at X = F(1)/y, Y = F(1)/x, W = F/F(1)
    Xs = shift_y(F1w)
    Ys = shift_x(F1w)
    Ws = shift_y(shift_x(F)) / shift_y(shift_x(F1w))
    R = Xs.zeros_like()
    S = Xs.zeros_like()
    for _ in range(Nx + Ny + 4):
        R_new = Xs * (S + 1) ** 2
        S_new = Ys * (R + 1) ** 2
        if (R_new - R).is_zero() and (S_new - S).is_zero():
            break
        R, S = R_new, S_new
    F1 = (R * S) / (1 + R + S) ** 3
    disc = w2_poly(R, S, Ws)
    wbt = (w1_poly(R, S, Ws) - (R - Ws + 1) * disc.sqrt()) / \
        (2 * (S + 1) ** 2 * (S * Ws + R ** 2 + 2 * R + 1))
    Q_closed = Xs * Ys * Ws * (1 / (1 + Ws * Ys) + 1 / (1 + Xs) - 1) - F1 * wbt
    return F, Q_oracle, Q_closed


_T_cache = {}


def T_series_coeffs(Nx, Nw):
    """T(x,z,w) as exact x-coefficients: a list P_n of bivariate (z,w) series
    with P_n of z-degree <= max(3n-6, 0), so that T = sum x^n P_n(z,w).

    Derived from the closed-form Q(X,Y,W) via the substitution
    (X,Y,W) -> (xz, z, w): the monomial X^i Y^j W^k contributes
    (1/2) x^(i+1) z^(i+j) w^(k+1)."""
    key = (Nx, Nw)
    if key in _T_cache:
        return _T_cache[key]
    NX = max(Nx - 1, 0)
    Nz = 3 * Nx - 6 if Nx >= 4 else 0
    NY = Nz
    Q = Q_closed_series(NX, NY, max(Nw - 1, 0))
    out = []
    for n in range(Nx + 1):
        nz = max(3 * n - 6, 0)
        P = Series("z", [Series.zero("w", Nw) for _ in range(Nz + 1)])
        out.append(P)
    for i in range(NX + 1):
        for j in range(NY + 1):
            wser = Q.coeffs[i].coeffs[j]
            if wser.is_zero():
                continue
            n = i + 1
            zdeg = i + j
            if n > Nx or zdeg > 3 * Nx - 6:
                continue
            for k, c in enumerate(wser.coeffs):
                if c and k + 1 <= Nw:
                    out[n].coeffs[zdeg].coeffs[k + 1] += c / 2
    _T_cache[key] = out
    return out
