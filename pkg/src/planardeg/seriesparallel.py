"""Degree distribution of 2-connected and connected series-parallel graphs.

Series-parallel networks satisfy

    log((1+E)/(1+y))  = x E^2 / (1+xE),         E(x,y) = D(x,y,1)
    log((1+D)/(1+yw)) = x E D / (1+xE),

and the rooted 2-connected series is B(x,y,w) = x (D - xED/(1+xE) (1+D/2)).
The singular machinery at x = R(y) (the branch point of E) gives the
2-connected distribution B_1(1,w)/B_1(1,1) = D_0(1,w)^2 / E_0(1)^2; the
connected one is the subcritical composition rho * d/dx e^{B(x,1,w)} at tau.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .numerics import Real, SolverConfig, solve_scalar, solve_system2, differentiate
from .series import Series, compose, fixed_point, newton_solve
from .asymptotics import DegreeDistribution, TailModel, fit_tail_power_geometric


class BeyondSingularity(Exception):
    """Newton continuation lost the regular branch (Jacobian collapsed)."""


# ---------------------------------------------------------------------------
# scalar network solvers
# ---------------------------------------------------------------------------

def _newton_1d(g, dg, x0, tol=None, maxit=80):
    x = x0
    tol = tol or mp.mpf(10) ** (-mp.dps + 8)
    for _ in range(maxit):
        step = g(x) / dg(x)
        x -= step
        if not isinstance(x, mp.mpf) or not mpmath.isfinite(x):
            raise BeyondSingularity("iterate left the real branch")
        if abs(step) <= tol * (1 + abs(x)):
            return x
    raise BeyondSingularity("Newton continuation did not converge")


def solve_E_sp(x, y, steps=32):
    """E(x,y): the branch of log((1+E)/(1+y)) = xE^2/(1+xE) with E(0,y)=y."""
    x, y = mp.mpf(x), mp.mpf(y)
    E = y
    for i in range(1, steps + 1):
        xx = x * i / steps
        g = lambda z: mpmath.log((1 + z) / (1 + y)) - xx * z * z / (1 + xx * z)
        dg = lambda z: 1 / (1 + z) - (2 * xx * z * (1 + xx * z) - xx ** 2 * z * z) / (1 + xx * z) ** 2
        d0 = dg(E)
        if abs(d0) < mp.mpf(10) ** (-4):
            raise BeyondSingularity(f"Jacobian {mpmath.nstr(d0, 4)} too small at x={mpmath.nstr(xx, 8)}")
        E = _newton_1d(g, dg, E)
    return E


def E_sp_xderiv(x, y, E=None):
    """dE/dx by implicit differentiation of the E equation."""
    E = E if E is not None else solve_E_sp(x, y)
    num = E * E * (1 + E)
    den = (1 + x * E) ** 2 - x * E * (2 + x * E) * (1 + E)
    return num / den


def solve_D_sp(x, y, w, E=None, steps=16):
    """D(x,y,w): the D(x,y,0)=0 branch of log((1+D)/(1+yw)) = xED/(1+xE)."""
    x, y, w = mp.mpf(x), mp.mpf(y), mp.mpf(w)
    E = E if E is not None else solve_E_sp(x, y)
    c = x * E / (1 + x * E)
    D = mp.mpf(0)
    for i in range(1, steps + 1):
        ww = w * i / steps
        g = lambda z: mpmath.log((1 + z) / (1 + y * ww)) - c * z
        dg = lambda z: 1 / (1 + z) - c
        D = _newton_1d(g, dg, D if D else y * ww)
    return D


def broot_sp(x, y, w):
    """B(x,y,w) = x (D - xED/(1+xE) (1 + D/2))."""
    x, y, w = mp.mpf(x), mp.mpf(y), mp.mpf(w)
    E = solve_E_sp(x, y)
    D = solve_D_sp(x, y, w, E=E)
    return x * (D - x * E * D / (1 + x * E) * (1 + D / 2))


# ---------------------------------------------------------------------------
# exact series (oracle pipelines)
# ---------------------------------------------------------------------------

def network_series(N, K, y=Fraction(1)) -> tuple:
    """(E(x), D(x,w)) over exact rationals: x-series; D has w-polynomial
    coefficients.  E = D(x,1)."""
    x = Series.identity("x", N)

    def phi_E(g):
        # g = E - y; E = (1+y) exp(xE^2/(1+xE)) - 1
        E = g + y
        s = (x * E * E) / (1 + x * E)
        return (1 + y) * s.exp() - 1 - y

    E = fixed_point(phi_E, Series.zero("x", N), N) + y

    w = Series.identity("w", K)
    Ew = Series("x", [Series.constant("w", c, K) for c in E.coeffs])
    xw = Series("x", [Series.constant("w", Fraction(1) if k == 1 else Fraction(0), K)
                      for k in range(N + 1)])
    yw = Series.constant("x", w * y, N)

    def phi_D(g):
        # D = (1+yw) exp(x E D/(1+xE)) - 1;  unknown g = D - yw
        D = g + yw
        s = (xw * Ew * D) / (1 + xw * Ew)
        return (1 + yw) * s.exp() - 1 - yw

    D = fixed_point(phi_D, Series("x", [(w * 0) for _ in range(N + 1)]), N) + yw
    return E, D


def broot_series(N, K, y=Fraction(1)) -> Series:
    """Exact B(x,y,w): x-series with w-polynomial coefficients."""
    E, D = network_series(N, K, y)
    x = Series.identity("x", N)
    xw = Series("x", [Series.constant("w", Fraction(1) if k == 1 else Fraction(0), K)
                      for k in range(N + 1)])
    Ew = Series("x", [Series.constant("w", c, K) for c in E.coeffs])
    return xw * (D - (xw * Ew * D) / (1 + xw * Ew) * (1 + D / 2))


def cprime_series(N) -> Series:
    """Exact C'(x) for connected series-parallel graphs."""
    bp = broot_series(N, N + 1, Fraction(1))
    # B'(x) = B(x,1,1): evaluate w-polynomials at 1 (root degree <= x-order)
    bprime = Series("x", [sum(c.coeffs, Fraction(0)) for c in bp.coeffs])
    x = Series.identity("x", N)

    def phi(g):
        xg = (x * (g + 1)).truncate(N)
        return compose(bprime, xg).exp()

    g = fixed_point(lambda s: phi(s) - 1, Series.zero("x", N), N)
    return g + 1


def croot_series(N, K) -> Series:
    """Exact C(x,w) = exp(B(xC'(x), 1, w)) with w-polynomial coefficients."""
    cp = cprime_series(N)
    x = Series.identity("x", N)
    z = (x * cp).truncate(N)
    bw = broot_series(N, K, Fraction(1))
    # substitute x -> z inside the (x, w)-bivariate B
    acc = Series.constant("x", bw.coeffs[-1], N)
    zl = Series("x", [Series.constant("w", c, K) for c in z.coeffs])
    for c in reversed(bw.coeffs[:-1]):
        acc = acc * zl + Series.constant("x", c, N)
    return acc.exp()


# ---------------------------------------------------------------------------
# constants and singular coefficients
# ---------------------------------------------------------------------------

@dataclass
class SpConstants:
    R1: Real
    tau: Real
    rho: Real
    E0: Real
    E1: Real
    Etau: Real
    w0: Real
    w1: Real
    q_conn: Real
    q_2conn: Real
    c_conn: Real
    c_2conn: Real
    kappa: Real
    digits: int


def _phi_system(y):
    def F(p):
        x, z = p[0].value, p[1].value
        e = x * z * z / (1 + x * z)
        phi = (1 + y) * mpmath.exp(e) - z - 1
        de = (2 * x * z * (1 + x * z) - x * x * z * z) / (1 + x * z) ** 2
        phiz = (1 + y) * mpmath.exp(e) * de - 1
        return (phi, phiz)
    return F


def solve_R_E0(y, digits=30):
    """(R(y), E0(y)) from Phi = Phi_z = 0."""
    cfg = SolverConfig(target_digits=digits, max_iterations=300)
    R, E0 = solve_system2(_phi_system(y), (mp.mpf("0.128"), mp.mpf("1.87")), cfg)
    return R, E0


def _phi_partials(x, y, z):
    e = x * z * z / (1 + x * z)
    ex = z * z / (1 + x * z) ** 2
    ezz_num = 2 * x * (1 + x * z) - 2 * x * x * z * 2 - 0
    # second derivative of e wrt z:
    # e_z = (2xz + x^2 z^2)/(1+xz)^2 ; e_zz = 2x/(1+xz)^3
    ez = (2 * x * z + x * x * z * z) / (1 + x * z) ** 2
    ezz = 2 * x / (1 + x * z) ** 3
    E = (1 + y) * mpmath.exp(e)
    phi_x = E * ex
    phi_zz = E * (ez * ez + ezz)
    return phi_x, phi_zz


def sp_singular_coeffs(y, w, digits=30):
    """(R, E0, E1, D0, D1, B0, B1) at (y, w)."""
    with mp.workdps(2 * digits + 10):
        R, E0 = solve_R_E0(y, digits)
        R, E0 = R.value, E0.value
        phi_x, phi_zz = _phi_partials(R, y, E0)
        E1 = -mpmath.sqrt(2 * R * phi_x / phi_zz)
        c = R * E0 / (1 + R * E0)
        D0 = mp.mpf(0)
        for i in range(1, 17):
            ww = mp.mpf(w) * i / 16
            D0 = _newton_1d(lambda z: mpmath.log((1 + z) / (1 + y * ww)) - c * z,
                            lambda z: 1 / (1 + z) - c, D0 if D0 else y * ww)
        D1 = -D0 * E1 * R * (D0 + 1) / ((R * E0 * D0 - 1) * (1 + R * E0))
        B0 = -R * D0 * (R * E0 * D0 - 2) / (2 * (1 + R * E0))
        B1 = E1 * R ** 2 * D0 ** 2 / (2 * (1 + R * E0) ** 2)
        return R, E0, E1, D0, D1, B0, B1


def bprime_scalar(x, y=1):
    return broot_sp(x, y, 1)


def _tau_rho(y, digits):
    """tau and rho for edge weight y: psi'(tau)=0 with psi(u)=u e^{-B'(u)}."""
    R, _ = solve_R_E0(y, digits)
    h = mp.mpf(10) ** (-(mp.dps // 2))

    def bsecond(u):
        return (bprime_scalar(u + h, y) - bprime_scalar(u - h, y)) / (2 * h)

    bracket = (mp.mpf("0.03"), R.value * (1 - mp.mpf(10) ** (-8)))
    tau = solve_scalar(lambda u: 1 - u.value * bsecond(u.value),
                       SolverConfig(target_digits=min(digits, mp.dps // 2 - 8),
                                    max_iterations=400, bracket=bracket))
    tv = tau.value
    rho = tv * mpmath.exp(-bprime_scalar(tv, y))
    return tv, rho


def rho_of_y_sp(y, digits=30):
    with mp.workdps(2 * digits + 10):
        return _tau_rho(y, digits)[1]


_cache = {}


def constants_sp(digits=30) -> SpConstants:
    if digits in _cache:
        return _cache[digits]
    with mp.workdps(2 * digits + 10):
        R, E0 = solve_R_E0(1, digits)
        Rv, E0v = R.value, E0.value
        phi_x, phi_zz = _phi_partials(Rv, 1, E0v)
        E1 = -mpmath.sqrt(2 * Rv * phi_x / phi_zz)
        w0 = (1 + 1 / (Rv * E0v)) * mpmath.exp(-1 / (1 + Rv * E0v)) - 1
        tau, rho = _tau_rho(1, digits)
        Etau = solve_E_sp(tau, 1)
        w1 = (1 + 1 / (tau * Etau)) * mpmath.exp(-1 / (1 + tau * Etau)) - 1
        assert tau < Rv
        # kappa from the saddle derivative of rho(y)
        cfg = SolverConfig(target_digits=min(digits, 16), max_iterations=60)
        rp = differentiate(lambda t: rho_of_y_sp(t.value, digits=16), mp.mpf(1), cfg)
        kappa = -rp.value / rho
        d2 = pgf_sp_2conn(64, digits=digits, _constants=(Rv, E0v, w0))
        c2c = fit_tail_power_geometric(d2.dk, 1 / w0, mp.mpf("-1.5"), 32, 64)
        dc = pgf_sp_conn(64, digits=digits,
                         _constants=(tau, rho, Etau, w1))
        cc = fit_tail_power_geometric(dc.dk, 1 / w1, mp.mpf("-1.5"), 32, 64)
        cons = SpConstants(
            R1=Real(Rv, digits), tau=Real(tau, digits), rho=Real(rho, digits),
            E0=Real(E0v, digits), E1=Real(E1, digits), Etau=Real(Etau, digits),
            w0=Real(w0, digits), w1=Real(w1, digits),
            q_conn=Real(1 / w1, digits), q_2conn=Real(1 / w0, digits),
            c_conn=Real(cc, digits), c_2conn=Real(c2c, digits),
            kappa=Real(kappa, digits), digits=digits)
    _cache[digits] = cons
    return cons


# ---------------------------------------------------------------------------
# w-series machinery and distributions
# ---------------------------------------------------------------------------

def _D_series_w(c, y, K):
    """Series-in-w solution of log((1+D)/(1+yw)) = c D with D(0)=0."""
    w = Series.identity("w", K, like=mp.mpf(0))
    log1yw = (1 + y * w).log()

    def f(D):
        return (1 + D).log() - log1yw - c * D

    def df(D):
        return 1 / (1 + D) - c

    seed = Series("w", [mp.mpf(0), y / (1 - c)] + [mp.mpf(0)] * (K - 1))
    return newton_solve(f, df, seed)


def pgf_sp_2conn(K, digits=30, _constants=None) -> DegreeDistribution:
    with mp.workdps(2 * digits + 10):
        if _constants is None:
            cons = constants_sp(digits)
            Rv, E0v, w0 = cons.R1.value, cons.E0.value, cons.w0.value
        else:
            Rv, E0v, w0 = _constants
        c = Rv * E0v / (1 + Rv * E0v)
        D0 = _D_series_w(c, mp.mpf(1), K)
        p = (D0 * D0) / E0v ** 2
        dk = list(p.coeffs[:K + 1])
        tail = None
        if K >= 16:
            ctail = fit_tail_power_geometric(dk, 1 / w0, mp.mpf("-1.5"),
                                             max(8, K // 2), K)
            tail = TailModel(kind="power_geometric", q=1 / w0, c=ctail, a=mp.mpf("-1.5"))
        return DegreeDistribution("series_parallel", "2conn", K, dk, tail)


def pgf_sp_conn(K, digits=30, _constants=None) -> DegreeDistribution:
    with mp.workdps(2 * digits + 10):
        if _constants is None:
            cons = constants_sp(digits)
            tau, rho, Etau, w1 = (cons.tau.value, cons.rho.value,
                                  cons.Etau.value, cons.w1.value)
        else:
            tau, rho, Etau, w1 = _constants
        c = tau * Etau / (1 + tau * Etau)
        D = _D_series_w(c, mp.mpf(1), K)
        Ex = E_sp_xderiv(tau, 1, Etau)
        xE = tau * Etau
        oneD = 1 + D
        # dD/dx = D(1+D)(E + xE_x) / ((1-xED)(1+xE))
        Dx = (D * oneD * (Etau + tau * Ex)) / ((1 - xE * D) * (1 + xE))
        DD2 = 1 + D / 2
        G = (xE / (1 + xE)) * D * DD2
        # d/dx of G at fixed w
        Gx = ((Etau + tau * Ex) / (1 + xE) ** 2) * D * DD2 \
            + (xE / (1 + xE)) * Dx * DD2 + (xE / (1 + xE)) * D * (Dx / 2)
        B = tau * (D - G)
        dxB = (D - G) + tau * (Dx - Gx)
        p = rho * (B.exp() * dxB)
        dk = list(p.coeffs[:K + 1])
        tail = None
        if K >= 16:
            ctail = fit_tail_power_geometric(dk, 1 / w1, mp.mpf("-1.5"),
                                             max(8, K // 2), K)
            tail = TailModel(kind="power_geometric", q=1 / w1, c=ctail, a=mp.mpf("-1.5"))
        return DegreeDistribution("series_parallel", "connected", K, dk, tail)


# ---------------------------------------------------------------------------
# documented printed-formula discrepancies (reported, not used)
# ---------------------------------------------------------------------------

def discrepancy_report(digits=30):
    """The two printed closed forms that do not reproduce the q constants.

    Returns dict entries (printed_value, authoritative_value) so a validator
    can assert the mismatch is expected."""
    cons = constants_sp(digits)
    with mp.workdps(2 * digits + 10):
        tau, Etau = cons.tau.value, cons.Etau.value
        # theorem statement exponent exp(-1/(tau E)) vs proof exp(-1/(1+tau E))
        w1_stmt = (1 + 1 / (tau * Etau)) * mpmath.exp(-1 / (tau * Etau)) - 1
        q_stmt = 1 / w1_stmt
        # closed form R(y) = (sqrt(1-1/E0)-1)/E0 (branch/sign sensitive)
        E0 = cons.E0.value
        r_closed = (mpmath.sqrt(1 - 1 / E0) - 1) / E0
        return {
            "sp_conn_q_statement": (q_stmt, cons.q_conn.value),
            "sp_R_closed_form": (r_closed, cons.R1.value),
        }
