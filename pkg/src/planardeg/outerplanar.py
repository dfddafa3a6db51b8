"""Degree distribution of 2-connected and connected outerplanar graphs.

2-connected rooted outerplanar graphs are polygon dissections, giving the
explicit dissection series D(x) and the closed form

    B(x, w) = xw + (x w^2 / 2) (2D(x)-x) / (1 - (2D(x)-x) w).

The connected distribution is rho * d/dx exp(B(x,w)) at x = tau, where tau is
the positive critical point of psi(u) = u exp(-B'(u)) and rho = psi(tau).
Large-k behaviour follows a Hayman saddle point with a stretched-exponential
factor.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import mp

from .numerics import Real, SolverConfig, solve_scalar
from .series import Series, compose, fixed_point
from .asymptotics import (DegreeDistribution, TailModel,
                          fit_tail_outer_subexp)


class OutsideDisk(Exception):
    """x is too close to the dissection branch point: |2D(x)-x| >= 1."""


# ---------------------------------------------------------------------------
# closed-form scalars
# ---------------------------------------------------------------------------

def _sqrt_disc(x):
    return mpmath.sqrt(1 - 6 * x + x * x)


def bprime(x):
    return (1 + 5 * x - _sqrt_disc(x)) / 8


def bsecond(x):
    return (5 + (3 - x) / _sqrt_disc(x)) / 8


def dissection(x):
    return (1 + x - _sqrt_disc(x)) / 4


def dissection_deriv(x):
    return (1 + (3 - x) / _sqrt_disc(x)) / 4


def psi(u):
    return u * mpmath.exp(-bprime(u))


def psi_deriv(u):
    return mpmath.exp(-bprime(u)) * (1 - u * bsecond(u))


# ---------------------------------------------------------------------------
# exact series
# ---------------------------------------------------------------------------

def dissection_gf(N) -> Series:
    """D(x) over exact rationals through order N."""
    x = Series.identity("x", N)
    disc = 1 - 6 * x + x * x
    return (1 + x - disc.sqrt()) / 4


def bprime_series(N) -> Series:
    x = Series.identity("x", N)
    disc = 1 - 6 * x + x * x
    return (1 + 5 * x - disc.sqrt()) / 8


def cprime_series(N) -> Series:
    """C'(x) = exp(B'(xC'(x))) over exact rationals, by fixed point."""
    bp = bprime_series(N)
    x = Series.identity("x", N)

    def phi(g):
        xg = (x * (g + 1)).truncate(N)
        return compose(bp, xg).exp()

    # iterate on g = C' - 1 so the unknown starts at valuation 1
    g = fixed_point(lambda s: phi(s) - 1, Series.zero("x", N), N)
    return g + 1


def _lift_w(series_x: Series, K) -> Series:
    """Turn an exact x-series into one with w-polynomial coefficients."""
    return Series("x", [Series.constant("w", c, K) for c in series_x.coeffs])


def croot_series(N, K) -> Series:
    """C(x,w) root-degree series: x-series whose coefficients are exact
    w-polynomials; n! [x^n w^k] counts rooted connected outerplanar graphs
    with n+1 vertices and root degree k."""
    cp = cprime_series(N)
    x = Series.identity("x", N)
    z = (x * cp).truncate(N)          # xC'(x), valuation 1
    dz = compose(dissection_gf(N), z)
    m = 2 * dz - z                     # 2D(z) - z, valuation 1
    zw = _lift_w(z, K)
    mw = _lift_w(m, K)
    w1 = Series.constant("x", Series.identity("w", K), N)
    # B(z, w) = z w + (z/2) sum_{k>=2} m^{k-1} w^k
    acc = zw * w1
    mk = _lift_w(m, K)
    for k in range(2, K + 1):
        wk = Series.constant("x", Series.identity("w", K) ** k, N)
        acc = acc + (zw / 2) * mk * wk
        mk = (mk * mw).truncate(N)
    return acc.exp()


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

@dataclass
class OuterConstants:
    tau: Real
    rho: Real
    radiusB: Real
    q: Real
    c1: Real
    c2: Real
    digits: int


_cache = {}


def constants_outer(digits=30) -> OuterConstants:
    if digits in _cache:
        return _cache[digits]
    cfg = SolverConfig(target_digits=digits, max_iterations=400)
    with mp.workdps(cfg.working_dps):
        radius = 3 - 2 * mpmath.sqrt(2)
        bracket = (mp.mpf("0.05"), radius - mp.mpf(10) ** (-digits))
        tau = solve_scalar(lambda u: psi_deriv(u.value), SolverConfig(
            target_digits=digits, max_iterations=400, bracket=bracket))
        tv = tau.value
        assert abs(tv * bsecond(tv) - 1) < mp.mpf(10) ** (-digits + 4)
        rho = psi(tv)
        q = 2 * dissection(tv) - tv
        dist = pgf_outer_conn(64, digits=digits, _tail=False)
        c1, c2 = fit_tail_outer_subexp(dist.dk, q, 32, 64)
        cons = OuterConstants(tau=tau, rho=Real(rho, digits),
                              radiusB=Real(radius, digits), q=Real(q, digits),
                              c1=Real(c1, digits), c2=Real(c2, digits),
                              digits=digits)
    _cache[digits] = cons
    return cons


# ---------------------------------------------------------------------------
# distributions
# ---------------------------------------------------------------------------

def broot_outer(x, Nw) -> Series:
    """w-expansion of B(x, w) at numeric x: B_1 = x, B_k = (x/2)(2D-x)^(k-1)."""
    x = mp.mpf(x.value if isinstance(x, Real) else x)
    if not 0 <= x < 3 - 2 * mpmath.sqrt(2):
        raise OutsideDisk(f"x = {mpmath.nstr(x, 8)} outside [0, 3-2*sqrt2)")
    m = 2 * dissection(x) - x
    if abs(m) >= 1:
        raise OutsideDisk(f"|2D(x)-x| = {mpmath.nstr(abs(m), 8)} >= 1")
    coeffs = [mp.mpf(0), x]
    for k in range(2, Nw + 1):
        coeffs.append(x / 2 * m ** (k - 1))
    return Series("w", coeffs[:Nw + 1])


def pgf_outer_2conn(K) -> DegreeDistribution:
    """d_k = 2(k-1)(sqrt2-1)^k for k >= 2: the expansion of the normalized
    p(w) = 2(3-2*sqrt2) w^2 / (1-(sqrt2-1)w)^2, using (sqrt2-1)^2 = 3-2*sqrt2."""
    s2 = mpmath.sqrt(2)
    q = s2 - 1
    dk = [mp.mpf(0), mp.mpf(0)] + [2 * (k - 1) * q ** k for k in range(2, K + 1)]
    tail = TailModel(kind="linear_geometric", q=q, c=mp.mpf(2))
    return DegreeDistribution("outerplanar", "2conn", K, dk[:K + 1], tail)


def _pw_series(K, cons_tau, cons_rho):
    """w-series of p(w) = rho e^{B(tau,w)} dB/dx(tau,w)."""
    tau, rho = cons_tau, cons_rho
    m = 2 * dissection(tau) - tau
    mprime = 2 * dissection_deriv(tau) - 1
    geom = Series("w", [m ** k for k in range(K + 1)])
    geom2 = geom * geom
    B = Series("w", [mp.mpf(0), tau] +
               [(tau / 2) * m ** (k - 1) for k in range(2, K + 1)])
    dxB = Series("w", [mp.mpf(0), mp.mpf(1)] +
                 [(m * geom[k - 2] + tau * mprime * geom2[k - 2]) / 2
                  for k in range(2, K + 1)])
    return rho * (B.exp() * dxB)


def pgf_outer_conn(K, digits=30, _tail=True) -> DegreeDistribution:
    cfg = SolverConfig(target_digits=digits)
    with mp.workdps(cfg.working_dps):
        if _tail:
            cons = constants_outer(digits)
            tau, rho, q = cons.tau.value, cons.rho.value, cons.q.value
            Kc = max(K, 64)
            p = _pw_series(Kc, tau, rho)
            c1, c2 = cons.c1.value, cons.c2.value
            tail = TailModel(kind="outer_subexp", q=q, c=c1, c2=c2)
            return DegreeDistribution("outerplanar", "connected", K,
                                      list(p.coeffs[:K + 1]), tail)
        # bootstrap path used while computing the constants themselves
        radius = 3 - 2 * mpmath.sqrt(2)
        bracket = (mp.mpf("0.05"), radius - mp.mpf(10) ** (-digits))
        tau = solve_scalar(lambda u: psi_deriv(u.value), SolverConfig(
            target_digits=digits, max_iterations=400, bracket=bracket)).value
        rho = psi(tau)
        p = _pw_series(K, tau, rho)
        return DegreeDistribution("outerplanar", "connected", K,
                                  list(p.coeffs[:K + 1]), None)


# ---------------------------------------------------------------------------
# Hayman estimate
# ---------------------------------------------------------------------------

def _pw_scalar(w, tau, rho):
    m = 2 * dissection(tau) - tau
    mprime = 2 * dissection_deriv(tau) - 1
    B = tau * w + tau * w ** 2 / 2 * m / (1 - m * w)
    dxB = w + w ** 2 / 2 * (m / (1 - m * w) + tau * mprime / (1 - m * w) ** 2)
    return rho * mpmath.exp(B) * dxB


def hayman_estimate_outer(k, digits=30):
    """Saddle-point estimate of d_k from r p'(r)/p(r) = k on (0, 1/q)."""
    cons = constants_outer(digits)
    cfg = SolverConfig(target_digits=digits)
    with mp.workdps(cfg.working_dps):
        tau, rho, q = cons.tau.value, cons.rho.value, cons.q.value
        p = lambda w: _pw_scalar(w, tau, rho)
        h = mp.mpf(10) ** (-cfg.working_dps // 3)

        def a_of(r):
            return r * (p(r + h) - p(r - h)) / (2 * h) / p(r)

        lo = mp.mpf("0.05")
        hi = 1 / q - mp.mpf(10) ** (-digits // 2)
        r = solve_scalar(lambda r: a_of(r.value) - k,
                         SolverConfig(target_digits=min(digits, 25),
                                      max_iterations=400, bracket=(lo, hi))).value
        a = a_of(r)
        pdd = (p(r + h) - 2 * p(r) + p(r - h)) / h ** 2
        b = r ** 2 * pdd / p(r) + a - a ** 2
        est = p(r) * r ** (-k) / mpmath.sqrt(2 * mpmath.pi * b)
        return Real(est, digits)
