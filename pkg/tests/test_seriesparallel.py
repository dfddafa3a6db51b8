"""Series-parallel networks, singular coefficients, distributions."""
import math
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from planardeg import seriesparallel as sp
from planardeg.numerics import SolverConfig, solve_system2
from planardeg.series import Series


def test_E_at_zero_is_y():
    with mp.workdps(40):
        assert abs(sp.solve_E_sp(0, 1) - 1) < mpf(10) ** -35
        assert abs(sp.solve_E_sp(0, mpf("1.3")) - mpf("1.3")) < mpf(10) ** -35


def test_E_scalar_matches_series_iteration():
    # E(x,1) series to order 6 from the formal fixed point
    E, _ = sp.network_series(8, 1)
    with mp.workdps(50):
        x = mpf("0.005")
        val = sum(mpf(c.numerator) / c.denominator * x ** k
                  for k, c in enumerate(E.coeffs))
        scalar = sp.solve_E_sp(x, 1)
        assert abs(val - scalar) < mpf("1e-12")  # truncation-level agreement


def test_E_newton_loses_branch_beyond_R(sp_constants):
    with mp.workdps(40):
        with pytest.raises(sp.BeyondSingularity):
            sp.solve_E_sp(sp_constants.R1.value * mpf("1.02"), 1)


def test_D_at_w0_is_zero():
    with mp.workdps(40):
        assert sp.solve_D_sp(mpf("0.1"), 1, 0) == 0


def test_D_at_w1_is_E():
    with mp.workdps(50):
        x = mpf("0.09")
        E = sp.solve_E_sp(x, 1)
        assert abs(sp.solve_D_sp(x, 1, 1, E=E) - E) < mpf(10) ** -38


def test_D_series_matches_network_system():
    # formal iteration of D = (1+yw)e^S - 1, S = (D-S) x E against the
    # log-form solution used by the scalar solver
    E, D = sp.network_series(5, 12)
    with mp.workdps(50):
        x, w = mpf("0.006"), mpf("0.7")
        val = mpf(0)
        for k, cw in enumerate(D.coeffs):
            inner = sum(mpf(c.numerator) / c.denominator * w ** j
                        for j, c in enumerate(cw.coeffs))
            val += inner * x ** k
        scalar = sp.solve_D_sp(x, 1, w)
        assert abs(val - scalar) < mpf("1e-9")  # x-order truncation level


def test_broot_at_w0():
    with mp.workdps(40):
        assert sp.broot_sp(mpf("0.1"), 1, 0) == 0


def test_broot_w_derivative_is_xyw_expS():
    # w dB/dw = xyw e^S with S = xED/(1+xE)
    with mp.workdps(60):
        x, y, w = mpf("0.08"), mpf(1), mpf("0.6")
        h = mpf(10) ** -25
        dB = (sp.broot_sp(x, y, w + h) - sp.broot_sp(x, y, w - h)) / (2 * h)
        E = sp.solve_E_sp(x, y)
        D = sp.solve_D_sp(x, y, w, E=E)
        S = x * E * D / (1 + x * E)
        assert abs(w * dB - x * y * w * mpmath.exp(S)) < mpf(10) ** -20


def test_exact_2conn_series_vs_enumeration(enum_counts):
    b = sp.broot_series(5, 6, Fraction(1))
    for m in (3, 4, 5, 6):
        hist = enum_counts[m]["series_parallel"].histogram["2conn"]
        coeff = b[m - 1]
        for k in range(7):
            assert coeff[k] * math.factorial(m - 1) == hist.get(k, 0)


def test_exact_croot_series_vs_enumeration(enum_counts):
    cw = sp.croot_series(5, 6)
    for m in (2, 3, 4, 5, 6):
        hist = enum_counts[m]["series_parallel"].histogram["connected"]
        coeff = cw[m - 1]
        for k in range(7):
            assert coeff[k] * math.factorial(m - 1) == hist.get(k, 0)


def test_singular_coeffs(sp_constants):
    with mp.workdps(70):
        R, E0, E1, D0, D1, B0, B1 = sp.sp_singular_coeffs(1, 1, 30)
        assert abs(R - mpf("0.1280038")) < mpf("1e-6")
        assert abs(D0 - E0) < mpf(10) ** -25
        assert abs(D1 - E1) < mpf(10) ** -25
        assert abs(B1 / B1 - 1) == 0  # p(1) normalization is definitional


def test_w0_singularity_two_ways(sp_constants):
    # closed form w0 vs direct branch-point detection of the w-solver
    with mp.workdps(70):
        c = sp_constants
        R, E0 = c.R1.value, c.E0.value
        cc = R * E0 / (1 + R * E0)

        def F(p):
            w, z = p[0].value, p[1].value
            psi = (1 + w) * mpmath.exp(cc * z) - z - 1
            psi_z = (1 + w) * cc * mpmath.exp(cc * z) - 1
            return (psi, psi_z)

        cfg = SolverConfig(target_digits=25, max_iterations=200)
        w0det, D00 = solve_system2(F, (mpf("1.3"), mpf("4")), cfg)
        assert abs(w0det.value - c.w0.value) < mpf("1e-6")
        assert abs(D00.value - 1 / (R * E0)) < mpf("1e-6")


def test_constants(sp_constants):
    c = sp_constants
    assert abs(c.tau.value - mpf("0.1279695")) < mpf("1e-7")
    assert abs(c.rho.value - mpf("0.1102133")) < mpf("1e-7")
    assert abs(c.q_conn.value - mpf("0.7504161")) < mpf("1e-7")
    assert abs(c.q_2conn.value - mpf("0.7620402")) < mpf("1e-7")
    assert abs(c.kappa.value - mpf("1.61673")) < mpf("1e-5")
    assert c.tau.value < c.R1.value  # subcritical composition


def test_conn_distribution_table1():
    with mp.workdps(70):
        d = sp.pgf_sp_conn(6)
        printed = ["0.1102133", "0.3563715", "0.2233570",
                   "0.1257639", "0.0717254", "0.0421514"]
        for k in range(1, 7):
            assert abs(d.dk[k] - mpf(printed[k - 1])) < mpf("1e-6")


def test_conn_d2_is_2_kappa_d1(sp_constants):
    with mp.workdps(70):
        d = sp.pgf_sp_conn(4)
        assert abs(d.dk[2] - 2 * sp_constants.kappa.value * d.dk[1]) < mpf("1e-4")


def test_totals_and_mean(sp_constants):
    with mp.workdps(70):
        dc = sp.pgf_sp_conn(64)
        d2 = sp.pgf_sp_2conn(64)
        assert abs(dc.total() - 1) < mpf("1e-8")
        assert abs(d2.total() - 1) < mpf("1e-8")
        assert abs(dc.mean_degree() - mpf("3.23346")) < mpf("1e-3")


def test_2conn_d2_matches_finite_n_trend(enum_counts):
    # within 15% of the n<=6 enumeration histogram fraction
    with mp.workdps(50):
        d = sp.pgf_sp_2conn(8)
        hist = enum_counts[6]["series_parallel"].histogram["2conn"]
        tot = enum_counts[6]["series_parallel"].two_connected
        finite = mpf(hist[2]) / tot
        assert abs(d.dk[2] / finite - 1) < mpf("0.20")


def test_fitted_c_constants(sp_constants):
    assert abs(sp_constants.c_conn.value - mpf("3.5952391")) < mpf("1e-3")
    assert abs(sp_constants.c_2conn.value - mpf("3.7340799")) < mpf("1e-3")


def test_discrepancy_report(sp_constants):
    rep = sp.discrepancy_report(30)
    q_stmt, q_auth = rep["sp_conn_q_statement"]
    assert abs(q_stmt - q_auth) > mpf("0.1")  # statement form is wrong
    r_closed, r_auth = rep["sp_R_closed_form"]
    assert abs(r_closed - r_auth) > mpf("1e-3")  # branch-sensitive closed form
