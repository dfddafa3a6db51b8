"""Configurable-precision reals and the scalar/2-D solvers behind every
implicit constant.

All numeric work is done with mpmath.  A :class:`Real` couples a magnitude
with the working precision (decimal digits) it was computed at; arithmetic
propagates the minimum precision of the operands, and tolerance-based
comparison uses ``10**(-precision+5)``.

Solvers follow a bracketed Newton scheme with numeric derivatives: Newton
steps that leave the bracket fall back to bisection, so a sign-changing
bracket guarantees convergence.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import mpmath
from mpmath import mp


class SolverError(Exception):
    pass


class NoSignChange(SolverError):
    """The supplied bracket does not enclose a sign change."""


class NoConvergence(SolverError):
    """Iteration budget exhausted before reaching the target residual."""


class SingularJacobian(SolverError):
    """The 2-D Newton Jacobian became numerically singular."""


MIN_PRECISION = 30


class Real:
    """A real number tagged with the working precision that produced it."""

    __slots__ = ("value", "precision")

    def __init__(self, value, precision=None):
        if isinstance(value, Real):
            precision = value.precision if precision is None else precision
            value = value.value
        self.value = mp.mpf(value) if not isinstance(value, mp.mpf) else value
        self.precision = int(precision if precision is not None else mp.dps)
        if self.precision < MIN_PRECISION:
            raise ValueError(f"precision must be >= {MIN_PRECISION}")

    # -- helpers -----------------------------------------------------------
    @property
    def tolerance(self):
        return mp.mpf(10) ** (-(self.precision - 5))

    def equals(self, other, tol=None) -> bool:
        other = other if isinstance(other, Real) else Real(other, self.precision)
        tol = tol if tol is not None else min(self.tolerance, other.tolerance)
        return abs(self.value - other.value) < tol

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return f"Real({mpmath.nstr(self.value, min(self.precision, 25))}, prec={self.precision})"

    def __str__(self):
        return mpmath.nstr(self.value, self.precision)

    # -- arithmetic: result precision is the minimum of the operands --------
    def _binary(self, other, op):
        if isinstance(other, Real):
            prec = min(self.precision, other.precision)
            val = other.value
        else:
            prec = self.precision
            val = mp.mpf(other)
        with mp.workdps(prec):
            return Real(op(self.value, val), prec)

    def __add__(self, o): return self._binary(o, lambda a, b: a + b)
    __radd__ = __add__
    def __sub__(self, o): return self._binary(o, lambda a, b: a - b)
    def __rsub__(self, o): return self._binary(o, lambda a, b: b - a)
    def __mul__(self, o): return self._binary(o, lambda a, b: a * b)
    __rmul__ = __mul__
    def __truediv__(self, o): return self._binary(o, lambda a, b: a / b)
    def __rtruediv__(self, o): return self._binary(o, lambda a, b: b / a)
    def __neg__(self): return Real(-self.value, self.precision)
    def __abs__(self): return Real(abs(self.value), self.precision)

    def __lt__(self, o): return self.value < _raw(o)
    def __le__(self, o): return self.value <= _raw(o)
    def __gt__(self, o): return self.value > _raw(o)
    def __ge__(self, o): return self.value >= _raw(o)
    def __eq__(self, o): return self.equals(o) if isinstance(o, (Real, int, float, mp.mpf)) else NotImplemented
    def __hash__(self):
        return hash(self.value)


def _raw(x):
    return x.value if isinstance(x, Real) else mp.mpf(x)


@dataclass
class SolverConfig:
    target_digits: int = 30
    max_iterations: int = 200
    bracket: Optional[Tuple] = None

    def __post_init__(self):
        if self.target_digits <= 0 or self.max_iterations <= 0:
            raise ValueError("target_digits and max_iterations must be positive")
        if self.bracket is not None:
            lo, hi = self.bracket
            if not _raw(lo) < _raw(hi):
                raise ValueError("bracket must satisfy lo < hi")

    @property
    def working_dps(self):
        # working precision >= 2 * displayed digits + 10
        return max(2 * self.target_digits + 10, MIN_PRECISION)


def _call(f, x, prec):
    """Call a user function on a Real, accept Real or raw output."""
    y = f(Real(x, prec))
    return _raw(y)


def solve_scalar(f: Callable, cfg: SolverConfig, x0=None) -> Real:
    """Root of a scalar function by safeguarded Newton.

    With a bracket, the endpoints must produce opposite signs; Newton steps
    leaving the bracket are replaced by bisection of the current sign-change
    interval.  Without a bracket an initial guess ``x0`` is required and plain
    Newton with a central-difference derivative is used.
    """
    prec = cfg.working_dps
    with mp.workdps(prec):
        tol = mp.mpf(10) ** (-cfg.target_digits)
        h = mp.mpf(10) ** (-(prec // 2))
        if cfg.bracket is not None:
            lo, hi = mp.mpf(_raw(cfg.bracket[0])), mp.mpf(_raw(cfg.bracket[1]))
            flo, fhi = _call(f, lo, prec), _call(f, hi, prec)
            if flo == 0:
                return Real(lo, max(cfg.target_digits + 5, MIN_PRECISION))
            if fhi == 0:
                return Real(hi, max(cfg.target_digits + 5, MIN_PRECISION))
            if (flo > 0) == (fhi > 0):
                raise NoSignChange(f"f({lo})={flo} and f({hi})={fhi} share a sign")
            x = mp.mpf(_raw(x0)) if x0 is not None else (lo + hi) / 2
        else:
            if x0 is None:
                raise NoSignChange("either a bracket or an initial guess is required")
            x = mp.mpf(_raw(x0))
            lo = hi = None
        fx = _call(f, x, prec)
        for _ in range(cfg.max_iterations):
            if abs(fx) < tol:
                return Real(x, max(cfg.target_digits + 5, MIN_PRECISION))
            d = (_call(f, x + h, prec) - _call(f, x - h, prec)) / (2 * h)
            step_ok = d != 0
            if step_ok:
                x_new = x - fx / d
                if lo is not None and not (lo < x_new < hi):
                    step_ok = False
            if not step_ok:
                if lo is None:
                    raise NoConvergence("Newton stalled and no bracket available")
                x_new = (lo + hi) / 2
            f_new = _call(f, x_new, prec)
            if lo is not None:
                if (f_new > 0) == (flo > 0):
                    lo, flo = x_new, f_new
                else:
                    hi, fhi = x_new, f_new
            x, fx = x_new, f_new
        if abs(fx) < tol:
            return Real(x, max(cfg.target_digits + 5, MIN_PRECISION))
        raise NoConvergence(f"|f(x)|={mpmath.nstr(abs(fx), 5)} after {cfg.max_iterations} iterations")


def solve_system2(F: Callable, initial, cfg: SolverConfig):
    """Newton for a 2-D system with a central-difference Jacobian.

    ``F`` maps a pair to a pair of residuals; returns the pair ``(a, b)`` with
    both residuals below ``10**-target_digits``.
    """
    prec = cfg.working_dps
    with mp.workdps(prec):
        tol = mp.mpf(10) ** (-cfg.target_digits)
        h = mp.mpf(10) ** (-(prec // 2))
        x, y = mp.mpf(_raw(initial[0])), mp.mpf(_raw(initial[1]))

        def ev(a, b):
            r = F((Real(a, prec), Real(b, prec)))
            return _raw(r[0]), _raw(r[1])

        damping = mp.mpf(1)
        for _ in range(cfg.max_iterations):
            f1, f2 = ev(x, y)
            if abs(f1) < tol and abs(f2) < tol:
                return (Real(x, max(cfg.target_digits + 5, MIN_PRECISION)), Real(y, max(cfg.target_digits + 5, MIN_PRECISION)))
            f1x = (ev(x + h, y)[0] - ev(x - h, y)[0]) / (2 * h)
            f1y = (ev(x, y + h)[0] - ev(x, y - h)[0]) / (2 * h)
            f2x = (ev(x + h, y)[1] - ev(x - h, y)[1]) / (2 * h)
            f2y = (ev(x, y + h)[1] - ev(x, y - h)[1]) / (2 * h)
            det = f1x * f2y - f1y * f2x
            if det == 0 or not mpmath.isfinite(det):
                raise SingularJacobian("Jacobian determinant vanished")
            dx = (f1 * f2y - f2 * f1y) / det
            dy = (f1x * f2 - f2x * f1) / det
            x, y = x - damping * dx, y - damping * dy
        f1, f2 = ev(x, y)
        if abs(f1) < tol and abs(f2) < tol:
            return (Real(x, max(cfg.target_digits + 5, MIN_PRECISION)), Real(y, max(cfg.target_digits + 5, MIN_PRECISION)))
        raise NoConvergence("2-D Newton did not reach the target residual")


def differentiate(f: Callable, x, cfg: SolverConfig) -> Real:
    """Central-difference derivative with Richardson extrapolation.

    Halving steps are combined through a Neville tableau in h**2; the result
    carries an error estimate required to sit below 10**(-target_digits/2).
    """
    prec = cfg.working_dps
    with mp.workdps(prec + 20):
        xv = mp.mpf(_raw(x))
        scale = max(abs(xv), mp.mpf(1))
        h0 = scale * mp.mpf(10) ** (-max(cfg.target_digits // 2, 6))
        rows = []
        best, best_err = None, mp.inf
        for i in range(12):
            h = h0 / 2 ** i
            d = (_call(f, xv + h, prec + 20) - _call(f, xv - h, prec + 20)) / (2 * h)
            row = [d]
            for j, prev in enumerate(rows[-1] if rows else []):
                fac = mp.mpf(4) ** (j + 1)
                row.append((fac * row[j] - prev) / (fac - 1))
            rows.append(row)
            if len(row) >= 2:
                err = abs(row[-1] - row[-2])
                if err < best_err:
                    best, best_err = row[-1], err
                if err <= abs(row[-1]) * mp.mpf(10) ** (-cfg.target_digits // 2) + mp.mpf(10) ** (-prec):
                    return Real(row[-1], max(cfg.target_digits + 5, MIN_PRECISION))
        if best is not None and best_err <= (abs(best) + 1) * mp.mpf(10) ** (-cfg.target_digits // 2):
            return Real(best, max(cfg.target_digits + 5, MIN_PRECISION))
    raise NoConvergence("Richardson extrapolation did not stabilize")
