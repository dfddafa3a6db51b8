"""Truncated formal power series over exact rationals, mpmath floats, or
nested series.

A :class:`Series` is a truncated expansion ``c0 + c1*x + ... + cN*x**N`` in a
single named variable.  Coefficients may be :class:`fractions.Fraction` (exact
pipelines), ``mpmath.mpf`` (numeric pipelines), or again :class:`Series`
(nested, for bivariate/trivariate work with rectangular truncation).  All
arithmetic truncates to the smaller order of the two operands, and operations
on series with different variable tags are rejected.
"""
from __future__ import annotations

from fractions import Fraction
import math

import mpmath
from mpmath import mp


class SeriesError(Exception):
    """Base class for series failures."""


class VariableMismatch(SeriesError):
    """Two series in different formal variables were combined."""


class DivisionByZeroValuation(SeriesError):
    """Division by a series with zero constant term."""


class NonzeroValuation(SeriesError):
    """Composition with an inner series whose constant term is nonzero."""


class NotContracting(SeriesError):
    """A fixed-point iteration failed to fix one more coefficient."""


class DomainError(SeriesError):
    """An analytic operation was applied outside its coefficient domain."""


# ---------------------------------------------------------------------------
# coefficient-domain helpers
# ---------------------------------------------------------------------------

def _zero_like(c):
    if isinstance(c, Series):
        return c.zeros_like()
    if isinstance(c, Fraction):
        return Fraction(0)
    if isinstance(c, int):
        return Fraction(0)
    return mp.mpf(0)


def _one_like(c):
    if isinstance(c, Series):
        z = c.zeros_like()
        return z + 1
    if isinstance(c, (Fraction, int)):
        return Fraction(1)
    return mp.mpf(1)


def _is_zero(c):
    if isinstance(c, Series):
        return c.is_zero()
    return c == 0


def _coeff_exp(c):
    if isinstance(c, Series):
        return c.exp()
    if isinstance(c, (Fraction, int)):
        if c == 0:
            return Fraction(1)
        raise DomainError("exp of a nonzero rational constant term is not exact")
    return mpmath.exp(c)


def _coeff_log(c):
    if isinstance(c, Series):
        return c.log()
    if isinstance(c, (Fraction, int)):
        if c == 1:
            return Fraction(0)
        raise DomainError("log of a rational constant term other than 1 is not exact")
    if c <= 0:
        raise DomainError("log of a nonpositive constant term")
    return mpmath.log(c)


def _coeff_sqrt(c):
    if isinstance(c, Series):
        return c.sqrt()
    if isinstance(c, (Fraction, int)):
        c = Fraction(c)
        rn = math.isqrt(c.numerator)
        rd = math.isqrt(c.denominator)
        if rn * rn != c.numerator or rd * rd != c.denominator:
            raise DomainError(f"{c} is not a perfect square in the rational domain")
        return Fraction(rn, rd)
    if c < 0:
        raise DomainError("sqrt of a negative constant term")
    return mpmath.sqrt(c)


def _domain_tag(c):
    if isinstance(c, Series):
        return "series[%s]" % c.domain
    if isinstance(c, (Fraction, int)):
        return "rational"
    return "real"


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------

class Series:
    """Truncated power series ``sum c[k] * var**k`` for ``k <= order``."""

    __slots__ = ("var", "coeffs")

    def __init__(self, var, coeffs):
        self.var = var
        self.coeffs = list(coeffs)
        if not self.coeffs:
            raise SeriesError("a series needs at least the constant coefficient")

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, var, order, like=None):
        z = _zero_like(like) if like is not None else Fraction(0)
        return cls(var, [z for _ in range(order + 1)])

    @classmethod
    def identity(cls, var, order, like=None):
        s = cls.zero(var, order, like=like)
        if order >= 1:
            s.coeffs[1] = _one_like(s.coeffs[0])
        return s

    @classmethod
    def constant(cls, var, value, order):
        s = cls(var, [value] + [_zero_like(value) for _ in range(order)])
        return s

    def zeros_like(self):
        return Series(self.var, [_zero_like(c) for c in self.coeffs])

    # -- basic properties --------------------------------------------------
    @property
    def order(self):
        return len(self.coeffs) - 1

    @property
    def domain(self):
        return _domain_tag(self.coeffs[0])

    def __getitem__(self, k):
        if 0 <= k <= self.order:
            return self.coeffs[k]
        return _zero_like(self.coeffs[0])

    def __iter__(self):
        return iter(self.coeffs)

    def is_zero(self):
        return all(_is_zero(c) for c in self.coeffs)

    def valuation(self):
        """Index of the first nonzero coefficient (order+1 if all zero)."""
        for k, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return k
        return self.order + 1

    def truncate(self, order):
        if order >= self.order:
            return self
        return Series(self.var, self.coeffs[:order + 1])

    def __repr__(self):
        inside = ", ".join(repr(c) for c in self.coeffs[:6])
        more = ", ..." if self.order > 5 else ""
        return f"Series({self.var!r}, [{inside}{more}], order={self.order})"

    # -- ring operations ----------------------------------------------------
    def _check(self, other):
        if self.var != other.var:
            raise VariableMismatch(f"cannot combine series in {self.var!r} and {other.var!r}")
        return min(self.order, other.order)

    def _coerce(self, scalar):
        z = _zero_like(self.coeffs[0])
        if isinstance(scalar, Series):
            # a series in another variable is a scalar only for nested
            # coefficients in that same variable
            if isinstance(z, Series) and z.var == scalar.var:
                return z + scalar
            raise VariableMismatch(
                f"cannot combine series in {self.var!r} and {scalar.var!r}")
        if isinstance(z, Series):
            return z + scalar
        if isinstance(z, Fraction):
            return Fraction(scalar)
        return mp.mpf(scalar) if not isinstance(scalar, mp.mpf) else scalar

    def __add__(self, other):
        if type(other).__name__ == "Dual":
            return NotImplemented
        if isinstance(other, Series) and other.var == self.var:
            n = self._check(other)
            return Series(self.var, [self.coeffs[k] + other.coeffs[k] for k in range(n + 1)])
        c = list(self.coeffs)
        c[0] = c[0] + self._coerce(other)
        return Series(self.var, c)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.var, [-c for c in self.coeffs])

    def __sub__(self, other):
        if type(other).__name__ == "Dual":
            return NotImplemented
        return self + (-other if isinstance(other, Series) else -self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if type(other).__name__ == "Dual":
            return NotImplemented
        if isinstance(other, Series) and other.var == self.var:
            n = self._check(other)
            out = [_zero_like(self.coeffs[0]) for _ in range(n + 1)]
            for i, a in enumerate(self.coeffs[:n + 1]):
                if _is_zero(a):
                    continue
                for j in range(n + 1 - i):
                    b = other.coeffs[j]
                    if not _is_zero(b):
                        out[i + j] = out[i + j] + a * b
            return Series(self.var, out)
        s = self._coerce(other)
        return Series(self.var, [c * s for c in self.coeffs])

    __rmul__ = __mul__

    def __truediv__(self, other):
        if type(other).__name__ == "Dual":
            return NotImplemented
        if isinstance(other, Series) and other.var == self.var:
            n = self._check(other)
            if _is_zero(other.coeffs[0]):
                raise DivisionByZeroValuation("denominator has zero constant term")
            out = []
            for k in range(n + 1):
                acc = self.coeffs[k]
                for j, q in enumerate(out):
                    acc = acc - q * other.coeffs[k - j]
                out.append(_div_coeff(acc, other.coeffs[0]))
            return Series(self.var, out)
        s = self._coerce(other)
        return Series(self.var, [_div_coeff(c, s) for c in self.coeffs])

    def __rtruediv__(self, other):
        return Series.constant(self.var, self._coerce(other), self.order) / self

    def __pow__(self, e):
        if isinstance(e, int):
            if e < 0:
                return (1 / self) ** (-e)
            out = Series.constant(self.var, _one_like(self.coeffs[0]), self.order)
            base = self
            while e:
                if e & 1:
                    out = out * base
                base = base * base
                e >>= 1
            return out
        e = Fraction(e) if not isinstance(e, Fraction) else e
        if e.denominator == 1:
            return self ** int(e)
        if e.denominator == 2:
            return (self ** int(e.numerator)).sqrt() if e.numerator % 2 == 0 else \
                (self ** e.numerator).sqrt()
        return ((self.log() * e).exp())

    # -- calculus -----------------------------------------------------------
    def deriv(self):
        if self.order == 0:
            return Series(self.var, [_zero_like(self.coeffs[0])])
        return Series(self.var, [self.coeffs[k] * k for k in range(1, self.order + 1)])

    def integ(self):
        """Termwise antiderivative with zero constant term (order grows by 1)."""
        out = [_zero_like(self.coeffs[0])]
        for k, c in enumerate(self.coeffs):
            out.append(_div_coeff(c, k + 1))
        return Series(self.var, out)

    # -- analytic operations --------------------------------------------------
    def exp(self):
        n = self.order
        out = [_coeff_exp(self.coeffs[0])]
        for k in range(1, n + 1):
            acc = _zero_like(self.coeffs[0])
            for j in range(1, k + 1):
                acc = acc + self.coeffs[j] * j * out[k - j]
            out.append(_div_coeff(acc, k))
        return Series(self.var, out)

    def log(self):
        n = self.order
        c0 = self.coeffs[0]
        if _is_zero(c0):
            raise DomainError("log of a series with zero constant term")
        out = [_coeff_log(c0)]
        for k in range(1, n + 1):
            acc = self.coeffs[k] * k
            for j in range(1, k):
                acc = acc - out[j] * j * self.coeffs[k - j]
            out.append(_div_coeff(_div_coeff(acc, k), c0))
        return Series(self.var, out)

    def sqrt(self):
        n = self.order
        r0 = _coeff_sqrt(self.coeffs[0])
        if _is_zero(r0):
            raise DomainError("sqrt of a series with zero constant term")
        out = [r0]
        for k in range(1, n + 1):
            acc = self.coeffs[k]
            for j in range(1, k):
                acc = acc - out[j] * out[k - j]
            out.append(_div_coeff(acc, r0 * 2))
        return Series(self.var, out)

    # -- evaluation / composition ------------------------------------------
    def __call__(self, x):
        """Evaluate at a scalar (Horner)."""
        acc = _zero_like_scalar(x)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift_down(self, k):
        """Divide by var**k; the dropped leading coefficients must vanish."""
        if any(not _is_zero(c) for c in self.coeffs[:k]):
            raise SeriesError("shift_down would drop nonzero coefficients")
        rest = self.coeffs[k:] or [_zero_like(self.coeffs[0])]
        return Series(self.var, list(rest))

    def shift_up(self, k):
        """Multiply by var**k, truncating at the original order."""
        z = _zero_like(self.coeffs[0])
        return Series(self.var, ([z] * k + self.coeffs)[:self.order + 1])


def _zero_like_scalar(x):
    if isinstance(x, Series):
        return x.zeros_like()
    if isinstance(x, (Fraction, int)):
        return Fraction(0)
    return mp.mpf(0)


def _div_coeff(c, d):
    """Coefficient division, exact in the rational domain."""
    if isinstance(c, Series):
        return c / d
    if isinstance(c, (Fraction, int)) and isinstance(d, (Fraction, int)):
        return Fraction(c) / Fraction(d)
    return c / d


def compose(outer: Series, inner: Series) -> Series:
    """Composition outer(inner) through the smaller order.

    The inner series must have zero constant term unless the outer one is a
    polynomial of degree < its order (then the evaluation is exact anyway).
    """
    if outer.var == inner.var:
        pass  # composing within one variable is fine (e.g. w -> w-series)
    if not _is_zero(inner.coeffs[0]):
        # exact polynomial evaluation is allowed
        if not _is_zero(outer.coeffs[outer.order]):
            raise NonzeroValuation(
                "inner constant term nonzero and outer is not a low-degree polynomial")
    n = min(outer.order, inner.order)
    inner_t = inner.truncate(n)
    acc = Series.constant(inner_t.var, _promote(outer.coeffs[-1], inner_t), n)
    for c in reversed(outer.coeffs[:-1]):
        acc = acc * inner_t + _promote(c, inner_t)
    return acc


def _promote(c, template: Series):
    """Lift an outer coefficient into the inner coefficient domain."""
    z = _zero_like(template.coeffs[0])
    return z + c


def fixed_point(phi, template: Series, order=None) -> Series:
    """Solve y = phi(y) for a valuation-contracting phi, starting from 0.

    Each iteration must fix at least one more coefficient; if an iteration
    fails to extend the agreement order, :class:`NotContracting` is raised.
    """
    order = template.order if order is None else order
    y = template.zeros_like().truncate(order)
    agreed = -1
    for _ in range(order + 2):
        y_new = phi(y).truncate(order)
        diff = y_new - y
        val = diff.valuation()
        if val > order:
            return y_new
        if val <= agreed:
            raise NotContracting(
                f"iteration did not fix coefficient {val} (agreement stuck)")
        agreed = val
        y = y_new
    raise NotContracting("fixed point not reached within order+2 iterations")


def newton_solve(f, df, y0: Series, max_steps=None) -> Series:
    """Solve f(y) = 0 for a series y by Newton iteration, seeded with y0.

    ``df`` maps the current iterate to the series multiplier f'(y); Newton
    doubles the number of correct coefficients per step, so convergence is
    checked through the full truncation order.
    """
    y = y0
    order = y0.order
    steps = max_steps or (order.bit_length() + 4)
    for _ in range(steps):
        res = f(y).truncate(order)
        if res.is_zero():
            return y
        y = (y - res / df(y).truncate(order)).truncate(order)
    res = f(y).truncate(order)
    if res.valuation() > order:
        return y
    # numeric domains never reach exact zero; accept tiny residuals
    top = max(abs(c) for c in res.coeffs if not isinstance(c, (Series, Fraction)))
    scale = max([abs(c) for c in y.coeffs if not isinstance(c, (Series, Fraction))] + [mp.mpf(1)])
    if top <= scale * mp.mpf(10) ** (-mp.dps + 12):
        return y
    raise NotContracting("series Newton iteration did not converge")


class Dual:
    """Forward-mode dual number over any ring element (scalar or Series).

    Used to get exact derivatives of pointwise-analytic maps for implicit
    series solves without hand-coding each derivative."""

    __slots__ = ("val", "der")

    def __init__(self, val, der):
        self.val = val
        self.der = der

    @classmethod
    def variable(cls, val):
        one = _one_like(val) if isinstance(val, (Series, Fraction)) else mp.mpf(1)
        return cls(val, one)

    def _lift(self, other):
        if isinstance(other, Dual):
            return other
        zero = _zero_like(self.val) if isinstance(self.val, (Series, Fraction)) else mp.mpf(0)
        return Dual(other, zero)

    def __add__(self, o):
        o = self._lift(o)
        return Dual(self.val + o.val, self.der + o.der)
    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.val, -self.der)

    def __sub__(self, o):
        o = self._lift(o)
        return Dual(self.val - o.val, self.der - o.der)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        o = self._lift(o)
        return Dual(self.val * o.val, self.der * o.val + self.val * o.der)
    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        q = self.val / o.val
        return Dual(q, (self.der - q * o.der) / o.val)

    def __rtruediv__(self, o):
        return self._lift(o) / self

    def __pow__(self, e):
        assert isinstance(e, int) and e >= 0
        out = Dual(_one_like(self.val) if isinstance(self.val, (Series, Fraction)) else mp.mpf(1),
                   _zero_like(self.val) if isinstance(self.val, (Series, Fraction)) else mp.mpf(0))
        base, k = self, e
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sqrt(self):
        s = self.val.sqrt() if isinstance(self.val, Series) else _coeff_sqrt(self.val)
        return Dual(s, self.der / (s * 2))

    def log(self):
        lg = self.val.log() if isinstance(self.val, Series) else _coeff_log(self.val)
        return Dual(lg, self.der / self.val)

    def exp(self):
        ex = self.val.exp() if isinstance(self.val, Series) else _coeff_exp(self.val)
        return Dual(ex, self.der * ex)


class BiSeries:
    """Rectangularly truncated series in two variables, nested outer/inner.

    The outer series holds, for each power of the outer variable, a series in
    the inner variable; all inner series share one variable tag and order.
    """

    __slots__ = ("outer",)

    def __init__(self, outer: Series):
        inner_vars = {c.var for c in outer.coeffs}
        if len(inner_vars) != 1:
            raise VariableMismatch("inner coefficients use mixed variable tags")
        self.outer = outer

    @classmethod
    def zero(cls, outer_var, inner_var, n_outer, n_inner, like=None):
        inner = Series.zero(inner_var, n_inner, like=like)
        return cls(Series(outer_var, [inner.zeros_like() for _ in range(n_outer + 1)]))

    @property
    def orders(self):
        return (self.outer.order, self.outer.coeffs[0].order)

    def coeff(self, i, j):
        return self.outer[i][j]

    def __repr__(self):
        no, ni = self.orders
        return f"BiSeries({self.outer.var!r}/{self.outer.coeffs[0].var!r}, orders=({no},{ni}))"
