"""Degree-distribution containers, tail models, and the fitting utilities
shared by all families: high-precision singular-expansion fits near branch
points and large-k tail fits of computed coefficient sequences."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import mpmath
from mpmath import mp


@dataclass
class TailModel:
    """Asymptotic model for d_k beyond the computed range.

    kinds:
      power_geometric   c * k**a * q**k
      outer_subexp      c1 * k**(1/4) * exp(c2*sqrt(k)) * q**k
      linear_geometric  c * (k-1) * q**k   (exact closed form, 2conn outerplanar)
    """
    kind: str
    q: object
    c: object = None
    a: object = None
    c2: object = None

    def term(self, k):
        k = mp.mpf(k)
        if self.kind == "power_geometric":
            return self.c * k ** self.a * self.q ** k
        if self.kind == "outer_subexp":
            return self.c * k ** mp.mpf("0.25") * mpmath.exp(self.c2 * mpmath.sqrt(k)) * self.q ** k
        if self.kind == "linear_geometric":
            return self.c * (k - 1) * self.q ** k
        raise ValueError(self.kind)

    def _sum(self, start, weight):
        total = mp.mpf(0)
        k = start
        while True:
            t = weight(k) * self.term(k)
            total += t
            if abs(t) < mp.mpf(10) ** (-mp.dps - 5) * (1 + abs(total)) and k > start + 8:
                return total
            k += 1
            if k > start + 100000:
                return total

    def sum_from(self, start):
        return self._sum(start, lambda k: 1)

    def mean_from(self, start):
        return self._sum(start, lambda k: k)


@dataclass
class DegreeDistribution:
    """Limiting degree distribution: d_k for k <= k_max plus a tail model."""
    family: str
    level: str
    k_max: int
    dk: list = field(default_factory=list)  # index k, k = 0..k_max
    tail: Optional[TailModel] = None

    def d(self, k):
        return self.dk[k] if k <= self.k_max else (self.tail.term(k) if self.tail else mp.mpf(0))

    def total(self, tail_completed=True):
        s = sum(self.dk)
        if tail_completed and self.tail is not None:
            s += self.tail.sum_from(self.k_max + 1)
        return s

    def mean_degree(self, tail_completed=True):
        s = sum(k * v for k, v in enumerate(self.dk))
        if tail_completed and self.tail is not None:
            s += self.tail.mean_from(self.k_max + 1)
        return s

    def cumulative(self, k):
        return sum(self.dk[: k + 1])


# ---------------------------------------------------------------------------
# singular-expansion fitting (the independent oracle for closed forms)
# ---------------------------------------------------------------------------

def solve_linear(A, b):
    """Gaussian elimination with partial pivoting at mpf precision."""
    n = len(b)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(M[r][col]))
        M[col], M[piv] = M[piv], M[col]
        if M[col][col] == 0:
            raise ZeroDivisionError("singular system in fit")
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            for c in range(col, n + 1):
                M[r][c] -= f * M[col][c]
    x = [mp.mpf(0)] * n
    for r in range(n - 1, -1, -1):
        s = M[r][n] - sum(M[r][c] * x[c] for c in range(r + 1, n))
        x[r] = s / M[r][r]
    return x


def fit_singular_expansion(samples, powers):
    """Coefficients of sum_j a_j X**p_j through exactly len(powers) samples.

    ``samples`` is a list of (X, value) pairs; intended for X spanning a
    couple of decades so the square Vandermonde solve stays well determined
    at high working precision.
    """
    n = len(powers)
    if len(samples) != n:
        raise ValueError("need as many samples as powers")
    A = [[X ** p for p in powers] for (X, _) in samples]
    b = [val for (_, val) in samples]
    return solve_linear(A, b)


def least_squares(rows, ys):
    """Normal-equation least squares at mpf precision."""
    ncol = len(rows[0])
    A = [[sum(r[i] * r[j] for r in rows) for j in range(ncol)] for i in range(ncol)]
    b = [sum(rows[k][i] * ys[k] for k in range(len(rows))) for i in range(ncol)]
    return solve_linear(A, b)


# ---------------------------------------------------------------------------
# tail fitting on computed d_k
# ---------------------------------------------------------------------------

def fit_tail_power_geometric(dk, q, a, k_min, k_max, n_corr=3):
    """Fit d_k ~ c * k**a * q**k * (1 + b1/k + ... + b_n/k**n); returns c.

    The exponent a and rate q are analytic inputs; only the amplitude and its
    1/k corrections are fitted, on k in [k_min, k_max].
    """
    ks = list(range(k_min, k_max + 1))
    n_corr = min(n_corr, len(ks) - 1)
    ys = [dk[k] * mp.mpf(k) ** (-a) * q ** (-k) for k in ks]
    rows = [[mp.mpf(k) ** (-j) for j in range(n_corr + 1)] for k in ks]
    sol = least_squares(rows, ys)
    return sol[0]


def fit_tail_outer_subexp(dk, q, k_min, k_max, n_corr=3):
    """Fit log d_k = log c1 + (1/4) log k + c2 sqrt(k) + k log q + corrections.

    Corrections are half-integer powers k**(-j/2); returns (c1, c2).
    """
    ks = list(range(k_min, k_max + 1))
    n_corr = min(n_corr, len(ks) - 2)
    ys = [mpmath.log(dk[k]) - k * mpmath.log(q) - mpmath.log(k) / 4 for k in ks]
    rows = [[mp.mpf(1), mpmath.sqrt(k)] + [mp.mpf(k) ** (-mp.mpf(j) / 2) for j in range(1, n_corr + 1)]
            for k in ks]
    sol = least_squares(rows, ys)
    return mpmath.exp(sol[0]), sol[1]
