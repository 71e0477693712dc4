"""Descriptive statistics and Welch's two-sample t-test.

The Student-t tail probability is computed from the regularized incomplete
beta function, evaluated with a modified-Lentz continued fraction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

_EPS = 1e-16
_TINY = 1e-300


@dataclass(frozen=True)
class SampleSummary:
    mean: float
    std: float
    n: int


@dataclass(frozen=True)
class TTestResult:
    h: int
    p: float
    t: float
    df: float

    def __iter__(self):
        # unpacks as (h, p)
        return iter((self.h, self.p))


def summarize(samples) -> SampleSummary:
    xs = [float(v) for v in samples]
    n = len(xs)
    if n < 2:
        raise ValueError("need at least two samples for a sample standard deviation")
    mean = math.fsum(xs) / n
    var = math.fsum((v - mean) ** 2 for v in xs) / (n - 1)
    return SampleSummary(mean=mean, std=math.sqrt(var), n=n)


def _beta_cf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, 10_000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc_regularized(a: float, b: float, x: float) -> float:
    """``I_x(a, b)`` for ``a, b > 0`` and ``0 <= x <= 1``."""
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return x
    log_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                 + a * math.log(x) + b * math.log1p(-x))
    front = math.exp(log_front)
    # the continued fraction converges fast only on this side of the mean
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def student_t_two_sided(t: float, df: float) -> float:
    """``P(|T| >= |t|)`` for Student's t with ``df`` (possibly fractional) degrees of freedom."""
    if math.isinf(t):
        return 0.0
    x = df / (df + t * t)
    return min(1.0, max(0.0, betainc_regularized(0.5 * df, 0.5, x)))


def t_test(a, b, alpha: float = 0.05) -> TTestResult:
    """Two-sided Welch t-test; ``h = 1`` iff ``p < alpha``."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    sa, sb = summarize(a), summarize(b)
    va = sa.std ** 2 / sa.n
    vb = sb.std ** 2 / sb.n
    se2 = va + vb
    diff = sa.mean - sb.mean
    if se2 == 0.0:
        if diff == 0.0:
            return TTestResult(h=0, p=1.0, t=0.0, df=float(sa.n + sb.n - 2))
        t = math.copysign(math.inf, diff)
        return TTestResult(h=1, p=0.0, t=t, df=float(sa.n + sb.n - 2))
    t = diff / math.sqrt(se2)
    df = se2 * se2 / (va * va / (sa.n - 1) + vb * vb / (sb.n - 1))
    p = student_t_two_sided(t, df)
    return TTestResult(h=int(p < alpha), p=p, t=t, df=df)
