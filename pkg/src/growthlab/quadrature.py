"""Adaptive Gauss-Legendre quadrature for log-represented integrands.

The integrals this package needs have integrands spanning thousands of
orders of magnitude: a log-integrand routinely reaches 1e4.  Nothing here
ever exponentiates an absolute magnitude.  The integrand is supplied as its
logarithm, each panel factors out its running maximum before summing the
node contributions, and panels are combined with log-sum-exp, so the result
is the logarithm of the integral with full relative accuracy regardless of
scale.

Refinement is globally adaptive.  Every panel carries a 15-node value and an
error estimate |I15 - I7| (in log form); the panel with the largest estimate
is bisected until the total estimated error drops below rel_tol times the
total value.  Panels are scanned in a fixed order, so results are
deterministic and independent of dict or heap internals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from numpy.polynomial.legendre import leggauss

from .params import DomainError

_N7, _W7 = (x.tolist() for x in leggauss(7))
_N15, _W15 = (x.tolist() for x in leggauss(15))
_LOGW7 = [math.log(w) for w in _W7]
_LOGW15 = [math.log(w) for w in _W15]


def log_sum(values) -> float:
    """log(sum(exp(v))) over an iterable of log values; -inf for empty input."""
    vals = [v for v in values if v != -math.inf]
    if not vals:
        return -math.inf
    m = max(vals)
    if m == math.inf:
        return math.inf
    return m + math.log(math.fsum(math.exp(v - m) for v in vals))


def log_diff(a: float, b: float) -> float:
    """log(|exp(a) - exp(b)|); -inf when the two values agree."""
    if a == b:
        return -math.inf
    hi, lo = (a, b) if a > b else (b, a)
    if lo == -math.inf:
        return hi
    return hi + math.log1p(-math.exp(lo - hi))


@dataclass(frozen=True)
class LogQuadResult:
    """Logarithm of an integral plus the relative error estimate."""

    log_value: float
    rel_error: float
    panels: int


class QuadratureError(RuntimeError):
    """Panel budget exhausted before reaching the tolerance.

    Carries the best available estimate so callers can inspect how far the
    refinement got.
    """

    def __init__(self, message: str, log_value: float, rel_error: float,
                 panels: int):
        super().__init__(message)
        self.log_value = log_value
        self.rel_error = rel_error
        self.panels = panels


def _panel(logf, a: float, b: float) -> tuple[float, float]:
    """(log I15, log |I15 - I7|) for one panel [a, b]."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    log_half = math.log(half)
    vals7 = []
    for x, lw in zip(_N7, _LOGW7):
        v = logf(mid + half * x)
        if math.isnan(v) or v == math.inf:
            raise DomainError(f"integrand log-value at {mid + half * x} is {v}")
        vals7.append(v + lw)
    vals15 = []
    for x, lw in zip(_N15, _LOGW15):
        v = logf(mid + half * x)
        if math.isnan(v) or v == math.inf:
            raise DomainError(f"integrand log-value at {mid + half * x} is {v}")
        vals15.append(v + lw)
    i7 = log_sum(vals7) + log_half
    i15 = log_sum(vals15) + log_half
    return i15, log_diff(i15, i7)


def _initial_breakpoints(lo: float, hi: float, n: int = 8) -> list[float]:
    if lo > 0.0 and hi / lo >= 16.0:
        ratio = hi / lo
        return [lo * ratio ** (i / n) for i in range(n + 1)]
    return [lo + (hi - lo) * i / n for i in range(n + 1)]


def log_quad(logf, lo: float, hi: float, rel_tol: float = 1e-12,
             max_panels: int = 4096, breakpoints=None) -> LogQuadResult:
    """Integrate exp(logf) over [lo, hi] in log space.

    logf maps a radius to the log of the (nonnegative) integrand; -inf marks
    zeros.  Returns log of the integral together with an error estimate
    relative to the integral.  Raises QuadratureError when max_panels panels
    cannot reach rel_tol, and DomainError when logf produces nan or +inf.
    """
    if not (rel_tol > 0.0):
        raise DomainError(f"rel_tol must be positive, got {rel_tol}")
    if math.isnan(lo) or math.isnan(hi) or lo > hi:
        raise DomainError(f"bad integration interval [{lo}, {hi}]")
    if lo == hi:
        return LogQuadResult(log_value=-math.inf, rel_error=0.0, panels=0)

    if breakpoints is None:
        pts = _initial_breakpoints(lo, hi)
    else:
        pts = sorted(set([lo, hi] + [x for x in breakpoints if lo < x < hi]))
    panels = [(pts[i], pts[i + 1], *_panel(logf, pts[i], pts[i + 1]))
              for i in range(len(pts) - 1)]

    log_rel_tol = math.log(rel_tol)
    while True:
        total = log_sum(p[2] for p in panels)
        toterr = log_sum(p[3] for p in panels)
        if toterr <= total + log_rel_tol or toterr == -math.inf:
            rel = math.exp(toterr - total) if total > -math.inf else 0.0
            return LogQuadResult(log_value=total, rel_error=rel,
                                 panels=len(panels))
        if len(panels) >= max_panels:
            rel = math.exp(toterr - total) if total > -math.inf else math.inf
            raise QuadratureError(
                f"needed more than {max_panels} panels on [{lo}, {hi}] "
                f"for rel_tol={rel_tol}; reached {rel:.3e}",
                log_value=total, rel_error=rel, panels=len(panels))
        worst = 0
        for i in range(1, len(panels)):
            if panels[i][3] > panels[worst][3]:
                worst = i
        a, b, _, _ = panels[worst]
        m = 0.5 * (a + b)
        panels[worst:worst + 1] = [(a, m, *_panel(logf, a, m)),
                                   (m, b, *_panel(logf, m, b))]
