"""Structural parameters and the sharp constants derived from them.

A problem instance is described by five numbers: the degeneracy exponent
``p`` of the operator, the zero-order exponent ``q``, the decay rate ``mu``
of the potential, the potential amplitude ``lam`` and the coercivity
constant ``k``.  From these the module computes the two growth thresholds

* ``C0``: the sharp exponential-regime constant,
* ``C1``: the sharp polynomial-regime constant, defined implicitly as the
  unique root above ``p`` of  C**(1/p) * (C - p)**(1/p') = C0,

together with the chain of comparison constants used by the integral
inequalities in :mod:`growthlab.growth`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq


class DomainError(ValueError):
    """Raised when an argument leaves the validity region of a formula."""


class RootBracketError(RuntimeError):
    """Raised when a root cannot be isolated inside its theoretical bracket."""


# ---------------------------------------------------------------------------
# parameter containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Params:
    """Validated parameter tuple (p, q, mu, lam, k).

    Constraints: p > 1, q > p - 1, 0 <= mu <= p, lam > 0, k > 0.
    """

    p: float
    q: float
    mu: float
    lam: float
    k: float = 1.0

    def __post_init__(self):
        if not (self.p > 1.0):
            raise DomainError(f"p must exceed 1, got {self.p}")
        if not (self.q > self.p - 1.0):
            raise DomainError(f"q must exceed p - 1 = {self.p - 1}, got {self.q}")
        if not (0.0 <= self.mu <= self.p):
            raise DomainError(f"mu must lie in [0, p] = [0, {self.p}], got {self.mu}")
        if not (self.lam > 0.0):
            raise DomainError(f"lam must be positive, got {self.lam}")
        if not (self.k > 0.0):
            raise DomainError(f"k must be positive, got {self.k}")


@dataclass(frozen=True)
class DerivedExponents:
    """Exponents derived from (p, q, mu): conjugate, shift and scale factors."""

    p_conj: float      # p' = p / (p - 1)
    gamma: float       # q - p + 1 > 0
    beta: float        # 1 - mu / p, in [0, 1]

    @property
    def is_borderline(self) -> bool:
        """True when mu == p, the regime where growth is polynomial."""
        return self.beta == 0.0


def derived_exponents(params: Params) -> DerivedExponents:
    p = params.p
    return DerivedExponents(
        p_conj=p / (p - 1.0),
        gamma=params.q - p + 1.0,
        beta=1.0 - params.mu / p,
    )


# ---------------------------------------------------------------------------
# sharp constants
# ---------------------------------------------------------------------------


def compute_C0(p: float, q: float, lam: float, k: float = 1.0) -> float:
    """Sharp growth constant of the exponential regime.

    C0 = p * gamma**(1/p') * lam**(1/p) / ((p-1)**(1/p') * k),  gamma = q-p+1.

    For p = 2 this collapses to 2*sqrt(q-1)*sqrt(lam)/k.
    """
    params = Params(p, q, mu=0.0, lam=lam, k=k)
    gamma = q - p + 1.0
    inv_conj = (p - 1.0) / p          # 1 / p'
    return p * (gamma / (p - 1.0)) ** inv_conj * lam ** (1.0 / p) / k


def _c1_gap(p: float, C0: float, delta: float) -> float:
    """Value of C**(1/p) * (C-p)**(1/p') - C0 at C = p + delta."""
    inv_conj = (p - 1.0) / p
    return (p + delta) ** (1.0 / p) * delta ** inv_conj - C0


def solve_C1(p: float, q: float, lam: float, k: float = 1.0) -> float:
    """Sharp growth constant of the polynomial regime.

    C1 is the unique root above p of  C**(1/p) * (C-p)**(1/p') = C0.  The
    left side vanishes as C -> p+ and exceeds C0 at C = p + C0, where it
    equals (p + C0)**(1/p) * C0**(1/p') > C0**(1/p) * C0**(1/p') = C0, so
    the root always lies in (p, p + C0) and a bracketed solver cannot miss
    it.  For p = 2 the equation closes to
    C1 = 1 + sqrt(1 + C0**2).
    """
    C0 = compute_C0(p, q, lam, k)
    lo = min(1.0, C0) / 2.0
    for _ in range(200):
        if _c1_gap(p, C0, lo) < 0.0:
            break
        lo /= 2.0
    else:
        raise RootBracketError(
            f"no sign change on ({p}, {p + C0}) for p={p}, C0={C0}: "
            f"left endpoint value {_c1_gap(p, C0, lo)}"
        )
    hi = C0
    f_lo = _c1_gap(p, C0, lo)
    f_hi = _c1_gap(p, C0, hi)
    if not (f_lo < 0.0 < f_hi):
        raise RootBracketError(
            f"bracket [{p + lo}, {p + hi}] does not straddle the root: "
            f"f(lo)={f_lo}, f(hi)={f_hi}"
        )
    delta = brentq(lambda d: _c1_gap(p, C0, d), lo, hi, xtol=1e-13,
                   rtol=4.0 * math.ulp(1.0), maxiter=200)
    return p + delta


# ---------------------------------------------------------------------------
# comparison constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonConstants:
    """Constant chain shared by the integral-inequality checks.

    All fields are evaluated at effective amplitude lam - eps.  The last
    three fields describe the borderline regime mu = p and are None
    otherwise.
    """

    eps: float
    c1: float          # normalisation of the comparison weight
    c2: float          # gamma / ((lam-eps) * k**p')
    c3: float          # C0 evaluated at amplitude lam - eps
    C2: float          # 1 + annulus constant entering the iteration
    c4: float | None   # borderline weight normalisation
    c5: float | None   # borderline growth exponent, root of the C1 equation
    c6: float | None   # borderline composite coefficient

    @property
    def caccioppoli_prefactor(self) -> float:
        """The constant C2 - 1 multiplying the annulus energy estimate."""
        return self.C2 - 1.0


def comparison_constants(params: Params, eps: float = 0.0) -> ComparisonConstants:
    """Evaluate the comparison-constant chain at amplitude lam - eps.

    Requires 0 <= eps < lam.  With eps = 0 the chain degenerates to the
    sharp values; c3 then equals compute_C0 and, in the borderline regime,
    c5 equals solve_C1.
    """
    if not (0.0 <= eps < params.lam):
        raise DomainError(f"eps must lie in [0, lam) = [0, {params.lam}), got {eps}")
    p, q, k = params.p, params.q, params.k
    ex = derived_exponents(params)
    gamma, p_conj = ex.gamma, ex.p_conj
    amp = params.lam - eps

    c1 = ((p - 1.0) * amp / gamma) ** (1.0 / (p * p_conj)) * k ** (1.0 / p)
    c2 = gamma / (amp * k ** p_conj)
    c3 = p * (gamma / (p - 1.0)) ** (1.0 / p_conj) * amp ** (1.0 / p) / k
    C2 = 1.0 + c2 * k ** (p * p_conj) * (p - 1.0) ** (p - 1.0) * 4.0 ** p \
        / (gamma * min(1.0, gamma ** (p - 1.0)))

    c4 = c5 = c6 = None
    if params.mu == p:
        lo = min(1.0, c3) / 2.0
        for _ in range(200):
            if _c1_gap(p, c3, lo) < 0.0:
                break
            lo /= 2.0
        else:
            raise RootBracketError(f"no bracket for c5 at c3={c3}")
        delta = brentq(lambda d: _c1_gap(p, c3, d), lo, c3, xtol=1e-13,
                       rtol=4.0 * math.ulp(1.0), maxiter=200)
        c5 = p + delta
        c4 = (p * amp / c5) ** (1.0 / p)
        c6 = (p - 1.0) * c5 ** p_conj / (p ** p_conj * amp ** p_conj)

    return ComparisonConstants(eps=eps, c1=c1, c2=c2, c3=c3, C2=C2,
                               c4=c4, c5=c5, c6=c6)


# ---------------------------------------------------------------------------
# threshold classification
# ---------------------------------------------------------------------------


def liouville_check(params: Params, growth_constant: float) -> str:
    """Classify a growth constant against the sharp threshold C0.

    Returns "forced_zero" when growth_constant < C0 strictly: any
    nonnegative solution obeying the corresponding exponential growth bound
    must vanish.  Returns "inconclusive" at or above the threshold, where
    explicit nontrivial solutions exist.
    """
    if not math.isfinite(growth_constant):
        raise DomainError(f"growth constant must be finite, got {growth_constant}")
    C0 = compute_C0(params.p, params.q, params.lam, params.k)
    if growth_constant < C0:
        return "forced_zero"
    return "inconclusive"
