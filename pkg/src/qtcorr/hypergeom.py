"""Numeric q-Pochhammer symbols and basic hypergeometric series.

Also residual checkers for the q-binomial theorem, Heine's summation and
Hall's two-term transformation of a 3phi2.  Everything works in complex
double precision; the base is always called ``v``.  Residuals are scaled by
max(1, |right side|), so large values are judged relative to their size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exceptions import ConvergenceError, DomainError, SingularParameterError

DEFAULT_TOL = 1e-12
DEFAULT_MAX_TERMS = 10000
# Product tails are cheap, so they are always taken to machine precision.
POCHHAMMER_TOL = 1e-17
VANISHING = 1e-13


def num_pochhammer_fin(a, r: int, v) -> complex:
    if r < 0:
        raise DomainError("r must be nonnegative")
    out = complex(1)
    vi = complex(1)
    for _ in range(r):
        out *= 1 - a * vi
        vi *= v
    return out


def num_pochhammer_inf(a, v, tol: float = POCHHAMMER_TOL) -> complex:
    """(a)_inf = prod_{i>=0} (1 - a v**i) for |v| < 1.

    Factors are multiplied until |a v**i| < tol * (1 - |v|).  The neglected
    tail then satisfies sum_{k>=i} |a v**k| < tol, which bounds the relative
    error of the result by about tol.
    """
    if abs(v) >= 1:
        raise ConvergenceError(f"(a)_inf diverges for |v| = {abs(v)} >= 1")
    cutoff = tol * (1 - abs(v))
    out = complex(1)
    term = complex(a)
    while abs(term) >= cutoff:
        out *= 1 - term
        term *= v
    return out


@dataclass
class PhiSpec:
    """Parameters of an (r+1, r) basic hypergeometric series."""

    numerator_params: Sequence[complex]
    denominator_params: Sequence[complex] = field(default_factory=list)
    base: complex = 0.0
    argument: complex = 0.0

    def __post_init__(self):
        if len(self.numerator_params) != len(self.denominator_params) + 1:
            raise DomainError("an (r+1, r) series needs one more numerator than denominator parameter")


def basic_phi(spec: PhiSpec, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS,
              return_terms: bool = False):
    """Sum  sum_m (a_1)_m ... (a_{r+1})_m / ((v)_m (b_1)_m ... (b_r)_m) z**m.

    Summation stops once the geometric tail estimate |term| / (1 - |z|) is
    below tol * |partial sum| for three consecutive terms; a single small term
    can be an accident of a vanishing factor.
    With ``return_terms`` the number of terms used is returned as well.
    """
    v, z = complex(spec.base), complex(spec.argument)
    if abs(v) >= 1:
        raise DomainError(f"base |v| = {abs(v)} must be < 1")
    if abs(z) >= 1:
        raise DomainError(f"argument |z| = {abs(z)} must be < 1 for convergence")
    nums = [complex(a) for a in spec.numerator_params]
    dens = [complex(b) for b in spec.denominator_params]

    tail_factor = 1 / (1 - abs(z))
    term = complex(1)
    total = complex(1)
    small = 0
    vm = complex(1)  # v**m
    for m in range(max_terms):
        num = 1
        for a in nums:
            num *= 1 - a * vm
        den = 1 - vm * v
        for j, b in enumerate(dens):
            factor = 1 - b * vm
            if abs(factor) < VANISHING:
                raise SingularParameterError(
                    f"denominator parameter b_{j + 1} = {b} makes (b)_{m + 1} vanish")
            den *= factor
        if abs(den) < VANISHING:
            raise SingularParameterError(f"(v)_{m + 1} vanishes")
        term = term * num / den * z
        total += term
        vm *= v
        if abs(term) * tail_factor <= tol * abs(total):
            small += 1
            if small >= 3:
                return (total, m + 2) if return_terms else total
        else:
            small = 0
    raise ConvergenceError(f"basic_phi did not converge within {max_terms} terms")


def phi(nums, dens, v, z, tol: float = DEFAULT_TOL, max_terms: int = DEFAULT_MAX_TERMS) -> complex:
    """Shorthand for ``basic_phi(PhiSpec(nums, dens, v, z))``."""
    return basic_phi(PhiSpec(list(nums), list(dens), v, z), tol, max_terms)


def _check_base(v):
    if abs(v) >= 1:
        raise DomainError(f"base |v| = {abs(v)} must be < 1")


def _scaled(lhs, rhs) -> float:
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def q_binomial_residual(a, t, v, tol: float = DEFAULT_TOL) -> float:
    """Scaled residual of  sum_r t**r (a)_r/(v)_r = (at)_inf/(t)_inf."""
    _check_base(v)
    if abs(t) >= 1:
        raise DomainError("q-binomial theorem needs |t| < 1")
    lhs = phi([a], [], v, t, tol)
    rhs = num_pochhammer_inf(a * t, v) / num_pochhammer_inf(t, v)
    return _scaled(lhs, rhs)


def heine_residual(a, b, c, v, tol: float = DEFAULT_TOL) -> float:
    """Residual of 2phi1(a, b; c; v; c/ab) = (c/a)_inf (c/b)_inf / ((c)_inf (c/ab)_inf)."""
    _check_base(v)
    if abs(b) >= 1:
        raise DomainError("Heine's formula needs |b| < 1")
    if a * b == 0:
        raise DomainError("Heine's formula needs a, b nonzero (argument c/ab)")
    z = c / (a * b)
    if abs(z) >= 1:
        raise DomainError("Heine's formula needs |c/ab| < 1")
    lhs = phi([a, b], [c], v, z, tol)
    rhs = (num_pochhammer_inf(c / a, v) * num_pochhammer_inf(c / b, v)
           / (num_pochhammer_inf(c, v) * num_pochhammer_inf(z, v)))
    return _scaled(lhs, rhs)


def hall_residual(a, b, c, d, e, v, tol: float = DEFAULT_TOL) -> float:
    """Residual of Hall's two-term transformation of 3phi2(a, b, c; d, e; v; de/abc)."""
    _check_base(v)
    if abs(b) >= 1:
        raise DomainError("Hall's transformation needs |b| < 1")
    if a * b * c == 0:
        raise DomainError("Hall's transformation needs a, b, c nonzero")
    z = d * e / (a * b * c)
    if abs(z) >= 1:
        raise DomainError(f"Hall's transformation needs |de/abc| < 1, got {abs(z)}")
    lhs = phi([a, b, c], [d, e], v, z, tol)
    de_ab = d * e / (a * b)
    de_bc = d * e / (b * c)
    pre = (num_pochhammer_inf(b, v) * num_pochhammer_inf(de_ab, v) * num_pochhammer_inf(de_bc, v)
           / (num_pochhammer_inf(d, v) * num_pochhammer_inf(e, v) * num_pochhammer_inf(z, v)))
    rhs = pre * phi([d / b, e / b, z], [de_ab, de_bc], v, b, tol)
    return _scaled(lhs, rhs)
