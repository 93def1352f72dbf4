"""n-point correlation functions: brute-force partition sums and closed forms.

Two backends live side by side.  The exact backend works with rational
parameters and returns :class:`~qtcorr.qseries.VSeries` truncated at v**(N+1);
the truncation is exact because the coefficient of v**d only involves
partitions of size <= d.  The numeric backend evaluates at a complex v with
|v| < 1 and reports an explicit tail bound next to every brute-force value.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import hypergeom as hg
from .exceptions import ConvergenceError, DomainError, SingularParameterError
from .partitions import b_hat_stat, b_stat, exact, partition_count, partitions_up_to
from .qseries import DEFAULT_ORDER, VSeries, pochhammer_fin, pochhammer_inf

DEFAULT_BRUTE_SIZE = 24


@dataclass
class CorrelatorResult:
    exact: VSeries | None = None
    numeric: complex | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.exact is None and self.numeric is None:
            raise ValueError("a CorrelatorResult needs an exact or a numeric value")


def _pairs(pairs) -> list:
    return [(exact(q), exact(t)) for q, t in pairs]


def _require_not_one(*values):
    for x in values:
        if x == 1:
            raise SingularParameterError("parameters q_k, t_k must differ from 1")


# -- brute force ------------------------------------------------------------

def partition_sum(f: Callable, order: int = DEFAULT_ORDER) -> VSeries:
    """sum_{|lam| <= order} f(lam) v**|lam|."""
    coeffs = [Fraction(0)] * (order + 1)
    for lam in partitions_up_to(order):
        coeffs[sum(lam)] += f(lam)
    return VSeries(coeffs, order)


def expectation_v(f: Callable, order: int = DEFAULT_ORDER) -> VSeries:
    """<f>_v = (v)_inf * sum_lam f(lam) v**|lam|, exact mod v**(order+1)."""
    return pochhammer_inf(1, order, shift=1) * partition_sum(f, order)


def trace_brute_hat(pairs: Sequence, order: int = DEFAULT_ORDER) -> VSeries:
    """Hat n-point function as the partition sum of prod_k B-hat_lam(q_k, t_k)."""
    pairs = _pairs(pairs)
    for q, t in pairs:
        _require_not_one(q, t)

    def weight(lam):
        w = Fraction(1)
        for q, t in pairs:
            w *= b_hat_stat(lam, q, t)
        return w

    return partition_sum(weight, order)


def trace_brute_b(pairs: Sequence, order: int = DEFAULT_ORDER) -> VSeries:
    """Unhatted n-point function: partition sum of prod_k B_lam(q_k, t_k)."""
    pairs = _pairs(pairs)

    def weight(lam):
        w = Fraction(1)
        for q, t in pairs:
            w *= b_stat(lam, q, t)
        return w

    return partition_sum(weight, order)


def _b_hat_bound(q, t):
    """(C, rho) with |B-hat_lam(q, t)| <= C * rho**|lam| for every lam."""
    options = []
    for a, b in ((q, t), (t, q)):  # B-hat_lam(q,t) = B-hat_lam'(t,q)
        if abs(b) < 1 and a != 1:
            c = (1 / (1 - abs(b)) + 1 / abs(1 - b)) / abs(1 - a)
            options.append((c, max(1.0, abs(a))))
    if not options:
        raise DomainError("brute-force tail bound needs |q| < 1 or |t| < 1 in every pair")
    return min(options, key=lambda cr: (cr[1], cr[0]))


def brute_tail_bound(pairs: Sequence, v, max_size: int = DEFAULT_BRUTE_SIZE,
                     max_degree: int = 20000) -> float:
    """Upper bound on |sum_{|lam| > max_size} prod_k B-hat_lam v**|lam||.

    Combines |B-hat_lam| <= C rho**|lam| with exact p(d) and, for the far
    tail, p(d) < exp(pi sqrt(2d/3)), whose term ratio decreases with d.
    """
    const = 1.0
    x = abs(v)
    for q, t in pairs:
        c, rho = _b_hat_bound(complex(q), complex(t))
        const *= c
        x *= rho
    if x >= 1:
        raise DomainError(f"brute force cannot be certified: growth rate {x} >= 1")
    if x == 0:
        return 0.0
    growth = math.pi * math.sqrt(2 / 3)

    def log_g(d):
        return growth * math.sqrt(d) + d * math.log(x)

    total = 0.0
    for d in range(max_size + 1, max_degree):
        total += partition_count(d) * x ** d if d < 3000 else math.exp(log_g(d))
        ratio = math.exp(log_g(d + 2) - log_g(d + 1))
        if ratio < 1:
            remainder = math.exp(log_g(d + 1)) / (1 - ratio)
            if remainder <= 1e-3 * total or remainder < 1e-300:
                return const * (total + remainder)
    raise DomainError(f"brute force cannot be certified at |v| = {abs(v)}: tail bound does not settle")


def trace_brute_hat_numeric(pairs: Sequence, v, max_size: int = DEFAULT_BRUTE_SIZE):
    """(value, tail_bound) of the numeric partition sum over |lam| <= max_size."""
    pairs = [(complex(q), complex(t)) for q, t in pairs]
    for q, t in pairs:
        _require_not_one(q, t)
    v = complex(v)
    bound = brute_tail_bound(pairs, v, max_size)
    by_size = [complex(0)] * (max_size + 1)
    for lam in partitions_up_to(max_size):
        w = complex(1)
        for q, t in pairs:
            w *= b_hat_stat(lam, q, t)
        by_size[sum(lam)] += w
    total = complex(0)
    for d in range(max_size, -1, -1):
        total = total * v + by_size[d]
    return total, bound


# -- one point ----------------------------------------------------------------

def row_power_closed(q, i: int, order: int = DEFAULT_ORDER) -> VSeries:
    """<q**lam_i>_v = (v**i)_inf / (v**i q)_inf."""
    if i < 1:
        raise DomainError("row index i must be >= 1")
    return pochhammer_inf(1, order, shift=i) / pochhammer_inf(exact(q), order, shift=i)


def row_pair_power_closed(q1, q2, i: int, j: int, order: int = DEFAULT_ORDER, check: bool = True) -> VSeries:
    """<q1**lam_i q2**lam_j>_v for 1 <= i < j, in the first product form.

    With ``check`` the second displayed form is computed too and the two are
    required to agree as series.
    """
    if not 1 <= i < j:
        raise DomainError("need 1 <= i < j")
    q1, q2 = exact(q1), exact(q2)
    poch_v = pochhammer_inf(1, order, shift=1)
    first = poch_v / (pochhammer_fin(1, i - 1, order, shift=1)
                      * pochhammer_fin(q1, j - i, order, shift=i)
                      * pochhammer_inf(q1 * q2, order, shift=j))
    if check:
        second = row_pair_power_split_form(q1, q2, i, j, order)
        if first != second:
            raise ArithmeticError("the two product forms disagree")
    return first


def row_pair_power_split_form(q1, q2, i: int, j: int, order: int = DEFAULT_ORDER) -> VSeries:
    q1, q2 = exact(q1), exact(q2)
    c = q1 * q2
    num = (pochhammer_inf(1, order, shift=1) * pochhammer_fin(q1, i - 1, order, shift=1)
           * pochhammer_fin(c, j - 1, order, shift=1))
    den = (pochhammer_inf(c, order, shift=1) * pochhammer_fin(1, i - 1, order, shift=1)
           * pochhammer_fin(q1, j - 1, order, shift=1))
    return num / den


def one_point_closed(q, t, order: int = DEFAULT_ORDER) -> VSeries:
    """(vqt)_inf / ((q)_inf (t)_inf)."""
    q, t = exact(q), exact(t)
    _require_not_one(q, t)
    return pochhammer_inf(q * t, order, shift=1) / (pochhammer_inf(q, order) * pochhammer_inf(t, order))


def inverse_pair_one_point(q, order: int = DEFAULT_ORDER) -> VSeries:
    """(v)_inf / ((q)_inf (1/q)_inf): the one-point function at t = 1/q."""
    q = exact(q)
    if q == 0:
        raise SingularParameterError("t = 1/q needs q != 0")
    return pochhammer_inf(1, order, shift=1) / (pochhammer_inf(q, order) * pochhammer_inf(1 / q, order))


# -- two point: the T_1 / T_2 / T_3 split -------------------------------------

@dataclass
class TTerms:
    T1: object
    T2: object
    T3: object
    routes: dict = field(default_factory=dict)

    def total(self):
        return self.T1 + self.T2 + self.T3


def _pair_below(lam, qa, ta, qb, tb):
    """sum_{1<=i<j} ta**(i-1) tb**(j-1) qa**lam_i qb**lam_j, tails in closed form."""
    ell = len(lam)
    b_terms = [tb ** (j - 1) * qb ** lam[j - 1] for j in range(1, ell + 1)]
    tail_b = tb ** ell / (1 - tb)  # sum_{j > ell} tb**(j-1)
    total = 0
    suffix = tail_b
    for i in range(ell, 0, -1):
        total += ta ** (i - 1) * qa ** lam[i - 1] * suffix
        suffix += b_terms[i - 1]
    # rows i > ell contribute ta**(i-1) * tb**i / (1 - tb)
    total += tb / (1 - tb) * (ta * tb) ** ell / (1 - ta * tb)
    return total


def _pair_diagonal(lam, c, x):
    """sum_{i>=1} x**(i-1) c**lam_i."""
    return sum(x ** i * c ** part for i, part in enumerate(lam)) + x ** len(lam) / (1 - x)


def t_terms_exact(q1, t1, q2, t2, order: int = DEFAULT_ORDER) -> TTerms:
    """T_1, T_2, T_3 as exact partition-sum expectations (i<j, i>j, i=j)."""
    q1, t1, q2, t2 = map(exact, (q1, t1, q2, t2))
    for x in (t1, t2, t1 * t2):
        if x == 1:
            raise SingularParameterError("t_1, t_2 and t_1 t_2 must differ from 1")
    T1 = expectation_v(lambda lam: _pair_below(lam, q1, t1, q2, t2), order)
    T2 = expectation_v(lambda lam: _pair_below(lam, q2, t2, q1, t1), order)
    T3 = expectation_v(lambda lam: _pair_diagonal(lam, q1 * q2, t1 * t2), order)
    return TTerms(T1, T2, T3, routes={"T3_closed": t3_closed_exact(q1, t1, q2, t2, order)})


def t3_closed_exact(q1, t1, q2, t2, order: int = DEFAULT_ORDER) -> VSeries:
    """(1/(1-t1t2)) (v)_inf (v q1q2t1t2)_inf / ((v t1t2)_inf (v q1q2)_inf)."""
    c, x = exact(q1) * exact(q2), exact(t1) * exact(t2)
    num = pochhammer_inf(1, order, shift=1) * pochhammer_inf(c * x, order, shift=1)
    den = pochhammer_inf(x, order, shift=1) * pochhammer_inf(c, order, shift=1)
    return num / den * (1 / (1 - x))


def _check_two_point_domain(q1, t1, q2, t2, v):
    if abs(v) >= 1:
        raise DomainError("need |v| < 1")
    if abs(t1) >= 1 or abs(t2) >= 1:
        raise DomainError("need |t_1| < 1 and |t_2| < 1")
    if abs(v * q1 * q2) >= 1:
        raise DomainError("need |v q_1 q_2| < 1")
    for name, d in (("1 - q_1", 1 - q1), ("1 - q_2", 1 - q2), ("1 - t_1 t_2", 1 - t1 * t2),
                    ("1 - q_1 t_1", 1 - q1 * t1), ("1 - q_2 t_2", 1 - q2 * t2)):
        if abs(d) < hg.VANISHING:
            raise SingularParameterError(f"denominator {name} vanishes")


def _t1_direct(q1, t1, q2, t2, v, tol):
    """T_1 as the defining double sum over 0 <= i < j (numeric)."""
    poch = hg.num_pochhammer_inf
    inner = []
    c = complex(1)  # t2**j (v q1 q2)_j / (v q1)_j at j = 0
    running = complex(0)
    small = 0
    vj = complex(v)
    for j in range(hg.DEFAULT_MAX_TERMS):
        inner.append(c)
        running += c
        if j > 0 and abs(c) <= tol * abs(running):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        c = c * t2 * (1 - q1 * q2 * vj) / (1 - q1 * vj)
        vj *= v
    else:
        raise ConvergenceError("inner sum of T_1 did not converge")
    suffix = [complex(0)] * (len(inner) + 1)
    for j in range(len(inner) - 1, -1, -1):
        suffix[j] = suffix[j + 1] + inner[j]
    total = complex(0)
    a = complex(1)  # t1**i (v q1)_i / (v)_i
    vi = complex(v)
    for i in range(len(inner)):
        total += a * suffix[i + 1]
        a = a * t1 * (1 - q1 * vi) / (1 - vi)
        vi *= v
    return poch(v, v) / poch(v * q1 * q2, v) * total


def _t1_hyper(q1, t1, q2, t2, v, tol):
    """T_1 through its 3phi2 representation with argument v**2 q1 q2."""
    poch = hg.num_pochhammer_inf
    if q2 == 0:
        raise SingularParameterError("the 3phi2 form of T_1 needs q_2 != 0")
    pre = t2 / (1 - t2) * poch(v, v) * poch(v * q1 * t1 * t2, v) / (poch(v * q1, v) * poch(t1 * t2, v))
    return pre * hg.phi([t1 * t2, t2, 1 / q2], [v * t2, v * q1 * t1 * t2], v, v * v * q1 * q2, tol)


def t_terms_numeric(q1, t1, q2, t2, v, tol: float = hg.DEFAULT_TOL) -> TTerms:
    """Numeric T_1, T_2, T_3 from their defining sums, plus closed-form routes."""
    q1, t1, q2, t2, v = map(complex, (q1, t1, q2, t2, v))
    _check_two_point_domain(q1, t1, q2, t2, v)
    poch = hg.num_pochhammer_inf
    pre = poch(v, v) / poch(v * q1 * q2, v)
    T1 = _t1_direct(q1, t1, q2, t2, v, tol)
    T2 = _t1_direct(q2, t2, q1, t1, v, tol)
    T3 = pre * hg.phi([v * q1 * q2], [], v, t1 * t2, tol)
    x = t1 * t2
    T3_closed = (1 / (1 - x)) * poch(v, v) * poch(v * q1 * q2 * x, v) / (poch(v * x, v) * poch(v * q1 * q2, v))
    routes = {
        "T1_hyper": _t1_hyper(q1, t1, q2, t2, v, tol),
        "T2_hyper": _t1_hyper(q2, t2, q1, t1, v, tol),
        "T3_closed": T3_closed,
    }
    return TTerms(T1, T2, T3, routes)


def t_terms(q1, t1, q2, t2, backend: str = "exact", order: int = DEFAULT_ORDER, v=None,
            tol: float = hg.DEFAULT_TOL) -> TTerms:
    if backend == "exact":
        return t_terms_exact(q1, t1, q2, t2, order)
    if backend == "numeric":
        if v is None:
            raise DomainError("the numeric backend needs a value for v")
        return t_terms_numeric(q1, t1, q2, t2, v, tol)
    raise DomainError(f"unknown backend {backend!r}")


# -- two point closed forms ----------------------------------------------------

def two_point_closed_general(q1, t1, q2, t2, v, tol: float = hg.DEFAULT_TOL) -> complex:
    """Hat two-point function through two 3phi2 series (numeric)."""
    q1, t1, q2, t2, v = map(complex, (q1, t1, q2, t2, v))
    _check_two_point_domain(q1, t1, q2, t2, v)
    poch = hg.num_pochhammer_inf
    c, x = q1 * q2, t1 * t2
    den = poch(v * x, v) * poch(v * c, v)
    if den == 0:
        raise ConvergenceError(f"Pochhammer products underflow at |v| = {abs(v)}")
    pre = 1 / ((1 - q1) * (1 - q2) * (1 - x)) * poch(v * c * x, v) / den
    phi1 = hg.phi([v, q1 * t1, v * c], [v * q1, v * c * x], v, t2, tol)
    phi2 = hg.phi([v, q2 * t2, v * c], [v * q2, v * c * x], v, t1, tol)
    bracket = ((c * x - 1) / ((1 - q1 * t1) * (1 - q2 * t2))
               + phi1 / (1 - q1 * t1) + phi2 / (1 - q2 * t2))
    return pre * bracket


def two_point_closed_special(q1, t1, q2, t2, order: int = DEFAULT_ORDER) -> VSeries:
    """Hat two-point function on the locus q1 q2 t1 t2 = 1 (exact products)."""
    q1, t1, q2, t2 = map(exact, (q1, t1, q2, t2))
    if q1 * q2 * t1 * t2 != 1:
        raise DomainError("the special two-point formula needs q1 q2 t1 t2 = 1")
    for name, d in (("1 - q_1", 1 - q1), ("1 - q_2", 1 - q2), ("1 - t_1 t_2", 1 - t1 * t2),
                    ("1 - q_1 t_1", 1 - q1 * t1), ("1 - q_2 t_2", 1 - q2 * t2),
                    ("1 - t_1", 1 - t1), ("1 - t_2", 1 - t2)):
        if d == 0:
            raise SingularParameterError(f"denominator {name} vanishes")
    N = order

    def P(a, shift=0):
        return pochhammer_inf(a, N, shift)

    pre = P(1, 1) / (P(t1 * t2, 1) * P(q1 * q2, 1)) * (1 / ((1 - q1) * (1 - q2) * (1 - t1 * t2)))
    first = P(1 / t1, 1) * P(1 / q2) / (P(q1, 1) * P(t2)) * (1 / (1 - q1 * t1))
    second = P(1 / t2, 1) * P(1 / q1) / (P(q2, 1) * P(t1)) * (1 / (1 - q2 * t2))
    return pre * (first + second)


# -- symmetry --------------------------------------------------------------------

def signed_permutations(pairs: Sequence):
    """All images of ``pairs`` under permutations and in-pair swaps."""
    n = len(pairs)
    for perm in itertools.permutations(range(n)):
        for flips in itertools.product((False, True), repeat=n):
            yield [(pairs[k][1], pairs[k][0]) if f else pairs[k] for k, f in zip(perm, flips)]


def diagonal_images(pairs: Sequence):
    """Images under permutations combined with one swap applied to every pair at once."""
    n = len(pairs)
    for perm in itertools.permutations(range(n)):
        for flip in (False, True):
            yield [(pairs[k][1], pairs[k][0]) if flip else pairs[k] for k in perm]


def symmetry_report(pairs: Sequence, order: int = DEFAULT_ORDER) -> dict:
    """Invariance of the hat n-point function under signed permutations (n <= 3).

    ``max_deviation`` covers the full group of 2**n n! signed permutations;
    ``diagonal_max_deviation`` covers the subgroup where all pairs are swapped
    together, which is what conjugating the partition provides.
    """
    pairs = _pairs(pairs)
    if len(pairs) > 3:
        raise DomainError("symmetry_report is limited to n <= 3")
    base = trace_brute_hat(pairs, order)

    def worst(images):
        dev, count = Fraction(0), 0
        for image in images:
            other = trace_brute_hat(image, order)
            count += 1
            dev = max(dev, max(abs(a - b) for a, b in zip(base, other)))
        return dev, count

    full, images = worst(signed_permutations(pairs))
    diagonal, diagonal_images_count = worst(diagonal_images(pairs))
    return {"n": len(pairs), "images": images, "order": order, "max_deviation": full,
            "diagonal_images": diagonal_images_count, "diagonal_max_deviation": diagonal}


# interface aliases
lemma31_closed = row_power_closed
lemma34_closed = row_pair_power_closed
