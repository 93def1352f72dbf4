"""Bosonic Fock space on power sums and deformed vertex operators.

The Fock space is realized as polynomials in p_1, p_2, ...: the creation
operator a_{-k} multiplies by p_k and the annihilation operator a_k acts as
kappa * k * d/dp_k, so [a_m, a_n] = kappa * m * delta_{m,-n}.

A vertex operator with parameters (s, t, u, w) is

    V(z) = exp(sum_k (u^k - w^k) a_{-k} z^k / k) exp(sum_k (t^k - s^k) a_k z^-k / k).

The annihilation exponential is the shift p_k -> p_k + kappa (t^k - s^k), and
the creation exponential multiplies by sum_mu c_mu p_mu / z_mu.  Since every
mode k carries z^{+-k}, the power of z in a matrix element equals the change
of degree; the zero mode V_0 is the degree-preserving block.
"""

from __future__ import annotations

import cmath
import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterable, Mapping, Sequence

from .exceptions import ConvergenceError, DomainError
from .partitions import enumerate_partitions, exact, make_partition, partitions_up_to, z_factor
from .qseries import DEFAULT_ORDER, VSeries, exp_series, pochhammer_inf, pow_rational


def _merge(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, reverse=True))


def _from_counts(counts: Mapping[int, int]) -> tuple:
    return tuple(sorted((k for k, m in counts.items() for _ in range(m)), reverse=True))


class FockVector:
    """Finite linear combination of power-sum monomials p_lam."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc = defaultdict(Fraction)
        for lam, c in items:
            acc[make_partition(lam)] += c
        self.terms = {lam: c for lam, c in acc.items() if c != 0}

    @classmethod
    def basis(cls, lam: Sequence[int]) -> "FockVector":
        return cls({tuple(lam): Fraction(1)})

    @classmethod
    def vacuum(cls) -> "FockVector":
        return cls.basis(())

    def __getitem__(self, lam) -> Fraction:
        return self.terms.get(tuple(lam), Fraction(0))

    def __eq__(self, other) -> bool:
        return isinstance(other, FockVector) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"FockVector({self.terms!r})"

    def __add__(self, other: "FockVector") -> "FockVector":
        return FockVector(list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other * -1

    def __mul__(self, c) -> "FockVector":
        return FockVector({lam: c * a for lam, a in self.terms.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {sum(lam) for lam in self.terms}

    def homogeneous_part(self, degree: int) -> "FockVector":
        return FockVector({lam: c for lam, c in self.terms.items() if sum(lam) == degree})


def heisenberg_apply(mode: int, kappa, vec: FockVector) -> FockVector:
    """Apply a_mode: multiplication by p_{-mode} or kappa*mode*d/dp_mode."""
    if mode == 0:
        raise DomainError("a_0 is not a generator here")
    kappa = exact(kappa)
    out = defaultdict(Fraction)
    if mode < 0:
        for lam, c in vec.terms.items():
            out[_merge(lam, (-mode,))] += c
    else:
        for lam, c in vec.terms.items():
            m = lam.count(mode)
            if m:
                rest = list(lam)
                rest.remove(mode)
                out[tuple(rest)] += c * kappa * mode * m
    return FockVector(out)


@dataclass(frozen=True)
class VertexParams:
    """Parameters of V(z; s, t, u, w): creation u^k - w^k, annihilation t^k - s^k."""

    s: object
    t: object
    u: object
    w: object
    kappa: object = Fraction(1)

    def __post_init__(self):
        for name in ("s", "t", "u", "w", "kappa"):
            object.__setattr__(self, name, exact(getattr(self, name)))

    @classmethod
    def from_qt(cls, q1, q2, t1, t2, kappa=1) -> "VertexParams":
        """The operator V(z; q1, t1, q2, t2): creation q1^k - q2^k, annihilation t2^k - t1^k."""
        return cls(s=t1, t=t2, u=q1, w=q2, kappa=kappa)

    def creation(self, k: int):
        return self.u ** k - self.w ** k

    def annihilation(self, k: int):
        return self.t ** k - self.s ** k


@lru_cache(maxsize=64)
def _creation_table(params: VertexParams, max_degree: int) -> dict:
    """degree -> [(mu, prod_i c_{mu_i} / z_mu)] for the creation exponential."""
    table = {}
    for d in range(max_degree + 1):
        row = []
        for mu in enumerate_partitions(d):
            c = Fraction(prod((params.creation(k) for k in mu), start=Fraction(1)), z_factor(mu))
            if c:
                row.append((mu, c))
        table[d] = row
    return table


def _annihilation_terms(params: VertexParams, lam: tuple):
    """Expand prod_k (p_k + kappa d_k)^{m_k}: yields (remaining, removed degree, coeff)."""
    counts = Counter(lam)
    modes = sorted(counts)
    shifts = {k: params.kappa * params.annihilation(k) for k in modes}
    for choice in itertools.product(*(range(counts[k] + 1) for k in modes)):
        coeff = Fraction(1)
        removed = 0
        remaining = {}
        for k, n in zip(modes, choice):
            if n:
                if shifts[k] == 0:
                    break
                coeff *= comb(counts[k], n) * shifts[k] ** n
                removed += k * n
            remaining[k] = counts[k] - n
        else:
            yield _from_counts(remaining), removed, coeff


def apply_vertex(params: VertexParams, vec: FockVector, max_degree: int,
                 min_degree: int = 0) -> dict:
    """V(z) applied to ``vec`` at z = 1, keeping outputs of degree in [min_degree, max_degree].

    Returns {mu: coefficient}; the z-power of each entry is |mu| minus the
    degree of the input term it came from.
    """
    table = _creation_table(params, max_degree)
    out = defaultdict(Fraction)
    for lam, c in vec.terms.items():
        for rest, _, a in _annihilation_terms(params, lam):
            base = sum(rest)
            lo = max(0, min_degree - base)
            for r in range(lo, max_degree - base + 1):
                for mu, b in table[r]:
                    out[_merge(rest, mu)] += c * a * b
    return {lam: c for lam, c in out.items() if c != 0}


def vertex_zero_mode_apply(params: VertexParams, vec: FockVector, degree_cap: int | None = None) -> FockVector:
    """Apply V_0, the degree-preserving block of V(z)."""
    degrees = vec.degrees()
    if degree_cap is not None and degrees and max(degrees) > degree_cap:
        raise DomainError(f"input has degree above the cap {degree_cap}")
    out = FockVector()
    for d in sorted(degrees):
        part = vec.homogeneous_part(d)
        out = out + FockVector(apply_vertex(params, part, d, d))
    return out


def vertex_matrix_element(params: VertexParams, dst: tuple, src: tuple) -> Fraction:
    """Coefficient of p_dst in V(1) p_src, summed over common sub-multisets.

    A surviving sub-multiset rho of src is untouched by the annihilators; the
    rest of src is annihilated and dst - rho is created.
    """
    cs, cd = Counter(src), Counter(dst)
    modes = sorted(set(cs) | set(cd))
    total = Fraction(0)
    for keep in itertools.product(*(range(min(cs[k], cd[k]) + 1) for k in modes)):
        coeff = Fraction(1)
        created = []
        for k, r in zip(modes, keep):
            n = cs[k] - r
            if n:
                coeff *= comb(cs[k], n) * (params.kappa * params.annihilation(k)) ** n
            created.extend([k] * (cd[k] - r))
            if coeff == 0:
                break
        if coeff == 0:
            continue
        created.sort(reverse=True)
        coeff *= prod((params.creation(k) for k in created), start=Fraction(1))
        total += coeff / z_factor(tuple(created))
    return total


def v0_matrix(params: VertexParams, degree: int):
    """(basis, matrix) of V_0 on degree ``degree``; matrix[i][j] = <basis_i | V_0 | basis_j>."""
    basis = enumerate_partitions(degree)
    index = {lam: i for i, lam in enumerate(basis)}
    matrix = [[Fraction(0)] * len(basis) for _ in basis]
    for j, lam in enumerate(basis):
        image = vertex_zero_mode_apply(params, FockVector.basis(lam))
        for mu, c in image.terms.items():
            matrix[index[mu]][j] = c
    return basis, matrix


def _projection_diagonal(params: VertexParams, lam: tuple) -> Fraction:
    """Diagonal coefficient of V_0 at p_lam from the per-part-size product formula."""
    total = Fraction(1)
    for r, m in Counter(lam).items():
        x = params.kappa * params.creation(r) * params.annihilation(r)
        total *= sum(Fraction(comb(m, n)) * x ** n / (r ** n * factorial(n)) for n in range(m + 1))
    return total


def v0_trace(params: VertexParams, order: int = DEFAULT_ORDER, route: str = "projection") -> VSeries:
    """Tr(v^L0 V_0) mod v^(order+1) by the projection formula or by direct application."""
    coeffs = [Fraction(0)] * (order + 1)
    if route == "projection":
        for lam in partitions_up_to(order):
            coeffs[sum(lam)] += _projection_diagonal(params, lam)
    elif route == "matrix":
        for d in range(order + 1):
            _, matrix = v0_matrix(params, d)
            coeffs[d] = sum(matrix[i][i] for i in range(len(matrix)))
    else:
        raise DomainError(f"unknown route {route!r}")
    return VSeries(coeffs, order)


def zero_mode_trace_closed(q1, q2, t1, t2, kappa=1, order: int = DEFAULT_ORDER) -> VSeries:
    """<V_0>_v = [(q1 t1 v)_inf (q2 t2 v)_inf / ((q1 t2 v)_inf (q2 t1 v)_inf)]^kappa."""
    q1, q2, t1, t2 = map(exact, (q1, q2, t1, t2))

    def P(a):
        return pochhammer_inf(a, order, shift=1)

    base = P(q1 * t1) * P(q2 * t2) / (P(q1 * t2) * P(q2 * t1))
    return pow_rational(base, kappa)


def v0_expectation(params: VertexParams, order: int = DEFAULT_ORDER) -> VSeries:
    return pochhammer_inf(1, order, shift=1) * v0_trace(params, order)


def binomial_identity_residual(n: int, order: int = DEFAULT_ORDER) -> VSeries:
    """sum_{m>=n} C(m,n) v^m  -  v^n / (1-v)^(n+1); zero as a series."""
    lhs = VSeries([comb(m, n) if m >= n else 0 for m in range(order + 1)], order)
    rhs = VSeries.monomial(1, n, order) * VSeries.geometric(1, 1, order) ** (n + 1)
    return lhs - rhs


# -- bivariate (v, zeta) series ---------------------------------------------------

class ZetaSeries:
    """Series in v and zeta = z2/z1, stored as {(d, e): coefficient} for v^d zeta^e.

    Negative zeta powers occur, but always with d + e >= 0.  Terms are kept
    when d <= v_order and d + e <= v_order + zeta_order.  Both conditions cut
    out monomial ideals in the variables (v/zeta, zeta), so truncation
    commutes with multiplication, and every kept coefficient is exact.
    """

    __slots__ = ("v_order", "zeta_order", "terms")

    def __init__(self, terms: Mapping, v_order: int, zeta_order: int):
        self.v_order = v_order
        self.zeta_order = zeta_order
        clean = {}
        for (d, e), c in terms.items():
            if d + e < 0:
                raise DomainError(f"monomial v^{d} zeta^{e} has d + e < 0")
            if c != 0 and self.keeps(d, e):
                clean[(d, e)] = exact(c)
        self.terms = clean

    def keeps(self, d: int, e: int) -> bool:
        return 0 <= d <= self.v_order and d + e <= self.v_order + self.zeta_order

    @classmethod
    def one(cls, v_order: int, zeta_order: int) -> "ZetaSeries":
        return cls({(0, 0): Fraction(1)}, v_order, zeta_order)

    @classmethod
    def from_vseries(cls, s: VSeries, zeta_order: int) -> "ZetaSeries":
        return cls({(d, 0): c for d, c in enumerate(s.coeffs)}, s.order, zeta_order)

    def _orders(self, other):
        return min(self.v_order, other.v_order), min(self.zeta_order, other.zeta_order)

    def __add__(self, other: "ZetaSeries") -> "ZetaSeries":
        acc = defaultdict(Fraction, self.terms)
        for k, c in other.terms.items():
            acc[k] += c
        return ZetaSeries(acc, *self._orders(other))

    def __sub__(self, other: "ZetaSeries") -> "ZetaSeries":
        return self + other * -1

    def __mul__(self, other) -> "ZetaSeries":
        if isinstance(other, VSeries):
            other = ZetaSeries.from_vseries(other, self.zeta_order)
        if not isinstance(other, ZetaSeries):
            c = exact(other)
            return ZetaSeries({k: c * a for k, a in self.terms.items()}, self.v_order, self.zeta_order)
        N, K = self._orders(other)
        acc = defaultdict(Fraction)
        for (d1, e1), a in self.terms.items():
            for (d2, e2), b in other.terms.items():
                d, e = d1 + d2, e1 + e2
                if d <= N and d + e <= N + K:
                    acc[(d, e)] += a * b
        return ZetaSeries(acc, N, K)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, ZetaSeries):
            return NotImplemented
        N, K = self._orders(other)
        return (ZetaSeries(self.terms, N, K).terms == ZetaSeries(other.terms, N, K).terms)

    def __repr__(self) -> str:
        return f"ZetaSeries({len(self.terms)} terms, v_order={self.v_order}, zeta_order={self.zeta_order})"

    def coefficient(self, d: int, e: int) -> Fraction:
        return self.terms.get((d, e), Fraction(0))

    def zeta_layer(self, e: int) -> VSeries:
        """The coefficient of zeta^e as a series in v (exact up to v^min(N, N+K-e))."""
        top = min(self.v_order, self.v_order + self.zeta_order - e)
        return VSeries([self.coefficient(d, e) for d in range(top + 1)], top)

    def at_zeta_one(self) -> VSeries:
        """Sum over all zeta powers; exact only when no terms were cut by the zeta bound."""
        coeffs = [Fraction(0)] * (self.v_order + 1)
        for (d, _), c in self.terms.items():
            coeffs[d] += c
        return VSeries(coeffs, self.v_order)

    def max_deviation(self, other: "ZetaSeries") -> Fraction:
        diff = (self - other).terms
        return max((abs(c) for c in diff.values()), default=Fraction(0))

    def exp(self) -> "ZetaSeries":
        """Exponential of a series without constant term (nilpotent here)."""
        if self.coefficient(0, 0):
            raise DomainError("exp needs a series without constant term")
        result = ZetaSeries.one(self.v_order, self.zeta_order)
        power = result
        n = 0
        while True:
            n += 1
            power = power * self * Fraction(1, n)
            if not power.terms:
                return result
            result = result + power

    def to_json(self) -> dict:
        return {
            "v_order": self.v_order,
            "zeta_order": self.zeta_order,
            "terms": [[d, e, f"{c.numerator}/{c.denominator}"] for (d, e), c in sorted(self.terms.items())],
        }


# -- normal ordering ------------------------------------------------

def _scalar_pairing(params_i: VertexParams, params_j: VertexParams, zeta_order: int) -> list:
    """Coefficients of exp(kappa sum_k d_k^i c_k^j zeta^k / k) up to zeta^zeta_order."""
    kappa = params_i.kappa
    s = VSeries([0] + [kappa * params_i.annihilation(k) * params_j.creation(k) / k
                       for k in range(1, zeta_order + 1)], zeta_order)
    return list(exp_series(s).coeffs)


def normal_order_check(params_i: VertexParams, params_j: VertexParams, zeta_order: int = 6,
                       degree_cap: int = 5) -> Fraction:
    """Max deviation between exp(A_i) exp(C_j) and scalar * exp(C_j) exp(A_i).

    A_i is the annihilation part of vertex i at z_i = 1 and C_j the creation
    part of vertex j at z_j = zeta.  Both sides are applied to every p_lam with
    |lam| <= degree_cap and compared exactly through zeta^zeta_order.
    """
    if params_i.kappa != params_j.kappa:
        raise DomainError("both vertices must share kappa")
    K = zeta_order
    table = _creation_table(params_j, K)
    scalar = _scalar_pairing(params_i, params_j, K)
    worst = Fraction(0)
    for lam in partitions_up_to(degree_cap):
        lhs = defaultdict(Fraction)
        for e in range(K + 1):
            for mu, c in table[e]:
                for rest, _, a in _annihilation_terms(params_i, _merge(lam, mu)):
                    lhs[(rest, e)] += c * a
        rhs = defaultdict(Fraction)
        for rest, _, a in _annihilation_terms(params_i, lam):
            for e in range(K + 1):
                for mu, c in table[e]:
                    out = _merge(rest, mu)
                    for e2 in range(K + 1 - e):
                        if scalar[e2]:
                            rhs[(out, e + e2)] += a * c * scalar[e2]
        for key in set(lhs) | set(rhs):
            worst = max(worst, abs(lhs[key] - rhs[key]))
    return worst


# -- two-vertex traces ---------------------------------------------------------

def two_vertex_trace(params_a: VertexParams, params_b: VertexParams, order: int = 8,
                     zeta_order: int = 6) -> ZetaSeries:
    """Tr(v^L0 V(z1; a) V(z2; b)) by direct application, zeta = z2/z1.

    The intermediate degree after V(z2) is d + e where e is the zeta power,
    so capping it at order + zeta_order yields exactly the coefficients kept
    by :class:`ZetaSeries`.
    """
    if params_a.kappa != params_b.kappa:
        raise DomainError("both vertices must share kappa")
    cap = order + zeta_order
    acc = defaultdict(Fraction)
    for lam in partitions_up_to(order):
        d = sum(lam)
        image = apply_vertex(params_b, FockVector.basis(lam), cap)
        for nu, c in image.items():
            elem = vertex_matrix_element(params_a, lam, nu)
            if elem:
                acc[(d, sum(nu) - d)] += c * elem
    return ZetaSeries(acc, order, zeta_order)


def _intermediate_exponent(params: Sequence[VertexParams], order: int, zeta_order: int) -> ZetaSeries:
    """Exponent of the closed form of <V(z1) ... V(zn)>_v for n <= 2, z1 = 1, z2 = zeta."""
    kappa = params[0].kappa
    if any(p.kappa != kappa for p in params):
        raise DomainError("all vertices must share kappa")
    N, K = order, zeta_order
    acc = defaultdict(Fraction)
    # cross pairings i < j: kappa sum_k d_k^i c_k^j (z_j/z_i)^k / k
    if len(params) == 2:
        a, b = params
        for k in range(1, N + K + 1):
            acc[(0, k)] += kappa * a.annihilation(k) * b.creation(k) / k
    # trace pairings: kappa sum_k sum_{m>=1} v^{km}/k * C_k(z) * A_k(z)
    zeta_power = [0, 1][: len(params)]
    for k in range(1, N + 1):
        for m in range(1, N // k + 1):
            for j, pj in enumerate(params):
                for i, pi in enumerate(params):
                    e = k * (zeta_power[j] - zeta_power[i])
                    acc[(k * m, e)] += kappa * pj.creation(k) * pi.annihilation(k) / k
    return ZetaSeries(acc, N, K)


def vertex_product_closed(params: Sequence[VertexParams], order: int = 8, zeta_order: int = 6) -> ZetaSeries:
    """<V(z1) ... V(zn)>_v for n in {1, 2} as an exact (v, zeta) series.

    Uses the exponential form of the trace; the product over all pairs (i, j)
    then involves Pochhammer symbols whose arguments carry an extra factor v.
    """
    if not 1 <= len(params) <= 2:
        raise DomainError("exact closed form is provided for n = 1 and n = 2; use vertex_product_numeric")
    return _intermediate_exponent(params, order, zeta_order).exp()


def _log1m(y: complex) -> complex:
    if abs(y) >= 1:
        raise ConvergenceError(f"factor argument |{y}| >= 1; product does not converge")
    return cmath.log(1 - y)


def vertex_product_numeric(params: Sequence[VertexParams], zs: Sequence[complex], v: complex,
                      tol: float = 1e-17) -> complex:
    """Numeric <prod_i V(z_i)>_v for any n, with principal-branch kappa-powers.

    Each factor (1 - y) enters through log(1 - y), which requires |y| < 1; this
    is the convergence region of the exponential form.
    """
    if len(params) != len(zs):
        raise DomainError("need one z per vertex")
    v = complex(v)
    if abs(v) >= 1:
        raise ConvergenceError("need |v| < 1")
    kappa = complex(params[0].kappa)
    n = len(params)
    log_total = 0j
    for i in range(n):
        for j in range(n):
            pi, pj = params[i], params[j]
            x = complex(zs[j]) / complex(zs[i])
            ti, si, uj, wj = (complex(pi.t), complex(pi.s), complex(pj.u), complex(pj.w))
            if i < j:
                log_total += (_log1m(ti * wj * x) + _log1m(si * uj * x)
                              - _log1m(ti * uj * x) - _log1m(si * wj * x))
            # prod over n >= 1 of the v-shifted factors
            vm = v
            while True:
                ys = (ti * wj * x * vm, si * uj * x * vm, ti * uj * x * vm, si * wj * x * vm)
                log_total += _log1m(ys[0]) + _log1m(ys[1]) - _log1m(ys[2]) - _log1m(ys[3])
                if max(abs(y) for y in ys) < tol * (1 - abs(v)):
                    break
                vm *= v
    return cmath.exp(kappa * log_total)


def literal_product_vacuum_factor(params: VertexParams) -> Fraction:
    """The v^0 factor prod over i = j in the product formula read with (a)_inf starting at i = 0.

    For a single vertex this is (1 - t w)(1 - s u) / ((1 - t u)(1 - s w)) before
    the kappa power; it differs from 1 in general, while <V_0>_v starts at 1.
    """
    p = params
    den = (1 - p.t * p.u) * (1 - p.s * p.w)
    if den == 0:
        raise DomainError("literal factor has a vanishing denominator")
    return (1 - p.t * p.w) * (1 - p.s * p.u) / den


# interface aliases
theorem42_closed = zero_mode_trace_closed
theorem45_closed = vertex_product_closed
