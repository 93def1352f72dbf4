"""Truncated formal power series in v with exact rational coefficients.

A :class:`VSeries` of order N is known modulo v**(N+1).  Binary operations
between series of different orders truncate to the smaller order, so every
result is exact as far as it is stated.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exceptions import DomainError, SingularParameterError

DEFAULT_ORDER = 12


def _coerce(c):
    return Fraction(c) if isinstance(c, (int, str)) else c


class VSeries:
    """Power series c_0 + c_1 v + ... + c_N v**N  (mod v**(N+1))."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Sequence, order: int | None = None):
        coeffs = [_coerce(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise DomainError("order must be nonnegative")
        coeffs = coeffs[: order + 1] + [Fraction(0)] * (order + 1 - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c, order: int = DEFAULT_ORDER) -> "VSeries":
        return cls([c], order)

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "VSeries":
        return cls([], order)

    @classmethod
    def one(cls, order: int = DEFAULT_ORDER) -> "VSeries":
        return cls([1], order)

    @classmethod
    def monomial(cls, c, power: int, order: int = DEFAULT_ORDER) -> "VSeries":
        coeffs = [Fraction(0)] * (order + 1)
        if power <= order:
            coeffs[power] = _coerce(c)
        return cls(coeffs, order)

    @classmethod
    def geometric(cls, ratio=1, power: int = 1, order: int = DEFAULT_ORDER) -> "VSeries":
        """1 / (1 - ratio * v**power)."""
        coeffs = [Fraction(0)] * (order + 1)
        r = _coerce(ratio)
        for k in range(0, order // power + 1):
            coeffs[k * power] = r ** k
        return cls(coeffs, order)

    # -- basic protocol -----------------------------------------------------
    def __getitem__(self, k: int):
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self) -> str:
        return f"VSeries({[str(c) for c in self.coeffs]!r}, order={self.order})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(f"{c}")
            elif k == 1:
                terms.append(f"({c})*v")
            else:
                terms.append(f"({c})*v^{k}")
        body = " + ".join(terms) if terms else "0"
        return f"{body} + O(v^{self.order + 1})"

    def __eq__(self, other) -> bool:
        if isinstance(other, VSeries):
            n = min(self.order, other.order)
            return self.coeffs[: n + 1] == other.coeffs[: n + 1]
        if isinstance(other, (int, Fraction)):
            return self == VSeries.constant(other, self.order)
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def truncate(self, order: int) -> "VSeries":
        if order > self.order:
            raise DomainError(f"cannot extend a series of order {self.order} to {order}")
        return VSeries(self.coeffs[: order + 1], order)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    # -- ring operations ----------------------------------------------------
    def _lift(self, other) -> "VSeries":
        if isinstance(other, VSeries):
            return other
        return VSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._lift(other)
        n = min(self.order, other.order)
        return VSeries([self.coeffs[k] + other.coeffs[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return VSeries([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, VSeries):
            c = _coerce(other)
            return VSeries([c * a for a in self.coeffs], self.order)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            s = 0
            for i in range(k + 1):
                if a[i] and b[k - i]:
                    s += a[i] * b[k - i]
            out.append(s)
        return VSeries(out, n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, VSeries):
            return self * inverse(other)
        return self * (1 / _coerce(other))

    def __rtruediv__(self, other):
        return self._lift(other) * inverse(self)

    def __pow__(self, exponent):
        if isinstance(exponent, int) and exponent >= 0:
            result = VSeries.one(self.order)
            base = self
            while exponent:
                if exponent & 1:
                    result = result * base
                base = base * base
                exponent >>= 1
            return result
        if isinstance(exponent, int):
            return inverse(self) ** (-exponent)
        return pow_rational(self, exponent)

    def derivative(self) -> "VSeries":
        """d/dv, losing one order of precision."""
        if self.order == 0:
            return VSeries([0], 0)
        return VSeries([k * self.coeffs[k] for k in range(1, self.order + 1)], self.order - 1)

    def scale_variable(self, c) -> "VSeries":
        """The series with v replaced by c*v."""
        c = _coerce(c)
        return VSeries([a * c ** k for k, a in enumerate(self.coeffs)], self.order)

    def evaluate(self, x):
        """Evaluate the truncated polynomial at a number ``x`` (Horner)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_json(self) -> dict:
        return {"order": self.order, "coefficients": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "VSeries":
        return cls([Fraction(c) for c in data["coefficients"]], data["order"])


def format_rational(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    if isinstance(c, int):
        return f"{c}/1"
    return str(c)


def add(a: VSeries, b: VSeries) -> VSeries:
    return a + b


def mul(a: VSeries, b: VSeries) -> VSeries:
    return a * b


def negate(a: VSeries) -> VSeries:
    return -a


def inverse(a: VSeries) -> VSeries:
    c0 = a.coeffs[0]
    if c0 == 0:
        raise SingularParameterError("series with zero constant term is not invertible")
    inv0 = 1 / c0
    out = [inv0]
    for k in range(1, a.order + 1):
        s = sum(a.coeffs[i] * out[k - i] for i in range(1, k + 1))
        out.append(-s * inv0)
    return VSeries(out, a.order)


def exp_series(a: VSeries) -> VSeries:
    """Formal exponential; requires a zero constant term.

    Uses n*b_n = sum_k k*a_k*b_{n-k}, which follows from b' = a' b.
    """
    if a.coeffs[0] != 0:
        raise DomainError("exp_series needs a series with zero constant term")
    b = [Fraction(1)]
    for n in range(1, a.order + 1):
        s = sum(k * a.coeffs[k] * b[n - k] for k in range(1, n + 1))
        b.append(s / n)
    return VSeries(b, a.order)


def log_series(a: VSeries) -> VSeries:
    """Formal logarithm; requires constant term 1."""
    if a.coeffs[0] != 1:
        raise DomainError("log_series needs a series with constant term 1")
    # b' = a'/a, integrated term by term
    ratio = a.derivative() * inverse(a.truncate(max(a.order - 1, 0))) if a.order else None
    out = [Fraction(0)]
    for k in range(1, a.order + 1):
        out.append(ratio.coeffs[k - 1] / k)
    return VSeries(out, a.order)


def pow_rational(a: VSeries, kappa) -> VSeries:
    """a**kappa := exp(kappa * log a) for a unit-normalized base."""
    if a.coeffs[0] != 1:
        raise DomainError("pow_rational needs a series with constant term 1")
    kappa = _coerce(kappa)
    if kappa == 0:
        return VSeries.one(a.order)
    return exp_series(log_series(a) * kappa)


def pochhammer_fin(a, r: int, order: int = DEFAULT_ORDER, shift: int = 0) -> VSeries:
    """(a v**shift)_r = prod_{i=0}^{r-1} (1 - a v**(i+shift))  (mod v**(order+1))."""
    if r < 0:
        raise DomainError("r must be nonnegative")
    a = _coerce(a)
    coeffs = [Fraction(0)] * (order + 1)
    coeffs[0] = Fraction(1)
    for i in range(r):
        p = i + shift
        if p > order:
            break
        # multiply in place by (1 - a v**p), high degrees first
        for k in range(order, p - 1, -1):
            coeffs[k] -= a * coeffs[k - p]
    return VSeries(coeffs, order)


def pochhammer_inf(a, order: int = DEFAULT_ORDER, shift: int = 0) -> VSeries:
    """(a v**shift)_inf; factors beyond v**order are 1 modulo v**(order+1)."""
    return pochhammer_fin(a, order + 1, order, shift)


def v_series(order: int = DEFAULT_ORDER) -> VSeries:
    """The series v itself."""
    return VSeries.monomial(1, 1, order)
