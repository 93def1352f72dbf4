"""Macdonald polynomials at rational (q, t) in low degree.

Symmetric functions are homogeneous and stored either in the power-sum (p) or
monomial (m) basis.  P_lam comes from Gram-Schmidt on the m-basis along a
linear extension of dominance, J and the modified H-tilde follow by the
usual normalizations, and the B-hat operator is assembled as the matrix
diagonal in the H-tilde basis so it can be compared with the vertex-operator
zero mode.  That comparison needs a choice of how Fock space is identified
with symmetric functions; see :func:`identification_weights`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod

import sympy
from sympy.combinatorics import Permutation

from . import fock
from .exceptions import DegenerateSpecializationError, DomainError
from .partitions import (b_hat_stat, b_stat, cell_stats, dominance_leq, enumerate_partitions, exact,
                         n_stat, z_factor)

DEFAULT_DEGREE_CAP = 6


def _check_cap(d: int, cap: int):
    if d < 0:
        raise DomainError("degree must be nonnegative")
    if d > cap:
        raise DomainError(f"degree {d} exceeds the configured cap {cap}")


# -- exact matrices --------------------------------------------------------------

def _to_sympy(rows) -> sympy.Matrix:
    return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in rows])


def _from_sympy(mat: sympy.Matrix) -> list:
    return [[Fraction(int(mat[i, j].p), int(mat[i, j].q)) for j in range(mat.cols)]
            for i in range(mat.rows)]


def matrix_inverse(rows) -> list:
    mat = _to_sympy(rows)
    if mat.det() == 0:
        raise DegenerateSpecializationError("matrix is singular")
    return _from_sympy(mat.inv())


def matrix_det(rows) -> Fraction:
    d = _to_sympy(rows).det()
    return Fraction(int(d.p), int(d.q))


def matmul(a, b) -> list:
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


# -- symmetric functions ---------------------------------------------------------

@dataclass(frozen=True)
class TransitionMatrix:
    """entries[i][j] is the coefficient of target basis[j] in source basis[i]."""

    degree: int
    source: str
    target: str
    basis: tuple
    entries: tuple


def _count_fillings(parts: tuple, rows: tuple) -> int:
    """Ways to send each (labelled) part to a row so that row sums equal ``rows``."""

    @lru_cache(maxsize=None)
    def go(i, remaining):
        if i == len(parts):
            return 1 if not any(remaining) else 0
        total = 0
        for r, cap in enumerate(remaining):
            if parts[i] <= cap:
                total += go(i + 1, remaining[:r] + (cap - parts[i],) + remaining[r + 1:])
        return total

    return go(0, rows)


@lru_cache(maxsize=None)
def p_to_m(d: int, cap: int = DEFAULT_DEGREE_CAP) -> TransitionMatrix:
    """p_mu = sum_lam R[mu][lam] m_lam."""
    _check_cap(d, cap)
    basis = tuple(enumerate_partitions(d))
    entries = tuple(tuple(Fraction(_count_fillings(mu, lam)) for lam in basis) for mu in basis)
    return TransitionMatrix(d, "p", "m", basis, entries)


@lru_cache(maxsize=None)
def m_to_p(d: int, cap: int = DEFAULT_DEGREE_CAP) -> TransitionMatrix:
    forward = p_to_m(d, cap)
    inv = matrix_inverse(forward.entries)
    return TransitionMatrix(d, "m", "p", forward.basis, tuple(tuple(row) for row in inv))


class SymFunc:
    """Homogeneous symmetric function with rational coefficients in the p or m basis."""

    __slots__ = ("basis", "terms")

    def __init__(self, terms: dict, basis: str = "p"):
        if basis not in ("p", "m"):
            raise DomainError(f"unknown basis {basis!r}")
        sizes = {sum(lam) for lam in terms}
        if len(sizes) > 1:
            raise DomainError("SymFunc components must share one degree")
        self.basis = basis
        self.terms = {tuple(lam): exact(c) for lam, c in terms.items() if c != 0}

    @property
    def degree(self):
        return sum(next(iter(self.terms))) if self.terms else None

    def _convert(self, target: str) -> "SymFunc":
        if self.basis == target or not self.terms:
            return SymFunc(dict(self.terms), target)
        d = self.degree
        tm = p_to_m(d) if self.basis == "p" else m_to_p(d)
        index = {lam: i for i, lam in enumerate(tm.basis)}
        out = {}
        for lam, c in self.terms.items():
            row = tm.entries[index[lam]]
            for j, mu in enumerate(tm.basis):
                if row[j]:
                    out[mu] = out.get(mu, Fraction(0)) + c * row[j]
        return SymFunc(out, target)

    def to_p(self) -> "SymFunc":
        return self._convert("p")

    def to_m(self) -> "SymFunc":
        return self._convert("m")

    def __add__(self, other: "SymFunc") -> "SymFunc":
        other = other._convert(self.basis)
        out = dict(self.terms)
        for lam, c in other.terms.items():
            out[lam] = out.get(lam, Fraction(0)) + c
        return SymFunc(out, self.basis)

    def __sub__(self, other: "SymFunc") -> "SymFunc":
        return self + other * -1

    def __mul__(self, other) -> "SymFunc":
        if isinstance(other, SymFunc):
            a, b = self.to_p(), other.to_p()
            out = {}
            for lam, c in a.terms.items():
                for mu, e in b.terms.items():
                    key = tuple(sorted(lam + mu, reverse=True))
                    out[key] = out.get(key, Fraction(0)) + c * e
            return SymFunc(out, "p")
        c = exact(other)
        return SymFunc({lam: c * a for lam, a in self.terms.items()}, self.basis)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymFunc):
            return NotImplemented
        return self.to_p().terms == other.to_p().terms

    def __repr__(self) -> str:
        return f"SymFunc({self.terms!r}, basis={self.basis!r})"

    def coefficient(self, lam) -> Fraction:
        return self.terms.get(tuple(lam), Fraction(0))

    def coefficients(self, basis: list) -> list:
        return [self.coefficient(lam) for lam in basis]


def power_sum(lam) -> SymFunc:
    return SymFunc({tuple(lam): 1}, "p")


def monomial(lam) -> SymFunc:
    return SymFunc({tuple(lam): 1}, "m")


def complete_homogeneous(n: int) -> SymFunc:
    if n < 0:
        return SymFunc({}, "p")
    return SymFunc({mu: Fraction(1, z_factor(mu)) for mu in enumerate_partitions(n)}, "p")


def schur_jacobi_trudi(lam) -> SymFunc:
    """s_lam = det(h_{lam_i - i + j}) expanded by permutations."""
    lam = tuple(lam)
    n = len(lam)
    if n == 0:
        return SymFunc({(): 1}, "p")
    total = SymFunc({}, "p")
    for perm in itertools.permutations(range(n)):
        sign = Permutation(list(perm)).signature()
        term = SymFunc({(): sign}, "p")
        for i in range(n):
            term = term * complete_homogeneous(lam[i] - i + perm[i])
            if not term.terms:
                break
        total = total + term
    return total


# -- inner product and Macdonald P -------------------------------------------------

def _pair_weight(lam, q, t) -> Fraction:
    w = Fraction(z_factor(lam))
    for part in lam:
        den = 1 - t ** part
        if den == 0:
            raise DegenerateSpecializationError(f"t**{part} = 1 makes the q,t pairing singular")
        w *= (1 - q ** part) / den
    return w


def qt_inner(f: SymFunc, g: SymFunc, q, t) -> Fraction:
    """<p_lam, p_mu>_{q,t} = delta z_lam prod_i (1 - q^lam_i) / (1 - t^lam_i), extended bilinearly."""
    q, t = exact(q), exact(t)
    f, g = f.to_p(), g.to_p()
    if f.terms and g.terms and f.degree != g.degree:
        raise DomainError("qt_inner needs functions of equal degree")
    return sum((c * g.terms[lam] * _pair_weight(lam, q, t)
                for lam, c in f.terms.items() if lam in g.terms), Fraction(0))


@lru_cache(maxsize=None)
def _p_basis(d: int, q: Fraction, t: Fraction, cap: int) -> dict:
    _check_cap(d, cap)
    basis = enumerate_partitions(d)
    tp = m_to_p(d, cap)
    # Gram matrix of the m-basis under the q,t pairing
    weights = [_pair_weight(mu, q, t) for mu in basis]
    rows = tp.entries
    gram = [[sum((rows[a][k] * rows[b][k] * weights[k] for k in range(len(basis))), Fraction(0))
             for b in range(len(basis))] for a in range(len(basis))]

    def inner(x, y):
        return sum((x[a] * gram[a][b] * y[b] for a in range(len(basis)) for b in range(len(basis))
                    if x[a] and y[b]), Fraction(0))

    done = []  # (vector in m-coordinates, its squared norm)
    result = {}
    # increasing lexicographic order is a linear extension of dominance
    for idx in range(len(basis) - 1, -1, -1):
        vec = [Fraction(0)] * len(basis)
        vec[idx] = Fraction(1)
        unit = list(vec)
        for prev, norm in done:
            coeff = inner(unit, prev) / norm
            vec = [a - coeff * b for a, b in zip(vec, prev)]
        norm = inner(vec, vec)
        if norm == 0:
            raise DegenerateSpecializationError(
                f"Gram-Schmidt pivot vanishes for {basis[idx]} at (q, t) = ({q}, {t})")
        done.append((vec, norm))
        result[basis[idx]] = SymFunc(dict(zip(basis, vec)), "m")
    return result


def macdonald_P(lam, q, t, cap: int = DEFAULT_DEGREE_CAP) -> SymFunc:
    """Monic, m-triangular, q,t-orthogonal P_lam (m basis)."""
    lam = tuple(lam)
    return _p_basis(sum(lam), exact(q), exact(t), cap)[lam]


def macdonald_J(lam, q, t, cap: int = DEFAULT_DEGREE_CAP) -> SymFunc:
    """J_lam = prod_cells (1 - q^arm t^(leg+1)) P_lam."""
    q, t = exact(q), exact(t)
    c = prod((1 - q ** s.arm * t ** (s.leg + 1) for s in cell_stats(tuple(lam))), start=Fraction(1))
    return macdonald_P(lam, q, t, cap) * c


def plethysm_one_minus_t(f: SymFunc, t) -> SymFunc:
    """f[X / (1 - t)]: p_k -> p_k / (1 - t^k) on the p basis."""
    t = exact(t)
    out = {}
    for lam, c in f.to_p().terms.items():
        den = prod((1 - t ** k for k in lam), start=Fraction(1))
        if den == 0:
            raise DegenerateSpecializationError("plethysm X/(1-t) is singular at this t")
        out[lam] = c / den
    return SymFunc(out, "p")


def macdonald_H(lam, q, t, cap: int = DEFAULT_DEGREE_CAP) -> SymFunc:
    return plethysm_one_minus_t(macdonald_J(lam, q, t, cap), t)


def modified_H_tilde(lam, q, t, cap: int = DEFAULT_DEGREE_CAP) -> SymFunc:
    """H-tilde_lam(x; q, t) = t^n(lam) H_lam(x; q, 1/t), in the p basis."""
    q, t = exact(q), exact(t)
    if t == 0:
        raise DegenerateSpecializationError("H-tilde needs t != 0")
    lam = tuple(lam)
    return macdonald_H(lam, q, 1 / t, cap) * t ** n_stat(lam)


# -- the B-hat operator ---------------------------------------------------------

def h_tilde_matrix(d: int, q, t, cap: int = DEFAULT_DEGREE_CAP) -> list:
    """Columns are the p-coordinates of H-tilde_lam, lam in reverse lex order."""
    basis = enumerate_partitions(d)
    cols = [modified_H_tilde(lam, q, t, cap).coefficients(basis) for lam in basis]
    return [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]


def bhat_spectral_matrix(d: int, q, t, cap: int = DEFAULT_DEGREE_CAP) -> list:
    """Matrix of B-hat on degree d in the p basis: H diag(B-hat_lam) H^-1."""
    q, t = exact(q), exact(t)
    basis = enumerate_partitions(d)
    H = h_tilde_matrix(d, q, t, cap)
    diag = [b_hat_stat(lam, q, t) for lam in basis]
    HD = [[H[i][j] * diag[j] for j in range(len(basis))] for i in range(len(basis))]
    return matmul(HD, matrix_inverse(H))


def b_operator_matrix(d: int, q, t, cap: int = DEFAULT_DEGREE_CAP) -> list:
    """Matrix of the unhatted operator, H diag(B_lam) H^-1."""
    q, t = exact(q), exact(t)
    basis = enumerate_partitions(d)
    H = h_tilde_matrix(d, q, t, cap)
    HD = [[H[i][j] * b_stat(basis[j], q, t) for j in range(len(basis))] for i in range(len(basis))]
    return matmul(HD, matrix_inverse(H))


def scaled_v0_matrix(d: int, q, t) -> list:
    """V_0(q, 1, t, 1) at kappa = 1, divided by (1-q)(1-t)."""
    q, t = exact(q), exact(t)
    _, mat = fock.v0_matrix(fock.VertexParams.from_qt(q, 1, t, 1, 1), d)
    scale = 1 / ((1 - q) * (1 - t))
    return [[c * scale for c in row] for row in mat]


def max_entry_deviation(a, b) -> Fraction:
    return max((abs(x - y) for ra, rb in zip(a, b) for x, y in zip(ra, rb)), default=Fraction(0))


IDENTIFICATIONS = ("plethystic", "literal")


def identification_weights(d: int, q, identification: str = "plethystic") -> list:
    """Diagonal map from Lambda to Fock space on the p basis, per partition of d.

    "literal" sends p_lam to the basis vector p_lam; "plethystic" sends f to
    f[X(1 - q)], i.e. p_lam to prod_i (1 - q^lam_i) p_lam.
    """
    q = exact(q)
    if identification == "literal":
        return [Fraction(1)] * len(enumerate_partitions(d))
    if identification == "plethystic":
        return [prod((1 - q ** k for k in lam), start=Fraction(1)) for lam in enumerate_partitions(d)]
    raise DomainError(f"unknown identification {identification!r}")


def transported_bhat_matrix(d: int, q, t, identification: str = "plethystic",
                            cap: int = DEFAULT_DEGREE_CAP) -> list:
    """The B-hat matrix carried to Fock space along the chosen identification."""
    mat = bhat_spectral_matrix(d, q, t, cap)
    w = identification_weights(d, q, identification)
    if any(x == 0 for x in w):
        raise DegenerateSpecializationError("identification is singular at this q")
    n = len(w)
    return [[w[i] * mat[i][j] / w[j] for j in range(n)] for i in range(n)]


def verify_vo(d: int, q, t, identification: str = "plethystic", cap: int = DEFAULT_DEGREE_CAP) -> Fraction:
    """Max deviation between the B-hat matrix and the zero mode divided by (1-q)(1-t)."""
    _check_cap(d, cap)
    return max_entry_deviation(transported_bhat_matrix(d, q, t, identification, cap),
                               scaled_v0_matrix(d, q, t))


def is_m_triangular(f: SymFunc, lam) -> bool:
    """True iff f's m-expansion is supported on partitions dominated by lam."""
    return all(dominance_leq(mu, tuple(lam)) for mu in f.to_m().terms)
