"""Integer partitions and the cell statistics B and B-hat.

Partitions are plain tuples of weakly decreasing positive integers; the empty
tuple is the partition of 0.  All statistics are generic over the number type
of ``q`` and ``t`` (``Fraction`` for exact work, ``complex`` for numerics).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Iterable

from .exceptions import DomainError, SingularParameterError

Partition = tuple


def make_partition(parts: Iterable[int]) -> Partition:
    """Validate ``parts`` and return them as a partition tuple.

    Zero parts are dropped; the remaining parts must be positive integers in
    weakly decreasing order.
    """
    lam = tuple(int(p) for p in parts if p != 0)
    if any(p < 0 for p in lam):
        raise DomainError(f"negative part in {lam!r}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise DomainError(f"parts not weakly decreasing: {lam!r}")
    return lam


@dataclass(frozen=True)
class CellStats:
    row: int
    col: int
    coarm: int
    coleg: int
    arm: int
    leg: int


@lru_cache(maxsize=None)
def _partitions_bounded(n: int, largest: int) -> tuple:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions_bounded(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_partitions(n: int) -> list:
    """All partitions of ``n`` in reverse lexicographic order."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    return list(_partitions_bounded(n, n))


def partitions_up_to(n: int) -> list:
    """All partitions of size 0..n, grouped by size then reverse lex."""
    return [lam for d in range(n + 1) for lam in _partitions_bounded(d, d)]


_COUNTS = [1]


def partition_count(n: int) -> int:
    """p(n) by Euler's pentagonal-number recurrence."""
    if n < 0:
        return 0
    while len(_COUNTS) <= n:
        m = len(_COUNTS)
        total = 0
        k = 1
        while k * (3 * k - 1) // 2 <= m:
            sign = 1 if k % 2 else -1
            total += sign * _COUNTS[m - k * (3 * k - 1) // 2]
            g2 = k * (3 * k + 1) // 2
            if g2 <= m:
                total += sign * _COUNTS[m - g2]
            k += 1
        _COUNTS.append(total)
    return _COUNTS[n]


def size(lam: Partition) -> int:
    return sum(lam)


def conjugate(lam: Partition) -> Partition:
    if not lam:
        return ()
    return tuple(sum(1 for p in lam if p >= i) for i in range(1, lam[0] + 1))


def cell_stats(lam: Partition) -> list:
    conj = conjugate(lam)
    return [
        CellStats(row=i, col=j, coarm=j - 1, coleg=i - 1,
                  arm=lam[i - 1] - j, leg=conj[j - 1] - i)
        for i in range(1, len(lam) + 1)
        for j in range(1, lam[i - 1] + 1)
    ]


def b_stat(lam: Partition, q, t):
    """Cell generating polynomial: sum of q**coarm * t**coleg over cells."""
    total = 0
    for i, part in enumerate(lam):
        ti = t ** i
        total += sum(ti * q ** j for j in range(part))
    return total


def exact(x):
    """Promote Python ints to ``Fraction`` so that division stays exact."""
    return Fraction(x) if isinstance(x, int) else x


def b_hat_stat(lam: Partition, q, t):
    """Companion series (1/(1-q)) * sum_{i>=1} t**(i-1) * q**lam_i, summed in closed form.

    The tail i > len(lam) is the geometric series t**len(lam) / (1 - t), so
    the value is exact for every t != 1 regardless of |t|.
    """
    q, t = exact(q), exact(t)
    if q == 1 or t == 1:
        raise SingularParameterError("b_hat_stat is undefined at q = 1 or t = 1")
    head = sum(t ** i * q ** part for i, part in enumerate(lam))
    tail = t ** len(lam) / (1 - t)
    return (head + tail) / (1 - q)


def n_stat(lam: Partition) -> int:
    return sum(i * part for i, part in enumerate(lam))


def dominance_leq(mu: Partition, lam: Partition) -> bool:
    """True iff ``mu`` is dominated by ``lam`` (partial sums of mu never exceed lam's)."""
    if size(mu) != size(lam):
        raise DomainError(f"size mismatch: |{mu}| != |{lam}|")
    s_mu = s_lam = 0
    for k in range(max(len(mu), len(lam))):
        s_mu += mu[k] if k < len(mu) else 0
        s_lam += lam[k] if k < len(lam) else 0
        if s_mu > s_lam:
            return False
    return True


def multiplicities(lam: Partition) -> Counter:
    return Counter(lam)


def z_factor(lam: Partition) -> int:
    """Automorphism factor prod_r r**m_r * m_r!."""
    return prod(r ** m * factorial(m) for r, m in Counter(lam).items())
