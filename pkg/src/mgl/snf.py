"""Integer Smith normal form and orders of finitely presented abelian groups.

The two seed-matrix constructors reproduce the 3x4 relation matrices that
certify the abelian section orders inside the T5 and T17 analyses: each
matrix presents the abelian group generated by three elements x, y, z
subject to one power relation and three mixing relations, and its invariant
factors determine the order of that group.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import DomainError
from .padic import INFINITY, split

__all__ = [
    "IntMatrix",
    "smith_normal_form",
    "abelian_order",
    "teo5_seed_matrix",
    "teo17_seed_matrix",
    "teo5_claimed_order",
    "teo17_claimed_order",
]


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major, arbitrary-precision entries."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DomainError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise DomainError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )
        if not all(isinstance(x, int) for x in self.entries):
            raise DomainError("matrix entries must be integers")

    @classmethod
    def from_rows(cls, rows):
        height = len(rows)
        if height == 0 or len(set(len(r) for r in rows)) != 1:
            raise DomainError("rows must be non-empty and of equal length")
        return cls(height, len(rows[0]), tuple(x for row in rows for x in row))

    def at(self, i, j):
        return self.entries[i * self.cols + j]

    def to_lists(self):
        return [
            list(self.entries[i * self.cols : (i + 1) * self.cols])
            for i in range(self.rows)
        ]


def smith_normal_form(matrix):
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix.

    Row/column reduction over the integers with minimal-absolute-value
    pivoting; returned factors are positive and form a divisibility chain.
    Zero factors (rank deficiency) are not included, so the zero matrix
    yields the empty tuple.
    """
    a = matrix.to_lists()
    height, width = matrix.rows, matrix.cols
    factors = []
    t = 0
    while t < height and t < width:
        pivot_pos = None
        for i in range(t, height):
            for j in range(t, width):
                if a[i][j] != 0 and (
                    pivot_pos is None
                    or abs(a[i][j]) < abs(a[pivot_pos[0]][pivot_pos[1]])
                ):
                    pivot_pos = (i, j)
        if pivot_pos is None:
            break
        a[t], a[pivot_pos[0]] = a[pivot_pos[0]], a[t]
        if pivot_pos[1] != t:
            for row in a:
                row[t], row[pivot_pos[1]] = row[pivot_pos[1]], row[t]
        while True:
            pivot = a[t][t]
            dirty = False
            for i in range(t + 1, height):
                if a[i][t]:
                    q = a[i][t] // pivot
                    if q:
                        for j in range(t, width):
                            a[i][j] -= q * a[t][j]
                    if a[i][t]:
                        # remainder is strictly smaller: promote it to pivot
                        a[t], a[i] = a[i], a[t]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, width):
                if a[t][j]:
                    q = a[t][j] // pivot
                    if q:
                        for i in range(t, height):
                            a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        for i in range(t, height):
                            a[i][t], a[i][j] = a[i][j], a[i][t]
                        dirty = True
                        break
            if dirty:
                continue
            fix_row = None
            for i in range(t + 1, height):
                if any(a[i][j] % pivot for j in range(t + 1, width)):
                    fix_row = i
                    break
            if fix_row is None:
                break
            for j in range(t, width):
                a[t][j] += a[fix_row][j]
        factors.append(abs(a[t][t]))
        t += 1
    return tuple(factors)


def abelian_order(relations):
    """Order of Z^n modulo the columns of `relations` (n = row count).

    Returns the product of the invariant factors when the relation matrix
    has full row rank (finite quotient) and INFINITY otherwise.
    """
    factors = smith_normal_form(relations)
    if len(factors) < relations.rows:
        return INFINITY
    order = 1
    for d in factors:
        order *= d
    return order


def _require(condition, message):
    if not condition:
        raise DomainError(message)


def _unit_check(p, name, value):
    _require(value % p != 0, f"{name} must be a unit modulo {p}")


def teo5_seed_matrix(p, m, ell, k, u, v, q=None):
    """Relation matrix of the abelian seed section in the T5 analysis.

    Presents the abelian group on x, y, z with relations
    x^(p^(ell+q)) = 1, z^(p^(m/2) k) = x^(p^m w_a) y^(p^(m/2) w_b),
    x^(2 p^ell k) = z^(p^m u), x^(p^ell) = y^(p^m), where 2 w_a = u^2 and
    2 w_b = v^2 modulo p^m (with the correction term -2*3^(m-1)*u, resp. v,
    when p = 3). Its order has p-part p^(3m+q), q = min(s, m/2) with
    s the p-adic valuation of 2k^2 - u^3. Pass q=None to derive it.
    """
    _require(p >= 3 and p % 2 == 1, "p must be an odd prime at least 3")
    _require(m >= 2 and m % 2 == 0, "m must be even and at least 2")
    _require(2 * ell == 3 * m, "ell must satisfy 2*ell = 3*m")
    _unit_check(p, "u", u)
    _unit_check(p, "v", v)
    _unit_check(p, "k", k)
    _require((u - v) % p ** (ell - m) == 0, "u and v must agree modulo p^(ell-m)")
    s = split(2 * k * k - u**3, p).valuation
    expected_q = min(s, m // 2)
    if q is None:
        q = expected_q
    _require(q == expected_q, f"q must equal min(s, m/2) = {expected_q}")
    modulus = p**m
    inv2 = pow(2, -1, modulus)
    if p == 3:
        w_a = (u * u - 2 * 3 ** (m - 1) * u) * inv2 % modulus
        w_b = (v * v - 2 * 3 ** (m - 1) * v) * inv2 % modulus
    else:
        w_a = u * u * inv2 % modulus
        w_b = v * v * inv2 % modulus
    half = m // 2
    return IntMatrix.from_rows(
        [
            [p ** (ell + q), p**m * w_a, p**ell, 2 * p**ell * k],
            [0, p**half * w_b, -(p**m), 0],
            [0, -(p**half) * k, 0, -(p**m) * u],
        ]
    )


def teo5_claimed_order(p, m, q):
    """Closed-form order claim for the T5 seed section: p^(3m+q)."""
    return p ** (3 * m + q)


def teo17_seed_matrix(m, ell, k, u, v, q=None):
    """Relation matrix of the abelian seed section in the T17 analysis.

    Presents the abelian group on x, y, z with relations
    x^(2^(ell+q+1)) = 1, z^(2^(ell-m+1) k) = x^(2^(m-1) u^2) y^(2^(m-q-1) v^2),
    x^(2^ell t k) = z^(2^m u), x^(2^ell) = y^(2^(ell-q)), where
    t = 1 - 2^((m-3)/2) and q = min(s, (m-3)/2) with s the 2-adic valuation
    of u^3 - k^2. Its order has 2-part 2^((7m-1)/2). Pass q=None to derive q.
    """
    _require(m >= 5 and m % 2 == 1, "m must be odd and at least 5")
    _require(2 * ell + 2 == 3 * m + 1, "ell must satisfy 2*ell + 2 = 3*m + 1")
    _require(u % 2 == 1, "u must be odd")
    _require(v % 2 == 1, "v must be odd")
    _require(k % 2 == 1, "k must be odd")
    _require((u - v) % 2 ** (ell - m) == 0, "u and v must agree modulo 2^(ell-m)")
    r = (m - 3) // 2
    s = split(u**3 - k * k, 2).valuation
    expected_q = min(s, r)
    if q is None:
        q = expected_q
    _require(q == expected_q, f"q must equal min(s, (m-3)/2) = {expected_q}")
    t = 1 - 2**r
    return IntMatrix.from_rows(
        [
            [2 ** (ell + q + 1), 2 ** (m - 1) * u * u, 2**ell, 2**ell * t * k],
            [0, 2 ** (m - q - 1) * v * v, -(2 ** (ell - q)), 0],
            [0, -(2 ** (ell - m + 1)) * k, 0, -(2**m) * u],
        ]
    )


def teo17_claimed_order(m):
    """Closed-form order claim for the T17 seed section: 2^((7m-1)/2)."""
    return 2 ** ((7 * m - 1) // 2)
