"""Closed-form classification of the Sylow p-subgroups of G(alpha, beta).

For each prime p dividing (alpha-1)(beta-1) the structure of the Sylow
p-subgroup G_p is governed by the local data

    m = v_p(alpha - 1),  n = v_p(beta - 1),  ell = v_p(alpha - beta),

their unit parts u, v, k, and in two boundary cases a secondary valuation s.
The classification breaks into a cyclic case plus 19 non-cyclic case tags;
each tag carries exact formulas for e = v_p(|G_p|), the nilpotency class f,
and the orders of the generators a, b and c = [a, b].

Pairs are normalized before matching (m >= n, except at p = 3 where the
congruence class mod 9 drives the normalization); generator orders are
swapped back on output so reports always refer to the original A and B.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

from . import padic
from .errors import DomainError, InternalError, ResourceError
from .padic import INFINITY, split

__all__ = [
    "GroupParams",
    "LocalInvariants",
    "CaseId",
    "StructureReport",
    "prime_support",
    "local_invariants",
    "classify",
    "predict",
    "predict_all",
    "total_order",
    "is_cyclic",
    "FACTOR_BOUND",
]

FACTOR_BOUND = 10**6


@dataclass(frozen=True)
class GroupParams:
    """The defining pair (alpha, beta) with epsilon = gcd(alpha-1, beta-1)."""

    alpha: int
    beta: int
    epsilon: int = 0

    def __post_init__(self):
        if self.alpha == 1 or self.beta == 1:
            raise DomainError("alpha and beta must differ from 1")
        object.__setattr__(
            self, "epsilon", math.gcd(self.alpha - 1, self.beta - 1)
        )


class CaseId(Enum):
    CYCLIC = "CYCLIC"
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    T5a = "T5a"
    T5b = "T5b"
    T6 = "T6"
    T7 = "T7"
    T8 = "T8"
    T9 = "T9"
    T10 = "T10"
    T11 = "T11"
    T12 = "T12"
    T13 = "T13"
    T14 = "T14"
    T15 = "T15"
    T16 = "T16"
    T17a = "T17a"
    T17b = "T17b"
    T18 = "T18"
    T19 = "T19"


@dataclass(frozen=True)
class LocalInvariants:
    """Per-prime data for the normalized pair; swapped records whether the
    (alpha, beta) -> (beta, alpha) isomorphism was applied."""

    p: int
    m: int
    n: int
    u: int
    v: int
    ell: Union[int, float]
    k: Optional[int]
    s: Optional[Union[int, float]]
    swapped: bool


@dataclass(frozen=True)
class StructureReport:
    """Predicted invariants of G_p; generator orders refer to the original
    A, B and C = [A, B], as p-adic valuations (o(A) = p**vA and so on)."""

    p: int
    e: int
    f: int
    vA: int
    vB: int
    vC: int
    case: CaseId


def _sieve(limit: int) -> List[int]:
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for q in range(2, int(math.isqrt(limit)) + 1):
        if flags[q]:
            start = q * q
            flags[start :: q] = b"\x00" * ((limit - start) // q + 1)
    return [i for i, f in enumerate(flags) if f]


_SMALL_PRIMES: Optional[List[int]] = None


def _small_primes() -> List[int]:
    global _SMALL_PRIMES
    if _SMALL_PRIMES is None:
        _SMALL_PRIMES = _sieve(FACTOR_BOUND)
    return _SMALL_PRIMES


def prime_support(params: GroupParams) -> List[int]:
    """Sorted primes dividing (alpha-1)(beta-1), the primes dividing |G|.

    Factoring is by trial division up to FACTOR_BOUND; a surviving cofactor
    below FACTOR_BOUND**2 is itself prime, anything larger raises a
    ResourceError naming the unfactored part.
    """
    x = abs((params.alpha - 1) * (params.beta - 1))
    if x == 1:
        return []
    found = []
    for q in _small_primes():
        if q * q > x:
            break
        if x % q == 0:
            found.append(q)
            while x % q == 0:
                x //= q
    if x > 1:
        if x < FACTOR_BOUND * FACTOR_BOUND:
            found.append(x)
        else:
            raise ResourceError(
                "unfactored cofactor %d exceeds the trial division budget" % x,
                high_water=x,
            )
    return sorted(found)


def _wants_swap(alpha: int, beta: int, p: int, m: int, n: int) -> bool:
    """Normalization rule.  p = 3 with exactly one parameter = 7 mod 9: that
    parameter becomes alpha.  Otherwise: enforce m >= n."""
    if p == 3:
        a7, b7 = alpha % 9 == 7, beta % 9 == 7
        if a7 != b7:
            return b7
    return m < n


def local_invariants(params: GroupParams, p: int) -> LocalInvariants:
    alpha, beta = params.alpha, params.beta
    sa, sb = split(alpha - 1, p), split(beta - 1, p)
    swapped = _wants_swap(alpha, beta, p, sa.valuation, sb.valuation)
    if swapped:
        alpha, beta = beta, alpha
        sa, sb = sb, sa
    m, n, u, v = sa.valuation, sb.valuation, sa.unit, sb.unit
    sd = split(alpha - beta, p)
    ell = sd.valuation
    k = None if sd.infinite else sd.unit
    s = _secondary_valuation(p, m, n, ell, u, k)
    return LocalInvariants(p, m, n, u, v, ell, k, s, swapped)


def _secondary_valuation(p, m, n, ell, u, k):
    """s, computed only on the two branch boundaries that consult it."""
    if n == 0 or m != n:
        return None
    if p == 2:
        if m < ell <= 2 * m - 3 and 2 * ell + 2 == 3 * m + 1:
            return split(u**3 - k**2, 2).valuation
    else:
        if 2 * ell == 3 * m:
            return split(2 * k**2 - u**3, p).valuation
    return None


def classify(inv: LocalInvariants, params: GroupParams) -> CaseId:
    """The unique case tag for the normalized local invariants."""
    p, m, n, ell = inv.p, inv.m, inv.n, inv.ell
    if n == 0:
        return CaseId.CYCLIC

    if p == 2:
        if n == 1:
            if m == 1:
                return CaseId.T10
            if m == 2:
                return CaseId.T12
            return CaseId.T11
        if m > n:
            return CaseId.T13  # then ell = n automatically
        # m = n > 1, which forces ell > m (u, v odd)
        if ell >= 2 * m:
            return CaseId.T14
        if ell == 2 * m - 1:
            return CaseId.T15
        if ell == 2 * m - 2 and m >= 3:
            return CaseId.T16
        if m < ell <= 2 * m - 3:
            if 2 * ell + 2 == 3 * m + 1:
                return CaseId.T17a if inv.s < (m - 3) / 2 else CaseId.T17b
            if 2 * ell + 2 > 3 * m + 1:
                return CaseId.T18
            return CaseId.T19
        raise InternalError("unreachable p = 2 branch: %r" % (inv,))

    if p == 3:
        alpha = params.beta if inv.swapped else params.alpha
        beta = params.alpha if inv.swapped else params.beta
        a7, b7 = alpha % 9 == 7, beta % 9 == 7
        if a7 and b7:
            return CaseId.T6 if (alpha - beta) % 27 == 0 else CaseId.T7
        if a7:
            # exactly one (normalized to alpha); n > 0 so beta = 1 mod 3
            return CaseId.T8 if beta % 9 == 4 else CaseId.T9

    # p > 3, or p = 3 with neither parameter = 7 mod 9
    if ell == n:
        return CaseId.T1
    # ell > n forces m = n
    if ell >= 2 * m:
        return CaseId.T2
    if 2 * ell < 3 * m:
        return CaseId.T3
    if 2 * ell > 3 * m:
        return CaseId.T4
    return CaseId.T5a if inv.s < m / 2 else CaseId.T5b


def _case_numbers(case: CaseId, inv: LocalInvariants) -> Tuple[int, int, int, int, int]:
    """(e, f, va, vb, vc) for the normalized generators."""
    m, n, ell, s = inv.m, inv.n, inv.ell, inv.s
    if case is CaseId.CYCLIC:
        return m, 1, m, 0, 0
    if case is CaseId.T1:
        return 4 * n + m, 3, m + n, 2 * n, n
    if case is CaseId.T2:
        return 7 * m, 5, 3 * m, 3 * m, 2 * m
    if case is CaseId.T3:
        return 2 * m + 3 * ell, 5, m + ell, m + ell, 2 * ell - m
    if case is CaseId.T4:
        return 5 * m + ell, 5, m + ell, m + ell, 2 * m
    if case in (CaseId.T5a, CaseId.T5b):
        q = min(s, m // 2)
        f = 5 if s == 0 else 6
        return (
            13 * m // 2 + q,
            f,
            5 * m // 2 + q,
            5 * m // 2 + q,
            2 * m + q,
        )
    if case is CaseId.T6:
        return 10, 7, 4, 4, 3
    if case is CaseId.T7:
        return 8, 5, 3, 3, 2
    if case is CaseId.T8:
        return 5, 3, 2, 2, 1
    if case is CaseId.T9:
        return n + 4, 3, 2, n + 1, 1
    if case is CaseId.T10:
        return 4, 3, 2, 2, 2
    if case is CaseId.T11:
        return m + 4, 3, m + 1, 2, 2
    if case is CaseId.T12:
        return 7, 4, 3, 2, 2
    if case is CaseId.T13:
        return m + 4 * n, 3, m + n, 2 * n, n + 1
    if case in (CaseId.T14, CaseId.T15):
        return 7 * m - 3, 5, 3 * m - 1, 3 * m - 1, 2 * m
    if case is CaseId.T16:
        return 7 * m - 3, 5, 3 * m - 1, 3 * m - 1, 2 * m - 1
    if case in (CaseId.T17a, CaseId.T17b):
        q = min(s, (m - 3) // 2)
        return (
            (13 * m - 3) // 2 + q,
            6,
            (5 * m + 1) // 2 + q,
            (5 * m + 1) // 2 + q,
            2 * m + q,
        )
    if case is CaseId.T18:
        return 5 * m + ell - 1, 5, ell + m + 1, ell + m + 1, 2 * m
    if case is CaseId.T19:
        return 2 * m + 3 * ell, 5, ell + m, ell + m, 2 * ell - m + 1
    raise InternalError("no formulas for %r" % (case,))


def predict(params: GroupParams, p: int) -> StructureReport:
    """Predicted invariants of G_p for the original generator order A, B."""
    inv = local_invariants(params, p)
    case = classify(inv, params)
    e, f, va, vb, vc = _case_numbers(case, inv)
    if inv.swapped:
        va, vb = vb, va  # o(C) is swap-invariant (C maps to its inverse)
    return StructureReport(p=p, e=e, f=f, vA=va, vB=vb, vC=vc, case=case)


def predict_all(params: GroupParams) -> List[StructureReport]:
    """One report per support prime, ordered by p."""
    return [predict(params, p) for p in prime_support(params)]


def total_order(reports: List[StructureReport]) -> int:
    """|G| as a big integer: the product of the Sylow orders."""
    t = 1
    for r in reports:
        t *= r.p**r.e
    return t


def is_cyclic(params: GroupParams) -> Tuple[bool, Optional[int]]:
    """G(alpha, beta) is cyclic iff epsilon = 1; then |G| = |(a-1)(b-1)|."""
    if params.epsilon == 1:
        return True, abs((params.alpha - 1) * (params.beta - 1))
    return False, None
