"""p-adic valuation arithmetic and modular evaluation of the auxiliary
integers delta_a, gamma_a, lambda_a, mu_a.

The auxiliary integers grow like a**a and beyond, so they are never expanded;
everything is evaluated modulo a prime power via O(log count) doubling
identities for the geometric sum S(t) = 1 + a + ... + a**(t-1) and the
weighted sum W(t) = 1*a + 2*a**2 + ... + (t-1)*a**(t-1):

    S(2t) = S(t) * (1 + a**t)
    W(2t) = W(t) + a**t * (W(t) + t*S(t))
    W(2t+1) = W(2t) + 2t * a**(2t)

Residues are canonical representatives in [0, M).  A valuation read off a
residue mod p**N is only trusted when it is < N; a zero residue means
"at least N", never an exact value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

from .errors import DomainError, PrecisionError, ResourceError

__all__ = [
    "INFINITY",
    "PAdicSplit",
    "ModulusContext",
    "split",
    "geo_sum",
    "weighted_sum",
    "delta_mod",
    "gamma_mod",
    "mu_mod",
    "lambda_mod",
    "delta_exact",
    "epsilon",
    "residue_valuation",
    "valuation_with_retry",
]

#: Distinguished valuation of zero, ordered above every integer.
INFINITY = math.inf

LAMBDA_BOUND = 10**4


@dataclass(frozen=True)
class PAdicSplit:
    """x = p**valuation * unit with p not dividing unit; sign lives in unit.

    split(0, p) is the distinguished infinite-valuation result.
    """

    p: int
    valuation: Union[int, float]
    unit: int

    @property
    def infinite(self) -> bool:
        return self.valuation == INFINITY


@dataclass(frozen=True)
class ModulusContext:
    """A working modulus, always a prime power p**N in this library."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise DomainError("modulus must be at least 2")


def _modulus(ctx: Union[ModulusContext, int]) -> int:
    m = ctx.modulus if isinstance(ctx, ModulusContext) else int(ctx)
    if m < 2:
        raise DomainError("modulus must be at least 2")
    return m


def split(x: int, p: int) -> PAdicSplit:
    """Split x as p**v * u with p coprime to u.  split(0, p) has valuation
    INFINITY (used for the valuation of alpha - beta when alpha = beta)."""
    if p < 2:
        raise DomainError("p must be a prime (got %r)" % (p,))
    if x == 0:
        return PAdicSplit(p, INFINITY, 0)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return PAdicSplit(p, v, x)


def _bits(count: int):
    """Bits of count, most significant first; empty for count = 0."""
    return map(int, bin(count)[2:]) if count else iter(())


def geo_sum(a: int, count: int, ctx: Union[ModulusContext, int]) -> int:
    """Sum of a**i for 0 <= i < count, mod the context modulus."""
    if count < 0:
        raise DomainError("count must be non-negative")
    m = _modulus(ctx)
    s, pw = 0, 1  # S(t) and a**t for the prefix t of count's bits
    for bit in _bits(count):
        s = s * (1 + pw) % m
        pw = pw * pw % m
        if bit:
            s = (s + pw) % m
            pw = pw * a % m
    return s


def weighted_sum(a: int, count: int, ctx: Union[ModulusContext, int]) -> int:
    """Sum of i * a**i for 1 <= i < count, mod the context modulus."""
    if count < 0:
        raise DomainError("count must be non-negative")
    m = _modulus(ctx)
    w, s, pw, t = 0, 0, 1, 0  # W(t), S(t), a**t, t mod m
    for bit in _bits(count):
        w = (w + pw * (w + t * s)) % m
        s = s * (1 + pw) % m
        pw = pw * pw % m
        t = 2 * t % m
        if bit:
            w = (w + t * pw) % m
            s = (s + pw) % m
            pw = pw * a % m
            t = (t + 1) % m
    return w


def delta_mod(a: int, ctx: Union[ModulusContext, int]) -> int:
    """delta_a = (a-1) * (a + 2a**2 + ... + (a-1)a**(a-1)), mod the modulus."""
    if a <= 1:
        raise DomainError("delta_a is defined for a > 1")
    m = _modulus(ctx)
    return (a - 1) * weighted_sum(a, a, m) % m


def gamma_mod(a: int, ctx: Union[ModulusContext, int]) -> int:
    """gamma_a = a**a - (1 + a + ... + a**(a-1)), mod the modulus."""
    if a <= 1:
        raise DomainError("gamma_a is defined for a > 1")
    m = _modulus(ctx)
    return (pow(a, a, m) - geo_sum(a, a, m)) % m


def mu_mod(a: int, ctx: Union[ModulusContext, int]) -> int:
    """mu_a = a**(a**2+2) - a*(1 + a + ... + a**(a**2-1)), mod the modulus.

    By convention mu_a = 0 for a in {-1, 0, 1}.
    """
    m = _modulus(ctx)
    if a in (-1, 0, 1):
        return 0
    aa = a * a
    return (pow(a, aa + 2, m) - a * geo_sum(a, aa, m)) % m


def delta_exact(a: int) -> int:
    """delta_a as an exact integer (closed form, no O(a) loop)."""
    if a <= 1:
        raise DomainError("delta_a is defined for a > 1")
    n = a - 1
    # sum_{i=1}^{n} i*a**i = a*(n*a**(n+1) - (n+1)*a**n + 1) / (a-1)**2
    return a * (n * a ** (n + 1) - (n + 1) * a**n + 1) // (a - 1)


def lambda_mod(
    a: int, ctx: Union[ModulusContext, int], bound: int = LAMBDA_BOUND
) -> int:
    """lambda_a = (a-1) * (a + 2a**2 + ... + (delta_a - 1)a**(delta_a - 1)).

    Needs delta_a as an exact integer (about a*log2(a) bits), hence the bound
    on a; lambda only feeds optional relation checks.
    """
    if a <= 1:
        raise DomainError("lambda_a is defined for a > 1")
    if a > bound:
        raise ResourceError(
            "lambda_mod needs exact delta_%d (about %d bits); bound is %d"
            % (a, int(a * math.log2(a)) + 1, bound)
        )
    m = _modulus(ctx)
    return (a - 1) * weighted_sum(a, delta_exact(a), m) % m


def epsilon(alpha: int, beta: int) -> int:
    """gcd(|alpha - 1|, |beta - 1|)."""
    if alpha == 1 or beta == 1:
        raise DomainError("alpha and beta must differ from 1")
    return math.gcd(alpha - 1, beta - 1)


def residue_valuation(residue: int, p: int, precision: int) -> Optional[int]:
    """Valuation of a canonical residue mod p**precision.

    Returns None when the residue is 0, meaning "at least precision"; an
    exact value is only ever declared when it is provably below precision.
    """
    if not 0 <= residue < p**precision:
        raise DomainError("residue out of range for p**precision")
    if residue == 0:
        return None
    v = 0
    while residue % p == 0:
        residue //= p
        v += 1
    return v


def valuation_with_retry(
    fn: Callable[[ModulusContext], int],
    p: int,
    expected: int,
    max_doublings: int = 6,
) -> int:
    """v_p of the integer whose residue fn produces at a given modulus.

    Starts at precision expected + 4 and doubles until the valuation is
    readable; raises PrecisionError if the retries are exhausted (for
    example if the underlying integer is actually 0).
    """
    precision = expected + 4
    for _ in range(max_doublings):
        residue = fn(ModulusContext(p**precision))
        v = residue_valuation(residue, p, precision)
        if v is not None:
            return v
        precision *= 2
    raise PrecisionError(
        "valuation not readable at precision %d (p = %d)" % (precision, p)
    )
