"""Division by fixed small divisors through precomputed scaled reciprocals.

Quotients are estimated as ``(x * floor(2**k / s)) >> k``. For ``x < 2**(k/2)``
the estimate is at most one below the true quotient, so a short correction
loop makes the result exact.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DividendTooLarge, DivisorTooSmall, ScaleTooSmall

#: scale used for BN254 dividends (twice the 254-bit input width)
BN254_SCALE = 508

MAX_CORRECTIONS = 2


@dataclass(frozen=True)
class ReciprocalEntry:
    divisor: int
    scale_exponent: int
    scaled_reciprocal: int

    @property
    def max_dividend_bits(self) -> int:
        return self.scale_exponent // 2


def precompute(s: int, k: int = BN254_SCALE, dividend_bits: int | None = None) -> ReciprocalEntry:
    """Build the lookup entry for divisor ``s`` at scale ``2**k``.

    ``dividend_bits`` (default ``k // 2``) is the widest dividend the entry
    must serve; ``k`` has to be at least twice that.
    """
    if s < 2:
        raise DivisorTooSmall(f"divisor must be >= 2, got {s}")
    if dividend_bits is None:
        dividend_bits = k // 2
    if k < 2 * dividend_bits or k < 2 * s.bit_length():
        raise ScaleTooSmall(f"scale 2^{k} is below double the input width")
    return ReciprocalEntry(s, k, (1 << k) // s)


def divrem(x: int, entry: ReciprocalEntry) -> tuple[int, int]:
    if x >> entry.max_dividend_bits:
        raise DividendTooLarge(f"dividend exceeds {entry.max_dividend_bits} bits")
    s = entry.divisor
    q = (x * entry.scaled_reciprocal) >> entry.scale_exponent
    r = x - q * s
    steps = 0
    while r >= s:
        q += 1
        r -= s
        steps += 1
    assert steps <= MAX_CORRECTIONS, "reciprocal estimate drifted"
    return q, r


class ReciprocalTable(tuple):
    """Entries positionally aligned with a radix list."""

    @classmethod
    def build(cls, radices, k: int = BN254_SCALE) -> "ReciprocalTable":
        return cls(precompute(s, k) for s in radices)

    @property
    def divisors(self) -> list[int]:
        return [e.divisor for e in self]
