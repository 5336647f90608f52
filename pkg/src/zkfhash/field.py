"""Prime-field arithmetic in Montgomery form.

Elements are stored as ``x * R mod p`` with ``R = 2**(limb_bits * num_limbs)``;
conversion to the canonical residue only happens at the byte/hex/int
boundary. ``mont_mul`` is the production multiplier; ``mont_mul_cios`` is the
word-by-word variant it must agree with, and ``mul_reference`` is the naive
wide-product-then-remainder oracle.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

import sympy

from .errors import NonCanonicalEncoding, ParseError, ZeroInverse

BN254_SCALAR_MODULUS = (
    21888242871839275222246405745257275088548364400416034343698204186575808495617
)

#: byte width of every serialized element (little-endian bytes, big-endian hex)
ENCODED_BYTES = 32


@dataclass(frozen=True, eq=False)
class PrimeField:
    modulus: int
    limb_bits: int = 64

    def __post_init__(self):
        p = self.modulus
        if p < 3 or p % 2 == 0:
            raise ValueError(f"modulus must be an odd prime, got {p}")
        if p.bit_length() > 8 * ENCODED_BYTES:
            raise ValueError("modulus wider than the 32-byte encoding")
        if not sympy.isprime(p):
            raise ValueError(f"modulus {p} is not prime")

    # -- parameters -------------------------------------------------------

    @property
    def bit_length(self) -> int:
        return self.modulus.bit_length()

    @property
    def num_limbs(self) -> int:
        return -(-self.bit_length // self.limb_bits)

    @property
    def montgomery_radix_exponent(self) -> int:
        return self.limb_bits * self.num_limbs

    @cached_property
    def _mask(self) -> int:
        return (1 << self.montgomery_radix_exponent) - 1

    @cached_property
    def r_mod_p(self) -> int:
        return (1 << self.montgomery_radix_exponent) % self.modulus

    @cached_property
    def r_squared(self) -> int:
        return pow(self.r_mod_p, 2, self.modulus)

    @cached_property
    def neg_p_inverse(self) -> int:
        """-p^-1 mod 2**limb_bits (the single-word CIOS constant)."""
        w = 1 << self.limb_bits
        return (-pow(self.modulus, -1, w)) % w

    @cached_property
    def neg_p_inverse_full(self) -> int:
        """-p^-1 mod R, used by the one-shot reduction."""
        r = 1 << self.montgomery_radix_exponent
        return (-pow(self.modulus, -1, r)) % r

    # -- Montgomery kernels (work on ints and on numpy integer arrays) ------

    def redc(self, t):
        """t * R^-1 mod p for 0 <= t < p*R."""
        k = self.montgomery_radix_exponent
        m = ((t & self._mask) * self.neg_p_inverse_full) & self._mask
        u = (t + m * self.modulus) >> k
        return u - self.modulus * (u >= self.modulus)

    def mont_mul(self, a, b):
        return self.redc(a * b)

    def mont_add(self, a, b):
        s = a + b
        return s - self.modulus * (s >= self.modulus)

    def mont_sub(self, a, b):
        s = a - b
        return s + self.modulus * (s < 0)

    def mont_mul_cios(self, a: int, b: int) -> int:
        """Coarsely integrated operand scanning over ``num_limbs`` words."""
        w, n = self.limb_bits, self.num_limbs
        wmask = (1 << w) - 1
        p, n0 = self.modulus, self.neg_p_inverse
        t = 0
        for i in range(n):
            t += ((a >> (w * i)) & wmask) * b
            m = ((t & wmask) * n0) & wmask
            t = (t + m * p) >> w
        return t - p if t >= p else t

    def to_montgomery(self, x):
        return self.redc(x * self.r_squared)

    def from_montgomery(self, x):
        return self.redc(x)

    # -- element construction ----------------------------------------------

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, self.to_montgomery(int(value) % self.modulus))

    def _wrap(self, mont: int) -> "FieldElement":
        return FieldElement(self, mont)

    @cached_property
    def zero(self) -> "FieldElement":
        return self(0)

    @cached_property
    def one(self) -> "FieldElement":
        return self(1)

    def random(self, rng: random.Random | None = None) -> "FieldElement":
        rng = rng or random
        return self(rng.randrange(self.modulus))

    def from_bytes(self, data: bytes) -> "FieldElement":
        if len(data) != ENCODED_BYTES:
            raise NonCanonicalEncoding(f"expected {ENCODED_BYTES} bytes, got {len(data)}")
        x = int.from_bytes(data, "little")
        if x >= self.modulus:
            raise NonCanonicalEncoding("encoded integer is not below the modulus")
        return self(x)

    def from_hex(self, text: str) -> "FieldElement":
        """Parse the strict ``0x`` + 64 hex digit form."""
        text = text.strip()
        if not text.startswith("0x") or len(text) != 2 + 2 * ENCODED_BYTES:
            raise ParseError(f"field element must be 0x followed by {2 * ENCODED_BYTES} hex digits: {text!r}")
        try:
            x = int(text[2:], 16)
        except ValueError as exc:
            raise ParseError(f"invalid hex digits in {text!r}") from exc
        if x >= self.modulus:
            raise NonCanonicalEncoding(f"{text} is not below the modulus")
        return self(x)

    # -- oracle -------------------------------------------------------------

    def mul_reference(self, a: "FieldElement", b: "FieldElement") -> "FieldElement":
        return self((int(a) * int(b)) % self.modulus)

    def __repr__(self) -> str:
        return f"PrimeField({self.modulus})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(self.modulus)


class FieldElement:
    """Immutable residue mod p; ``int(x)`` yields the canonical value."""

    __slots__ = ("field", "mont")

    def __init__(self, field: PrimeField, mont: int):
        self.field = field
        self.mont = mont

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            return other.mont
        if isinstance(other, int):
            return self.field.to_montgomery(other % self.field.modulus)
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mont_add(self.mont, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mont_sub(self.mont, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mont_sub(b, self.mont))

    def __neg__(self):
        return FieldElement(self.field, (self.field.modulus - self.mont) if self.mont else 0)

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mont_mul(self.mont, b))

    __rmul__ = __mul__

    def square(self) -> "FieldElement":
        return FieldElement(self.field, self.field.mont_mul(self.mont, self.mont))

    def __pow__(self, exponent: int) -> "FieldElement":
        return FieldElement(self.field, pow_mont(self.field, self.mont, exponent))

    def inverse(self) -> "FieldElement":
        if self.mont == 0:
            raise ZeroInverse("zero has no multiplicative inverse")
        return self.field(pow(int(self), -1, self.field.modulus))

    def __truediv__(self, other):
        b = other if isinstance(other, FieldElement) else self.field(other)
        return self * b.inverse()

    def __int__(self) -> int:
        return self.field.from_montgomery(self.mont)

    __index__ = __int__

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.mont == other.mont and self.field == other.field
        if isinstance(other, int):
            return int(self) == other % self.field.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.field.modulus, self.mont))

    def __bool__(self):
        return self.mont != 0

    def to_bytes(self) -> bytes:
        return int(self).to_bytes(ENCODED_BYTES, "little")

    def hex(self) -> str:
        return f"0x{int(self):0{2 * ENCODED_BYTES}x}"

    def __repr__(self):
        return f"FieldElement({int(self)})"


def pow_mont(field: PrimeField, base: int, exponent: int) -> int:
    """Square-and-multiply on a Montgomery-form base, low bit first.

    Each iteration does one conditional multiply, one square and one shift.
    The reduction is inlined because this loop dominates Rescue and Griffin.
    """
    if exponent < 0:
        raise ValueError("negative exponent")
    p = field.modulus
    n_prime = field.neg_p_inverse_full
    mask = field._mask
    k = field.montgomery_radix_exponent
    result = field.r_mod_p
    while exponent:
        if exponent & 1:
            t = result * base
            t = (t + (((t & mask) * n_prime) & mask) * p) >> k
            result = t - p if t >= p else t
        t = base * base
        t = (t + (((t & mask) * n_prime) & mask) * p) >> k
        base = t - p if t >= p else t
        exponent >>= 1
    return result


BN254 = PrimeField(BN254_SCALAR_MODULUS)
