"""Sponge hashing and 2-to-1 compression over any of the permutations.

Absorbing adds inputs into the rate part of the state, and the permutation
runs each time the rate fills. Padding adds a single one at the next free
rate position. That makes the padding ``1 || 0*``, so inputs differing only by
trailing zeros still hash differently. The domain tag sits in the first
capacity element:

    tag = kind_id * 2**64 + rate * 2**32 + out_len

``compress2to1(a, b)`` returns the first element of ``perm(a, b, tag)`` with
``tag = kind_id * 2**64``. Its rate and length fields are zero, so that tag can
never equal a sponge tag.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from . import griffin, rc, rescue
from .errors import KindMismatch, PhaseError, StateSizeUnsupported
from .field import FieldElement, PrimeField
from .params import HashParams

KIND_IDS = {"rescue_prime": 1, "griffin": 2, "reinforced_concrete": 3}

_PERMUTATIONS = {
    "rescue_prime": rescue.permute,
    "griffin": griffin.permute,
    "reinforced_concrete": rc.permute,
}

#: bytes packed into one element by ``pack_bytes`` (always below a 254-bit p)
PACK_BYTES = 31


def permutation(params: HashParams) -> Callable[[Sequence[FieldElement]], tuple]:
    perm = _PERMUTATIONS[params.kind]
    return lambda state: perm(state, params)


def permute(state: Sequence[FieldElement], params: HashParams) -> tuple[FieldElement, ...]:
    return _PERMUTATIONS[params.kind](state, params)


def domain_tag(kind: str, rate: int, out_len: int) -> int:
    if not (0 <= rate < 2**32 and 0 <= out_len < 2**32):
        raise ValueError("rate and out_len must fit in 32 bits")
    return (KIND_IDS[kind] << 64) | (rate << 32) | out_len


def node_tag(kind: str) -> int:
    return domain_tag(kind, 0, 0)


@dataclass(frozen=True)
class SpongeConfig:
    rate: int
    capacity: int
    domain_tag: int

    @classmethod
    def default(cls, params: HashParams, out_len: int = 1) -> "SpongeConfig":
        rate = params.m - 1
        return cls(rate, 1, domain_tag(params.kind, rate, out_len))

    def check(self, params: HashParams) -> None:
        if self.rate < 1 or self.capacity < 1:
            raise StateSizeUnsupported("rate and capacity must both be positive")
        if self.rate + self.capacity != params.m:
            raise StateSizeUnsupported(
                f"rate {self.rate} + capacity {self.capacity} != state size {params.m}")


class Sponge:
    """Incremental sponge; ``absorb`` is refused once squeezing has begun."""

    def __init__(self, params: HashParams, config: SpongeConfig | None = None):
        config = config or SpongeConfig.default(params)
        config.check(params)
        self.params = params
        self.config = config
        self._perm = _PERMUTATIONS[params.kind]
        F = params.field
        self.state = [F.zero] * params.m
        self.state[config.rate] = F(config.domain_tag)
        self.pos = 0
        self.squeezing = False
        self.permutations = 0

    def _permute(self):
        self.state = list(self._perm(self.state, self.params))
        self.permutations += 1
        self.pos = 0

    def absorb(self, inputs: Iterable[FieldElement]) -> None:
        if self.squeezing:
            raise PhaseError("cannot absorb after squeezing started")
        F = self.params.field
        for x in inputs:
            if not isinstance(x, FieldElement):
                x = F(x)
            elif x.field != F:
                raise KindMismatch("input element from a different field")
            self.state[self.pos] = self.state[self.pos] + x
            self.pos += 1
            if self.pos == self.config.rate:
                self._permute()

    def _finish_absorb(self):
        self.state[self.pos] = self.state[self.pos] + self.params.field.one
        self._permute()
        self.squeezing = True

    def squeeze(self, count: int = 1) -> list[FieldElement]:
        if not self.squeezing:
            self._finish_absorb()
        out = []
        while len(out) < count:
            if self.pos == self.config.rate:
                self._permute()
            out.append(self.state[self.pos])
            self.pos += 1
        return out


def hash_elements(params: HashParams, inputs: Sequence[FieldElement], out_len: int = 1,
                  config: SpongeConfig | None = None) -> list[FieldElement]:
    """One-shot sponge hash of a sequence of field elements."""
    if out_len < 1:
        raise ValueError("out_len must be at least 1")
    sponge = Sponge(params, config or SpongeConfig.default(params, out_len))
    sponge.absorb(inputs)
    return sponge.squeeze(out_len)


def compress2to1(params: HashParams, a: FieldElement, b: FieldElement) -> FieldElement:
    if params.m != 3:
        raise StateSizeUnsupported("2-to-1 compression needs state size 3")
    F = params.field
    return _PERMUTATIONS[params.kind]((a, b, F(node_tag(params.kind))), params)[0]


def pack_bytes(data: bytes, field: PrimeField) -> list[FieldElement]:
    """Injective byte packing: append 0x01, then read 31-byte little-endian chunks."""
    padded = bytes(data) + b"\x01"
    return [field(int.from_bytes(padded[i:i + PACK_BYTES], "little"))
            for i in range(0, len(padded), PACK_BYTES)]
