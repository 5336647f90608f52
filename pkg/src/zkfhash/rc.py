"""Reinforced Concrete permutation for state size 3.

Components:

* Concrete: ``M * x + c`` with the next unused constant row.
* Bricks: ``(x1^d, x2 * (x1^2 + a1*x1 + b1), x3 * (x2^2 + a2*x2 + b2))``.
* Bars: per element, split into mixed-radix digits, apply a lookup table to
  every digit and recombine.

The arithmetic needed by the permutation comes in three modes, each with its
own code path:

* multiply (``mode_mult``): Montgomery products for Concrete and Bricks.
* decompose (``decomp``): scaled-reciprocal division, see ``fastdiv``.
* compose (``comp``): Horner accumulation with deferred reduction.
"""
from __future__ import annotations

from typing import Sequence

from .errors import StateSizeUnsupported
from .fastdiv import divrem
from .field import FieldElement, pow_mont
from .params import HashParams
from .rescue import State, check_state, mds_mont, mds_mul


def _require_m3(state):
    if len(state) != 3:
        raise StateSizeUnsupported("Reinforced Concrete is implemented for m = 3 only")


def mode_mult(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def concrete(state: Sequence[FieldElement], round_index: int, params: HashParams) -> State:
    consts = params.round_constants[round_index]
    return tuple(
        sum((mode_mult(a, x) for a, x in zip(row, state)), params.field.zero) + c
        for row, c in zip(params.mds, consts)
    )


def bricks(state: Sequence[FieldElement], params: HashParams) -> State:
    _require_m3(state)
    rc = params.rc
    x1, x2, x3 = state
    return (
        x1 ** params.d,
        mode_mult(x2, x1 * x1 + rc.alpha1 * x1 + rc.beta1),
        mode_mult(x3, x2 * x2 + rc.alpha2 * x2 + rc.beta2),
    )


def decomp(x: FieldElement, params: HashParams) -> list[int]:
    """Mixed-radix digits of ``int(x)``, most significant first."""
    return _decomp_int(int(x), params.rc.bar.reciprocals)


def _decomp_int(x: int, reciprocals) -> list[int]:
    n = len(reciprocals)
    digits = [0] * n
    for i in range(n - 1, 0, -1):
        x, digits[i] = divrem(x, reciprocals[i])
    assert x < reciprocals[0].divisor, "leading digit exceeds its radix"
    digits[0] = x
    return digits


def sbox_digits(digits: Sequence[int], params: HashParams) -> list[int]:
    return [table[v] for table, v in zip(params.rc.bar.tables, digits)]


def comp(digits: Sequence[int], params: HashParams) -> FieldElement:
    return params.field(_comp_int(digits, params.rc.bar.radices, params.modulus))


def _comp_int(digits, radices, p: int) -> int:
    """Horner recombination. Reduction is skipped while the accumulator is
    narrower than two field widths and done once at the end."""
    limit = 1 << (2 * p.bit_length())
    acc = digits[0]
    for v, s in zip(digits[1:], radices[1:]):
        acc = acc * s + v
        if acc >= limit:
            acc %= p
    return acc % p


def comp_reduce_each(digits: Sequence[int], params: HashParams) -> FieldElement:
    """Horner recombination reducing after every step (cross-check path)."""
    p = params.modulus
    acc = digits[0] % p
    for v, s in zip(digits[1:], params.rc.bar.radices[1:]):
        acc = (acc * s + v) % p
    return params.field(acc)


def bar(x: FieldElement, params: HashParams) -> FieldElement:
    return comp(sbox_digits(decomp(x, params), params), params)


def bars(state: Sequence[FieldElement], params: HashParams) -> State:
    return tuple(bar(x, params) for x in state)


def _bars_mont(xs: list[int], params: HashParams) -> list[int]:
    F, p = params.field, params.modulus
    b = params.rc.bar
    tables, radices, recips = b.tables, b.radices, b.reciprocals
    out = []
    for x in xs:
        digits = _decomp_int(F.from_montgomery(x), recips)
        digits = [t[v] for t, v in zip(tables, digits)]
        out.append(F.to_montgomery(_comp_int(digits, radices, p)))
    return out


def permute(state: Sequence[FieldElement], params: HashParams) -> State:
    check_state(state, params, "reinforced_concrete")
    _require_m3(state)
    F, p, d = params.field, params.modulus, params.d
    rc = params.rc
    a1, b1, a2, b2 = rc.alpha1.mont, rc.beta1.mont, rc.alpha2.mont, rc.beta2.mont
    mds = mds_mont(params)
    consts = [[c.mont for c in row] for row in params.round_constants]
    mul = F.mont_mul

    xs = [x.mont for x in state]
    ci = 0
    for step in rc.schedule:
        if step == "concrete":
            xs = [(y + c) % p for y, c in zip(mds_mul(mds, xs, F), consts[ci])]
            ci += 1
        elif step == "bricks":
            x1, x2, x3 = xs
            q1 = (mul(x1, (x1 + a1) % p) + b1) % p
            q2 = (mul(x2, (x2 + a2) % p) + b2) % p
            xs = [pow_mont(F, x1, d), mul(x2, q1), mul(x3, q2)]
        else:
            xs = _bars_mont(xs, params)
    return tuple(FieldElement(F, x) for x in xs)
