"""Rescue-Prime permutation.

Each round: x -> x^d, affine step, x -> x^(1/d), affine step. A round's
constant row holds 2m values, the first m for the first affine step.
"""
from __future__ import annotations

from typing import Sequence

from .errors import KindMismatch, StateSizeUnsupported
from .field import FieldElement, pow_mont
from .params import HashParams

State = tuple[FieldElement, ...]


def check_state(state: Sequence[FieldElement], params: HashParams, kind: str) -> None:
    if params.kind != kind:
        raise KindMismatch(f"expected {kind} parameters, got {params.kind}")
    if len(state) != params.m:
        raise StateSizeUnsupported(f"state has {len(state)} elements, parameters need {params.m}")


def mds_mul(mds_mont, xs, field) -> list[int]:
    """Montgomery-form matrix-vector product, one reduction per row.

    The unreduced row sum stays below p*R as long as m*p < R; wider states
    fall back to reducing every product.
    """
    if len(xs) * field.modulus < (1 << field.montgomery_radix_exponent):
        return [field.redc(sum(a * x for a, x in zip(row, xs))) for row in mds_mont]
    p = field.modulus
    return [sum(field.redc(a * x) for a, x in zip(row, xs)) % p for row in mds_mont]


def mds_mont(params: HashParams) -> list[list[int]]:
    return [[x.mont for x in row] for row in params.mds]


def sbox_layer(state: Sequence[FieldElement], params: HashParams) -> State:
    return tuple(x ** params.d for x in state)


def inv_sbox_layer(state: Sequence[FieldElement], params: HashParams) -> State:
    return tuple(x ** params.d_inv for x in state)


def step_constants(params: HashParams, step: int) -> Sequence[FieldElement]:
    """Constants for affine step ``step`` (two steps per round)."""
    m = params.m
    row = params.round_constants[step // 2]
    return row[m:] if step % 2 else row[:m]


def linear_layer(state: Sequence[FieldElement], step: int, params: HashParams) -> State:
    consts = step_constants(params, step)
    return tuple(
        sum((a * x for a, x in zip(row, state)), params.field.zero) + c
        for row, c in zip(params.mds, consts)
    )


def permute(state: Sequence[FieldElement], params: HashParams) -> State:
    check_state(state, params, "rescue_prime")
    F, m, p = params.field, params.m, params.modulus
    d, d_inv = params.d, params.d_inv
    mds = mds_mont(params)
    consts = [[c.mont for c in row] for row in params.round_constants]
    xs = [x.mont for x in state]
    for row in consts:
        xs = [pow_mont(F, x, d) for x in xs]
        xs = [(y + c) % p for y, c in zip(mds_mul(mds, xs, F), row[:m])]
        xs = [pow_mont(F, x, d_inv) for x in xs]
        xs = [(y + c) % p for y, c in zip(mds_mul(mds, xs, F), row[m:])]
    return tuple(FieldElement(F, x) for x in xs)
