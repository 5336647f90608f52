"""Griffin permutation for state size 3.

The permutation opens with a bare MDS multiplication. Every round then applies
the nonlinear layer (y0 = x0^(1/d), y1 = x1^d, y2 = x2 * G(L)) and an affine
step. The last affine step adds no constants.
"""
from __future__ import annotations

from typing import Sequence

from .errors import StateSizeUnsupported
from .field import FieldElement, pow_mont
from .params import HashParams
from .rescue import State, check_state, mds_mont, mds_mul


def g_eval(z: FieldElement, y0: FieldElement, y1: FieldElement, params: HashParams) -> FieldElement:
    g = params.griffin
    lin = g.gamma * y0 + y1
    return z * (lin * lin + g.alpha * lin + g.beta)


def nonlinear_layer(state: Sequence[FieldElement], params: HashParams) -> State:
    if len(state) != 3:
        raise StateSizeUnsupported("Griffin is implemented for m = 3 only")
    x0, x1, x2 = state
    y0 = x0 ** params.d_inv
    y1 = x1 ** params.d
    return y0, y1, g_eval(x2, y0, y1, params)


def linear_layer(state: Sequence[FieldElement], round_index: int | None, params: HashParams) -> State:
    """M * state, plus the round's constants when it has any."""
    out = [sum((a * x for a, x in zip(row, state)), params.field.zero) for row in params.mds]
    if round_index is not None and round_index < len(params.round_constants):
        out = [y + c for y, c in zip(out, params.round_constants[round_index])]
    return tuple(out)


def permute(state: Sequence[FieldElement], params: HashParams) -> State:
    check_state(state, params, "griffin")
    if params.m != 3:
        raise StateSizeUnsupported("Griffin is implemented for m = 3 only")
    F, p = params.field, params.modulus
    d, d_inv = params.d, params.d_inv
    g = params.griffin
    alpha, beta, gamma = g.alpha.mont, g.beta.mont, g.gamma.mont
    mds = mds_mont(params)
    consts = [[c.mont for c in row] for row in params.round_constants]
    mul = F.mont_mul

    xs = mds_mul(mds, [x.mont for x in state], F)
    for r in range(params.rounds):
        x0, x1, x2 = xs
        y0 = pow_mont(F, x0, d_inv)
        assert pow_mont(F, y0, d) == x0, "inverse power map lane"
        y1 = pow_mont(F, x1, d)
        lin = (mul(gamma, y0) + y1) % p
        q = (mul(lin, (lin + alpha) % p) + beta) % p
        xs = mds_mul(mds, [y0, y1, mul(x2, q)], F)
        if r < len(consts):
            xs = [(y + c) % p for y, c in zip(xs, consts[r])]
    return tuple(FieldElement(F, x) for x in xs)
