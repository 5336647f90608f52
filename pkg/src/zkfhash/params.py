"""Parameter sets for the three permutations: file format, validation, toys.

A parameter file is JSON. Field elements are ``0x`` + 64 hex digits
(big-endian); integers up to 2**53 are JSON numbers and wider ones are decimal
strings. ``digest`` is ``sha256:<hex>`` over the canonical dump of every other
key, and ``load`` refuses files whose digest does not match.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import math
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .errors import ParseError, ValidationError
from .fastdiv import ReciprocalTable
from .field import FieldElement, PrimeField

KINDS = ("rescue_prime", "griffin", "reinforced_concrete")
RC_COMPONENTS = ("concrete", "bricks", "bars")
DEFAULT_FILES = {
    "rescue_prime": "rescue_bn254.json",
    "griffin": "griffin_bn254.json",
    "reinforced_concrete": "rc_bn254.json",
}
TOY_PRIME = 1013

_JSON_INT_MAX = 2**53


@dataclass(frozen=True)
class GriffinParams:
    alpha: FieldElement
    beta: FieldElement
    # coefficient of y0 in the linear form L = gamma*y0 + y1
    gamma: FieldElement


@dataclass(frozen=True)
class RcBarParams:
    radices: tuple[int, ...]
    sboxes: Mapping[int, tuple[int, ...]]
    reciprocals: ReciprocalTable

    @property
    def tables(self) -> tuple[tuple[int, ...], ...]:
        """S-box table for each digit position."""
        return tuple(self.sboxes[s] for s in self.radices)


@dataclass(frozen=True)
class RcParams:
    alpha1: FieldElement
    beta1: FieldElement
    alpha2: FieldElement
    beta2: FieldElement
    schedule: tuple[str, ...]
    bar: RcBarParams


@dataclass(frozen=True)
class HashParams:
    kind: str
    field: PrimeField
    m: int
    d: int
    d_inv: int
    rounds: int
    mds: tuple[tuple[FieldElement, ...], ...]
    round_constants: tuple[tuple[FieldElement, ...], ...]
    griffin: GriffinParams | None = None
    rc: RcParams | None = None
    digest: str | None = field(default=None, compare=False)

    @property
    def modulus(self) -> int:
        return self.field.modulus

    @property
    def rounds_per_permutation(self) -> int:
        """Round functions one permutation executes (RC counts Bricks and Bars)."""
        if self.kind == "reinforced_concrete":
            return sum(1 for c in self.rc.schedule if c != "concrete")
        return self.rounds


# -- serialization ----------------------------------------------------------


def _enc_int(n: int):
    return n if abs(n) <= _JSON_INT_MAX else str(n)


def _dec_int(v, name: str) -> int:
    if isinstance(v, bool):
        raise ParseError(f"{name}: expected integer")
    if isinstance(v, int):
        return v
    if isinstance(v, str) and v.lstrip("-").isdigit():
        return int(v)
    raise ParseError(f"{name}: expected integer or decimal string, got {v!r}")


def _dec_fe(F: PrimeField, v, name: str) -> FieldElement:
    if not isinstance(v, str):
        raise ParseError(f"{name}: expected hex string, got {v!r}")
    return F.from_hex(v)


def to_dict(params: HashParams) -> dict:
    body = {
        "kind": params.kind,
        "field": {"modulus": _enc_int(params.modulus)},
        "m": params.m,
        "d": params.d,
        "d_inv": _enc_int(params.d_inv),
        "rounds": params.rounds,
        "mds": [[x.hex() for x in row] for row in params.mds],
        "round_constants": [[x.hex() for x in row] for row in params.round_constants],
    }
    if params.griffin is not None:
        g = params.griffin
        body["griffin"] = {"alpha": g.alpha.hex(), "beta": g.beta.hex(), "gamma": g.gamma.hex()}
    if params.rc is not None:
        rc = params.rc
        body["rc"] = {
            "schedule": list(rc.schedule),
            "alpha1": rc.alpha1.hex(),
            "beta1": rc.beta1.hex(),
            "alpha2": rc.alpha2.hex(),
            "beta2": rc.beta2.hex(),
            "bar": {
                "radices": list(rc.bar.radices),
                "sboxes": {str(s): list(t) for s, t in sorted(rc.bar.sboxes.items())},
            },
        }
    body["digest"] = content_digest(body)
    return body


def content_digest(body: dict) -> str:
    canonical = {k: v for k, v in body.items() if k != "digest"}
    blob = json.dumps(canonical, sort_keys=True, separators=(",", ":")).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def from_dict(body: dict, check_digest: bool = True) -> HashParams:
    try:
        kind = body["kind"]
        if kind not in KINDS:
            raise ParseError(f"unknown kind {kind!r}")
        F = PrimeField(_dec_int(body["field"]["modulus"], "field.modulus"))
        m = _dec_int(body["m"], "m")
        mds = tuple(tuple(_dec_fe(F, x, "mds") for x in row) for row in body["mds"])
        rcs = tuple(tuple(_dec_fe(F, x, "round_constants") for x in row) for row in body["round_constants"])
        griffin = None
        if "griffin" in body:
            g = body["griffin"]
            gamma = _dec_fe(F, g["gamma"], "griffin.gamma") if "gamma" in g else F.one
            griffin = GriffinParams(_dec_fe(F, g["alpha"], "griffin.alpha"), _dec_fe(F, g["beta"], "griffin.beta"), gamma)
        rc = None
        if "rc" in body:
            r = body["rc"]
            radices = tuple(_dec_int(s, "rc.bar.radices") for s in r["bar"]["radices"])
            sboxes = {
                _dec_int(s, "rc.bar.sboxes"): tuple(_dec_int(v, "rc.bar.sboxes") for v in table)
                for s, table in r["bar"]["sboxes"].items()
            }
            k = 2 * F.bit_length
            rc = RcParams(
                alpha1=_dec_fe(F, r["alpha1"], "rc.alpha1"),
                beta1=_dec_fe(F, r["beta1"], "rc.beta1"),
                alpha2=_dec_fe(F, r["alpha2"], "rc.alpha2"),
                beta2=_dec_fe(F, r["beta2"], "rc.beta2"),
                schedule=tuple(r["schedule"]),
                bar=RcBarParams(radices, dict(sboxes), ReciprocalTable.build(radices, k)),
            )
        params = HashParams(
            kind=kind,
            field=F,
            m=m,
            d=_dec_int(body["d"], "d"),
            d_inv=_dec_int(body["d_inv"], "d_inv"),
            rounds=_dec_int(body["rounds"], "rounds"),
            mds=mds,
            round_constants=rcs,
            griffin=griffin,
            rc=rc,
            digest=body.get("digest"),
        )
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from exc
    except (TypeError, AttributeError) as exc:
        raise ParseError(f"malformed parameter file: {exc}") from exc
    if check_digest:
        if "digest" not in body:
            raise ParseError("missing key 'digest'")
        if content_digest(body) != body["digest"]:
            raise ValidationError("digest")
    return params


def load(path) -> HashParams:
    """Read, parse and fully validate a parameter file."""
    path = resolve(path)
    try:
        body = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if not isinstance(body, dict):
        raise ParseError(f"{path}: top level must be an object")
    params = from_dict(body)
    violations = validate(params)
    if violations:
        raise ValidationError(violations[0], violations)
    return params


def save(params: HashParams, path) -> None:
    Path(path).write_text(json.dumps(to_dict(params), indent=1) + "\n")


def resolve(path) -> Path:
    """Accept a filesystem path or the bare name of a shipped parameter file."""
    p = Path(path)
    if p.exists():
        return p
    shipped = resources.files("zkfhash") / "data" / p.name
    if shipped.is_file():
        return Path(str(shipped))
    raise ParseError(f"parameter file not found: {path}")


def load_default(kind: str) -> HashParams:
    if kind not in DEFAULT_FILES:
        raise ParseError(f"unknown kind {kind!r}")
    return load(DEFAULT_FILES[kind])


# -- validation ---------------------------------------------------------------


def _det(rows: list[list[int]], p: int) -> int:
    n = len(rows)
    if n == 1:
        return rows[0][0] % p
    return sum(
        (-1) ** j * rows[0][j] * _det([r[:j] + r[j + 1:] for r in rows[1:]], p) for j in range(n)
    ) % p


def is_quadratic_nonresidue(x: FieldElement) -> bool:
    p = x.field.modulus
    return pow(int(x), (p - 1) // 2, p) == p - 1


def mixed_radix_digits(x: int, radices: Sequence[int]) -> list[int]:
    """Digits most-significant first; plain divmod, used only for checks."""
    digits = []
    for s in reversed(radices[1:]):
        x, r = divmod(x, s)
        digits.append(r)
    digits.append(x)
    return digits[::-1]


def _round_constant_shape(params: HashParams) -> tuple[int, int]:
    m = params.m
    if params.kind == "rescue_prime":
        return params.rounds, 2 * m
    if params.kind == "griffin":
        # the final linear layer carries no constants
        return params.rounds - 1, m
    return sum(1 for c in params.rc.schedule if c == "concrete"), m


def validate(params: HashParams) -> list[str]:
    """Names of violated invariants, empty when the set is usable."""
    out: list[str] = []
    F, p, m = params.field, params.modulus, params.m

    if m < 2 or (params.kind != "rescue_prime" and m != 3):
        out.append("state_size")
    if math.gcd(params.d, p - 1) != 1:
        out.append("gcd")
    elif (params.d * params.d_inv) % (p - 1) != 1:
        out.append("d_inv")

    mds = [[int(x) for x in row] for row in params.mds]
    if len(mds) != m or any(len(r) != m for r in mds):
        out.append("mds_shape")
    elif _det(mds, p) == 0:
        out.append("mds_invertible")
    else:
        for size in range(1, m):
            for rows in itertools.combinations(range(m), size):
                for cols in itertools.combinations(range(m), size):
                    if _det([[mds[i][j] for j in cols] for i in rows], p) == 0:
                        out.append("mds_property")
                        break
                else:
                    continue
                break
            if "mds_property" in out:
                break

    if params.kind == "griffin":
        g = params.griffin
        if g is None:
            out.append("griffin_ext")
        elif not is_quadratic_nonresidue(g.alpha * g.alpha - 4 * g.beta):
            out.append("griffin_nonresidue")
    elif params.griffin is not None:
        out.append("griffin_ext")

    if params.kind == "reinforced_concrete":
        if params.rc is None:
            out.append("rc_ext")
            return out
        out.extend(_validate_rc(params))
    elif params.rc is not None:
        out.append("rc_ext")

    n_rows, width = _round_constant_shape(params)
    rcs = params.round_constants
    if len(rcs) != n_rows or any(len(r) != width for r in rcs):
        out.append("round_constants")
    return out


def _validate_rc(params: HashParams) -> list[str]:
    out = []
    rc, p = params.rc, params.modulus
    if any(c not in RC_COMPONENTS for c in rc.schedule) or rc.schedule.count("bars") != 1:
        out.append("rc_schedule")
    if not (is_quadratic_nonresidue(rc.alpha1 * rc.alpha1 - 4 * rc.beta1)
            and is_quadratic_nonresidue(rc.alpha2 * rc.alpha2 - 4 * rc.beta2)):
        out.append("rc_nonresidue")

    bar = rc.bar
    radices = bar.radices
    if not radices or any(s < 2 for s in radices):
        out.append("radix_range")
        return out
    if any(s not in bar.sboxes or len(bar.sboxes[s]) != s for s in set(radices)):
        out.append("sbox_coverage")
        return out
    if any(sorted(t) != list(range(s)) for s, t in bar.sboxes.items()):
        out.append("sbox_bijection")
    if math.prod(radices) <= p:
        out.append("radix_coverage")
    elif "sbox_bijection" not in out:
        # Bar keeps [0, p) closed when each position's table maps [0, p_i)
        # into itself and fixes p_i, where p_i are the digits of p.
        for p_i, s in zip(mixed_radix_digits(p, radices), radices):
            t = bar.sboxes[s]
            if t[p_i] != p_i or any(t[x] >= p_i for x in range(p_i)):
                out.append("bar_threshold")
                break
    return out


# -- toy parameter sets -----------------------------------------------------------


def _cauchy(F: PrimeField, m: int):
    return tuple(tuple(F(1) / F(i + m + j) for j in range(m)) for i in range(m))


def _circ_211(F: PrimeField):
    return tuple(tuple(F(2 if i == j else 1) for j in range(3)) for i in range(3))


def _nonresidue_pair(F: PrimeField, rng: random.Random):
    while True:
        a, b = F(rng.randrange(1, F.modulus)), F(rng.randrange(1, F.modulus))
        if a != b and is_quadratic_nonresidue(a * a - 4 * b):
            return a, b


def search_radices(p: int, v: int, s_max: int) -> list[int] | None:
    """Radices in (v, s_max] under which every digit of p is at least v.

    Digits are fixed from the least significant end, each time taking the
    smallest radix that leaves a remainder >= v; the leading radix is then
    one more than the leftover quotient.
    """
    cur, radices = p, []
    while cur >= s_max:
        for s in range(v + 1, s_max + 1):
            if cur % s >= v:
                radices.append(s)
                cur //= s
                break
        else:
            return None
    if cur < v:
        return None
    radices.append(max(cur + 1, v + 1))
    return radices[::-1]


def default_schedule(pre_rounds: int = 3) -> tuple[str, ...]:
    half = ("bricks", "concrete") * pre_rounds
    return ("concrete",) + half + ("bars", "concrete") + half


def toy_params(kind: str, modulus: int = TOY_PRIME, m: int = 3, rounds: int | None = None,
               zero_constants: bool = False) -> HashParams:
    """Small-prime parameter set for exhaustive checks (seeded, reproducible)."""
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}")
    F = PrimeField(modulus, limb_bits=16)
    p = modulus
    d = 5
    if math.gcd(d, p - 1) != 1:
        raise ValueError(f"x^5 is not a permutation of F_{p}")
    rng = random.Random(f"toy/{kind}/{p}/{m}")

    def consts(n_rows, width):
        return tuple(
            tuple(F.zero if zero_constants else F(rng.randrange(p)) for _ in range(width))
            for _ in range(n_rows)
        )

    common = dict(kind=kind, field=F, m=m, d=d, d_inv=pow(d, -1, p - 1))
    if kind == "rescue_prime":
        r = rounds or 3
        return HashParams(rounds=r, mds=_cauchy(F, m), round_constants=consts(r, 2 * m), **common)
    if kind == "griffin":
        r = rounds or 4
        alpha, beta = _nonresidue_pair(F, rng)
        if zero_constants:
            beta = F.zero
        return HashParams(rounds=r, mds=_circ_211(F), round_constants=consts(r - 1, m),
                          griffin=GriffinParams(alpha, beta, F.one), **common)

    schedule = default_schedule()
    a1, b1 = _nonresidue_pair(F, rng)
    a2, b2 = _nonresidue_pair(F, rng)
    v, s_max, radices = 2, 8, None
    while radices is None:
        radices = search_radices(p, v, s_max)
        v, s_max = (v, s_max + 1) if radices is None else (v, s_max)
    sboxes = {}
    small = list(range(v))
    rng.shuffle(small)
    for s in set(radices):
        sboxes[s] = tuple(small) + tuple(range(v, s))
    bar = RcBarParams(tuple(radices), dict(sboxes),
                      ReciprocalTable.build(radices, 2 * F.bit_length))
    n_concrete = schedule.count("concrete")
    return HashParams(rounds=schedule.count("bricks") + 1, mds=_circ_211(F),
                      round_constants=consts(n_concrete, m),
                      rc=RcParams(a1, b1, a2, b2, schedule, bar), **common)
