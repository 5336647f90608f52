import json
import math
from dataclasses import replace

import pytest
import sympy
from hypothesis import given, strategies as st

from zkfhash import params as pm
from zkfhash.errors import NonCanonicalEncoding, ParseError, ValidationError
from zkfhash.params import KINDS, mixed_radix_digits, search_radices, toy_params, validate


def test_shipped_sets_are_valid(shipped):
    for kind, p in shipped.items():
        assert p.kind == kind
        assert validate(p) == []
        assert p.digest.startswith("sha256:")
        assert p.m == 3 and p.d == 5


def test_round_function_counts(shipped):
    assert shipped["rescue_prime"].rounds_per_permutation == 14
    assert shipped["griffin"].rounds_per_permutation == 14
    rc = shipped["reinforced_concrete"]
    assert rc.rc.schedule.count("bars") == 1
    assert rc.rounds_per_permutation == 7
    assert len(rc.round_constants) == rc.rc.schedule.count("concrete") == 8


def test_rc_radices_cover_field(rc_params):
    bar = rc_params.rc.bar
    assert math.prod(bar.radices) > rc_params.modulus
    assert len(bar.radices) == 27
    digits = mixed_radix_digits(rc_params.modulus, bar.radices)
    # every digit of p is at or above the S-box domain, so tables fix them
    assert all(bar.tables[i][v] == v for i, v in enumerate(digits))


def test_dict_roundtrip(shipped, tmp_path):
    for p in shipped.values():
        body = pm.to_dict(p)
        assert body["digest"] == p.digest
        again = pm.from_dict(body)
        assert again == p
        path = tmp_path / f"{p.kind}.json"
        pm.save(again, path)
        assert pm.load(path) == p


def _write(tmp_path, body, name="p.json"):
    path = tmp_path / name
    path.write_text(json.dumps(body))
    return path


def test_digest_enforced(rescue_params, tmp_path):
    body = pm.to_dict(rescue_params)
    body["round_constants"][0][0] = "0x" + "0" * 63 + "1"
    with pytest.raises(ValidationError) as exc:
        pm.load(_write(tmp_path, body))
    assert exc.value.invariant == "digest"
    del body["digest"]
    with pytest.raises(ParseError):
        pm.load(_write(tmp_path, body))


def test_malformed_files(rescue_params, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        pm.load(bad)
    with pytest.raises(ParseError):
        pm.load(_write(tmp_path, [1, 2]))
    with pytest.raises(ParseError):
        pm.load(tmp_path / "missing.json")
    body = pm.to_dict(rescue_params)
    body["mds"][0][0] = "0x" + "f" * 64
    with pytest.raises(NonCanonicalEncoding):
        pm.from_dict(body, check_digest=False)
    body = pm.to_dict(rescue_params)
    del body["mds"]
    with pytest.raises(ParseError):
        pm.from_dict(body, check_digest=False)
    body = pm.to_dict(rescue_params)
    body["kind"] = "poseidon"
    with pytest.raises(ParseError):
        pm.from_dict(body, check_digest=False)


def test_load_reports_violations(rescue_params, tmp_path):
    path = tmp_path / "weak.json"
    pm.save(replace(rescue_params, d=3), path)
    with pytest.raises(ValidationError) as exc:
        pm.load(path)
    assert exc.value.invariant == "gcd"


def _fe(p, v):
    return p.field(v)


def test_validate_detects_each_invariant(shipped):
    resc, grif, rc = shipped["rescue_prime"], shipped["griffin"], shipped["reinforced_concrete"]
    F = resc.field
    assert "gcd" in validate(replace(resc, d=3))
    assert "d_inv" in validate(replace(resc, d_inv=resc.d_inv + 1))
    assert "state_size" in validate(replace(grif, m=4))
    assert "mds_shape" in validate(replace(resc, mds=resc.mds[:2]))
    singular = (resc.mds[0], resc.mds[0], resc.mds[2])
    assert "mds_invertible" in validate(replace(resc, mds=singular))
    # invertible but with a zero entry, so a 1x1 minor vanishes
    not_mds = ((F(1), F(0), F(0)), (F(0), F(1), F(0)), (F(0), F(0), F(1)))
    v = validate(replace(resc, mds=not_mds))
    assert "mds_property" in v and "mds_invertible" not in v
    assert "round_constants" in validate(replace(resc, round_constants=resc.round_constants[:-1]))
    assert "round_constants" in validate(replace(grif, round_constants=grif.round_constants + grif.round_constants[:1]))

    # alpha^2 - 4 beta = 0 is not a nonresidue
    g = replace(grif.griffin, alpha=F(2), beta=F(1))
    assert "griffin_nonresidue" in validate(replace(grif, griffin=g))
    assert "griffin_ext" in validate(replace(grif, griffin=None))
    assert "griffin_ext" in validate(replace(resc, griffin=grif.griffin))
    assert "rc_ext" in validate(replace(resc, rc=rc.rc))
    assert "rc_ext" in validate(replace(rc, rc=None))

    r = rc.rc
    assert "rc_nonresidue" in validate(replace(rc, rc=replace(r, alpha1=F(2), beta1=F(1))))
    assert "rc_schedule" in validate(replace(rc, rc=replace(r, schedule=r.schedule + ("bars",))))
    assert "rc_schedule" in validate(replace(rc, rc=replace(r, schedule=r.schedule + ("sideways",))))

    bar = r.bar
    s0 = bar.radices[0]
    broken = dict(bar.sboxes)
    broken[s0] = (0,) * s0
    assert "sbox_bijection" in validate(replace(rc, rc=replace(r, bar=replace(bar, sboxes=broken))))
    missing = {s: t for s, t in bar.sboxes.items() if s != s0}
    assert "sbox_coverage" in validate(replace(rc, rc=replace(r, bar=replace(bar, sboxes=missing))))
    short = replace(bar, radices=bar.radices[1:])
    assert "radix_coverage" in validate(replace(rc, rc=replace(r, bar=short)))
    assert "radix_range" in validate(replace(rc, rc=replace(r, bar=replace(bar, radices=(1,) + bar.radices))))

    # a table that moves a value >= the digit of p can push Bar outside [0, p)
    swapped = dict(bar.sboxes)
    t = list(swapped[s0])
    t[0], t[-1] = t[-1], t[0]
    swapped[s0] = tuple(t)
    assert validate(replace(rc, rc=replace(r, bar=replace(bar, sboxes=swapped)))) == ["bar_threshold"]


@pytest.mark.parametrize("modulus", [37, 1013])
@pytest.mark.parametrize("kind", KINDS)
def test_toy_sets_validate(kind, modulus):
    p = toy_params(kind, modulus)
    assert validate(p) == []
    assert p.field.modulus == modulus
    assert toy_params(kind, modulus) == p


def test_toy_rejects_bad_prime():
    with pytest.raises(ValueError):
        toy_params("griffin", 31)  # 5 divides 30


def test_mixed_radix_digits():
    assert mixed_radix_digits(123, [10, 10, 10]) == [1, 2, 3]
    assert mixed_radix_digits(0, [3, 5]) == [0, 0]
    assert mixed_radix_digits(14, [3, 5]) == [2, 4]


@given(st.integers(min_value=50, max_value=10**6).map(sympy.nextprime), st.integers(min_value=2, max_value=5))
def test_search_radices_property(p, v):
    radices = search_radices(p, v, s_max=4 * v + 8)
    if radices is None:
        return
    assert math.prod(radices) > p
    assert all(s > v for s in radices)
    assert all(digit >= v for digit in mixed_radix_digits(p, radices))
