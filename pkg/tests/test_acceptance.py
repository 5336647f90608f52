"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``. The status lines bypass
output capture, so they show up in the terminal and in tee'd logs.
"""
import os
import random
import time
from contextlib import contextmanager

import pytest

from conftest import load_kat
from oracles import exhaustive_field_check
from zkfhash import bench, merkle, rc, toy_params
from zkfhash.field import BN254, PrimeField
from zkfhash.params import KINDS
from zkfhash.sponge import Sponge, SpongeConfig, compress2to1, hash_elements, permute

P = BN254.modulus


@contextmanager
def criterion(capsys, number, title):
    """Yields a dict for detail notes; prints PASS, FAIL or XFAIL on exit."""
    notes = {}
    t0 = time.perf_counter()
    status = "FAIL"
    try:
        yield notes
        status = "PASS"
    except pytest.xfail.Exception:
        status = "XFAIL"
        raise
    except BaseException as exc:
        notes.setdefault("error", f"{type(exc).__name__}: {exc}"[:200])
        raise
    finally:
        detail = "; ".join(f"{k}={v}" for k, v in notes.items())
        with capsys.disabled():
            print(f"\n[criterion {number}] {status}: {title} ({time.perf_counter() - t0:.1f}s) {detail}")


def test_criterion_1_field_oracle(capsys):
    with criterion(capsys, 1, "field ops match the big-integer oracle") as notes:
        t0 = time.perf_counter()
        rng = random.Random(101)
        n_cases = 10**6
        for _ in range(n_cases):
            a, b = rng.randrange(P), rng.randrange(P)
            x, y = BN254(a), BN254(b)
            assert int(x * y) == a * b % P
            assert int(x + y) == (a + b) % P
            assert int(x - y) == (a - b) % P
        notes["mul_add_sub_cases"] = n_cases

        # a full-width exponentiation costs 200-450 us in pure Python, so pow gets a smaller share
        n_pow = 2 * 10**4
        for e in (0, 1, 2, P - 2, P - 1, P, 2**256 - 1):
            a = rng.randrange(P)
            assert int(BN254(a) ** e) == pow(a, e, P)
        for _ in range(n_pow):
            a, e = rng.randrange(P), rng.randrange(P)
            assert int(BN254(a) ** e) == pow(a, e, P)
        notes["pow_cases"] = n_pow

        pairs = exhaustive_field_check(PrimeField(32771, limb_bits=16))
        notes["toy_prime"] = 32771
        notes["toy_pairs"] = pairs
        elapsed = time.perf_counter() - t0
        notes["runtime_s"] = round(elapsed, 1)
        assert elapsed < 60


def test_criterion_2_power_map_inverse(capsys, rescue_params):
    with criterion(capsys, 2, "pow(pow(x, 5), d_inv) == x over BN254") as notes:
        rng = random.Random(202)
        d, d_inv = rescue_params.d, rescue_params.d_inv
        cases = [0, 1, P - 1] + [rng.randrange(P) for _ in range(10**4)]
        for a in cases:
            x = BN254(a)
            assert (x ** d) ** d_inv == x
        notes["cases"] = len(cases)


def _injective(fn, domain) -> int:
    images = set()
    for s in domain:
        images.add(fn(s))
    return len(domain) - len(images)


def test_criterion_3_toy_bijectivity(capsys):
    with criterion(capsys, 3, "exhaustive injectivity at toy scale") as notes:
        t0 = time.perf_counter()
        p = 37
        for kind in KINDS:
            params = toy_params(kind, p)
            F = params.field
            domain = [(F(a), F(b), F(c)) for a in range(p) for b in range(p) for c in range(p)]
            collisions = _injective(lambda s: tuple(int(v) for v in permute(s, params)), domain)
            notes[f"{kind}_collisions"] = collisions
            assert collisions == 0
        for q in (37, 1013):
            params = toy_params("reinforced_concrete", q)
            F = params.field
            images = [int(rc.bar(F(x), params)) for x in range(q)]
            assert sorted(images) == list(range(q))
        notes["bar_fields"] = "37,1013"
        notes["states_per_perm"] = p**3
        assert time.perf_counter() - t0 < 120


def test_criterion_4_decomp_comp_roundtrip(capsys, rc_params):
    with criterion(capsys, 4, "comp(decomp(x)) == x") as notes:
        rng = random.Random(404)
        n = 10**6
        F = rc_params.field
        for x in [0, 1, P - 1] + [rng.randrange(P) for _ in range(n)]:
            assert int(rc.comp(rc.decomp(F(x), rc_params), rc_params)) == x
        notes["bn254_cases"] = n
        for q in (37, 1013):
            toy = toy_params("reinforced_concrete", q)
            for x in range(q):
                assert int(rc.comp(rc.decomp(toy.field(x), toy), toy)) == x
        notes["toy_exhaustive"] = "37,1013"


def test_criterion_5_known_answers(capsys, shipped):
    with criterion(capsys, 5, "known-answer vectors match byte for byte") as notes:
        notes["source"] = "tools/kat_oracle (Rust, arkworks field)"
        for kind in KINDS:
            params = shipped[kind]
            kat = load_kat(kind)
            checked = 0
            for v in kat["permutation"]:
                out = permute(tuple(BN254.from_hex(h) for h in v["input"]), params)
                assert [x.to_bytes() for x in out] == [BN254.from_hex(h).to_bytes() for h in v["output"]]
                checked += 1
            for v in kat["sponge"]:
                digest = hash_elements(params, [BN254.from_hex(h) for h in v["input"]], v["out_len"])
                assert [x.hex() for x in digest] == v["digest"]
                checked += 1
            for v in kat["compress"]:
                out = compress2to1(params, BN254.from_hex(v["a"]), BN254.from_hex(v["b"]))
                assert out.hex() == v["output"]
                checked += 1
            notes[kind] = checked
            assert checked >= 100


def test_criterion_6_merkle(capsys, rc_params, monkeypatch):
    with criterion(capsys, 6, "2^16-leaf Merkle tree") as notes:
        t0 = time.perf_counter()
        rng = random.Random(606)
        n = 2**16
        leaves = [BN254(rng.randrange(P)) for _ in range(n)]

        calls = [0]
        real = merkle.compress2to1

        def counted(params, a, b):
            calls[0] += 1
            return real(params, a, b)

        monkeypatch.setattr(merkle, "compress2to1", counted)
        tree = merkle.build(leaves, rc_params)
        monkeypatch.setattr(merkle, "compress2to1", real)
        notes["build_compressions"] = calls[0]
        assert calls[0] == tree.compressions == n - 1

        honest = [rng.randrange(n) for _ in range(10**3)]
        for i in honest:
            assert merkle.verify(tree.root, leaves[i], merkle.prove(tree, i), rc_params)
        notes["honest_ok"] = len(honest)

        rejected = 0
        for _ in range(10**4):
            i = rng.randrange(n)
            proof = merkle.prove(tree, i)
            leaf, root, sibs = leaves[i], tree.root, list(proof.siblings)
            delta = BN254(rng.randrange(1, P))
            where = rng.randrange(proof.depth + 2)
            if where == proof.depth:
                leaf = leaf + delta
            elif where == proof.depth + 1:
                root = root + delta
            else:
                sibs[where] = sibs[where] + delta
            if not merkle.verify(root, leaf, merkle.MerkleProof(i, tuple(sibs)), rc_params):
                rejected += 1
        notes["tampered_rejected"] = f"{rejected}/10000"
        assert rejected == 10**4
        elapsed = time.perf_counter() - t0
        notes["runtime_s"] = round(elapsed, 1)
        assert elapsed < 300


def test_criterion_7_performance_ordering(capsys, shipped):
    with criterion(capsys, 7, "amortized latency RC < Griffin < Rescue-Prime") as notes:
        t0 = time.perf_counter()
        lat = {}
        for kind in KINDS:
            cfg = bench.BenchConfig(hash_kind=kind, batch_size=13, num_batches=4, warmup_batches=1, seed=7)
            lat[kind] = bench.run(cfg, shipped[kind]).amortized_latency_us
            notes[f"{kind}_us"] = round(lat[kind], 1)
        ratio = lat["rescue_prime"] / lat["reinforced_concrete"]
        notes["rescue_over_rc"] = round(ratio, 1)
        assert lat["reinforced_concrete"] < lat["griffin"] < lat["rescue_prime"]
        assert ratio >= 10
        assert time.perf_counter() - t0 < 300


def test_criterion_8_sponge_consistency(capsys, rc_params):
    with criterion(capsys, 8, "sponge split invariance and permutation counts") as notes:
        rng = random.Random(808)
        rate = SpongeConfig.default(rc_params).rate
        trials = 10**4
        for _ in range(trials):
            n = rng.randrange(0, 9)
            out_len = rng.randrange(1, rate + 1)
            xs = [BN254(rng.randrange(P)) for _ in range(n)]
            whole = Sponge(rc_params, SpongeConfig.default(rc_params, out_len))
            whole.absorb(xs)
            want = whole.squeeze(out_len)
            assert whole.permutations == -(-(n + 1) // rate)

            cuts = sorted(rng.randrange(n + 1) for _ in range(rng.randrange(1, 4)))
            split = Sponge(rc_params, SpongeConfig.default(rc_params, out_len))
            prev = 0
            for c in cuts + [n]:
                split.absorb(xs[prev:c])
                prev = c
            assert split.squeeze(out_len) == want
            assert split.permutations == whole.permutations
        notes["trials"] = trials


def test_criterion_9_parallel_scaling(capsys, rc_params):
    with criterion(capsys, 9, "4 workers give >= 2.5x the 1-worker throughput") as notes:
        cores = os.cpu_count() or 1
        notes["cores"] = cores
        kops = {}
        for w in (1, 4):
            cfg = bench.BenchConfig(hash_kind="reinforced_concrete", batch_size=13, num_batches=32,
                                    warmup_batches=1, worker_count=w, measure_target="full_hash",
                                    min_segment_s=0.2, seed=9)
            kops[w] = bench.run(cfg, rc_params).throughput_kops
        scaling = kops[4] / kops[1]
        notes["scaling"] = round(scaling, 2)
        if cores < 4:
            pytest.xfail(f"needs a machine with at least 4 cores, this one has {cores}")
        assert scaling >= 2.5
