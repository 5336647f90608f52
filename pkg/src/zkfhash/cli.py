"""Command-line front end.

Exit status: 0 on success, 1 when a proof or parameter file fails a check,
2 on usage, parse or configuration errors. Field elements are read and printed
as ``0x`` + 64 hex digits.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench, merkle, params as params_mod
from .errors import ValidationError, ZkfHashError
from .params import DEFAULT_FILES, KINDS
from .sponge import hash_elements, pack_bytes, permute


def _load_params(args):
    if args.params:
        return params_mod.load(args.params)
    return params_mod.load_default(args.hash)


def _read_text(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _read_elements(text: str, F) -> list:
    return [F.from_hex(tok) for tok in text.replace(",", " ").split()]


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_hash(args) -> int:
    p = _load_params(args)
    if args.bytes:
        data = sys.stdin.buffer.read() if args.input == "-" else Path(args.input).read_bytes()
        inputs = pack_bytes(data, p.field)
    else:
        inputs = _read_elements(_read_text(args.input), p.field)
    for x in hash_elements(p, inputs, args.out_len):
        print(x.hex())
    return 0


def cmd_permute(args) -> int:
    p = _load_params(args)
    text = args.state if args.state is not None else _read_text(args.input)
    for x in permute(_read_elements(text, p.field), p):
        print(x.hex())
    return 0


def cmd_merkle_build(args) -> int:
    p = _load_params(args)
    tree = merkle.build(_read_elements(_read_text(args.leaves), p.field), p, args.workers)
    if args.out:
        Path(args.out).write_text(tree.dumps())
    print(tree.root.hex())
    return 0


def cmd_merkle_prove(args) -> int:
    p = _load_params(args)
    tree = merkle.load_tree(args.tree, p, args.workers)
    _write(merkle.prove(tree, args.index).dumps(), args.out)
    return 0


def cmd_merkle_verify(args) -> int:
    p = _load_params(args)
    F = p.field
    proof = merkle.MerkleProof.loads(_read_text(args.proof), p)
    if merkle.verify(F.from_hex(args.root), F.from_hex(args.leaf), proof, p):
        print("ok")
        return 0
    print("verification failed", file=sys.stderr)
    return 1


def cmd_bench(args) -> int:
    reports = []
    for kind in args.hash_kinds or list(KINDS):
        cfg = bench.BenchConfig(
            hash_kind=kind,
            batch_size=args.batch,
            num_batches=args.iters,
            warmup_batches=args.warmup,
            worker_count=args.workers,
            measure_target=args.target,
            seed=args.seed,
        )
        p = params_mod.load(args.params) if args.params else None
        reports.append(bench.run(cfg, p))
    if args.format == "json":
        text = bench.to_json(reports) + "\n"
    else:
        text = bench.to_csv(reports)
    _write(text, args.out)
    return 0


def cmd_params_validate(args) -> int:
    try:
        p = params_mod.load(args.file)
    except ValidationError as exc:
        for name in exc.violations or [exc.invariant]:
            print(f"violated: {name}", file=sys.stderr)
        return 1
    print(f"ok {p.kind} {p.digest}")
    return 0


def cmd_params_show(args) -> int:
    p = params_mod.load(args.file)
    summary = {
        "kind": p.kind,
        "modulus": str(p.modulus),
        "m": p.m,
        "d": p.d,
        "rounds": p.rounds,
        "round_functions_per_permutation": p.rounds_per_permutation,
        "digest": p.digest,
    }
    if p.rc is not None:
        summary["radices"] = list(p.rc.bar.radices)
        summary["schedule"] = list(p.rc.schedule)
    print(json.dumps(summary, indent=1))
    return 0


def _add_params(sp, default_kind: str = "reinforced_concrete"):
    sp.add_argument("--params", help="parameter file, or the name of a shipped one "
                                     f"({', '.join(DEFAULT_FILES.values())})")
    sp.add_argument("--hash", choices=KINDS, default=default_kind,
                    help="use the shipped parameters for this kind when --params is absent")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="zkfhash", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("hash", help="sponge-hash field elements (hex, whitespace separated)")
    _add_params(sp)
    sp.add_argument("--input", default="-", help="input file, '-' for stdin")
    sp.add_argument("--out-len", type=int, default=1)
    sp.add_argument("--bytes", action="store_true", help="treat input as raw bytes (31 per element)")
    sp.set_defaults(func=cmd_hash)

    sp = sub.add_parser("permute", help="apply the permutation to one state")
    _add_params(sp)
    sp.add_argument("--state", help="comma or space separated hex elements")
    sp.add_argument("--input", default="-")
    sp.set_defaults(func=cmd_permute)

    mk = sub.add_parser("merkle", help="Merkle tree commands")
    msub = mk.add_subparsers(dest="merkle_command", required=True)
    sp = msub.add_parser("build")
    _add_params(sp)
    sp.add_argument("--leaves", required=True, help="file of hex leaves, '-' for stdin")
    sp.add_argument("--out", help="write the tree file here")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_merkle_build)
    sp = msub.add_parser("prove")
    _add_params(sp)
    sp.add_argument("--tree", required=True)
    sp.add_argument("--index", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_merkle_prove)
    sp = msub.add_parser("verify")
    _add_params(sp)
    sp.add_argument("--root", required=True)
    sp.add_argument("--leaf", required=True)
    sp.add_argument("--proof", required=True)
    sp.set_defaults(func=cmd_merkle_verify)

    sp = sub.add_parser("bench", help="measure latency and throughput")
    sp.add_argument("--hash", dest="hash_kinds", action="append", choices=KINDS,
                    help="repeat to benchmark several kinds (default: all)")
    sp.add_argument("--params", help="parameter file (only with a single --hash)")
    sp.add_argument("--target", choices=bench.TARGETS, default="permutation")
    sp.add_argument("--batch", type=int, default=13)
    sp.add_argument("--iters", type=int, default=8, help="timed batches before auto-scaling")
    sp.add_argument("--warmup", type=int, default=1)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_bench)

    pp = sub.add_parser("params", help="inspect parameter files")
    psub = pp.add_subparsers(dest="params_command", required=True)
    sp = psub.add_parser("validate")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_params_validate)
    sp = psub.add_parser("show")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_params_show)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "bench" and args.params and len(args.hash_kinds or []) != 1:
        print("error: --params needs exactly one --hash", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ZkfHashError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
