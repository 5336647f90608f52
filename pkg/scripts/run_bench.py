"""CPU comparison of the three permutations, plus optional worker scaling.

    python scripts/run_bench.py                     # latency table, CSV on stdout
    python scripts/run_bench.py --workers 1 2 4     # add a batch-hashing scaling sweep
    python scripts/run_bench.py --out results/      # also write bench.csv / bench.json
"""
import argparse
import sys
from pathlib import Path

from zkfhash import bench
from zkfhash.params import KINDS


def latency_table(args) -> list[bench.BenchReport]:
    reports = []
    for kind in KINDS:
        cfg = bench.BenchConfig(hash_kind=kind, batch_size=args.batch, num_batches=args.iters,
                                warmup_batches=1, measure_target="permutation", seed=args.seed)
        reports.append(bench.run(cfg))
    return reports


def scaling_sweep(args) -> list[bench.BenchReport]:
    return [
        bench.run(bench.BenchConfig(hash_kind="reinforced_concrete", batch_size=args.batch,
                                    num_batches=max(args.iters, 4 * w), warmup_batches=1, worker_count=w,
                                    measure_target="full_hash", seed=args.seed, min_segment_s=0.2))
        for w in args.workers
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--batch", type=int, default=13)
    ap.add_argument("--iters", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, nargs="*", default=[])
    ap.add_argument("--out", type=Path)
    args = ap.parse_args()

    reports = latency_table(args)
    rows = bench.compare(sorted(reports, key=lambda r: -r.amortized_latency_us))
    print(bench.to_csv(reports), end="")
    print("\nspeedup over the slowest:", file=sys.stderr)
    for row in rows:
        print(f"  {row['hash']:<22} {row['amortized_latency_us']:>12.1f} us  x{row['speedup']:.1f}",
              file=sys.stderr)
    print(f"  cpu: {reports[0].env['cpu_model']}", file=sys.stderr)

    scaling = scaling_sweep(args) if args.workers else []
    if scaling:
        base = scaling[0].throughput_kops
        print("\nbatch hashing throughput by worker count:", file=sys.stderr)
        for r in scaling:
            print(f"  workers={r.worker_count:<3} {r.throughput_kops:8.3f} kops/s  x{r.throughput_kops / base:.2f}",
                  file=sys.stderr)

    if args.out:
        args.out.mkdir(parents=True, exist_ok=True)
        (args.out / "bench.csv").write_text(bench.to_csv(reports + scaling))
        (args.out / "bench.json").write_text(bench.to_json(reports + scaling) + "\n")


if __name__ == "__main__":
    main()
