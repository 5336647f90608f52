"""Throughput and latency measurement for the permutations.

All inputs are generated before the clock starts. Warm-up batches run first
and are never timed. Timed batches are split statically across worker
processes. If the timed segment is shorter than ``min_segment_s``, the batch
count doubles and the measurement repeats.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import platform
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .errors import MismatchedTargets
from .params import KINDS, HashParams, load_default
from .sponge import Sponge, SpongeConfig, compress2to1, permute

TARGETS = ("permutation", "full_hash", "merkle_build")


@dataclass(frozen=True)
class BenchConfig:
    hash_kind: str = "reinforced_concrete"
    batch_size: int = 13
    num_batches: int = 8
    warmup_batches: int = 1
    worker_count: int = 1
    measure_target: str = "permutation"
    seed: int = 0
    min_segment_s: float = 0.01
    max_batches: int = 1 << 16

    def __post_init__(self):
        if self.hash_kind not in KINDS:
            raise ValueError(f"unknown hash kind {self.hash_kind!r}")
        if self.measure_target not in TARGETS:
            raise ValueError(f"unknown measure target {self.measure_target!r}")
        if self.batch_size < 1 or self.num_batches < 1 or self.worker_count < 1:
            raise ValueError("batch_size, num_batches and worker_count must be positive")
        if not 0 <= self.warmup_batches:
            raise ValueError("warmup_batches must be non-negative")


@dataclass
class BenchReport:
    hash_kind: str
    measure_target: str
    batch_size: int
    num_batches: int
    worker_count: int
    operations: int
    permutations: int
    rounds_executed: int
    total_wall_time: float
    amortized_latency_us: float
    throughput_kops: float
    checksum: str
    seed: int
    env: dict = field(default_factory=dict)

    CSV_FIELDS = ("hash", "batch", "workers", "amortized_latency_us", "throughput_kops", "rounds")

    def row(self) -> dict:
        return {
            "hash": self.hash_kind,
            "batch": self.batch_size,
            "workers": self.worker_count,
            "amortized_latency_us": round(self.amortized_latency_us, 3),
            "throughput_kops": round(self.throughput_kops, 4),
            "rounds": self.rounds_executed,
        }


def cpu_model() -> str:
    try:
        with open("/proc/cpuinfo") as fh:
            for line in fh:
                if line.startswith("model name"):
                    return line.split(":", 1)[1].strip()
    except OSError:
        pass
    return platform.processor() or platform.machine()


def make_inputs(params: HashParams, config: BenchConfig, num_batches: int) -> list[list[tuple]]:
    rng = random.Random(f"bench/{config.hash_kind}/{config.seed}")
    F, m = params.field, params.m
    return [[tuple(F(rng.randrange(F.modulus)) for _ in range(m)) for _ in range(config.batch_size)]
            for _ in range(num_batches)]


def _run_batch(params: HashParams, target: str, batch) -> tuple[int, int, list]:
    """Returns (operations, permutations, outputs)."""
    if target == "permutation":
        outs = [permute(s, params) for s in batch]
        return len(batch), len(batch), [o[0] for o in outs]
    if target == "full_hash":
        outs, perms = [], 0
        rate = params.m - 1
        for s in batch:
            sp = Sponge(params, SpongeConfig.default(params, 1))
            sp.absorb(s[:rate])
            outs.append(sp.squeeze(1)[0])
            perms += sp.permutations
        return len(batch), perms, outs
    # merkle_build: each batch element contributes one leaf, one tree per batch
    level = [s[0] for s in batch]
    F = params.field
    size = 2
    while size < len(level):
        size *= 2
    level += [F.zero] * (size - len(level))
    n = 0
    while len(level) > 1:
        level = [compress2to1(params, level[i], level[i + 1]) for i in range(0, len(level), 2)]
        n += len(level)
    return n, n, level


def _run_batches(params: HashParams, target: str, batches) -> tuple[int, int, bytes]:
    ops = perms = 0
    h = hashlib.sha256()
    for batch in batches:
        o, p, outs = _run_batch(params, target, batch)
        ops += o
        perms += p
        for x in outs:
            h.update(x.to_bytes())
    return ops, perms, h.digest()


_worker_state: dict = {}


def _worker_init(params, target, warmup, timed):
    _worker_state.update(params=params, target=target, warmup=warmup, timed=timed)


def _worker_warmup(_):
    st = _worker_state
    _run_batches(st["params"], st["target"], st["warmup"])
    return os.getpid()


def _worker_timed(j: int):
    st = _worker_state
    return _run_batches(st["params"], st["target"], st["timed"][j])


def _measure(params, config, num_batches):
    batches = make_inputs(params, config, config.warmup_batches + num_batches)
    warmup, timed = batches[: config.warmup_batches], batches[config.warmup_batches:]
    W = config.worker_count
    if W == 1:
        _run_batches(params, config.measure_target, warmup)
        t0 = time.perf_counter()
        ops, perms, digest = _run_batches(params, config.measure_target, timed)
        wall = time.perf_counter() - t0
        return ops, perms, wall, [digest]
    parts = [timed[j::W] for j in range(W)]
    with ProcessPoolExecutor(W, initializer=_worker_init,
                             initargs=(params, config.measure_target, warmup, parts)) as pool:
        list(pool.map(_worker_warmup, range(W)))
        t0 = time.perf_counter()
        results = list(pool.map(_worker_timed, range(W)))
        wall = time.perf_counter() - t0
    return (sum(r[0] for r in results), sum(r[1] for r in results), wall, [r[2] for r in results])


def run(config: BenchConfig, params: HashParams | None = None) -> BenchReport:
    params = params or load_default(config.hash_kind)
    if params.kind != config.hash_kind:
        raise ValueError(f"config asks for {config.hash_kind}, parameters are {params.kind}")
    num_batches = config.num_batches
    while True:
        ops, perms, wall, digests = _measure(params, config, num_batches)
        if wall >= config.min_segment_s or num_batches >= config.max_batches:
            break
        num_batches *= 2
    latency_us = wall / ops * 1e6
    return BenchReport(
        hash_kind=config.hash_kind,
        measure_target=config.measure_target,
        batch_size=config.batch_size,
        num_batches=num_batches,
        worker_count=config.worker_count,
        operations=ops,
        permutations=perms,
        rounds_executed=perms * params.rounds_per_permutation,
        total_wall_time=wall,
        amortized_latency_us=latency_us,
        throughput_kops=1e3 / latency_us,
        checksum=hashlib.sha256(b"".join(digests)).hexdigest(),
        seed=config.seed,
        env={"cpu_model": cpu_model(), "cpu_count": os.cpu_count(), "worker_count": config.worker_count,
             "python": platform.python_version()},
    )


def compare(reports: Sequence[BenchReport]) -> list[dict]:
    """Rows with each report's speedup relative to the first one."""
    if not reports:
        return []
    targets = {r.measure_target for r in reports}
    if len(targets) > 1:
        raise MismatchedTargets(f"reports measure different targets: {sorted(targets)}")
    base = reports[0].amortized_latency_us
    return [dict(r.row(), speedup=base / r.amortized_latency_us) for r in reports]


def to_csv(reports: Sequence[BenchReport]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BenchReport.CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in reports:
        w.writerow(r.row())
    return buf.getvalue()


def to_json(reports: Sequence[BenchReport]) -> str:
    return json.dumps([r.row() for r in reports], indent=1)


def report_dict(report: BenchReport) -> dict:
    return asdict(report)
