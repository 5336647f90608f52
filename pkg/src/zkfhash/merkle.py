"""Binary Merkle trees over ``compress2to1``.

Leaves are zero-padded up to a power of two, with at least two leaves, so a
single leaf ``a`` has root ``compress(a, 0)``. Only the original leaf count is
provable. A proof lists the sibling hashes from the leaf level upward, and
bit ``i`` of the index says whether the running node is a right child at
level ``i``.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import ConfigMismatch, EmptyLeaves, IndexOutOfRange, ParseError
from .field import FieldElement
from .params import HashParams, content_digest, to_dict
from .sponge import compress2to1

# below this many pairs a level is hashed in-process even when workers > 1
_PARALLEL_MIN_PAIRS = 64


@dataclass(frozen=True)
class MerkleProof:
    index: int
    siblings: tuple[FieldElement, ...]

    @property
    def depth(self) -> int:
        return len(self.siblings)

    def dumps(self) -> str:
        return "\n".join([str(self.index)] + [s.hex() for s in self.siblings]) + "\n"

    @classmethod
    def loads(cls, text: str, params: HashParams) -> "MerkleProof":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ParseError("empty proof")
        try:
            index = int(lines[0])
        except ValueError as exc:
            raise ParseError(f"proof index is not an integer: {lines[0]!r}") from exc
        if index < 0:
            raise ParseError("proof index is negative")
        return cls(index, tuple(params.field.from_hex(s) for s in lines[1:]))


@dataclass
class MerkleTree:
    params: HashParams
    leaf_count: int
    levels: list[list[FieldElement]]
    compressions: int = 0

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def root(self) -> FieldElement:
        return self.levels[-1][0]

    @property
    def leaves(self) -> list[FieldElement]:
        return self.levels[0][: self.leaf_count]

    def dumps(self) -> str:
        return json.dumps({
            "kind": self.params.kind,
            "params_digest": params_digest(self.params),
            "depth": self.depth,
            "leaf_count": self.leaf_count,
            "root": self.root.hex(),
            "leaves": [x.hex() for x in self.leaves],
        }, indent=1) + "\n"


def params_digest(params: HashParams) -> str:
    return params.digest or content_digest(to_dict(params))


def padded_size(n: int) -> int:
    size = 2
    while size < n:
        size *= 2
    return size


_worker_params: HashParams | None = None


def _init_worker(params: HashParams) -> None:
    global _worker_params
    _worker_params = params


def _hash_pairs(pairs: list[tuple[FieldElement, FieldElement]]) -> list[FieldElement]:
    return [compress2to1(_worker_params, a, b) for a, b in pairs]


def _level_up(level, params, pool, workers):
    pairs = [(level[i], level[i + 1]) for i in range(0, len(level), 2)]
    if pool is None or len(pairs) < _PARALLEL_MIN_PAIRS:
        return [compress2to1(params, a, b) for a, b in pairs]
    chunk = -(-len(pairs) // workers)
    parts = [pairs[i:i + chunk] for i in range(0, len(pairs), chunk)]
    return [h for part in pool.map(_hash_pairs, parts) for h in part]


def build(leaves: Sequence[FieldElement], params: HashParams, workers: int = 1) -> MerkleTree:
    if not leaves:
        raise EmptyLeaves("cannot build a tree over zero leaves")
    F = params.field
    if any(x.field != F for x in leaves):
        raise ConfigMismatch("leaf from a different field")
    level = list(leaves) + [F.zero] * (padded_size(len(leaves)) - len(leaves))
    levels = [level]
    compressions = 0
    pool = None
    if workers > 1 and len(level) // 2 >= _PARALLEL_MIN_PAIRS:
        pool = ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(params,))
    try:
        while len(level) > 1:
            level = _level_up(level, params, pool, workers)
            compressions += len(level)
            levels.append(level)
    finally:
        if pool is not None:
            pool.shutdown()
    return MerkleTree(params, len(leaves), levels, compressions)


def prove(tree: MerkleTree, index: int) -> MerkleProof:
    if not 0 <= index < tree.leaf_count:
        raise IndexOutOfRange(f"leaf index {index} outside [0, {tree.leaf_count})")
    siblings = []
    i = index
    for level in tree.levels[:-1]:
        siblings.append(level[i ^ 1])
        i >>= 1
    return MerkleProof(index, tuple(siblings))


def batch_prove(tree: MerkleTree, indices: Sequence[int]) -> list[MerkleProof]:
    return [prove(tree, i) for i in indices]


def verify(root: FieldElement, leaf: FieldElement, proof: MerkleProof, params: HashParams) -> bool:
    """Recompute the root from ``leaf`` and the proof, using ``depth`` compressions."""
    if proof.depth == 0 or proof.index >= 1 << proof.depth:
        return False
    node, i = leaf, proof.index
    for sib in proof.siblings:
        node = compress2to1(params, sib, node) if i & 1 else compress2to1(params, node, sib)
        i >>= 1
    return node == root


def load_tree(path, params: HashParams, workers: int = 1) -> MerkleTree:
    """Rebuild a tree from its file; the parameter digest must match."""
    try:
        body = json.loads(Path(path).read_text())
        kind, digest = body["kind"], body["params_digest"]
        leaves = [params.field.from_hex(x) for x in body["leaves"]]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ParseError(f"{path}: malformed tree file ({exc})") from exc
    if kind != params.kind or digest != params_digest(params):
        raise ConfigMismatch("tree was built with different parameters")
    tree = build(leaves, params, workers)
    if "root" in body and body["root"] != tree.root.hex():
        raise ConfigMismatch("stored root does not match the rebuilt tree")
    return tree
