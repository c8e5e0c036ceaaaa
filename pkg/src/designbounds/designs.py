"""Incidence structures, parameter sets and axiom validators.

Blocks are kept twice: as sorted tuples (for output and iteration) and as
int bitmasks, so that intersection sizes are a single ``&`` plus a popcount.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

__all__ = [
    "IncidenceStructure",
    "BibdParams",
    "RLambdaParams",
    "OrthogonalArray",
    "BinaryCode",
    "Violation",
    "ValidationReport",
    "CodeStats",
    "BlockDeletion",
    "validate_bibd",
    "validate_oa",
    "validate_pbd",
    "validate_r_lambda",
    "constant_weight_stats",
    "delete_block",
    "intersection_profile",
]


def _mask(points) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


@dataclass(frozen=True)
class IncidenceStructure:
    """A point set ``range(num_points)`` and an ordered multiset of blocks."""

    num_points: int
    blocks: tuple[tuple[int, ...], ...]
    masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __init__(self, num_points: int, blocks):
        if num_points < 0:
            raise ValueError("num_points must be nonnegative")
        canon = []
        for i, blk in enumerate(blocks):
            blk = tuple(blk)
            pts = tuple(sorted(set(blk)))
            if len(pts) != len(blk):
                raise ValueError(f"block {i} repeats a point")
            if not pts:
                raise ValueError(f"block {i} is empty")
            if pts[0] < 0 or pts[-1] >= num_points:
                raise ValueError(f"block {i} has a point outside [0, {num_points})")
            canon.append(pts)
        object.__setattr__(self, "num_points", num_points)
        object.__setattr__(self, "blocks", tuple(canon))
        object.__setattr__(self, "masks", tuple(_mask(b) for b in canon))

    @classmethod
    def _trusted(cls, num_points: int, blocks: tuple, masks: tuple) -> IncidenceStructure:
        # internal: blocks already sorted, in range and nonempty
        obj = object.__new__(cls)
        object.__setattr__(obj, "num_points", num_points)
        object.__setattr__(obj, "blocks", blocks)
        object.__setattr__(obj, "masks", masks)
        return obj

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def block_sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def replication(self) -> list[int]:
        counts = [0] * self.num_points
        for blk in self.blocks:
            for p in blk:
                counts[p] += 1
        return counts

    def pair_counts(self) -> dict[tuple[int, int], int]:
        """Number of blocks through each pair ``x < y`` (pairs never covered are absent)."""
        counts: Counter = Counter()
        for blk in self.blocks:
            counts.update(combinations(blk, 2))
        return dict(counts)

    def pair_count(self, x: int, y: int) -> int:
        both = (1 << x) | (1 << y)
        return sum(1 for m in self.masks if m & both == both)

    def intersection_size(self, i: int, j: int) -> int:
        return (self.masks[i] & self.masks[j]).bit_count()

    def block_multiplicity(self) -> int:
        """Largest number of times any block is repeated."""
        if not self.blocks:
            return 0
        return max(Counter(self.blocks).values())

    def incidence_rows(self) -> list[tuple[int, ...]]:
        """0-1 incidence vectors of the blocks, one row per block."""
        return [tuple((m >> p) & 1 for p in range(self.num_points)) for m in self.masks]


@dataclass(frozen=True)
class BibdParams:
    v: int
    b: int
    r: int
    k: int
    lam: int

    def identity_violations(self) -> list[str]:
        out = []
        if min(self.v, self.b, self.r, self.k, self.lam) < 1:
            out.append("all parameters must be positive")
        if not 2 <= self.k <= self.v:
            out.append(f"need 2 <= k <= v, got k={self.k}, v={self.v}")
        if self.v * self.r != self.b * self.k:
            out.append(f"vr = {self.v * self.r} but bk = {self.b * self.k}")
        if self.lam * (self.v - 1) != self.r * (self.k - 1):
            out.append(
                f"lambda(v-1) = {self.lam * (self.v - 1)} but r(k-1) = {self.r * (self.k - 1)}"
            )
        return out

    def check(self) -> None:
        bad = self.identity_violations()
        if bad:
            raise ValueError("not admissible BIBD parameters: " + "; ".join(bad))


@dataclass(frozen=True)
class RLambdaParams:
    v: int
    b: int
    r: int
    lam: int


@dataclass(frozen=True)
class OrthogonalArray:
    k: int
    n: int
    lam: int
    rows: tuple[tuple[int, ...], ...]

    def __init__(self, k: int, n: int, lam: int, rows):
        if k < 2 or n < 2 or lam < 1:
            raise ValueError(f"need k >= 2, n >= 2, lambda >= 1; got k={k}, n={n}, lambda={lam}")
        rows = tuple(tuple(r) for r in rows)
        for i, row in enumerate(rows):
            if len(row) != k:
                raise ValueError(f"row {i} has {len(row)} entries, expected {k}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "rows", rows)


@dataclass(frozen=True)
class BinaryCode:
    n: int
    codewords: tuple[tuple[int, ...], ...]

    def __init__(self, n: int, codewords):
        words = tuple(tuple(int(x) for x in w) for w in codewords)
        for w in words:
            if len(w) != n:
                raise ValueError(f"codeword of length {len(w)} in a length-{n} code")
            if any(x not in (0, 1) for x in w):
                raise ValueError("codewords must be 0-1 vectors")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "codewords", words)


@dataclass(frozen=True)
class Violation:
    code: str
    message: str


@dataclass
class ValidationReport:
    family: str
    violations: list[Violation] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str) -> None:
        self.violations.append(Violation(code, message))

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}


def _check_pairs(inc: IncidenceStructure, lam: int, report: ValidationReport) -> None:
    counts = inc.pair_counts()
    for x, y in combinations(range(inc.num_points), 2):
        c = counts.get((x, y), 0)
        if c != lam:
            report.add("pair-count", f"pair ({x}, {y}) lies in {c} blocks, expected {lam}")


def _check_replication(inc: IncidenceStructure, r: int, report: ValidationReport) -> None:
    for p, c in enumerate(inc.replication()):
        if c != r:
            report.add("replication", f"point {p} lies in {c} blocks, expected {r}")


def validate_bibd(inc: IncidenceStructure, p: BibdParams) -> ValidationReport:
    report = ValidationReport("bibd")
    for msg in p.identity_violations():
        report.add("identity", msg)
    if inc.num_points != p.v:
        report.add("num-points", f"structure has {inc.num_points} points, expected v={p.v}")
    if inc.num_blocks != p.b:
        report.add("num-blocks", f"structure has {inc.num_blocks} blocks, expected b={p.b}")
    for i, blk in enumerate(inc.blocks):
        if len(blk) != p.k:
            report.add("block-size", f"block {i} has size {len(blk)}, expected k={p.k}")
    _check_replication(inc, p.r, report)
    _check_pairs(inc, p.lam, report)
    return report


def validate_pbd(inc: IncidenceStructure) -> ValidationReport:
    report = ValidationReport("pbd")
    for i, blk in enumerate(inc.blocks):
        if len(blk) < 2:
            report.add("block-size", f"block {i} has size {len(blk)}, PBD blocks need size >= 2")
    _check_pairs(inc, 1, report)
    return report


def validate_r_lambda(inc: IncidenceStructure, p: RLambdaParams) -> ValidationReport:
    report = ValidationReport("r-lambda")
    if inc.num_points != p.v:
        report.add("num-points", f"structure has {inc.num_points} points, expected v={p.v}")
    if inc.num_blocks != p.b:
        report.add("num-blocks", f"structure has {inc.num_blocks} blocks, expected b={p.b}")
    _check_replication(inc, p.r, report)
    _check_pairs(inc, p.lam, report)
    return report


def validate_oa(oa: OrthogonalArray) -> ValidationReport:
    expected_rows = oa.lam * oa.n * oa.n
    if len(oa.rows) != expected_rows:
        raise ValueError(f"OA has {len(oa.rows)} rows, expected lambda*n^2 = {expected_rows}")
    for i, row in enumerate(oa.rows):
        for s in row:
            if not 0 <= s < oa.n:
                raise ValueError(f"row {i} has symbol {s} outside [0, {oa.n})")
    report = ValidationReport("oa")
    for c1, c2 in combinations(range(oa.k), 2):
        counts = Counter((row[c1], row[c2]) for row in oa.rows)
        for x in range(oa.n):
            for y in range(oa.n):
                c = counts.get((x, y), 0)
                if c != oa.lam:
                    report.add(
                        "pair-count",
                        f"columns ({c1}, {c2}) contain ({x}, {y}) {c} times, expected {oa.lam}",
                    )
    return report


@dataclass(frozen=True)
class CodeStats:
    r: int
    min_distance: Optional[int]
    max_inner_product: Optional[int]


def constant_weight_stats(code: BinaryCode) -> CodeStats:
    """Common weight, minimum distance and maximum inner product of a code.

    Distance and inner product are ``None`` when the code has fewer than two
    words.  For constant-weight words ``dist = 2 * (r - inner)`` pair by pair.
    """
    if not code.codewords:
        raise ValueError("code has no codewords")
    weights = {sum(w) for w in code.codewords}
    if len(weights) != 1:
        raise ValueError(f"codewords have mixed weights {sorted(weights)}")
    (r,) = weights
    masks = [_mask(i for i, x in enumerate(w) if x) for w in code.codewords]
    min_d = max_ip = None
    for a, b in combinations(masks, 2):
        ip = (a & b).bit_count()
        d = (a ^ b).bit_count()
        assert d == 2 * (r - ip)
        if min_d is None or d < min_d:
            min_d = d
        if max_ip is None or ip > max_ip:
            max_ip = ip
    if min_d is not None:
        assert min_d == 2 * (r - max_ip)
    return CodeStats(r, min_d, max_ip)


@dataclass(frozen=True)
class BlockDeletion:
    structure: IncidenceStructure
    point_map: tuple[int, ...]  # new index -> original point
    dropped_empty: int


def delete_block(inc: IncidenceStructure, block_index: int) -> BlockDeletion:
    """Remove a block and all of its points from a PBD.

    Every other block loses the deleted block's points; blocks left empty are
    dropped and counted, blocks of size one are kept.  Surviving points are
    relabelled ``0..v-k-1`` in increasing original order.
    """
    if not 0 <= block_index < inc.num_blocks:
        raise IndexError(f"block index {block_index} out of range")
    if not validate_pbd(inc).valid:
        raise ValueError("delete_block needs a pairwise balanced design")
    gone = inc.masks[block_index]
    keep = [p for p in range(inc.num_points) if not (gone >> p) & 1]
    relabel = {p: i for i, p in enumerate(keep)}
    blocks = []
    dropped = 0
    for i, blk in enumerate(inc.blocks):
        if i == block_index:
            continue
        rest = [relabel[p] for p in blk if p in relabel]
        if rest:
            blocks.append(rest)
        else:
            dropped += 1
    return BlockDeletion(IncidenceStructure(len(keep), blocks), tuple(keep), dropped)


def intersection_profile(inc: IncidenceStructure, block_index: int) -> list[int]:
    if not 0 <= block_index < inc.num_blocks:
        raise IndexError(f"block index {block_index} out of range")
    target = inc.masks[block_index]
    return [(m & target).bit_count() for i, m in enumerate(inc.masks) if i != block_index]
