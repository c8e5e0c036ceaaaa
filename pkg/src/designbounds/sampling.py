"""Two-point sampling over an OA_1(k, p): exact and simulated failure rates.

The randomized algorithm is reduced to its set of bad seeds.  A row of the
array fails when every one of its k entries is bad.

Random rows are drawn with a counter-based SplitMix64 stream so that a given
``(seed, trials)`` pair reproduces bit-for-bit on any platform:

* trial ``i`` starts from state ``mix64((seed + (i + 1) * GAMMA) mod 2**64)``;
* each draw adds ``GAMMA`` to the state and returns ``mix64(state)``;
* a draw ``x`` is accepted when ``x < 2**64 - (2**64 mod R)`` for ``R`` rows,
  and the row is ``x mod R`` (rejection keeps rows exactly uniform).

``GAMMA = 0x9E3779B97F4A7C15`` and ``mix64`` is the SplitMix64 finalizer.
Trials are independent of each other, so any partition of the trial range
gives the same counts.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .bounds import two_point_error_bound
from .designs import OrthogonalArray, validate_oa
from .oracle import oa_linear

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, state: int):
        self.state = state & MASK64

    @classmethod
    def for_trial(cls, seed: int, index: int) -> SplitMix64:
        return cls(mix64(seed + (index + 1) * GAMMA))

    def next(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def below(self, bound: int) -> int:
        if bound < 1:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % bound)
        while True:
            x = self.next()
            if x < limit:
                return x % bound


class InvariantViolation(AssertionError):
    """Exact failure rate exceeded the proven bound (indicates a bug)."""


@dataclass(frozen=True)
class TwoPointInstance:
    p: int
    k: int
    bad_points: frozenset[int]

    def __init__(self, p: int, k: int, bad_points=()):
        bad = frozenset(bad_points)
        if p < 2:
            raise ValueError(f"alphabet size must be >= 2, got {p}")
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        if any(not 0 <= y < p for y in bad):
            raise ValueError(f"bad points must lie in [0, {p})")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "bad_points", bad)

    @property
    def good_count(self) -> int:
        return self.p - len(self.bad_points)

    @property
    def eps(self) -> Fraction:
        return Fraction(len(self.bad_points), self.p)


@dataclass
class SamplingReport:
    p: int
    k: int
    bad_points: tuple[int, ...]
    total_rows: int
    good_rows: int
    exact_failure: Fraction
    bound: Fraction
    good_row_bound: Fraction
    row_good_counts: dict[int, int] = field(default_factory=dict)
    empirical_failure: Optional[Fraction] = None
    trials: Optional[int] = None
    seed: Optional[int] = None


def good_row_lower_bound(inst: TwoPointInstance) -> Fraction:
    """Minimum number of rows containing a good point: ``n^2 k z / ((k-1) z + n)``."""
    n, k, z = inst.p, inst.k, inst.good_count
    return Fraction(n * n * k * z, (k - 1) * z + n)


def _array_for(inst: TwoPointInstance, oa: Optional[OrthogonalArray]) -> OrthogonalArray:
    if oa is None:
        return oa_linear(inst.p, inst.k)
    if oa.n != inst.p or oa.k != inst.k or oa.lam != 1:
        raise ValueError("array must be an OA_1(k, p) matching the instance")
    if not validate_oa(oa).valid:
        raise ValueError("supplied array is not an orthogonal array")
    return oa


def exact_failure(inst: TwoPointInstance, oa: Optional[OrthogonalArray] = None) -> SamplingReport:
    """Enumerate every row; uses the affine-linear array unless ``oa`` is given."""
    arr = _array_for(inst, oa)
    bad = inst.bad_points
    hist: Counter = Counter(sum(1 for x in row if x not in bad) for row in arr.rows)
    total = len(arr.rows)
    failing = hist.get(0, 0)
    rep = SamplingReport(
        p=inst.p,
        k=inst.k,
        bad_points=tuple(sorted(bad)),
        total_rows=total,
        good_rows=total - failing,
        exact_failure=Fraction(failing, total),
        bound=two_point_error_bound(inst.k, inst.eps),
        good_row_bound=good_row_lower_bound(inst),
        row_good_counts=dict(sorted(hist.items())),
    )
    if rep.exact_failure > rep.bound or rep.good_rows < rep.good_row_bound:
        raise InvariantViolation(
            f"failure {rep.exact_failure} vs bound {rep.bound}, "
            f"good rows {rep.good_rows} vs {rep.good_row_bound}"
        )
    return rep


def simulate(
    inst: TwoPointInstance, trials: int, seed: int, oa: Optional[OrthogonalArray] = None
) -> SamplingReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    arr = _array_for(inst, oa)
    rep = exact_failure(inst, arr)
    bad = inst.bad_points
    nrows = len(arr.rows)
    failing = 0
    for i in range(trials):
        row = arr.rows[SplitMix64.for_trial(seed, i).below(nrows)]
        if all(x in bad for x in row):
            failing += 1
    rep.empirical_failure = Fraction(failing, trials)
    rep.trials = trials
    rep.seed = seed
    return rep
