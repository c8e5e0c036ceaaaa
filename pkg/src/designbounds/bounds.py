"""Exact evaluation of the classical variance-method bounds.

Each bound returns a :class:`BoundReport`.  Lower bounds on a count use
``relation=">="`` and upper bounds ``"<="``; ``slack`` is always oriented so
that a nonnegative value means the bound holds.

Several bounds describe an object whose size the caller may not know (e.g.
how many blocks a hypothetical PBD has).  When that size is omitted the
report's ``lhs`` is the extremal integer the bound still allows: the ceiling
of a lower bound or the floor of an upper bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .designs import BibdParams
from .moments import (
    LowerBoundContext,
    ShiftContext,
    as_rational,
    lower_bound_slack,
)


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ValueError(msg)


@dataclass
class BoundReport:
    name: str
    lhs: Optional[Fraction]
    rhs: Optional[Fraction]
    relation: str
    notes: list[str] = field(default_factory=list)
    applicable: bool = True

    def __post_init__(self):
        if self.relation not in (">=", "<="):
            raise ValueError(f"bad relation {self.relation!r}")
        if self.lhs is not None:
            self.lhs = as_rational(self.lhs)
        if self.rhs is not None:
            self.rhs = as_rational(self.rhs)

    @property
    def slack(self) -> Optional[Fraction]:
        if not self.applicable:
            return None
        if self.relation == ">=":
            return self.lhs - self.rhs
        return self.rhs - self.lhs

    @property
    def satisfied(self) -> Optional[bool]:
        return None if not self.applicable else self.slack >= 0

    @property
    def equality(self) -> Optional[bool]:
        return None if not self.applicable else self.slack == 0


@dataclass(frozen=True)
class PlaneNonincidence:
    q: int
    s: int
    t: Optional[int] = None

    def __post_init__(self):
        _require(self.q >= 2, f"plane order must be >= 2, got {self.q}")
        npts = self.q * self.q + self.q + 1
        _require(1 <= self.s <= npts, f"need 1 <= s <= {npts}, got s={self.s}")
        _require(self.t is None or self.t >= 0, "t must be nonnegative")


# --- Fisher and Mann -------------------------------------------------------


def fisher_variance_slack(p: BibdParams) -> int:
    """Variance inequality for the intersections with one fixed block.

    ``(b-1) * S2 - S1**2`` with ``S1 = k(r-1)`` and ``S2 = k(k-1)(lambda-1) + k(r-1)``.
    """
    s0 = p.b - 1
    s1 = p.k * (p.r - 1)
    s2 = p.k * (p.k - 1) * (p.lam - 1) + s1
    return s0 * s2 - s1 * s1


def fisher_certificate(p: BibdParams) -> int:
    return (p.r - p.k) * (p.v - p.k) * (p.r - p.lam)


def fisher(p: BibdParams) -> BoundReport:
    p.check()
    rep = BoundReport("fisher", p.b, p.v, ">=")
    cert = fisher_certificate(p)
    rep.notes.append(f"certificate (r-k)(v-k)(r-lambda) = {cert}")
    rep.notes.append(f"variance slack (b-1)S2 - S1^2 = {fisher_variance_slack(p)}")
    if p.k < p.v:
        if p.r >= p.k:
            rep.notes.append(f"k < v forces lambda < r, so r - k = {p.r - p.k} >= 0")
        else:
            rep.notes.append(f"r - k = {p.r - p.k} < 0: no design with these parameters exists")
    else:
        rep.notes.append("k = v: complete design, every block is the whole point set")
    if p.b == p.v:
        rep.notes.append(f"symmetric design: any two blocks meet in lambda = {p.lam} points")
    return rep


def mann(p: BibdParams, multiplicity: int) -> BoundReport:
    _require(multiplicity >= 1, "block multiplicity must be >= 1")
    p.check()
    rep = BoundReport("mann", p.b, multiplicity * p.v, ">=")
    rep.notes.append(f"some block repeated {multiplicity} times")
    return rep


# --- orthogonal arrays ------------------------------------------------------


def _oa_domain(k: int, n: int, lam: int) -> None:
    _require(k >= 2 and n >= 2 and lam >= 1, f"need k >= 2, n >= 2, lambda >= 1; got {k}, {n}, {lam}")


def plackett_burman(k: int, n: int, lam: int) -> BoundReport:
    _oa_domain(k, n, lam)
    rep = BoundReport("plackett-burman", lam, Fraction(k * (n - 1) + 1, n * n), ">=")
    kmax = Fraction(lam * n * n - 1, n - 1)
    rep.notes.append(f"equivalently k <= (lambda n^2 - 1)/(n - 1) = {kmax}")
    return rep


def oa_repeated_row(k: int, n: int, lam: int, m: int) -> BoundReport:
    _oa_domain(k, n, lam)
    _require(m >= 1, "repeat count m must be >= 1")
    rhs = Fraction(m * (k * (n - 1) + 1), n * n)
    rep = BoundReport("oa-repeated-row", lam, rhs, ">=")
    rep.notes.append(f"a row repeated {m} times")
    return rep


# --- Johnson ----------------------------------------------------------------


def johnson_matrix(m: int, n: int, r: int, lam: int) -> BoundReport:
    """Rows of an m x n 0-1 matrix of weight r with pairwise inner products <= lam."""
    _require(m >= 1 and n >= 1, "m and n must be positive")
    _require(lam >= 0, "lambda must be nonnegative")
    _require(r > lam, f"need r > lambda, got r={r}, lambda={lam}")
    denom = r * r - n * lam
    if denom <= 0:
        return BoundReport(
            "johnson", m, None, "<=",
            notes=[f"inapplicable: r^2 - n*lambda = {denom} <= 0"],
            applicable=False,
        )
    rep = BoundReport("johnson", m, Fraction(n * (r - lam), denom), "<=")
    rep.notes.append(f"at most {_floor(rep.rhs)} rows")
    return rep


def johnson_code(n: int, r: int, delta: int, size: Optional[int] = None) -> BoundReport:
    """Size bound for a constant-weight code of length n, weight r, distance 2*delta."""
    _require(n >= 1, "length must be positive")
    _require(delta > 0, f"need delta > 0, got {delta}")
    _require(r > delta, f"need r > delta, got r={r}, delta={delta}")
    _require(r <= n, f"weight {r} exceeds length {n}")
    denom = r * r - n * (r - delta)
    if denom <= 0:
        return BoundReport(
            "johnson-code", size, None, "<=",
            notes=[f"inapplicable: r^2 - n(r-delta) = {denom}"],
            applicable=False,
        )
    rhs = Fraction(n * delta, denom)
    if size is None:
        rep = BoundReport("johnson-code", _floor(rhs), rhs, "<=")
        rep.notes.append(f"largest admissible code size {_floor(rhs)}")
    else:
        rep = BoundReport("johnson-code", size, rhs, "<=")
    return rep


def johnson_improved_check(m: int, n: int, r: int, lam: int) -> BoundReport:
    _require(m >= 1 and n >= 1 and r >= 1, "m, n, r must be positive")
    _require(lam >= 0 and r > lam, f"need r > lambda >= 0, got r={r}, lambda={lam}")
    sc = ShiftContext.balanced(m * r, n)
    ell, t = sc.ell, sc.remainder
    rhs = (n - t) * ell * ell + t * (ell + 1) ** 2 - m * r
    rep = BoundReport("johnson-improved", m * (m - 1) * lam, rhs, ">=")
    rep.notes.append(f"ell = floor(mr/n) = {ell}, remainder t = {t}")
    return rep


def _improved_ok(m: int, n: int, r: int, lam: int) -> bool:
    ell, t = divmod(m * r, n)
    return m * (m - 1) * lam >= (n - t) * ell * ell + t * (ell + 1) ** 2 - m * r


def johnson_improved_max_m(n: int, r: int, lam: int) -> int:
    """Largest m for which the refined Johnson condition holds.

    Rows are distinct (inner product < weight), so ``m <= C(n, r)`` always.
    Beyond that, with ``x = m*r`` the balanced column sum of squares is at
    least ``x**2/n`` and at most ``x**2/n + n/4``, which gives two proven cutoffs:

    * if ``r**2 > n*lam`` the condition fails for every m above the plain
      Johnson bound ``n(r-lam)/(r**2-n*lam)``;
    * otherwise it holds for every ``m > n / (4(r-lam))``.

    So only a finite prefix is ever scanned.
    """
    _require(n >= 1 and r >= 1, "n and r must be positive")
    _require(lam >= 0 and r > lam, f"need r > lambda >= 0, got r={r}, lambda={lam}")
    _require(r <= n, f"weight {r} exceeds length {n}")
    cap = math.comb(n, r)
    denom = r * r - n * lam
    if denom > 0:
        top = min(cap, (n * (r - lam)) // denom)
        tail_holds = False
    else:
        top = min(cap, -(-n // (4 * (r - lam))))
        tail_holds = cap > top
    if tail_holds:
        return cap
    for m in range(top, 0, -1):
        if _improved_ok(m, n, r, lam):
            return m
    return 0


# --- pairwise balanced designs ----------------------------------------------


def _pbd_domain(v: int, k: int) -> None:
    _require(2 <= k < v, f"need 2 <= k < v, got k={k}, v={v}")


def stanton_kalbfleisch_rhs(v: int, k: int) -> Fraction:
    return 1 + Fraction(k * k * (v - k), v - 1)


def stanton_kalbfleisch(v: int, k: int, b: Optional[int] = None) -> BoundReport:
    _pbd_domain(v, k)
    rhs = stanton_kalbfleisch_rhs(v, k)
    rep = BoundReport("stanton-kalbfleisch", _ceil(rhs) if b is None else b, rhs, ">=")
    if b is None:
        rep.notes.append(f"at least {_ceil(rhs)} blocks")
    eq_size = 1 + Fraction(v - 1, k)
    if eq_size.denominator == 1:
        rep.notes.append(f"equality block size {eq_size}")
    else:
        rep.notes.append(f"equality impossible: block size 1 + (v-1)/k = {eq_size} is not an integer")
    # the same bound through the lower-bounded variance route
    ctx = LowerBoundContext(b=k * (v - k), c=(v - k) * (v - 1))
    rep.notes.append(f"variance form (b-1)(v-k)(v-1) - (k(v-k))^2 at b = lhs: "
                     f"{lower_bound_slack(rep.lhs - 1, ctx)}")
    return rep


def erdos_de_bruijn_slack(v: int, k: int) -> Fraction:
    """Certified lower bound on ``b - v`` for a PBD with a block of size k."""
    _pbd_domain(v, k)
    return Fraction(-(v - (k + 1)) * (v - (k * k - k + 1)), v - 1)


def erdos_de_bruijn(v: int, k: int, b: Optional[int] = None) -> BoundReport:
    rhs = erdos_de_bruijn_slack(v, k)
    lhs = _ceil(rhs) if b is None else b - v
    rep = BoundReport("erdos-de-bruijn", lhs, rhs, ">=")
    if rhs >= 0:
        rep.notes.append("k+1 <= v <= k^2-k+1: b >= v certified")
    if v == k + 1:
        rep.notes.append("v = k+1: equality only for the near-pencil")
    if v == k * k - k + 1:
        rep.notes.append(f"v = k^2-k+1: equality only for a projective plane of order {k - 1}")
    return rep


def stinson_bound(v: int, k: int, ell: int, b: Optional[int] = None) -> BoundReport:
    _pbd_domain(v, k)
    _require(ell * ell + ell != 0, f"ell = {ell} makes ell^2 + ell zero")
    rhs = 1 + Fraction((2 * ell * k - v + k + 1) * (v - k), ell * ell + ell)
    rep = BoundReport("stinson", _ceil(rhs) if b is None else b, rhs, ">=")
    rep.notes.append(f"ell = {ell}")
    return rep


def stinson_best_ell(v: int, k: int) -> int:
    _pbd_domain(v, k)
    return (v - 1) // k


# --- (r, lambda)-designs and projective planes -------------------------------


def mullin_vanstone(v: int, r: int, lam: int, b: Optional[int] = None) -> BoundReport:
    _require(v >= 1 and r >= 1 and lam >= 1, "v, r, lambda must be positive")
    rhs = Fraction(r * r * v, r + lam * (v - 1))
    rep = BoundReport("mullin-vanstone", _ceil(rhs) if b is None else b, rhs, ">=")
    # S0 = b, S1 = vr, S2 = v(r + lambda(v-1))
    if b is not None:
        ms_slack = b * v * (r + lam * (v - 1)) - (v * r) ** 2
        rep.notes.append(f"variance slack b*S2 - S1^2 = {ms_slack}")
    return rep


def nonincident_lines_bound(p: PlaneNonincidence) -> BoundReport:
    q, s = p.q, p.s
    rhs = Fraction(q ** 3 + q * q + q - q * s, q + s)
    rep = BoundReport("nonincident", _floor(rhs) if p.t is None else p.t, rhs, "<=")
    rep.notes.append(f"at most {_floor(rhs)} lines miss all {s} points")
    return rep


@dataclass(frozen=True)
class WestBound:
    q: int
    square_bound: Optional[int]  # 1 + (q+1)(sqrt(q)-1), only for square q
    integer_bound: int  # largest s with s <= nonincident bound at t = s

    @property
    def value(self) -> Fraction:
        if self.square_bound is not None:
            return Fraction(self.square_bound)
        return Fraction(self.integer_bound)


def west_diagonal_bound(q: int) -> WestBound:
    _require(q >= 2, f"plane order must be >= 2, got {q}")
    root = math.isqrt(q)
    square = 1 + (q + 1) * (root - 1) if root * root == q else None
    best = 0
    for s in range(1, q * q + q + 2):
        # s <= (q^3+q^2+q-qs)/(q+s), cleared of the positive denominator
        if s * (q + s) <= q ** 3 + q * q + q - q * s:
            best = s
    return WestBound(q, square, best)


# --- two-point sampling -----------------------------------------------------


def two_point_error_bound(k: int, eps) -> Fraction:
    eps = as_rational(eps)
    _require(k >= 1, f"k must be >= 1, got {k}")
    _require(0 <= eps <= 1, f"need 0 <= eps <= 1, got {eps}")
    return eps / ((k - 1) * (1 - eps) + 1)

