"""Moment sums and the variance inequalities built on them.

Everything here works on :class:`fractions.Fraction` values so that equality
cases survive intact.  Integers are accepted wherever a rational is.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC

Rational = Fraction


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` or decimal strings to a Fraction.

    Strings are parsed exactly, so ``"0.4"`` is 2/5.

    Floats are refused: a float is almost never the value the caller meant.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


@dataclass(frozen=True)
class MomentSummary:
    s0: int
    s1: Fraction
    s2: Fraction
    sstar: Fraction
    mean: Fraction


@dataclass(frozen=True)
class LowerBoundContext:
    """A lower bound ``b`` on the first moment, with ``c = 2*sstar + b``.

    ``epsilon`` is how far the actual first moment sits above ``b``.
    """

    b: Fraction
    c: Fraction
    epsilon: Fraction = Fraction(0)

    def __post_init__(self):
        for name in ("b", "c", "epsilon"):
            object.__setattr__(self, name, as_rational(getattr(self, name)))
        if self.b <= 0:
            raise ValueError(f"lower bound b must be positive, got {self.b}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be nonnegative, got {self.epsilon}")
        if self.c < self.b:
            raise ValueError(f"need c >= b, got c={self.c}, b={self.b}")

    @classmethod
    def from_sums(cls, s1, sstar, b) -> LowerBoundContext:
        s1, sstar, b = as_rational(s1), as_rational(sstar), as_rational(b)
        return cls(b=b, c=2 * sstar + b, epsilon=s1 - b)


@dataclass(frozen=True)
class ShiftContext:
    """``ell`` and ``remainder`` with ``total = count*ell + remainder``."""

    ell: int
    remainder: int = 0

    @classmethod
    def balanced(cls, total: int, count: int) -> ShiftContext:
        if count < 1:
            raise ValueError("count must be positive")
        ell, t = divmod(total, count)
        return cls(ell, t)


def summarize(values: Iterable) -> MomentSummary:
    vals = [as_rational(v) for v in values]
    if not vals:
        raise ValueError("cannot summarize an empty list")
    s0 = len(vals)
    s1 = sum(vals, Fraction(0))
    s2 = sum((v * v for v in vals), Fraction(0))
    return MomentSummary(s0=s0, s1=s1, s2=s2, sstar=(s2 - s1) / 2, mean=s1 / s0)


def variance_slack(ms: MomentSummary) -> Fraction:
    """``s0*s2 - s1**2``, which is ``s0`` times the sum of squared deviations."""
    if ms.s0 <= 0:
        raise ValueError("moment summary has no values")
    return ms.s0 * ms.s2 - ms.s1 * ms.s1


def lower_bound_slack(s0, ctx: LowerBoundContext) -> Fraction:
    """``s0*c - b**2``; nonnegative for any genuine instance with all values >= 1."""
    return as_rational(s0) * ctx.c - ctx.b * ctx.b


def f_epsilon(b, c, eps) -> Fraction:
    b, c, eps = as_rational(b), as_rational(c), as_rational(eps)
    if c + eps == 0:
        raise ZeroDivisionError("c + eps is zero")
    return (b + eps) ** 2 / (c + eps)


def integer_shift_slack(values: Iterable[int], ell: int) -> Fraction:
    """``sum((a - ell) * (a - ell - 1))``; zero iff every ``a`` is ``ell`` or ``ell + 1``."""
    vals = list(values)
    if not vals:
        raise ValueError("cannot evaluate an empty list")
    if any(isinstance(a, bool) or not isinstance(a, int) for a in vals):
        raise TypeError("integer_shift_slack needs integer values")
    if not isinstance(ell, int):
        raise TypeError("ell must be an integer")
    return Fraction(sum((a - ell) * (a - ell - 1) for a in vals))
