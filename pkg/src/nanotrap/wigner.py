"""Wigner 3-j and 6-j symbols evaluated through Racah sums.

Angular momenta are carried as doubled integers (``HalfInt``) so integer and
half-integer arguments compare exactly.  The Racah sums and the squared
prefactors are accumulated in rational arithmetic and converted to float once
at the very end; this keeps symbols accurate to about one ulp even where the
naive floating-point sum cancels badly (j up to ~15/2 occurs in the hyperfine
Stark matrices).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, sqrt

__all__ = ["HalfInt", "three_j", "six_j"]


@dataclass(frozen=True, order=True)
class HalfInt:
    """An integer or half-integer quantum number, stored as twice its value."""

    twice: int

    @staticmethod
    def of(x):
        """Coerce an int, float, or HalfInt to a HalfInt."""
        if isinstance(x, HalfInt):
            return x
        twice = round(2 * x)
        if abs(2 * x - twice) > 1e-9:
            raise ValueError(f"{x!r} is not an integer or half-integer")
        return HalfInt(int(twice))

    @property
    def value(self):
        return self.twice / 2

    def is_integer(self):
        return self.twice % 2 == 0

    def __float__(self):
        return self.twice / 2

    def __neg__(self):
        return HalfInt(-self.twice)

    def __add__(self, other):
        return HalfInt(self.twice + HalfInt.of(other).twice)

    def __sub__(self, other):
        return HalfInt(self.twice - HalfInt.of(other).twice)

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"


def _twice(x):
    return HalfInt.of(x).twice


def _check_jm(tj, tm, name):
    if tj < 0:
        raise ValueError(f"{name}: j must be non-negative, got {tj / 2}")
    if abs(tm) > tj or (tj - tm) % 2 != 0:
        raise ValueError(
            f"{name}: m={tm / 2} incompatible with j={tj / 2}"
        )


def _triangle_ok(ta, tb, tc):
    # Doubled-integer triangle rule; parity makes the perimeter an integer.
    return abs(ta - tb) <= tc <= ta + tb and (ta + tb + tc) % 2 == 0


def _sqrt_fraction(frac):
    # Correctly-rounded float of an exact non-negative rational, then sqrt.
    return sqrt(float(frac))


def three_j(j1, j2, j3, m1, m2, m3):
    """Wigner 3-j symbol (j1 j2 j3; m1 m2 m3).

    Arguments may be HalfInt, int, or float halves.  Returns exactly 0.0 when
    m1+m2+m3 != 0 or the triangle rule fails; raises ValueError when an m is
    not compatible with its j.
    """
    tj1, tj2, tj3 = _twice(j1), _twice(j2), _twice(j3)
    tm1, tm2, tm3 = _twice(m1), _twice(m2), _twice(m3)
    _check_jm(tj1, tm1, "(j1, m1)")
    _check_jm(tj2, tm2, "(j2, m2)")
    _check_jm(tj3, tm3, "(j3, m3)")
    return _three_j(tj1, tj2, tj3, tm1, tm2, tm3)


@lru_cache(maxsize=None)
def _three_j(tj1, tj2, tj3, tm1, tm2, tm3):
    if tm1 + tm2 + tm3 != 0:
        return 0.0
    if not _triangle_ok(tj1, tj2, tj3):
        return 0.0

    # All of the following are non-negative integers for valid arguments.
    a = (tj1 + tj2 - tj3) // 2
    b = (tj1 - tj2 + tj3) // 2
    c = (-tj1 + tj2 + tj3) // 2
    j1m1p = (tj1 + tm1) // 2
    j1m1m = (tj1 - tm1) // 2
    j2m2p = (tj2 + tm2) // 2
    j2m2m = (tj2 - tm2) // 2
    j3m3p = (tj3 + tm3) // 2
    j3m3m = (tj3 - tm3) // 2

    t_min = max(0, (tj2 - tj3 - tm1) // 2, (tj1 - tj3 + tm2) // 2)
    t_max = min(a, j1m1m, j2m2p)
    total = Fraction(0)
    for t in range(t_min, t_max + 1):
        den = (
            factorial(t)
            * factorial((tj3 - tj2 + tm1) // 2 + t)
            * factorial((tj3 - tj1 - tm2) // 2 + t)
            * factorial(a - t)
            * factorial(j1m1m - t)
            * factorial(j2m2p - t)
        )
        total += Fraction(-1 if t % 2 else 1, den)
    if total == 0:
        return 0.0

    pref_sq = Fraction(
        factorial(a) * factorial(b) * factorial(c),
        factorial((tj1 + tj2 + tj3) // 2 + 1),
    ) * (
        factorial(j1m1p)
        * factorial(j1m1m)
        * factorial(j2m2p)
        * factorial(j2m2m)
        * factorial(j3m3p)
        * factorial(j3m3m)
    )
    phase = -1 if ((tj1 - tj2 - tm3) // 2) % 2 else 1
    sign = 1 if total > 0 else -1
    return phase * sign * _sqrt_fraction(pref_sq * total * total)


def six_j(j1, j2, j3, j4, j5, j6):
    """Wigner 6-j symbol {j1 j2 j3; j4 j5 j6}.

    Returns exactly 0.0 when any of the four triads (j1 j2 j3), (j1 j5 j6),
    (j4 j2 j6), (j4 j5 j3) violates the triangle rule.
    """
    t = tuple(_twice(j) for j in (j1, j2, j3, j4, j5, j6))
    for tj in t:
        if tj < 0:
            raise ValueError(f"j must be non-negative, got {tj / 2}")
    return _six_j(*t)


def _delta_sq(ta, tb, tc):
    return Fraction(
        factorial((ta + tb - tc) // 2)
        * factorial((ta - tb + tc) // 2)
        * factorial((-ta + tb + tc) // 2),
        factorial((ta + tb + tc) // 2 + 1),
    )


@lru_cache(maxsize=None)
def _six_j(tj1, tj2, tj3, tj4, tj5, tj6):
    triads = (
        (tj1, tj2, tj3),
        (tj1, tj5, tj6),
        (tj4, tj2, tj6),
        (tj4, tj5, tj3),
    )
    for ta, tb, tc in triads:
        if not _triangle_ok(ta, tb, tc):
            return 0.0

    s1 = (tj1 + tj2 + tj3) // 2
    s2 = (tj1 + tj5 + tj6) // 2
    s3 = (tj4 + tj2 + tj6) // 2
    s4 = (tj4 + tj5 + tj3) // 2
    q1 = (tj1 + tj2 + tj4 + tj5) // 2
    q2 = (tj2 + tj3 + tj5 + tj6) // 2
    q3 = (tj3 + tj1 + tj6 + tj4) // 2

    total = Fraction(0)
    for t in range(max(s1, s2, s3, s4), min(q1, q2, q3) + 1):
        den = (
            factorial(t - s1)
            * factorial(t - s2)
            * factorial(t - s3)
            * factorial(t - s4)
            * factorial(q1 - t)
            * factorial(q2 - t)
            * factorial(q3 - t)
        )
        term = Fraction(factorial(t + 1), den)
        total += -term if t % 2 else term
    if total == 0:
        return 0.0

    pref_sq = (
        _delta_sq(tj1, tj2, tj3)
        * _delta_sq(tj1, tj5, tj6)
        * _delta_sq(tj4, tj2, tj6)
        * _delta_sq(tj4, tj5, tj3)
    )
    sign = 1 if total > 0 else -1
    return sign * _sqrt_fraction(pref_sq * total * total)
