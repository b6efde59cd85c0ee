"""Exact constants of the form  a + sum_p c_p * log(p)  with a, c_p rational.

The piecewise integration that produces the eight-term gap-law coefficients
only ever introduces logarithms of positive rationals.  Factoring every log
argument into primes gives each constant a unique normal form

    a + c_2*log(2) + c_3*log(3) + c_5*log(5) + ...

(uniqueness: a rational combination of logs of distinct primes vanishes only
when all coefficients vanish, by unique factorization).  Working in this
normal form lets coefficient tables be compared with literally zero residual
instead of "to machine precision".
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]


def factor_int(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 by trial division (arguments stay small)."""
    if n < 1:
        raise ValueError(f"cannot factor non-positive integer {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class ExactConst:
    """An exact value  rat + sum_p logs[p]*log(p)  over prime p."""

    __slots__ = ("rat", "logs")

    def __init__(self, rat: RationalLike = 0, logs: dict[int, Fraction] | None = None):
        self.rat = Fraction(rat)
        self.logs: dict[int, Fraction] = {}
        if logs:
            for p, c in logs.items():
                c = Fraction(c)
                if c != 0:
                    self.logs[p] = c

    @classmethod
    def log_of(cls, x: RationalLike, coeff: RationalLike = 1) -> "ExactConst":
        """coeff * log(x) for a positive rational x, in normal form."""
        x = Fraction(x)
        if x <= 0:
            raise ValueError(f"log of non-positive rational {x}")
        coeff = Fraction(coeff)
        logs: dict[int, Fraction] = {}
        for p, e in factor_int(x.numerator).items():
            logs[p] = logs.get(p, Fraction(0)) + coeff * e
        for p, e in factor_int(x.denominator).items():
            logs[p] = logs.get(p, Fraction(0)) - coeff * e
        return cls(0, logs)

    # -- queries ---------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return not self.logs

    @property
    def is_zero(self) -> bool:
        return self.rat == 0 and not self.logs

    def log_coeff(self, p: int) -> Fraction:
        return self.logs.get(p, Fraction(0))

    def __float__(self) -> float:
        return float(self.rat) + sum(float(c) * math.log(p) for p, c in self.logs.items())

    # -- algebra ---------------------------------------------------------

    def __add__(self, other) -> "ExactConst":
        other = _coerce(other)
        logs = dict(self.logs)
        for p, c in other.logs.items():
            logs[p] = logs.get(p, Fraction(0)) + c
        return ExactConst(self.rat + other.rat, logs)

    __radd__ = __add__

    def __neg__(self) -> "ExactConst":
        return ExactConst(-self.rat, {p: -c for p, c in self.logs.items()})

    def __sub__(self, other) -> "ExactConst":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "ExactConst":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "ExactConst":
        if isinstance(other, ExactConst):
            if other.is_rational:
                other = other.rat
            elif self.is_rational:
                self, other = other, self.rat
            else:
                raise ValueError("product of two irrational exact constants leaves the log-linear module")
        q = Fraction(other)
        return ExactConst(self.rat * q, {p: c * q for p, c in self.logs.items()})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExactConst":
        return self * (1 / Fraction(other))

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        return self.rat == other.rat and self.logs == other.logs

    def __hash__(self) -> int:
        return hash((self.rat, tuple(sorted(self.logs.items()))))

    def __repr__(self) -> str:
        parts = [str(self.rat)] if (self.rat != 0 or not self.logs) else []
        for p in sorted(self.logs):
            parts.append(f"{self.logs[p]}*log({p})")
        return " + ".join(parts)


def _coerce(x) -> ExactConst:
    if isinstance(x, ExactConst):
        return x
    return ExactConst(Fraction(x))


ZERO = ExactConst(0)
ONE = ExactConst(1)
LOG2 = ExactConst.log_of(2)
