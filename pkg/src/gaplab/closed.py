"""Closed-form limits of the gap distribution and its density for t > 2/3.

Three ranges have fully explicit laws:

  t > 2        G(lam) = 1 - lam*t/2 on [0, 2/t], then 0.
  1 < t <= 2   two branches split at lam = 1, with lam*t*log terms.
  2/3 < t <= 1 four branches split at lam = 1, 1/t, 2, ending at 2/t.

The same information in region form: eight reference regions of the
(lambda, t) quadrant, each carrying an exact eight-term coefficient vector
(REFERENCE_ROWS).  The general evaluator must regenerate those rows with
zero residual, which is the strongest single correctness check in the suite.

Densities are the negative lambda-derivatives away from branch points; at
the finitely many branch points the density takes the average of the two
one-sided derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .exactconst import ExactConst, LOG2
from .model import (
    Constraint,
    KappaVector,
    Region,
    RegionAtlas,
    Scene,
    ZERO_KAPPA,
)

Real = Union[int, float, Fraction]


class ClosedFormUnavailable(ValueError):
    """Raised for t <= 2/3, where no closed form is implemented (use the
    general evaluator)."""


def _check_range(t: float) -> None:
    if t <= 2 / 3:
        raise ClosedFormUnavailable(f"closed forms cover only t > 2/3, got t={t}")


def gap_closed(t: Real, lam: Real) -> float:
    """The limiting gap distribution G(lam) for t > 2/3, 0 elsewhere past 2/t."""
    t, lam = float(t), float(lam)
    _check_range(t)
    if lam < 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    if lam * t >= 2:
        return 0.0
    if t > 2:
        return 1 - lam * t / 2
    if t > 1:
        if lam <= 1:
            return 1 + lam * t / 2 + lam * t * math.log(t / 2) - lam * t * t / 2
        return 1 - lam * t / 2 + lam * t * math.log(lam * t / 2) - lam * t * t / 2 + t
    # 2/3 < t <= 1
    if lam <= 1:
        return 1 + lam * t - lam * t * t + 1.5 * lam * t * math.log(t) - lam * t * math.log(2)
    if lam <= 1 / t:
        return (
            1 + 5 * t - 4 * lam * t - lam * t * t
            + t * (2 + 3 * lam) * math.log(lam)
            + 1.5 * lam * t * math.log(t)
            - lam * t * math.log(2)
        )
    if lam <= 2:
        return (
            -1 + 3 * t - 2 * lam * t + lam * t * t
            + lam * t * math.log(lam / 2)
            - t * (2 + lam / 2) * math.log(t)
        )
    return (
        -1 - 2 * t + lam * t / 2 + lam * t * t
        - t * (2 + lam / 2) * math.log(lam * t / 2)
    )


def _density_branches(t: float):
    """(breakpoints, branch functions) for the density at this t; branch i
    applies on (bp[i], bp[i+1])."""
    logt = math.log(t)
    if t > 2:
        return [0.0, 2 / t], [lambda lam: t / 2, lambda lam: 0.0]
    if t > 1:
        return (
            [0.0, 1.0, 2 / t],
            [
                lambda lam: t * t / 2 - t / 2 - t * math.log(t / 2),
                lambda lam: t * t / 2 - t / 2 - t * math.log(lam * t / 2),
                lambda lam: 0.0,
            ],
        )
    return (
        [0.0, 1.0, 1 / t, 2.0, 2 / t],
        [
            lambda lam: t * t - t - 1.5 * t * logt + t * math.log(2),
            lambda lam: t * t + t - 2 * t / lam - 3 * t * math.log(lam) - 1.5 * t * logt + t * math.log(2),
            lambda lam: -t * t + t - t * math.log(lam / 2) + 0.5 * t * logt,
            lambda lam: -t * t + 2 * t / lam + 0.5 * t * math.log(lam * t / 2),
            lambda lam: 0.0,
        ],
    )


def density_closed(t: Real, lam: Real) -> float:
    """The limiting gap density g(lam) = -dG/dlam for t > 2/3.

    At branch points the value is the average of the two one-sided
    derivatives (e.g. for 1 < t <= 2, g(2/t) = t^2/4 - t/4).
    """
    t, lam = float(t), float(lam)
    _check_range(t)
    if lam <= 0:
        raise ValueError(f"density needs lambda > 0, got {lam}")
    bps, branches = _density_branches(t)
    edges = bps + [math.inf]
    # breakpoints can coincide (1/t = 1 at t = 1, 2/t = 1 at t = 2); only the
    # intervals of positive width carry a branch
    intervals = [
        (edges[i], edges[i + 1], branches[i])
        for i in range(len(branches))
        if edges[i + 1] > edges[i]
    ]
    for idx, (a, b, f) in enumerate(intervals):
        if lam == a and idx > 0:
            return (intervals[idx - 1][2](lam) + f(lam)) / 2
        if a <= lam < b:
            return f(lam)
    return 0.0


@dataclass(frozen=True)
class AlphaVector:
    """Exact density coefficients over the basis {t, t^2, t/lam, t*log(lam), t*log(t)}."""

    coeffs: tuple[ExactConst, ...]

    def evaluate(self, t: Real, lam: Real) -> float:
        t, lam = float(t), float(lam)
        a = [float(c) for c in self.coeffs]
        return (
            a[0] * t + a[1] * t * t + a[2] * t / lam
            + a[3] * t * math.log(lam) + a[4] * t * math.log(t)
        )


def density_from_kappa(kappa: KappaVector) -> AlphaVector:
    """Differentiate an eight-term gap law exactly: the density coefficients
    are (-k3 - k6, -k4, -k5, -k6, -k8)."""
    k = kappa.coeffs
    return AlphaVector((-(k[2]) - k[5], -k[3], -k[4], -k[5], -k[7]))


def check_boundary_relations(
    ki: KappaVector, kj: KappaVector, border: tuple[str, Fraction]
) -> list[ExactConst]:
    """Exact residuals of the four matching identities across a shared border.

    ``border`` is (kind, c) with kind one of "t", "lambda", "lambda_t"; all
    four residuals are zero precisely when the two laws agree identically on
    the border line.  log(c) enters some identities; it stays exact because c
    is rational and the coefficients multiplying it are rational (asserted).
    """
    kind, c = border
    c = Fraction(c)
    if c <= 0:
        raise ValueError(f"border constant must be positive, got {c}")
    a, b = ki.coeffs, kj.coeffs
    d = [a[n] - b[n] for n in range(8)]
    logc = ExactConst.log_of(c)

    def times_logc(coeff: ExactConst) -> ExactConst:
        if not coeff.is_rational:
            raise ValueError("log coefficient times log(c) leaves the exact module")
        return logc * coeff.rat

    if kind == "t":
        return [
            d[0] + d[1] * c + times_logc(d[6] * c),
            d[2] + d[3] * c + times_logc(d[7]),
            d[4],
            d[5],
        ]
    if kind == "lambda":
        return [
            d[0],
            d[1] + d[2] * c + times_logc(d[4]) + times_logc(d[5] * c),
            d[3],
            d[6] + d[7] * c,
        ]
    if kind == "lambda_t":
        return [
            d[0] + d[2] * c + times_logc(d[5] * c),
            d[1] + d[3] * c + times_logc(d[4]),
            d[6] - d[4],
            d[7] - d[5],
        ]
    raise ValueError(f"bad border kind {kind!r}")


def asymptotic_average_gap(scene: Scene) -> float:
    """Leading-order average angular gap 1/(2 t J^3).

    Meaningful as an approximation only when t*J^2 > J; the formula itself
    is returned regardless so degenerate scenes can still be inspected.
    """
    return 1.0 / (2 * float(scene.t) * scene.J ** 3)


# -- reference rows and regions ---------------------------------------------

def _K(*entries) -> KappaVector:
    return KappaVector([e if isinstance(e, ExactConst) else ExactConst(Fraction(e)) for e in entries])


#: The eight exact coefficient rows of the reference gap law, index 0 the
#: zero region, 1 the no-interference range t > 2, 2-3 the range 1 < t <= 2,
#: 4-7 the range 2/3 < t <= 1.
REFERENCE_ROWS: tuple[KappaVector, ...] = (
    ZERO_KAPPA,
    _K(1, 0, Fraction(-1, 2), 0, 0, 0, 0, 0),
    _K(1, 0, ExactConst(Fraction(1, 2)) - LOG2, Fraction(-1, 2), 0, 0, 0, 1),
    _K(1, 1, ExactConst(Fraction(-1, 2)) - LOG2, Fraction(-1, 2), 0, 1, 0, 1),
    _K(1, 0, ExactConst(1) - LOG2, -1, 0, 0, 0, Fraction(3, 2)),
    _K(1, 5, ExactConst(-4) - LOG2, -1, 2, 3, 0, Fraction(3, 2)),
    _K(-1, 3, ExactConst(-2) - LOG2, 1, 0, 1, -2, Fraction(-1, 2)),
    _K(-1, ExactConst(-2) + LOG2 * 2, ExactConst(Fraction(1, 2)) + LOG2 * Fraction(1, 2),
       1, -2, Fraction(-1, 2), -2, Fraction(-1, 2)),
)


def _C(kind: str, op: str, c) -> Constraint:
    return Constraint(kind, op, Fraction(c))


#: Constraint sets of the reference regions, same indexing as REFERENCE_ROWS.
REFERENCE_CONSTRAINTS: tuple[tuple[Constraint, ...], ...] = (
    (_C("lambda_t", ">=", 2),),
    (_C("t", ">=", 2), _C("lambda_t", "<=", 2)),
    (_C("t", ">=", 1), _C("t", "<=", 2), _C("lambda", "<=", 1)),
    (_C("t", ">=", 1), _C("t", "<=", 2), _C("lambda", ">=", 1), _C("lambda_t", "<=", 2)),
    (_C("t", ">=", Fraction(2, 3)), _C("t", "<=", 1), _C("lambda", "<=", 1)),
    (_C("t", ">=", Fraction(2, 3)), _C("t", "<=", 1), _C("lambda", ">=", 1), _C("lambda_t", "<=", 1)),
    (_C("t", ">=", Fraction(2, 3)), _C("t", "<=", 1), _C("lambda_t", ">=", 1), _C("lambda", "<=", 2)),
    (_C("t", ">=", Fraction(2, 3)), _C("t", "<=", 1), _C("lambda", ">=", 2), _C("lambda_t", "<=", 2)),
)


def reference_atlas() -> RegionAtlas:
    """The hand-encoded atlas of the eight reference regions (t > 2/3)."""
    regions = [
        Region(cons, row) for cons, row in zip(REFERENCE_CONSTRAINTS, REFERENCE_ROWS)
    ]
    return RegionAtlas(h=2, regions=regions,
                       t_breakpoints=[Fraction(2, 3), Fraction(1), Fraction(2)])
