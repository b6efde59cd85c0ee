"""Piecewise-linear profiles of  F(z) = min over j in [-k, r], j != 0 of frac(j*z).

F is the "interference profile" of a pair (k, r): on the row of a lattice
point it measures, after rescaling, how close the projections onto the r rows
above and k rows below come to an integer point.  F is piecewise linear with
breakpoints among the rationals a/q, q <= 2*max(k, r): the active branch can
only change where some frac(j*z) vanishes (q <= max(k, r)) or where two
branches cross (|j - j'| <= 2*max(k, r)).  Between candidate breakpoints each
branch frac(j*z) is the plain linear function j*z - floor(j*z), so the winner
is found by exact rational comparison at the midpoint and adjacent intervals
with the same winner are merged.

F is right-continuous but not continuous for one-sided pairs (for k=0, r=2 it
jumps from 1/2 to 0 at z=1/2); isolated jumps are irrelevant for the
superlevel measures computed here.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Real = Union[int, float, Fraction]


@dataclass(frozen=True)
class LinearPiece:
    """F(z) = slope*z + offset on [lo, hi] (valuewise on the interior)."""

    lo: Fraction
    hi: Fraction
    slope: int
    offset: Fraction

    def value(self, z: Real) -> Fraction:
        return self.slope * Fraction(z) + self.offset

    @property
    def min_value(self) -> Fraction:
        return self.value(self.lo if self.slope > 0 else self.hi)

    @property
    def max_value(self) -> Fraction:
        return self.value(self.hi if self.slope > 0 else self.lo)


@dataclass(frozen=True)
class FracMinProfile:
    """Exact piecewise-linear representation of F on [0, 1] for a pair (k, r)."""

    k: int
    r: int
    pieces: tuple[LinearPiece, ...]

    @property
    def nodes(self) -> list[Fraction]:
        return [p.lo for p in self.pieces] + [self.pieces[-1].hi]

    @property
    def max_value(self) -> Fraction:
        return max(p.max_value for p in self.pieces)

    def value(self, z: Real) -> Fraction:
        """Direct evaluation of min_j frac(j*z) (independent of the pieces)."""
        z = Fraction(z)
        best = None
        for j in _branch_range(self.k, self.r):
            v = j * z - (j * z).__floor__()
            if best is None or v < best:
                best = v
        return best


def _branch_range(k: int, r: int) -> list[int]:
    return [j for j in range(-k, r + 1) if j != 0]


def build_profile(k: int, r: int) -> FracMinProfile:
    """Construct the exact profile of min_{j in [-k, r], j != 0} frac(j*z).

    Candidate nodes are every a/q in lowest terms with q <= 2*max(k, r);
    on each gap all 2(k+r) branches are compared exactly at the midpoint.
    """
    if k < 0 or r < 0 or k + r < 1:
        raise ValueError(f"need k, r >= 0 with k + r >= 1, got ({k}, {r})")
    qmax = 2 * max(k, r)
    nodes = sorted({Fraction(a, q) for q in range(1, qmax + 1) for a in range(q + 1)})
    branches = _branch_range(k, r)

    raw: list[LinearPiece] = []
    for lo, hi in zip(nodes, nodes[1:]):
        mid = (lo + hi) / 2
        best_j, best_v = None, None
        for j in branches:
            v = j * mid - (j * mid).__floor__()
            if best_v is None or v < best_v:
                best_j, best_v = j, v
        offset = best_v - best_j * mid
        raw.append(LinearPiece(lo, hi, best_j, offset))

    merged: list[LinearPiece] = []
    for piece in raw:
        if merged and merged[-1].slope == piece.slope and merged[-1].offset == piece.offset:
            last = merged.pop()
            piece = LinearPiece(last.lo, piece.hi, piece.slope, piece.offset)
        merged.append(piece)
    return FracMinProfile(k, r, tuple(merged))


def superlevel_measure(profile: FracMinProfile, y: Real) -> Real:
    """Lebesgue measure of {z in [0, 1] : F(z) >= y}.

    Each linear piece contributes its full length when y is below both
    endpoint values, the partial length (max - y)/|slope| on the ramp, and
    nothing above its maximum.  Exact when y is a Fraction; float inputs
    evaluate the same formula in floats.
    """
    exact = isinstance(y, (Fraction, int))
    if y < 0:
        raise ValueError(f"superlevel threshold must be >= 0, got {y}")
    if y == 0:
        return Fraction(1) if exact else 1.0
    yq = Fraction(y) if exact else y
    total = Fraction(0) if exact else 0.0
    for p in profile.pieces:
        lo_v, hi_v = p.min_value, p.max_value
        if not exact:
            lo_v, hi_v = float(lo_v), float(hi_v)
        if yq <= lo_v:
            total += (p.hi - p.lo) if exact else float(p.hi - p.lo)
        elif yq < hi_v:
            total += (hi_v - yq) / abs(p.slope)
    return total


def superlevel_segments(profile: FracMinProfile) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
    """The superlevel measure as exact linear segments (y_lo, y_hi, c, d).

    On each segment mu(y) = c + d*y; segments cover [0, max F] and mu = 0
    beyond.  Segment boundaries ("thresholds") are the distinct endpoint
    values of the pieces; these are exactly the y where the measure kinks.
    """
    kinks = sorted({p.min_value for p in profile.pieces if p.min_value > 0}
                   | {p.max_value for p in profile.pieces})
    bounds = [Fraction(0)] + [v for v in kinks if v > 0]
    segments = []
    for y_lo, y_hi in zip(bounds, bounds[1:]):
        mid = (y_lo + y_hi) / 2
        c, d = Fraction(0), Fraction(0)
        for p in profile.pieces:
            if mid <= p.min_value:
                c += p.hi - p.lo
            elif mid < p.max_value:
                c += p.max_value / abs(p.slope)
                d -= Fraction(1, abs(p.slope))
        segments.append((y_lo, y_hi, c, d))
    return segments


def superlevel_thresholds(profile: FracMinProfile) -> list[Fraction]:
    """The positive kink values of the superlevel measure, ascending."""
    return sorted({p.min_value for p in profile.pieces if p.min_value > 0}
                  | {p.max_value for p in profile.pieces})


class SegmentTable:
    """Float-ready lookup table for mu(y), for the numeric integrator."""

    def __init__(self, profile: FracMinProfile):
        self.segments = superlevel_segments(profile)
        self._uppers = [float(s[1]) for s in self.segments]
        self._cd = [(float(s[2]), float(s[3])) for s in self.segments]
        self.max_y = float(self.segments[-1][1]) if self.segments else 0.0

    def mu(self, y: float) -> float:
        if y < 0:
            raise ValueError("negative superlevel threshold")
        if y >= self.max_y:
            return 0.0
        i = bisect.bisect_right(self._uppers, y)
        if i >= len(self._cd):
            return 0.0
        c, d = self._cd[i]
        return c + d * y
