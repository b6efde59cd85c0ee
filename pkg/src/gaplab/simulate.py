"""Brute-force ground truth: exact angular ordering of lattice points.

Every engine in this package is ultimately judged against this one.  The
observer sits at (-t*J^2, 0); rays go to the (2J+1)(J+1) integer points of
[-J, J] x [0, J].  With t = p/q the direction to (a, m) is proportional to
the integer vector (q*a + p*J^2, q*m), so angles sort exactly by the
rational slope q*m / (q*a + p*J^2) -- no rounding enters the order.  Python
integers are arbitrary precision, so the comparator cannot overflow.

Angle gaps are computed per consecutive pair as atan2(cross, dot) of the two
integer direction vectors: one floating-point arctangent of an exactly
computed ratio, which avoids the catastrophic cancellation of subtracting
two nearly equal arctangents when gaps shrink like J^-3.
"""

from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .model import GapCurve, Scene


def worker_count(explicit: Optional[int] = None) -> int:
    """Worker cap: explicit argument, else GAPLAB_THREADS, else 1."""
    if explicit is not None:
        return max(1, explicit)
    env = os.environ.get("GAPLAB_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


@dataclass(frozen=True)
class AngleOrdering:
    """All box points sorted by exact angle from the observer (ties by m, then a)."""

    points: list[tuple[int, int]]
    scene: Scene


@dataclass
class GapSequence:
    """Consecutive angle differences plus the exact average gap."""

    gaps: np.ndarray        # N-1 non-negative gaps, ordering order
    delta_av: float         # alpha_max / N, the exact average
    alpha_max: float
    scene: Scene

    @property
    def sorted_gaps(self) -> np.ndarray:
        if not hasattr(self, "_sorted"):
            object.__setattr__(self, "_sorted", np.sort(self.gaps))
        return self._sorted


def _slope_key(a: int, m: int, p: int, q: int, pj2: int):
    # slope of the ray to (a, m): q*m / (p*J^2 + q*a), exact
    return (Fraction(q * m, pj2 + q * a), m, a)


def _enumerate_rows(scene: Scene, rows: Sequence[int]) -> list[tuple]:
    p, q = scene.t.numerator, scene.t.denominator
    pj2 = p * scene.J * scene.J
    J = scene.J
    out = []
    for m in rows:
        for a in range(-J, J + 1):
            out.append((_slope_key(a, m, p, q, pj2), a, m))
    out.sort(key=lambda e: e[0])
    return out


def enumerate_and_sort(scene: Scene, workers: Optional[int] = None) -> AngleOrdering:
    """Enumerate the box and sort by exact angle.

    Requires t*J^2 > J (observer strictly left of the box), which puts every
    angle in [0, pi/2) and makes angle order equal slope order.  Rows can be
    enumerated by parallel workers; the merge is by the same total key
    (slope, m, a), so the output is identical for any worker count.
    """
    if scene.t * scene.J * scene.J <= scene.J:
        raise ValueError(
            f"need t*J^2 > J for a well-posed ordering (t={scene.t}, J={scene.J})"
        )
    n = worker_count(workers)
    rows = list(range(scene.J + 1))
    if n <= 1 or len(rows) < 2 * n:
        chunks = [_enumerate_rows(scene, rows)]
    else:
        blocks = [rows[i::n] for i in range(n)]
        try:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=n) as pool:
                chunks = list(pool.map(_enumerate_rows, [scene] * n, blocks))
        except (OSError, PermissionError):  # restricted environments
            chunks = [_enumerate_rows(scene, rows)]
    entries = heapq.merge(*chunks, key=lambda e: e[0]) if len(chunks) > 1 else chunks[0]
    points = [(a, m) for _, a, m in entries]
    assert len(points) == scene.n_points
    return AngleOrdering(points, scene)


def gap_sequence(ordering: AngleOrdering) -> GapSequence:
    """Angle gaps between consecutive rays, via exact cross/dot per pair."""
    scene = ordering.scene
    p, q = scene.t.numerator, scene.t.denominator
    pj2 = p * scene.J * scene.J
    pts = ordering.points
    n = len(pts)
    gaps = np.empty(n - 1)
    x1 = pj2 + q * pts[0][0]
    y1 = q * pts[0][1]
    for i in range(1, n):
        x2 = pj2 + q * pts[i][0]
        y2 = q * pts[i][1]
        cross = x1 * y2 - x2 * y1
        dot = x1 * x2 + y1 * y2
        if dot <= 0:
            raise RuntimeError("angle >= pi/2 encountered; scene violates t*J^2 > J")
        gaps[i - 1] = math.atan2(cross, dot)
        x1, y1 = x2, y2
    alpha_max = math.atan2(y1, x1)
    return GapSequence(gaps=gaps, delta_av=alpha_max / n, alpha_max=alpha_max, scene=scene)


def curve_from_gaps(seq: GapSequence, lambdas: Sequence[float]) -> GapCurve:
    """Empirical gap distribution on a grid: share of gaps >= lam * delta_av.

    The count is over the N-1 consecutive gaps and the normalization is by
    N, matching the definition of the finite-J distribution function.
    """
    lams = np.asarray(list(lambdas), dtype=float)
    if np.any(np.diff(lams) < 0) or np.any(lams < 0):
        raise ValueError("lambda grid must be increasing and non-negative")
    srt = seq.sorted_gaps
    n = len(seq.gaps) + 1
    counts = len(srt) - np.searchsorted(srt, lams * seq.delta_av, side="left")
    return GapCurve(
        lambdas=lams.tolist(),
        values=(counts / n).tolist(),
        engine="simulate",
        scene=seq.scene,
        meta={"delta_av": seq.delta_av, "alpha_max": seq.alpha_max, "n_points": n},
    )


def empirical_curve(scene: Scene, lambdas: Sequence[float],
                    workers: Optional[int] = None) -> GapCurve:
    """Enumerate, sort, and tabulate the empirical gap distribution."""
    return curve_from_gaps(gap_sequence(enumerate_and_sort(scene, workers)), lambdas)


def interference_region(a: int, m: int, scene: Scene) -> tuple[int, int]:
    """The unique interference pair (k, r) of the point (a, m), m >= 1.

    The next-seen point after (a, m) can only lie on rows m-k .. m+r, where
    the band indices satisfy (exactly, in integers)

        k*t*J^2/m - J <= a <= (k+1)*t*J^2/m - J
        J - (r+1)*t*J^2/m <= a <= J - r*t*J^2/m.

    Points on a band boundary are assigned the lower (k, r).
    """
    if m < 1:
        raise ValueError(f"interference pair undefined for m={m} < 1")
    if not (-scene.J <= a <= scene.J and m <= scene.J):
        raise ValueError(f"point ({a}, {m}) outside the box of J={scene.J}")
    p, q = scene.t.numerator, scene.t.denominator
    den = p * scene.J * scene.J

    def band(num: int) -> int:
        # index i with i <= num/den <= i+1, boundaries resolved downward
        if num <= 0:
            return 0
        return -((-num) // den) - 1  # ceil(num/den) - 1

    k = band((a + scene.J) * m * q)
    r = band((scene.J - a) * m * q)
    return k, r


def model_gap(a: int, m: int, scene: Scene) -> float:
    """Leading-order predicted gap from (a, m) to the next point seen.

    min over the interference band of the projected fractional-part
    distances, scaled by (m+j)/(t^2 J^4); the j=0 entry is the same-row gap
    m/(t^2 J^4).  Diagnostic companion to the exact gap_sequence.
    """
    k, r = interference_region(a, m, scene)
    p, q = scene.t.numerator, scene.t.denominator
    t = float(scene.t)
    J = scene.J
    scale = 1.0 / (t * t * J ** 4)
    best = m * scale
    num = p * J * J + q * a  # (t*J^2 + a) * q
    for j in range(-k, r + 1):
        if j == 0:
            continue
        frac = (j * num) % (q * m) / (q * m)
        cand = frac * (m + j) * scale
        if cand < best:
            best = cand
    return best
