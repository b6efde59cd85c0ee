"""Shared domain types for the angular gap-distribution toolkit.

The geometry: an observer sits at (-t*J^2, 0) with t = num/den > 0 an exact
rational, and looks at the (2J+1)(J+1) integer points of the box
[-J, J] x [0, J].  The limiting gap distribution of the angular spacings,
as a function of the spacing multiplier lambda, is piecewise expressible in
the eight-term basis

    {1, t, lambda*t, lambda*t^2, t*log(lambda), lambda*t*log(lambda),
     t*log(t), lambda*t*log(t)}

with exact coefficients on regions of the (lambda, t) quadrant bounded by
lines lambda=c, t=c, lambda*t=c.  This module holds the exact types for
scenes, sampled curves, coefficient vectors, regions, and region atlases,
plus the JSON wire format for atlases.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Union

from .exactconst import ExactConst

Real = Union[int, float, Fraction]

BASIS_NAMES = (
    "1", "t", "lam*t", "lam*t^2",
    "t*log(lam)", "lam*t*log(lam)", "t*log(t)", "lam*t*log(t)",
)


def parse_rational(text: str | Fraction | int) -> Fraction:
    """Parse "p/q", an integer string, or a decimal string into an exact Fraction.

    Decimals convert exactly over a power of ten ("0.35" -> 7/20), so the
    command line can accept either form without losing exactness.
    """
    if isinstance(text, (Fraction, int)):
        return Fraction(text)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"not a rational: {text!r}") from e


@dataclass(frozen=True)
class Scene:
    """An observer/box configuration: observer at (-t*J^2, 0), box [-J,J]x[0,J]."""

    t: Fraction
    J: int

    def __post_init__(self):
        if not isinstance(self.t, Fraction):
            object.__setattr__(self, "t", Fraction(self.t))
        if self.t <= 0:
            raise ValueError(f"t must be positive, got {self.t}")
        if self.J < 1:
            raise ValueError(f"J must be >= 1, got {self.J}")

    @property
    def observer_x(self) -> Fraction:
        return -self.t * self.J * self.J

    @property
    def n_points(self) -> int:
        return (2 * self.J + 1) * (self.J + 1)


@dataclass
class GapCurve:
    """A sampled gap-distribution curve: values of G on an increasing lambda grid."""

    lambdas: list[float]
    values: list[float]
    engine: str = ""
    scene: Optional[Scene] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.lambdas) != len(self.values):
            raise ValueError("lambdas and values must have equal length")
        if any(b < a for a, b in zip(self.lambdas, self.lambdas[1:])):
            raise ValueError("lambda grid must be non-decreasing")


class KappaVector:
    """Eight exact coefficients over the gap-law basis (see module docstring)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = [c if isinstance(c, ExactConst) else ExactConst(Fraction(c)) for c in coeffs]
        if len(cs) != 8:
            raise ValueError(f"expected 8 coefficients, got {len(cs)}")
        self.coeffs: tuple[ExactConst, ...] = tuple(cs)

    def __getitem__(self, i: int) -> ExactConst:
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, KappaVector) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "KappaVector") -> "KappaVector":
        return KappaVector([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, q) -> "KappaVector":
        return KappaVector([c * q for c in self.coeffs])

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def __repr__(self) -> str:
        return "KappaVector(" + ", ".join(repr(c) for c in self.coeffs) + ")"


ZERO_KAPPA = KappaVector([0] * 8)


def eval_kappa_basis(kappa: KappaVector, t: Real, lam: Real) -> float:
    """Evaluate k1 + k2*t + k3*lam*t + k4*lam*t^2 + k5*t*log(lam)
    + k6*lam*t*log(lam) + k7*t*log(t) + k8*lam*t*log(t).

    lam = 0 is admitted only when k5 = k6 = 0 (the value is then finite:
    k1 + k2*t + k7*t*log(t)); otherwise the log(lam) terms have no value
    and a ValueError is raised.
    """
    tf, lf = float(t), float(lam)
    if tf <= 0:
        raise ValueError(f"t must be positive, got {t}")
    if lf < 0:
        raise ValueError(f"lambda must be non-negative, got {lam}")
    k = [float(c) for c in kappa]
    logt = math.log(tf)
    if lf == 0:
        if not (kappa[4].is_zero and kappa[5].is_zero):
            raise ValueError("lambda=0 requires zero log(lambda) coefficients (k5, k6)")
        return k[0] + k[1] * tf + k[6] * tf * logt
    logl = math.log(lf)
    return (
        k[0]
        + k[1] * tf
        + k[2] * lf * tf
        + k[3] * lf * tf * tf
        + k[4] * tf * logl
        + k[5] * lf * tf * logl
        + k[6] * tf * logt
        + k[7] * lf * tf * logt
    )


CONSTRAINT_KINDS = ("lambda", "t", "lambda_t")


@dataclass(frozen=True)
class Constraint:
    """One closed half-plane bound of a region: lambda, t, or lambda*t vs c."""

    kind: str  # "lambda" | "t" | "lambda_t"
    op: str    # "<=" | ">="
    c: Fraction

    def __post_init__(self):
        if self.kind not in CONSTRAINT_KINDS:
            raise ValueError(f"bad constraint kind {self.kind!r}")
        if self.op not in ("<=", ">="):
            raise ValueError(f"bad constraint op {self.op!r}")
        if not isinstance(self.c, Fraction):
            object.__setattr__(self, "c", Fraction(self.c))

    def satisfied(self, t: Real, lam: Real) -> bool:
        t = Fraction(t)
        lam = Fraction(lam)
        lhs = {"lambda": lam, "t": t, "lambda_t": lam * t}[self.kind]
        return lhs <= self.c if self.op == "<=" else lhs >= self.c


@dataclass(frozen=True)
class Region:
    """A constraint-bounded region of the (lambda, t) quadrant with its kappa law.

    Constraints are stored closed on both sides, so a border point belongs to
    every adjacent region; adjacent kappa laws agree on shared borders (this
    is validated, not assumed).
    """

    constraints: tuple[Constraint, ...]
    kappa: KappaVector

    def __init__(self, constraints: Iterable[Constraint], kappa: KappaVector):
        object.__setattr__(self, "constraints", tuple(constraints))
        object.__setattr__(self, "kappa", kappa)

    def contains(self, t: Real, lam: Real) -> bool:
        return all(c.satisfied(t, lam) for c in self.constraints)

    def evaluate(self, t: Real, lam: Real) -> float:
        return eval_kappa_basis(self.kappa, t, lam)


@dataclass
class RegionAtlas:
    """A set of regions tiling a strip of the (lambda, t) quadrant.

    ``h`` is the interference depth of the strip 2/(h+1) < t <= 2/h the atlas
    was built for (atlases merged across strips keep the largest h).  The zero
    region {lambda*t >= 2} is always present and listed first.
    """

    h: int
    regions: list[Region]
    t_breakpoints: list[Fraction]

    def __post_init__(self):
        self.t_breakpoints = sorted(Fraction(x) for x in self.t_breakpoints)


def region_lookup(atlas: RegionAtlas, t: Real, lam: Real) -> Optional[Region]:
    """Find the region containing (lambda, t); None when outside the atlas.

    Points with lambda*t >= 2 always land in the zero region.  On shared
    borders several regions match; the first in atlas order is returned
    (their evaluations agree there).
    """
    t = Fraction(t)
    lam = Fraction(lam)
    if t <= 0 or lam < 0:
        raise ValueError("need t > 0 and lambda >= 0")
    for region in atlas.regions:
        if region.contains(t, lam):
            return region
    return None


# -- JSON wire format ------------------------------------------------------

ATLAS_SCHEMA = 1
_KAPPA_KEYS = tuple(f"k{i}" for i in range(1, 9))


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _const_to_json(c: ExactConst) -> dict:
    out = {"rat": _frac_str(c.rat), "log2": _frac_str(c.log_coeff(2))}
    extra = {p: q for p, q in sorted(c.logs.items()) if p != 2}
    if extra:
        out["logs"] = {str(p): _frac_str(q) for p, q in extra.items()}
    return out


def _const_from_json(d: dict) -> ExactConst:
    logs = {2: Fraction(d.get("log2", "0/1"))}
    for p, q in d.get("logs", {}).items():
        logs[int(p)] = Fraction(q)
    return ExactConst(Fraction(d["rat"]), logs)


def atlas_to_json(atlas: RegionAtlas) -> dict:
    return {
        "schema": ATLAS_SCHEMA,
        "h": atlas.h,
        "t_breakpoints": [_frac_str(x) for x in atlas.t_breakpoints],
        "regions": [
            {
                "constraints": [
                    {"kind": c.kind, "op": c.op, "c": _frac_str(c.c)}
                    for c in region.constraints
                ],
                "kappa": {
                    key: _const_to_json(coeff)
                    for key, coeff in zip(_KAPPA_KEYS, region.kappa)
                },
            }
            for region in atlas.regions
        ],
    }


def atlas_from_json(data: dict) -> RegionAtlas:
    if data.get("schema") != ATLAS_SCHEMA:
        raise ValueError(f"unsupported atlas schema {data.get('schema')!r}")
    regions = []
    for rd in data["regions"]:
        constraints = [
            Constraint(cd["kind"], cd["op"], Fraction(cd["c"]))
            for cd in rd["constraints"]
        ]
        kappa = KappaVector([_const_from_json(rd["kappa"][key]) for key in _KAPPA_KEYS])
        regions.append(Region(constraints, kappa))
    return RegionAtlas(
        h=int(data["h"]),
        regions=regions,
        t_breakpoints=[Fraction(x) for x in data["t_breakpoints"]],
    )


def dump_atlas(atlas: RegionAtlas, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(atlas_to_json(atlas), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_atlas(path: str) -> RegionAtlas:
    with open(path) as fh:
        return atlas_from_json(json.load(fh))
