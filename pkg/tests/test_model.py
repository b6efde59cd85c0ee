"""Core model: kappa evaluation, region lookup, atlas JSON round-trip."""

import json
import math
from fractions import Fraction

import pytest

from gaplab import (
    Constraint,
    KappaVector,
    REFERENCE_ROWS,
    Scene,
    atlas_from_json,
    atlas_to_json,
    eval_kappa_basis,
    gap_closed,
    parse_rational,
    reference_atlas,
    region_lookup,
)
from gaplab.exactconst import ExactConst, LOG2


def test_parse_rational():
    assert parse_rational("11/10") == Fraction(11, 10)
    assert parse_rational("0.35") == Fraction(7, 20)
    assert parse_rational("3") == Fraction(3)
    with pytest.raises(ValueError):
        parse_rational("abc")


def test_scene_invariants():
    scene = Scene(Fraction(3, 2), 10)
    assert scene.observer_x == Fraction(-150)
    assert scene.n_points == 21 * 11
    with pytest.raises(ValueError):
        Scene(Fraction(-1), 5)
    with pytest.raises(ValueError):
        Scene(Fraction(1), 0)


def test_eval_kappa_reference_row():
    # the no-interference law at (t=3, lam=0.4): 1 - lam*t/2 = 0.4
    k = KappaVector([1, 0, Fraction(-1, 2), 0, 0, 0, 0, 0])
    assert eval_kappa_basis(k, 3, 0.4) == pytest.approx(0.4, abs=1e-15)


def test_eval_kappa_constant_vector():
    k = KappaVector([1, 0, 0, 0, 0, 0, 0, 0])
    for t, lam in [(0.3, 0.0), (5, 2.0), (1.7, 0.123)]:
        assert eval_kappa_basis(k, t, lam) == 1.0


def test_eval_kappa_derived_row():
    # Independent oracle: the two-branch law's second branch evaluated
    # directly at (t, lam) = (3/2, 1):  1 - lam*t/2 + lam*t*log(lam*t/2)
    # - lam*t^2/2 + t
    t, lam = 1.5, 1.0
    expected = 1 - lam * t / 2 + lam * t * math.log(lam * t / 2) - lam * t * t / 2 + t
    assert expected == pytest.approx(0.19347689132232865, abs=1e-15)
    k = KappaVector([1, 1, ExactConst(Fraction(-1, 2)) - LOG2, Fraction(-1, 2), 0, 1, 0, 1])
    assert eval_kappa_basis(k, t, lam) == pytest.approx(expected, abs=1e-13)


def test_eval_kappa_lambda_zero():
    k = KappaVector([1, 0, 1, 0, 0, 0, 0, 0])
    assert eval_kappa_basis(k, 2.0, 0.0) == 1.0
    k_bad = KappaVector([1, 0, 0, 0, 1, 0, 0, 0])
    with pytest.raises(ValueError):
        eval_kappa_basis(k_bad, 2.0, 0.0)


def test_region_lookup_examples():
    atlas = reference_atlas()
    assert region_lookup(atlas, 3, Fraction(1, 10)).kappa == REFERENCE_ROWS[1]
    assert region_lookup(atlas, 1, 5).kappa == REFERENCE_ROWS[0]  # zero region
    assert region_lookup(atlas, Fraction(41, 50), Fraction(3, 2)).kappa == REFERENCE_ROWS[6]
    assert region_lookup(atlas, Fraction(1, 2), Fraction(1, 2)) is None  # outside


def test_region_lookup_is_partition_on_interiors():
    atlas = reference_atlas()
    import random

    rng = random.Random(3)
    for _ in range(300):
        t = Fraction(rng.randint(68, 399), 100)  # inside (2/3, 4)
        lam = Fraction(rng.randint(1, 499), 100)
        matches = [r for r in atlas.regions if r.contains(t, lam)]
        border = any(
            con.c == (lam if con.kind == "lambda" else t if con.kind == "t" else lam * t)
            for r in matches
            for con in r.constraints
        )
        if not border:
            assert len(matches) == 1, (t, lam, len(matches))


def test_reference_rows_roundtrip_against_closed_forms():
    """Evaluating the reference rows on their regions reproduces the
    closed-form laws pointwise to 1e-12."""
    atlas = reference_atlas()
    import numpy as np

    for t in [Fraction(p, 20) for p in range(14, 81)]:
        for lam in np.arange(0.0, float(2 / t) + 0.02, 0.02):
            lam = Fraction(lam).limit_denominator(10**7)
            region = region_lookup(atlas, t, lam)
            assert region is not None, (t, lam)
            if lam == 0 and not (region.kappa[4].is_zero and region.kappa[5].is_zero):
                continue
            got = region.evaluate(t, lam)
            want = gap_closed(t, lam)
            assert got == pytest.approx(want, abs=1e-12), (t, lam)


def test_border_points_evaluate_equally():
    atlas = reference_atlas()
    # lambda = 1 border between the two mid-range regions, t in [1, 2]
    for t in (Fraction(5, 4), Fraction(3, 2), Fraction(2)):
        vals = {
            round(r.evaluate(t, 1), 13)
            for r in atlas.regions
            if r.contains(t, 1)
        }
        assert len(vals) == 1


def test_atlas_json_roundtrip():
    atlas = reference_atlas()
    doc = atlas_to_json(atlas)
    text = json.dumps(doc)
    back = atlas_from_json(json.loads(text))
    assert back.h == atlas.h
    assert back.t_breakpoints == atlas.t_breakpoints
    assert len(back.regions) == len(atlas.regions)
    for a, b in zip(atlas.regions, back.regions):
        assert a.constraints == b.constraints
        assert a.kappa == b.kappa


def test_atlas_json_kappa_format():
    doc = atlas_to_json(reference_atlas())
    assert doc["schema"] == 1
    row7 = doc["regions"][7]["kappa"]
    assert row7["k2"] == {"rat": "-2/1", "log2": "2/1"}
    assert row7["k3"] == {"rat": "1/2", "log2": "1/2"}
    assert doc["t_breakpoints"] == ["2/3", "1/1", "2/1"]


def test_constraint_validation():
    with pytest.raises(ValueError):
        Constraint("bogus", "<=", Fraction(1))
    with pytest.raises(ValueError):
        Constraint("lambda", "<", Fraction(1))
