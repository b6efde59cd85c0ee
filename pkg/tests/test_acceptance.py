"""Acceptance suite: the nine package-level criteria.

Each test prints one PASS/FAIL line (run pytest with -s to see them all) and
enforces both the stated tolerance and the stated runtime budget.
"""

import random
import time
from fractions import Fraction

import numpy as np
import pytest

from gaplab import (
    REFERENCE_ROWS,
    build_profile,
    build_strip_atlas,
    check_boundary_relations,
    curve_from_gaps,
    density_closed,
    density_from_kappa,
    gap_closed,
    gap_numeric,
    reference_atlas,
    superlevel_measure,
    validate_atlas,
)
from gaplab.general import _shared_borders

from test_general import random_config, x_integral_oracle


def report(criterion: int, ok: bool, detail: str, elapsed: float, budget: float):
    status = "PASS" if ok and elapsed < budget else "FAIL"
    print(f"ACCEPTANCE {criterion}: {status} {detail} [{elapsed:.2f}s < {budget:.0f}s]")
    assert ok, f"criterion {criterion}: {detail}"
    assert elapsed < budget, f"criterion {criterion} exceeded {budget}s ({elapsed:.2f}s)"


def test_criterion_1_reference_table_reproduction():
    """Strips h=0,1,2 regenerate all eight reference coefficient rows with
    zero residual, in exact rational(+log 2) arithmetic."""
    start = time.perf_counter()
    expected = {0: [1], 1: [2, 3], 2: [4, 5, 6, 7]}
    ref = reference_atlas()
    ok = True
    for h, indices in expected.items():
        atlas = build_strip_atlas(h)
        rows = [region.kappa for region in atlas.regions]
        ok &= rows[0] == REFERENCE_ROWS[0]
        ok &= len(rows) == len(indices) + 1
        for region, idx in zip(atlas.regions[1:], indices):
            ok &= region.kappa == REFERENCE_ROWS[idx]
            ok &= set(region.constraints) == set(ref.regions[idx].constraints)
    report(1, ok, "strips h=0,1,2 regenerate all 8 reference rows exactly",
           time.perf_counter() - start, 5.0)


def test_criterion_2_border_relations():
    """All adjacent reference-region pairs satisfy the border identities
    exactly; generated h=3,4 atlases are continuous across every border to
    1e-12."""
    start = time.perf_counter()
    ok = True
    ref = reference_atlas()
    adjacent = 0
    for i in range(len(ref.regions)):
        for j in range(i + 1, len(ref.regions)):
            for kind, c, lo, hi in _shared_borders(ref.regions[i], ref.regions[j]):
                adjacent += 1
                res = check_boundary_relations(ref.regions[i].kappa,
                                               ref.regions[j].kappa, (kind, c))
                ok &= all(r.is_zero for r in res)
    ok &= adjacent >= 10
    for h in (3, 4):
        rep = validate_atlas(build_strip_atlas(h), samples_per_border=100, tol=1e-12)
        ok &= rep.ok
    report(2, ok, f"{adjacent} reference borders exact; h=3,4 continuous to 1e-12",
           time.perf_counter() - start, 30.0)


def test_criterion_3_engine_equivalence():
    """sup |general - closed| <= 1e-7 on the closed-form range."""
    start = time.perf_counter()
    worst = 0.0
    for t in (Fraction(3), Fraction(3, 2), Fraction(11, 10), Fraction(41, 50)):
        for lam in np.arange(0, float(2 / t) + 0.01, 0.01):
            worst = max(worst, abs(gap_numeric(t, lam) - gap_closed(t, lam)))
    report(3, worst <= 1e-7, f"sup |general - closed| = {worst:.2e} <= 1e-7",
           time.perf_counter() - start, 60.0)


def test_criterion_4_figure_level_match(gaps_for):
    """Empirical J=50 curves match the closed forms to 0.03 sup-norm at the
    published-figure settings, and J=200 does not get worse."""
    start = time.perf_counter()
    ok = True
    details = []
    for t in (Fraction(11, 10), Fraction(41, 50)):
        grid = np.arange(0, float(2 / t) + 0.01, 0.01).tolist()
        closed_vals = [gap_closed(t, lam) for lam in grid]
        sups = {}
        for J in (50, 200):
            emp = curve_from_gaps(gaps_for(t, J), grid).values
            sups[J] = max(abs(a - b) for a, b in zip(emp, closed_vals))
        ok &= sups[50] <= 0.03 and sups[200] <= sups[50]
        details.append(f"t={t}: J50={sups[50]:.4f} J200={sups[200]:.4f}")
    report(4, ok, "; ".join(details), time.perf_counter() - start, 120.0)


def test_criterion_5_beyond_tabulated_range(gaps_for):
    """For t = 1/2 and 7/20 the empirical curves converge to the general
    evaluator: sup-norm <= 0.03 at J=400 and decreasing from J=200."""
    start = time.perf_counter()
    ok = True
    details = []
    for t in (Fraction(1, 2), Fraction(7, 20)):
        grid = np.arange(0, float(2 / t) + 0.01, 0.01).tolist()
        general_vals = [gap_numeric(t, lam) for lam in grid]
        sups = {}
        for J in (200, 400):
            emp = curve_from_gaps(gaps_for(t, J), grid).values
            sups[J] = max(abs(a - b) for a, b in zip(emp, general_vals))
        ok &= sups[400] <= 0.03 and sups[400] <= sups[200]
        details.append(f"t={t}: J200={sups[200]:.4f} J400={sups[400]:.4f}")
    report(5, ok, "; ".join(details), time.perf_counter() - start, 600.0)


def test_criterion_6_superlevel_oracle():
    """Exact superlevel measures match a million-point grid measure within
    2e-3 for every pair k, r <= 6."""
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    n = 1_000_000
    z = (np.arange(n) + 0.5) / n
    ok = True
    worst = 0.0
    for k in range(7):
        for r in range(7):
            if k + r < 1:
                continue
            fvals = np.ones(n)
            for j in range(-k, r + 1):
                if j == 0:
                    continue
                np.minimum(fvals, np.mod(j * z, 1.0), out=fvals)
            fvals.sort()
            profile = build_profile(k, r)
            ys = rng.uniform(0, float(profile.max_value) * 1.02, size=50)
            grid_measures = (n - np.searchsorted(fvals, ys, side="left")) / n
            for y, gm in zip(ys, grid_measures):
                exact = float(superlevel_measure(profile, Fraction(y).limit_denominator(10**9)))
                worst = max(worst, abs(exact - gm))
    ok = worst <= 2e-3
    report(6, ok, f"48 pairs x 50 thresholds, worst |exact - grid| = {worst:.2e}",
           time.perf_counter() - start, 30.0)


def test_criterion_7_collapse_identity():
    """The inner double integral equals the (S - R) * superlevel product on
    20 random configurations (the single-branch case reduces to
    (S - R)(1 - y))."""
    start = time.perf_counter()
    rng = random.Random(23)
    worst = 0.0
    single_branch_checked = False
    for _ in range(20):
        k, r, t, w, lam = random_config(rng)
        oracle = float(x_integral_oracle(k, r, t, w, lam))
        R = max(k * t / w**2 - 1 / w, 1 / w - (r + 1) * t / w**2)
        S = min((k + 1) * t / w**2 - 1 / w, 1 / w - r * t / w**2)
        if k + r == 1:
            y = lam * t / (2 * w)
            if y < 1:
                assert abs(oracle - float((S - R) * (1 - y))) < 1e-15
                single_branch_checked = True
        mu = (superlevel_measure(build_profile(k, r), lam * t / (2 * w))
              if k + r >= 1 else Fraction(1))
        product = float((S - R) * mu)
        worst = max(worst, abs(oracle - product))
    report(7, worst <= 1e-8,
           f"20 configs, worst |2-D quadrature - product| = {worst:.2e}"
           + ("; single-branch case hit" if single_branch_checked else ""),
           time.perf_counter() - start, 10.0)


def test_criterion_8_density_consistency():
    """Densities match -dG/dlam by centered differences away from branch
    points, and the exact derivative relations hold for every reference row."""
    start = time.perf_counter()
    rng = random.Random(5)
    eps = 1e-4
    worst = 0.0
    checked = 0
    while checked < 500:
        t = rng.uniform(0.67, 4.0)
        lam = rng.uniform(eps, 2 / t - eps)
        if any(abs(lam - bp) < 0.01 for bp in (1.0, 2.0, 1 / t, 2 / t)):
            continue
        fd = -(gap_closed(t, lam + eps) - gap_closed(t, lam - eps)) / (2 * eps)
        worst = max(worst, abs(density_closed(t, lam) - fd))
        checked += 1
    ok = worst <= 1e-6
    # exact derivative relations on the reference rows
    for row in REFERENCE_ROWS:
        alpha = density_from_kappa(row)
        k = row.coeffs
        ok &= alpha.coeffs[0] == -(k[2]) - k[5]
        ok &= alpha.coeffs[1] == -(k[3])
        ok &= alpha.coeffs[2] == -(k[4])
        ok &= alpha.coeffs[3] == -(k[5])
        ok &= alpha.coeffs[4] == -(k[7])
    report(8, ok, f"500 centered differences, worst residual {worst:.2e}; "
           "derivative relations exact on all rows",
           time.perf_counter() - start, 5.0)


def test_criterion_9_structural_properties():
    """Monotonicity, normalization at lambda=0, vanishing past 2/t, and the
    t > 2 mass identity (integral of G over [0, 2/t] equals 1/t)."""
    start = time.perf_counter()
    ok = True
    for t in (Fraction(3), Fraction(3, 2), Fraction(41, 50), Fraction(1, 2)):
        grid = np.arange(0, float(2 / t) + 0.05, 0.05)
        closed_ok = float(t) > 2 / 3
        vals = [gap_numeric(t, lam) for lam in grid]
        ok &= all(a >= b - 1e-9 for a, b in zip(vals, vals[1:]))
        ok &= abs(vals[0] - 1.0) < 1e-9
        ok &= gap_numeric(t, float(2 / t) + 0.1) == 0.0
        if closed_ok:
            cvals = [gap_closed(t, lam) for lam in grid]
            ok &= all(a >= b - 1e-12 for a, b in zip(cvals, cvals[1:]))
            ok &= cvals[0] == 1.0
            ok &= gap_closed(t, float(2 / t) + 0.1) == 0.0
    # mass identity for t > 2 by Gauss-Legendre quadrature
    for t in (2.5, 3.0, 6.0):
        x, w = np.polynomial.legendre.leggauss(48)
        b = 2 / t
        integral = b / 2 * sum(wi * gap_closed(t, b / 2 + b / 2 * xi) for xi, wi in zip(x, w))
        ok &= abs(integral - 1 / t) <= 1e-10
    report(9, ok, "monotone, G(0)=1, zero support past 2/t, mass identity 1/t",
           time.perf_counter() - start, 5.0)
