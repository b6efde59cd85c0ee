"""Shared fixtures: expensive simulations are computed once per session."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import pytest

from gaplab import Scene, enumerate_and_sort, gap_sequence


@lru_cache(maxsize=None)
def cached_gaps(t_num: int, t_den: int, J: int):
    scene = Scene(Fraction(t_num, t_den), J)
    return gap_sequence(enumerate_and_sort(scene))


@pytest.fixture(scope="session")
def gaps_for():
    """Callable fixture: gaps_for(t, J) with session-wide caching."""

    def _get(t: Fraction, J: int):
        t = Fraction(t)
        return cached_gaps(t.numerator, t.denominator, J)

    return _get
