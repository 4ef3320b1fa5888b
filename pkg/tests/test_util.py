# -*- coding: utf-8 -*-

"""
Test the utils lib.
"""

import numpy as np
import pytest

from splinelab.util import (SlopeError, child_seed, fit_slope, format_float,
                            gauss_legendre, parse_floats, parse_ints)


def test_fit_slope():
    """Test ``fit_slope()``."""
    assert fit_slope([(0, 1), (1, 3)]) == (2.0, 0.0)

    slope, std_error = fit_slope([(0, 1), (1, 3), (2, 5), (3, 7)])
    assert slope == pytest.approx(2.0)
    assert std_error == pytest.approx(0.0, abs=1e-12)

    points = [(n, n ** -0.5) for n in (50, 100, 200, 400, 800)]
    slope, _ = fit_slope(points, log_log=True)
    assert slope == pytest.approx(-0.5, abs=1e-12)


def test_fit_slope_errors():
    with pytest.raises(SlopeError):
        fit_slope([(1, 2)])
    with pytest.raises(SlopeError):
        fit_slope([(1, 2), (1, 3), (1, 4)])
    with pytest.raises(SlopeError):
        fit_slope([(1, 2), (2, 0)], log_log=True)


def test_child_seed():
    assert child_seed(7, 100, 3) == child_seed(7, 100, 3)
    seeds = {child_seed(7, n, r) for n in (50, 100) for r in range(50)}
    assert len(seeds) == 100
    assert child_seed(7, 100, 3) != child_seed(8, 100, 3)
    assert 0 <= child_seed(7, 100, 3) < 2 ** 64


def test_gauss_legendre():
    knots, weights = gauss_legendre(0.2, 0.7, 5)
    assert np.all((knots > 0.2) & (knots < 0.7))
    assert weights.sum() == pytest.approx(0.5)
    assert weights.dot(knots ** 5) == pytest.approx((0.7 ** 6 - 0.2 ** 6) / 6)


def test_parse():
    assert parse_floats('0.1, 0.25') == [0.1, 0.25]
    assert parse_floats('') == []
    assert parse_floats('  ') == []
    assert parse_ints('50, 100,200') == [50, 100, 200]
    with pytest.raises(ValueError):
        parse_floats('0.1, spam')


def test_format_float():
    assert format_float(0.1) == '0.1'
    assert format_float(2) == '2.0'
    assert float(format_float(1 / 3.0)) == 1 / 3.0
