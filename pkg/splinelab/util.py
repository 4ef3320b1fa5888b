# -*- coding: utf-8 -*-

"""
Utilities and stuff.
"""

import logging

import numpy as np
from scipy import stats


log = logging.getLogger(__name__)


class SlopeError(ValueError):
    """Raised when a regression line can't be fit to the given points."""


def child_seed(base_seed, *keys):
    """
    Derive a 64-bit seed for one task from ``base_seed`` and integer keys.

    The mixing is ``numpy.random.SeedSequence([base_seed, *keys])`` reduced
    to one 64-bit word, so it depends only on the keys and never on the
    order tasks run in.

    :param base_seed:
        Plan-level seed

    :param keys:
        Task coordinates (e.g. sample size and replicate index)
    """
    entropy = [int(base_seed)] + [int(k) for k in keys]
    seq = np.random.SeedSequence(entropy)
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def gauss_legendre(a, b, n):
    """
    Return Gauss-Legendre nodes and weights mapped onto ``[a, b]``.

    :param a:
        Lower bound

    :param b:
        Upper bound

    :param n:
        Number of nodes
    """
    knots, weights = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return half * knots + 0.5 * (b + a), half * weights


def fit_slope(points, log_log=False):
    """
    Ordinary least-squares slope through ``points``.

    :param points:
        Iterable of (x, y) pairs

    :param log_log:
        Fit ``log y`` against ``log x`` instead

    :returns:
        Tuple of (slope, std_error)
    """
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or len(pts) < 2:
        raise SlopeError('Need at least 2 points to fit a slope.')

    x, y = pts[:, 0], pts[:, 1]
    if log_log:
        if np.any(x <= 0) or np.any(y <= 0):
            raise SlopeError('log-log slope needs positive coordinates.')
        x, y = np.log(x), np.log(y)

    if np.ptp(x) == 0:
        raise SlopeError('All x values are identical: %r' % (x[0],))

    if len(x) == 2:
        return float((y[1] - y[0]) / (x[1] - x[0])), 0.0

    result = stats.linregress(x, y)
    log.debug('fit_slope: slope=%r stderr=%r', result.slope, result.stderr)
    return float(result.slope), float(result.stderr)


def parse_floats(value):
    """
    Turn a comma-separated string into a list of floats.

    :param value:
        String like ``'0.1, 0.25'``
    """
    if not value or not value.strip():
        return []
    return [float(v) for v in value.split(',') if v.strip()]


def parse_ints(value):
    """Turn a comma-separated string into a list of ints."""
    return [int(v) for v in parse_floats(value)]


def format_float(value):
    """Format a float for CSV so that repeated runs are byte-identical."""
    return repr(float(value))
