# -*- coding: utf-8 -*-

"""
Synthetic observations ``y_i = mu(t_i) + eps_i`` and the population-limit
objective.

Designs are piecewise-constant densities on [0, 1] sampled by inverse CDF.
Every random draw goes through ``numpy.random.default_rng(seed)``: the design
is drawn first, then the noise, so a seed fixes a dataset bit for bit.
"""

import csv
import logging
import math

import attr
import numpy as np

from . import constants, util
from .rkhs import SpanElement, check_points


log = logging.getLogger(__name__)


__all__ = (
    'InvalidDensity', 'QuadratureError', 'DesignDistribution', 'NoiseModel',
    'Dataset', 'FunctionalSpec', 'sample_design', 'sample_dataset',
    'functional_apply', 'f_infinity', 'gateaux_first', 'gateaux_second',
    'read_dataset',
)


class InvalidDensity(ValueError):
    """Raised when a design density is not a valid positive density."""


class QuadratureError(ValueError):
    """Raised for an unusable quadrature rule."""


def _frozen(value):
    arr = np.array(value, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


@attr.s(frozen=True, eq=False)
class DesignDistribution(object):
    """
    Piecewise-constant design density on [0, 1].

    The uniform design is the one-bin case ``edges=(0, 1)``. Weights are the
    relative mass of each bin and are normalized internally.

    :param kind:
        ``'uniform'`` or ``'piecewise'``

    :param edges:
        Ascending bin edges in [0, 1]

    :param weights:
        Strictly positive bin weights, one per bin
    """
    kind = attr.ib(default='uniform')
    edges = attr.ib(converter=_frozen, default=(0.0, 1.0))
    weights = attr.ib(converter=_frozen, default=(1.0,))

    def __attrs_post_init__(self):
        if self.kind not in ('uniform', 'piecewise'):
            raise InvalidDensity('Unknown design kind: %r' % (self.kind,))
        edges, weights = self.edges, self.weights
        if edges.size < 2 or weights.size != edges.size - 1:
            raise InvalidDensity(
                'Need len(edges) == len(weights) + 1; got %d edges, %d '
                'weights' % (edges.size, weights.size)
            )
        if np.any(np.diff(edges) <= 0):
            raise InvalidDensity('Bin edges must be strictly ascending.')
        if edges[0] < 0.0 or edges[-1] > 1.0:
            raise InvalidDensity('Bin edges must lie in [0, 1].')
        if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
            raise InvalidDensity(
                'Bin weights must be strictly positive; got %s' % (
                    weights.tolist(),)
            )
        if edges[0] > 0.0 or edges[-1] < 1.0:
            log.warning(
                'Design density is zero outside [%r, %r]; positivity on '
                '[0, 1] does not hold.', float(edges[0]), float(edges[-1])
            )

    @classmethod
    def uniform(cls):
        return cls('uniform')

    @classmethod
    def piecewise(cls, edges, weights):
        return cls('piecewise', edges, weights)

    @property
    def mass(self):
        """Normalized probability of each bin."""
        return self.weights / self.weights.sum()

    @property
    def heights(self):
        """Density value on each bin."""
        return self.mass / np.diff(self.edges)

    @property
    def _cumulative(self):
        return np.concatenate([[0.0], np.cumsum(self.mass)])

    def _bin(self, t):
        idx = np.searchsorted(self.edges, t, side='right') - 1
        return np.clip(idx, 0, self.weights.size - 1)

    def pdf(self, t):
        """Density at ``t``; zero outside the outer edges."""
        t_ = check_points(t)
        inside = (t_ >= self.edges[0]) & (t_ <= self.edges[-1])
        value = np.where(inside, self.heights[self._bin(t_)], 0.0)
        return float(value) if np.ndim(t) == 0 else value

    def cdf(self, t):
        """Cumulative distribution at ``t``."""
        t_ = check_points(t)
        idx = self._bin(t_)
        lo = self.edges[idx]
        value = self._cumulative[idx] + self.heights[idx] * (
            np.clip(t_, self.edges[0], self.edges[-1]) - lo)
        value = np.clip(value, 0.0, 1.0)
        return float(value) if np.ndim(t) == 0 else value

    def ppf(self, u):
        """Inverse CDF for ``u`` in [0, 1)."""
        u = np.asarray(u, dtype=float)
        cum = self._cumulative
        idx = np.clip(np.searchsorted(cum, u, side='right') - 1,
                      0, self.weights.size - 1)
        width = np.diff(self.edges)[idx]
        t = self.edges[idx] + (u - cum[idx]) / self.mass[idx] * width
        return np.clip(t, self.edges[0], self.edges[-1])

    def sample(self, n, rng):
        """Draw ``n`` iid points using ``rng``."""
        if n < 1:
            raise ValueError('Sample size must be >= 1; got %r' % (n,))
        return self.ppf(rng.random(n))

    @property
    def breakpoints(self):
        return self.edges


@attr.s(frozen=True)
class NoiseModel(object):
    """
    Centered noise with standard deviation ``sigma``.

    ``uniform`` draws from ``[-sigma*sqrt(3), sigma*sqrt(3)]`` so both kinds
    share the same variance.
    """
    kind = attr.ib(default='gaussian')
    sigma = attr.ib(converter=float, default=0.0)

    @kind.validator
    def _check_kind(self, attribute, value):
        if value not in ('gaussian', 'uniform'):
            raise ValueError('Unknown noise kind: %r' % (value,))

    @sigma.validator
    def _check_sigma(self, attribute, value):
        if not value >= 0.0:
            raise ValueError('sigma must be >= 0; got %r' % (value,))

    def draw(self, n, rng):
        if self.kind == 'gaussian':
            return self.sigma * rng.standard_normal(n)
        half = self.sigma * math.sqrt(3.0)
        return rng.uniform(-half, half, n)


@attr.s(frozen=True, eq=False)
class Dataset(object):
    """Design points, responses and the generating truth."""
    design = attr.ib(converter=_frozen)
    responses = attr.ib(converter=_frozen)
    sigma = attr.ib(converter=float, default=0.0)
    seed = attr.ib(default=None)
    truth = attr.ib(default=None)

    def __attrs_post_init__(self):
        if self.design.shape != self.responses.shape:
            raise ValueError(
                'Got %d design points but %d responses' % (
                    self.design.size, self.responses.size)
            )
        check_points(self.design, 'design')

    @property
    def n(self):
        return self.design.size


@attr.s(frozen=True)
class FunctionalSpec(object):
    """
    A bounded linear functional ``F``: evaluation at ``t`` or pairing with
    ``xi``.
    """
    kind = attr.ib()
    t = attr.ib(default=None)
    xi = attr.ib(default=None)

    def __attrs_post_init__(self):
        if self.kind == 'point':
            check_points(self.t)
        elif self.kind == 'inner':
            if not isinstance(self.xi, SpanElement):
                raise ValueError('inner functional needs a SpanElement xi')
        else:
            raise ValueError('Unknown functional kind: %r' % (self.kind,))

    @classmethod
    def point(cls, t):
        return cls('point', t=float(t))

    @classmethod
    def inner(cls, xi):
        return cls('inner', xi=xi)

    def representer(self, space):
        """The element ``xi`` with ``F(mu) = (mu, xi)``."""
        if self.kind == 'point':
            return space.representer(self.t)
        return self.xi

    def __str__(self):
        if self.kind == 'point':
            return 'point(%r)' % (self.t,)
        return 'inner(%r)' % (self.xi,)


def sample_design(dist, n, seed):
    """
    Draw ``n`` design points from ``dist``.

    :param dist:
        A :class:`DesignDistribution`

    :param n:
        Sample size

    :param seed:
        Integer seed
    """
    return dist.sample(n, np.random.default_rng(seed))


def sample_dataset(space, truth, dist, noise, n, seed):
    """
    Draw a dataset ``y_i = truth(t_i) + eps_i``.

    :param space:
        A :class:`~splinelab.rkhs.KernelSpace`

    :param truth:
        The true element

    :param dist:
        Design distribution

    :param noise:
        A :class:`NoiseModel`

    :param n:
        Sample size

    :param seed:
        Integer seed
    """
    rng = np.random.default_rng(seed)
    design = dist.sample(n, rng)
    eps = noise.draw(n, rng)
    responses = space.evaluate(truth, design) + eps
    return Dataset(design, responses, noise.sigma, seed, truth)


def read_dataset(path):
    """
    Read a CSV file with columns ``t`` and ``y``.

    :param path:
        File path
    """
    design, responses = [], []
    with open(path, newline='') as fh:
        reader = csv.DictReader(fh)
        missing = {'t', 'y'} - set(reader.fieldnames or ())
        if missing:
            raise ValueError(
                '%s: missing column(s): %s' % (
                    path, ', '.join(sorted(missing)))
            )
        for row in reader:
            design.append(float(row['t']))
            responses.append(float(row['y']))
    log.debug('read %d observations from %s', len(design), path)
    return Dataset(design, responses)


def functional_apply(space, functional, element):
    """Apply ``functional`` to ``element``."""
    if functional.kind == 'point':
        return space.evaluate(element, functional.t)
    return space.inner(element, functional.xi)


def quadrature_rule(dist, elements, quad=constants.QUAD_NODES):
    """
    Nodes and weights integrating against ``dist`` on [0, 1].

    The interval is split at the density's bin edges and at every knot of
    ``elements`` so each piece integrates a polynomial.

    :param dist:
        Design distribution

    :param elements:
        Elements whose knots are breakpoints

    :param quad:
        Gauss-Legendre nodes per piece
    """
    if int(quad) != quad or quad < 2:
        raise QuadratureError('quad must be an integer >= 2; got %r' % (quad,))
    cuts = [dist.breakpoints, [0.0, 1.0]]
    cuts.extend(el.knots for el in elements)
    cuts = np.unique(np.concatenate(cuts))

    nodes, weights = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        height = dist.pdf(0.5 * (a + b))
        if height == 0.0:
            continue
        x, w = util.gauss_legendre(a, b, int(quad))
        nodes.append(np.clip(x, 0.0, 1.0))
        weights.append(w * height)
    return np.concatenate(nodes), np.concatenate(weights)


def f_infinity(space, truth, mu, dist, sigma, quad=constants.QUAD_NODES):
    """
    Population objective ``int (mu - truth)**2 dphi_T + sigma**2``.

    :param space:
        The kernel space

    :param truth:
        True element

    :param mu:
        Element to score

    :param dist:
        Design distribution

    :param sigma:
        Noise standard deviation

    :param quad:
        Gauss-Legendre nodes per piece
    """
    diff = mu - truth
    nodes, weights = quadrature_rule(dist, [diff], quad)
    values = space.evaluate(diff, nodes)
    return float(weights.dot(values ** 2)) + float(sigma) ** 2


def gateaux_first(space, truth, mu, nu, dist, quad=constants.QUAD_NODES):
    """Directional derivative ``2 int (mu - truth) nu dphi_T``."""
    diff = mu - truth
    nodes, weights = quadrature_rule(dist, [diff, nu], quad)
    values = space.evaluate(diff, nodes) * space.evaluate(nu, nodes)
    return 2.0 * float(weights.dot(values))


def gateaux_second(space, mu, nu, zeta, dist, quad=constants.QUAD_NODES):
    """
    Second derivative ``2 int nu zeta dphi_T`` in directions ``nu`` and
    ``zeta``. It does not depend on ``mu``.
    """
    space.check(mu)
    nodes, weights = quadrature_rule(dist, [nu, zeta], quad)
    values = space.evaluate(nu, nodes) * space.evaluate(zeta, nodes)
    return 2.0 * float(weights.dot(values))
