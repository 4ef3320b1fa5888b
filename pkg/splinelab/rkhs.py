# -*- coding: utf-8 -*-

"""
Closed-form reproducing kernels for the Sobolev space H^m([0, 1]).

The space splits as ``H = H0 + H1`` where ``H0`` is spanned by the Taylor
basis ``zeta_i(t) = t**i / i!`` (i < m) and ``H1`` holds the functions whose
first ``m`` derivatives vanish at 0. With the inner product::

    (mu, nu) = sum_i D^i mu(0) D^i nu(0) + int_0^1 D^m mu D^m nu

the representer of point evaluation at ``t`` is ``eta_t = K(t, .)`` with
``K = K0 + K1``::

    K0(s, t) = sum_i zeta_i(s) zeta_i(t)
    K1(s, t) = int_0^1 G(s, u) G(t, u) du
    G(t, u) = (t - u)_+**(m-1) / (m-1)!

Every function this package handles (truths, probes, fits, representers) is
a :class:`SpanElement`: polynomial coefficients on ``zeta_i`` plus weights on
``K1(s_k, .)``. That keeps every inner product and norm in closed form.

Example::

    >>> space = KernelSpace(2)
    >>> eta = space.representer(0.5)
    >>> space.inner(eta, eta) == space.kernel(0.5, 0.5)
    True
"""

import logging
import math

import attr
import numpy as np

from . import constants


log = logging.getLogger(__name__)


__all__ = (
    'DomainError', 'SpaceMismatch', 'SpanElement', 'KernelSpace',
)


class DomainError(ValueError):
    """Raised when a point or basis index is outside the space's domain."""


class SpaceMismatch(ValueError):
    """Raised when elements of different order ``m`` are combined."""


def _vector(value):
    """Converter: read-only 1-D float array."""
    arr = np.array(value, dtype=float).reshape(-1)
    arr.setflags(write=False)
    return arr


def check_points(t, name='t'):
    """
    Return ``t`` as a float array, raising if anything is outside [0, 1].

    :param t:
        Scalar or array-like of points

    :param name:
        Argument name used in the error message
    """
    arr = np.asarray(t, dtype=float)
    if arr.size and (np.any(~np.isfinite(arr)) or arr.min() < 0.0 or
                     arr.max() > 1.0):
        raise DomainError('%s must lie in [0, 1]; got %r' % (name, t))
    return arr


def _scalar_or_array(value, like):
    """Collapse 0-d results back to a python float."""
    if np.ndim(like) == 0:
        return float(value)
    return value


@attr.s(frozen=True, eq=False, repr=False)
class SpanElement(object):
    """
    A function ``sum_j poly[j] zeta_j + sum_k weights[k] K1(knots[k], .)``.

    Knots may repeat and the knot list may be empty (a pure polynomial).
    Elements support ``+``, ``-`` and scaling by a real number; knots are
    concatenated, never merged.
    """
    poly = attr.ib(converter=_vector)
    knots = attr.ib(converter=_vector, default=())
    weights = attr.ib(converter=_vector, default=())

    def __attrs_post_init__(self):
        if self.poly.size < 1:
            raise SpaceMismatch('An element needs at least one coefficient.')
        if self.knots.shape != self.weights.shape:
            raise ValueError(
                'Got %d knots but %d weights' % (
                    self.knots.size, self.weights.size)
            )
        check_points(self.knots, 'knots')

    @classmethod
    def zero(cls, m):
        """The zero element of order ``m``."""
        return cls(np.zeros(m))

    @classmethod
    def basis(cls, m, j):
        """The basis polynomial ``zeta_j`` as an element of order ``m``."""
        if not 0 <= j < m:
            raise DomainError('basis index %r outside [0, %d)' % (j, m))
        poly = np.zeros(m)
        poly[j] = 1.0
        return cls(poly)

    @property
    def m(self):
        return self.poly.size

    @property
    def pairs(self):
        """List of (knot, weight) pairs."""
        return list(zip(self.knots.tolist(), self.weights.tolist()))

    def _check_same(self, other):
        if not isinstance(other, SpanElement):
            return NotImplemented
        if other.m != self.m:
            raise SpaceMismatch(
                'Cannot combine elements of order %d and %d' % (
                    self.m, other.m)
            )
        return None

    def __add__(self, other):
        bad = self._check_same(other)
        if bad is not None:
            return bad
        return SpanElement(
            self.poly + other.poly,
            np.concatenate([self.knots, other.knots]),
            np.concatenate([self.weights, other.weights]),
        )

    def __neg__(self):
        return SpanElement(-self.poly, self.knots, -self.weights)

    def __sub__(self, other):
        bad = self._check_same(other)
        if bad is not None:
            return bad
        return self + (-other)

    def __mul__(self, scale):
        scale = float(scale)
        return SpanElement(scale * self.poly, self.knots, scale * self.weights)

    __rmul__ = __mul__

    def __repr__(self):
        return '<SpanElement(m=%d, poly=%s, knots=%r)>' % (
            self.m, np.array2string(self.poly, precision=4), self.pairs)


def _check_order(instance, attribute, value):
    if value < 1:
        raise DomainError('Order m must be >= 1; got %r' % (value,))


@attr.s(frozen=True)
class KernelSpace(object):
    """
    The order-``m`` space H^m([0, 1]) with its H0/H1 split.

    All kernel methods broadcast over array arguments; scalar inputs give
    python floats back.

    :param m:
        Penalized derivative order, ``m >= 1``
    """
    m = attr.ib(converter=int, validator=_check_order)

    domain = (0.0, 1.0)

    @property
    def _factorials(self):
        return np.array([math.factorial(i) for i in range(self.m)], float)

    @property
    def _k1_coefficients(self):
        # binom(m-1, k) / (m + k) / ((m-1)!)**2, k = 0..m-1
        m = self.m
        scale = float(math.factorial(m - 1)) ** 2
        return np.array(
            [math.comb(m - 1, k) / float(m + k) / scale for k in range(m)]
        )

    def zeta(self, i, t):
        """
        Basis polynomial ``zeta_i(t) = t**i / i!``.

        :param i:
            Basis index, ``0 <= i < m``

        :param t:
            Point(s) in [0, 1]
        """
        if int(i) != i or not 0 <= i < self.m:
            raise DomainError('basis index %r outside [0, %d)' % (i, self.m))
        t_ = check_points(t)
        value = t_ ** int(i) / math.factorial(int(i))
        return _scalar_or_array(value, t)

    def basis_matrix(self, points):
        """
        Matrix ``T`` with ``T[i, j] = zeta_j(t_i)``.

        :param points:
            Points in [0, 1]
        """
        t = check_points(points).reshape(-1)
        powers = t[:, None] ** np.arange(self.m)[None, :]
        return powers / self._factorials[None, :]

    def greens(self, t, u):
        """
        Green's function ``(t - u)_+**(m-1) / (m-1)!`` of ``D^m mu = nu`` with
        zero initial conditions at 0.
        """
        t_, u_ = check_points(t, 't'), check_points(u, 'u')
        diff = t_ - u_
        active = diff > 0
        if self.m == 1:
            value = np.where(active, 1.0, 0.0)
        else:
            value = np.where(active, np.abs(diff) ** (self.m - 1), 0.0)
            value = value / math.factorial(self.m - 1)
        return _scalar_or_array(value, diff)

    def k0(self, s, t):
        """Polynomial kernel ``sum_i zeta_i(s) zeta_i(t)``."""
        s_, t_ = check_points(s, 's'), check_points(t, 't')
        st = np.asarray(s_ * t_)
        value = np.zeros(st.shape)
        for i in range(self.m):
            value = value + st ** i / self._factorials[i] ** 2
        return _scalar_or_array(value, st)

    def k1(self, s, t):
        """
        Green's-function kernel ``int_0^min(s,t) G(s,u) G(t,u) du``.

        With ``a = min(s, t)`` and ``d = |s - t|`` the integral expands to::

            sum_k binom(m-1, k) d**(m-1-k) a**(m+k) / (m+k) / ((m-1)!)**2

        which has no cancellation since every term is non-negative.
        """
        s_, t_ = check_points(s, 's'), check_points(t, 't')
        a = np.minimum(s_, t_)
        d = np.abs(s_ - t_)
        m = self.m
        value = np.zeros(np.shape(a))
        for k, coef in enumerate(self._k1_coefficients):
            value = value + coef * d ** (m - 1 - k) * a ** (m + k)
        return _scalar_or_array(value, a)

    def kernel(self, s, t):
        """Full kernel ``K0 + K1``, i.e. ``eta_s(t) = (eta_s, eta_t)``."""
        return self.k0(s, t) + self.k1(s, t)

    def _pick(self, which):
        try:
            return {'K': self.kernel, 'K0': self.k0, 'K1': self.k1}[which]
        except KeyError:
            raise ValueError('which must be one of K, K0, K1; got %r' %
                             (which,))

    def gram(self, points, which='K'):
        """
        Symmetric matrix of ``which`` evaluated at every pair of ``points``.

        :param points:
            Non-empty list of points in [0, 1]

        :param which:
            One of ``'K'``, ``'K0'``, ``'K1'``
        """
        t = check_points(points).reshape(-1)
        if t.size == 0:
            raise DomainError('gram needs at least one point')
        return self._pick(which)(t[:, None], t[None, :])

    def cross_gram(self, rows, cols, which='K1'):
        """Rectangular kernel matrix ``which(rows[i], cols[j])``."""
        r = check_points(rows).reshape(-1)
        c = check_points(cols).reshape(-1)
        if r.size == 0 or c.size == 0:
            return np.zeros((r.size, c.size))
        return self._pick(which)(r[:, None], c[None, :])

    def representer(self, t):
        """``eta_t`` as an element: poly ``zeta_j(t)``, one knot ``(t, 1)``."""
        poly = self.basis_matrix([t])[0]
        return SpanElement(poly, [t], [1.0])

    def chi1(self, t):
        """The H1 part of ``eta_t``, i.e. ``K1(t, .)``."""
        check_points(t)
        return SpanElement(np.zeros(self.m), [t], [1.0])

    def check(self, *elements):
        for el in elements:
            if el.m != self.m:
                raise SpaceMismatch(
                    'Element of order %d used in space of order %d' % (
                        el.m, self.m)
                )

    def evaluate(self, element, t):
        """
        Evaluate ``element`` at point(s) ``t``.

        :param element:
            A :class:`SpanElement` of this space

        :param t:
            Point(s) in [0, 1]
        """
        self.check(element)
        t_ = check_points(t)
        flat = t_.reshape(-1)
        value = self.basis_matrix(flat).dot(element.poly)
        if element.knots.size:
            value = value + self.cross_gram(
                flat, element.knots).dot(element.weights)
        return _scalar_or_array(value.reshape(t_.shape), t)

    def inner(self, a, b):
        """
        Inner product ``(a, b)_0 + (a, b)_1``.

        ``(a, b)_0`` is the dot product of polynomial coefficients (the
        Taylor basis is orthonormal) and ``(a, b)_1 = w_a' K1 w_b``.
        """
        self.check(a, b)
        value = float(a.poly.dot(b.poly))
        if a.knots.size and b.knots.size:
            k1 = self.cross_gram(a.knots, b.knots)
            value += float(a.weights.dot(k1).dot(b.weights))
        return value

    def norms(self, a):
        """
        Return ``(h0, h1, full)`` norms of ``a``, with
        ``full**2 = h0**2 + h1**2``.
        """
        self.check(a)
        h0_sq = float(a.poly.dot(a.poly))
        h1_sq = 0.0
        if a.knots.size:
            h1_sq = float(a.weights.dot(self.gram(a.knots, 'K1')).dot(
                a.weights))
            # Rounding can push tiny quadratic forms below zero.
            h1_sq = max(h1_sq, 0.0)
        return (math.sqrt(h0_sq), math.sqrt(h1_sq), math.sqrt(h0_sq + h1_sq))

    def representer_bound(self, grid=constants.BOUND_GRID):
        """
        Uniform bound ``alpha(m) = max_t ||eta_t||`` over an even grid.

        :param grid:
            Number of grid points
        """
        t = np.linspace(0.0, 1.0, grid)
        alpha = float(np.sqrt(self.kernel(t, t)).max())
        log.debug('representer_bound: m=%d grid=%d alpha=%r',
                  self.m, grid, alpha)
        return alpha

    def lipschitz_estimate(self, grid=constants.BOUND_GRID):
        """
        Largest ``||eta_s - eta_t|| / |s - t|`` over neighbouring points of
        an even grid.

        For ``m >= 2`` this settles as the grid is refined; for ``m = 1``
        representers are only Hoelder-1/2 and the estimate grows like
        ``sqrt(grid)``.
        """
        t = np.linspace(0.0, 1.0, grid)
        s, u = t[:-1], t[1:]
        dist_sq = self.kernel(s, s) + self.kernel(u, u) - 2 * self.kernel(s, u)
        ratio = np.sqrt(np.maximum(dist_sq, 0.0)) / (u - s)
        return float(ratio.max())
