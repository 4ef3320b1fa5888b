# -*- coding: utf-8 -*-

"""
Penalized least-squares fits on ``H0 + span{K1(t_i, .)}``.

The minimizer of::

    f_n(mu) = (1/n) sum (y_i - mu(t_i))**2 + lam * ||mu||_1**2

is ``mu = sum_j d_j zeta_j + sum_i c_i K1(t_i, .)`` where ``(c, d)`` solves the
bordered (KKT) system::

    [ Sigma + n*lam*I   T ] [c]   [y]
    [ T'                0 ] [d] = [0]

with ``Sigma = K1(t_i, t_j)`` and ``T = zeta_j(t_i)``. The system is symmetric
indefinite and is factored with LAPACK ``?sysv`` (Bunch-Kaufman); ``?sycon``
gives the condition estimate kept in the fit's diagnostics.
"""

import logging

import attr
import numpy as np
from scipy import linalg

from . import constants
from .rkhs import SpanElement


log = logging.getLogger(__name__)


__all__ = (
    'SolverError', 'DuplicateKnots', 'TooFewPoints', 'SingularSystem',
    'LambdaSchedule', 'SystemMatrices', 'SplineFit', 'assemble',
    'solve_kkt', 'fit', 'fit_bruteforce', 'evaluate', 'empirical_risk',
    'fit_norms',
)


class SolverError(RuntimeError):
    """Base error for fits that can't be computed."""


class DuplicateKnots(SolverError):
    """Raised when two design points coincide within tolerance."""


class TooFewPoints(SolverError):
    """Raised when there are fewer distinct design points than ``m``."""


class SingularSystem(SolverError):
    """Raised when the linear system is numerically singular."""


@attr.s(frozen=True)
class LambdaSchedule(object):
    """
    Regularization schedule ``lam_n = scale * n**-p``.

    Exponents above 1/2 are accepted so the blow-up regime can be studied.
    """
    p = attr.ib(converter=float)
    scale = attr.ib(converter=float, default=1.0)

    @p.validator
    def _check_p(self, attribute, value):
        lo, hi = constants.P_RANGE
        if not lo < value <= hi:
            raise ValueError('p must be in (%r, %r]; got %r' % (lo, hi, value))

    @scale.validator
    def _check_scale(self, attribute, value):
        if not value > 0:
            raise ValueError('scale must be > 0; got %r' % (value,))

    def __call__(self, n):
        return self.scale * float(n) ** -self.p


@attr.s(frozen=True, eq=False)
class SystemMatrices(object):
    """Gram blocks for one dataset: ``sigma`` (n x n) and ``basis`` (n x m)."""
    sigma = attr.ib()
    basis = attr.ib()
    lam = attr.ib(converter=float)

    @property
    def n(self):
        return self.basis.shape[0]

    @property
    def m(self):
        return self.basis.shape[1]

    @property
    def kkt(self):
        """The bordered matrix ``[[Sigma + n*lam*I, T], [T', 0]]``."""
        n, m = self.n, self.m
        matrix = np.zeros((n + m, n + m))
        matrix[:n, :n] = self.sigma + n * self.lam * np.eye(n)
        matrix[:n, n:] = self.basis
        matrix[n:, :n] = self.basis.T
        return matrix


@attr.s(frozen=True, eq=False)
class SplineFit(object):
    """
    Solved coefficients: ``d`` on the Taylor basis and ``c`` on the
    ``K1(knots[i], .)`` functions.
    """
    space = attr.ib()
    knots = attr.ib()
    c = attr.ib()
    d = attr.ib()
    lam = attr.ib(converter=float)
    diagnostics = attr.ib(factory=dict)

    @property
    def element(self):
        """The fit as a :class:`~splinelab.rkhs.SpanElement`."""
        return SpanElement(self.d, self.knots, self.c)

    def __call__(self, t):
        return evaluate(self, t)


def check_knots(design, m, tol=constants.KNOT_TOLERANCE):
    """
    Reject near-duplicate design points and too-small designs.

    :param design:
        Design points

    :param m:
        Order of the space

    :param tol:
        Minimum allowed gap between sorted points
    """
    design = np.asarray(design, dtype=float)
    gaps = np.diff(np.sort(design))
    if gaps.size and gaps.min() < tol:
        idx = int(np.argmin(gaps))
        raise DuplicateKnots(
            'Design points closer than %g near t=%r' % (
                tol, float(np.sort(design)[idx]))
        )
    if design.size < m:
        raise TooFewPoints(
            'Need at least m=%d distinct design points; got %d' % (
                m, design.size)
        )


def assemble(space, dataset, lam):
    """
    Build the Gram blocks for ``dataset``.

    :param space:
        The kernel space

    :param dataset:
        A :class:`~splinelab.observation.Dataset`

    :param lam:
        Regularization parameter, ``>= 0``
    """
    if not lam >= 0 or not np.isfinite(lam):
        raise ValueError(
            'lambda must be a finite number >= 0; got %r' % (lam,))
    check_knots(dataset.design, space.m)
    sigma = space.gram(dataset.design, 'K1')
    basis = space.basis_matrix(dataset.design)
    log.debug('assemble: n=%d m=%d lam=%r', basis.shape[0], space.m, lam)
    return SystemMatrices(sigma, basis, lam)


def _factor_solve(matrix, rhs):
    """
    Symmetric indefinite solve returning ``(x, condition)``.

    Raises :class:`SingularSystem` when the factorization breaks down or the
    reciprocal condition estimate is below machine epsilon.
    """
    sysv, sycon = linalg.get_lapack_funcs(('sysv', 'sycon'), (matrix,))
    columns = rhs if rhs.ndim == 2 else rhs[:, None]
    lu, ipiv, x, info = sysv(matrix, columns)
    if rhs.ndim == 1:
        x = x[:, 0]
    if info > 0:
        raise SingularSystem('Exactly singular system (pivot %d)' % info)
    if info < 0:
        raise SolverError('Illegal argument %d to ?sysv' % -info)
    anorm = np.linalg.norm(matrix, 1)
    rcond, info = sycon(lu, ipiv, anorm)
    if rcond < np.finfo(float).eps:
        raise SingularSystem(
            'System is numerically singular (rcond=%g)' % rcond)
    return x, 1.0 / rcond


def solve_kkt(system, rhs):
    """
    Solve the bordered system of ``system`` for one or more right-hand sides.

    :param system:
        A :class:`SystemMatrices`

    :param rhs:
        Array of shape ``(n + m,)`` or ``(n + m, k)``

    :returns:
        Tuple of (solution, condition estimate)
    """
    return _factor_solve(system.kkt, np.asarray(rhs, dtype=float))


def _diagnostics(matrix, x, rhs, condition, lam):
    residual = np.linalg.norm(matrix.dot(x) - rhs)
    scale = max(np.linalg.norm(rhs), np.finfo(float).tiny)
    diag = {
        'residual': float(residual / scale),
        'condition': float(condition),
        'ill_conditioned': bool(condition > constants.CONDITION_WARNING),
        'interpolating': lam == 0,
    }
    if diag['ill_conditioned']:
        log.warning('Ill-conditioned fit: condition estimate %.3g at lam=%r',
                    condition, lam)
    return diag


def fit(space, dataset, lam):
    """
    Return the minimizer of ``f_n`` as a :class:`SplineFit`.

    ``lam = 0`` gives the minimum-norm interpolant and is flagged
    ``interpolating`` in the diagnostics.

    :param space:
        The kernel space

    :param dataset:
        Observations

    :param lam:
        Regularization parameter
    """
    system = assemble(space, dataset, lam)
    n, m = system.n, system.m

    kkt = system.kkt
    rhs = np.concatenate([dataset.responses, np.zeros(m)])

    x, condition = _factor_solve(kkt, rhs)
    diagnostics = _diagnostics(kkt, x, rhs, condition, lam)
    c, d = x[:n], x[n:]
    diagnostics['constraint'] = float(np.linalg.norm(system.basis.T.dot(c)))
    log.debug('fit: n=%d lam=%r condition=%.3g', n, lam, condition)

    return SplineFit(space, dataset.design, c, d, lam, diagnostics)


def fit_bruteforce(space, dataset, lam):
    """
    Minimize ``f_n`` over all ``(d, c)`` without the orthogonality constraint.

    With ``Sigma = R'R`` the objective times ``n`` is the stacked least-squares
    problem::

        || [ T   Sigma          ] [d]   [y] ||**2
        || [ 0   sqrt(n*lam) R  ] [c] - [0] ||

    solved by SVD. It is meant as an independent cross-check on
    :func:`fit` and needs ``lam > 0``.
    """
    if not lam > 0:
        raise SingularSystem('fit_bruteforce needs lam > 0; got %r' % (lam,))
    system = assemble(space, dataset, lam)
    n, m = system.n, system.m

    # Sigma = R'R with R from the clipped eigenpairs
    values, vectors = linalg.eigh(system.sigma)
    root = np.sqrt(np.clip(values, 0.0, None))[:, None] * vectors.T

    stacked = np.zeros((2 * n, m + n))
    stacked[:n, :m] = system.basis
    stacked[:n, m:] = system.sigma
    stacked[n:, m:] = np.sqrt(n * lam) * root
    rhs = np.concatenate([dataset.responses, np.zeros(n)])

    try:
        x, _, rank, svals = linalg.lstsq(stacked, rhs)
    except linalg.LinAlgError as err:
        raise SingularSystem(str(err))
    if rank < m + n:
        log.debug('fit_bruteforce: rank %d of %d', rank, m + n)
    condition = svals[0] / svals[-1] if svals[-1] > 0 else np.inf

    normal = stacked.T.dot(stacked)
    diagnostics = _diagnostics(
        normal, x, stacked.T.dot(rhs), condition, lam)
    return SplineFit(space, dataset.design, x[m:], x[:m], lam, diagnostics)


def evaluate(fitted, t):
    """Evaluate a fit at point(s) ``t``."""
    return fitted.space.evaluate(fitted.element, t)


def _as_element(value):
    return getattr(value, 'element', value)


def empirical_risk(value, dataset, lam, space=None):
    """
    Objective ``(1/n) sum (y_i - mu(t_i))**2 + lam * ||mu||_1**2``.

    :param value:
        A :class:`SplineFit` or :class:`~splinelab.rkhs.SpanElement`

    :param dataset:
        Observations

    :param lam:
        Regularization parameter

    :param space:
        The kernel space; required when ``value`` is a bare element
    """
    space = getattr(value, 'space', space)
    if space is None:
        raise ValueError('empirical_risk needs a space for a bare element')
    element = _as_element(value)
    resid = dataset.responses - space.evaluate(element, dataset.design)
    h1 = space.norms(element)[1]
    return float(np.mean(resid ** 2)) + lam * h1 ** 2


def fit_norms(fitted):
    """Return ``(h0, h1, full)`` norms of a fit."""
    return fitted.space.norms(fitted.element)
