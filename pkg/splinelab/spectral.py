# -*- coding: utf-8 -*-

"""
Spectral quantities of the empirical operator ``U_n`` and of
``G = U_n + lam * chi1``.

Operators act on the span of the coefficient basis::

    zeta_0, ..., zeta_{m-1}, K1(t_1, .), ..., K1(t_n, .)

in which ``U_n mu = (1/n) sum_i mu(t_i) eta_{t_i}`` has the block matrix::

    U = (1/n) [[T'T, T'Sigma],
               [T,   Sigma  ]]

``chi1`` is ``diag(0, I)`` and the basis Gram matrix is ``M = diag(I, Sigma)``.
``K`` and ``Sigma`` lose rank numerically as design points crowd together,
so nothing here inverts them directly: the norm, the eigenvalues and the rate
terms go through the fit's bordered system, ``Q' Sigma Q`` on the constraint
space, or eigenpairs of ``K`` above a relative cutoff.
"""

import collections
import logging

import attr
import numpy as np
from scipy import linalg

from . import constants, solver


log = logging.getLogger(__name__)


__all__ = (
    'SpectralError', 'OperatorMatrices', 'SpectralReport', 'RateReport',
    'BetaSum', 'build_operators', 'un_spectrum', 'g_inverse_un_norm',
    'g_inverse_un_spectrum', 'g_inverse_un_radius', 'inv_beta_sum',
    'rate_terms', 'range_leakage', 'representer_residual', 'spectral_report',
)


class SpectralError(RuntimeError):
    """Raised when an operator quantity is undefined for the input."""


# Result of inv_beta_sum()
BetaSum = collections.namedtuple('BetaSum', 'total cutoff discarded')


@attr.s(frozen=True, eq=False)
class OperatorMatrices(object):
    """Coefficient matrices of ``U_n``, ``G`` and the basis Gram ``M``."""
    design = attr.ib()
    basis = attr.ib()
    sigma = attr.ib()
    U = attr.ib()
    G = attr.ib()
    M = attr.ib()
    lam = attr.ib(converter=float)

    @property
    def n(self):
        return self.basis.shape[0]

    @property
    def m(self):
        return self.basis.shape[1]

    @property
    def embed(self):
        """``E = [T'; I]``: coefficients of ``eta_{t_i}`` as columns."""
        return np.vstack([self.basis.T, np.eye(self.n)])

    def pairing(self, xi, space):
        """
        Vector ``g`` with ``(x, xi) = x . g`` for coefficient vectors ``x``.
        """
        return np.concatenate(_pairing(space, self.design, xi))


def _pairing(space, design, xi):
    """``(poly, knot)`` parts of the pairing vector of ``xi``."""
    knot_part = np.zeros(len(design))
    if xi.knots.size:
        knot_part = space.cross_gram(design, xi.knots).dot(xi.weights)
    return np.asarray(xi.poly, dtype=float), knot_part


@attr.s(frozen=True, eq=False)
class SpectralReport(object):
    """Everything ``splinelab spectral`` reports for one dataset."""
    betas = attr.ib()
    op_norm = attr.ib()
    inv_beta_sum = attr.ib()
    cutoff = attr.ib()
    rank = attr.ib()
    spectral_radius = attr.ib(default=None)
    discarded = attr.ib(default=0)
    leakage_max = attr.ib(default=None)

    def to_dict(self):
        return {
            'betas': [float(b) for b in self.betas],
            'op_norm': self.op_norm,
            'inv_beta_sum': self.inv_beta_sum,
            'cutoff': self.cutoff,
            'rank': self.rank,
            'spectral_radius': self.spectral_radius,
            'discarded': self.discarded,
            'leakage_max': self.leakage_max,
        }


@attr.s(frozen=True)
class RateReport(object):
    """
    Terms of ``F(mu_hat) - F(mu)`` for one dataset.

    ``bias_signed - proj_signed`` equals ``F(S mu) - F(mu)`` exactly, where
    ``S mu`` is the noiseless fit.
    """
    bias_term = attr.ib()
    proj_term = attr.ib()
    noise_term = attr.ib()
    bias_signed = attr.ib(default=0.0)
    proj_signed = attr.ib(default=0.0)
    q_estimate = attr.ib(default=None)


def build_operators(space, dataset, lam):
    """
    Coefficient matrices of ``U_n``, ``G`` and ``M`` for ``dataset``.

    :param space:
        The kernel space

    :param dataset:
        Observations (only the design is used)

    :param lam:
        Regularization parameter, ``>= 0``
    """
    system = solver.assemble(space, dataset, lam)
    n, m = system.n, system.m
    T, sigma = system.basis, system.sigma

    U = np.zeros((m + n, m + n))
    U[:m, :m] = T.T.dot(T)
    U[:m, m:] = T.T.dot(sigma)
    U[m:, :m] = T
    U[m:, m:] = sigma
    U /= n

    G = U.copy()
    G[m:, m:] += lam * np.eye(n)

    M = np.zeros((m + n, m + n))
    M[:m, :m] = np.eye(m)
    M[m:, m:] = sigma

    return OperatorMatrices(
        np.asarray(dataset.design), T, sigma, U, G, M, lam)


def _check_lam(lam):
    if not lam > 0:
        raise SpectralError('G is singular for lam=%r; need lam > 0' % (lam,))


def _kernel_eigen(K, cutoff=None):
    """
    Eigenpairs of a kernel gram ``K`` above ``cutoff`` (relative to the
    largest eigenvalue, default ``EIGEN_CUTOFF``).

    Solving with the kept pairs only is the pseudo-inverse on the numerical
    range of ``K``; a Cholesky solve amplifies round-off by ``cond(K)``.
    """
    if cutoff is None:
        cutoff = constants.EIGEN_CUTOFF
    values, vectors = linalg.eigh(K)
    keep = values > cutoff * max(values[-1], 0.0)
    return values[keep], vectors[:, keep]


def un_spectrum(space, dataset):
    """
    Eigenvalues of ``U_n`` on ``span{eta_{t_i}}``, largest first.

    On that span ``U_n (sum a_i eta_i) = sum ((K/n) a)_i eta_i`` so these are
    the eigenvalues of ``K/n`` for the full kernel Gram ``K``.
    """
    solver.check_knots(dataset.design, 1)
    K = space.gram(dataset.design, 'K')
    betas = linalg.eigvalsh(K / dataset.n)
    return betas[::-1]


def inv_beta_sum(betas, cutoff=None):
    """
    Sum of ``1/beta`` over eigenvalues above ``cutoff``.

    :param betas:
        Eigenvalues, or a :class:`SpectralReport`

    :param cutoff:
        Absolute cutoff; defaults to ``EIGEN_CUTOFF * max(betas)``
    """
    betas = np.asarray(getattr(betas, 'betas', betas), dtype=float)
    if cutoff is None:
        cutoff = constants.EIGEN_CUTOFF * max(betas.max(initial=0.0), 0.0)
    if not cutoff > 0:
        raise ValueError('cutoff must be > 0; got %r' % (cutoff,))
    kept = betas[betas > cutoff]
    return BetaSum(float(np.sum(1.0 / kept)), float(cutoff),
                   int(betas.size - kept.size))


def g_inverse_un_norm(space, dataset, lam):
    """
    Operator norm of ``A = G^-1 U_n`` in the ``H`` norm (the ``M`` metric on
    coefficients).

    ``A mu`` is the noiseless fit to ``mu(t_i)``, so the supremum runs over
    data vectors ``r`` with the smallest preimage norm, the interpolant
    ``sum a_i eta_i`` with ``K a = r``. Writing ``K = V diag(kappa) V'`` and
    ``r = V diag(kappa)**1/2 z`` gives ``||interpolant|| = |z|``, and the
    norm is the largest singular value of ``z -> ||fit(r)||``. No factor of
    ``K`` or ``M G`` is inverted.

    The norm is at least the spectral radius (1, since polynomials are fixed
    by ``A``) and can exceed 1 because ``A`` is not ``M``-symmetric.
    """
    _check_lam(lam)
    system = solver.assemble(space, dataset, lam)
    n, m = system.n, system.m

    kappa, vectors = linalg.eigh(space.gram(dataset.design, 'K'))
    rhs = np.zeros((n + m, n))
    rhs[:n] = vectors * np.sqrt(np.clip(kappa, 0.0, None))
    x, _ = solver.solve_kkt(system, rhs)

    # ||fit||**2 = |d|**2 + c' Sigma c
    s_values, s_vectors = linalg.eigh(system.sigma)
    s_root = np.sqrt(np.clip(s_values, 0.0, None))[:, None] * s_vectors.T
    image = np.vstack([x[n:], s_root.dot(x[:n])])
    return float(linalg.norm(image, 2))


def g_inverse_un_spectrum(space, dataset, lam):
    """
    Eigenvalues of ``G^-1 U_n`` on ``span{zeta_j, K1(t_i, .)}``, largest
    first.

    ``U x = theta G x`` splits into three families:

    * ``theta = 1`` on ``H0`` (``m`` times)
    * ``theta = 0`` on the kernel of evaluation at the design (``m`` times)
    * ``theta = kappa / (kappa + n*lam)`` for each eigenvalue ``kappa`` of
      ``Q' Sigma Q``, with ``Q`` an orthonormal basis of ``{c : T'c = 0}``

    so every eigenvalue lies in ``[0, 1]``. Only the symmetric matrix
    ``Q' Sigma Q`` goes through an eigen-solver.
    """
    _check_lam(lam)
    system = solver.assemble(space, dataset, lam)
    n, m = system.n, system.m

    Q = linalg.null_space(system.basis.T)
    if Q.shape[1]:
        kappa = linalg.eigvalsh(Q.T.dot(system.sigma).dot(Q))
        kappa = np.clip(kappa, 0.0, None)
    else:
        kappa = np.zeros(0)
    inner = kappa / (kappa + n * lam)
    values = np.concatenate([np.ones(m), inner, np.zeros(m)])
    return np.sort(values)[::-1]


def g_inverse_un_radius(space, dataset, lam):
    """Spectral radius of ``G^-1 U_n``; see :func:`g_inverse_un_spectrum`."""
    return float(np.abs(g_inverse_un_spectrum(space, dataset, lam)).max())


def range_leakage(space, dataset, cutoff=None):
    """
    For each eigenvector ``psi_j`` of ``U_n`` on ``span{eta_i}`` (unit
    ``H``-norm), the norm of the part of ``chi1 psi_j`` outside that span.

    Zero leakage everywhere would mean ``chi1`` maps the range of ``U_n``
    into itself. Eigenvalues at or below ``cutoff`` are skipped.

    :returns:
        Array of leakages ordered like the descending eigenvalues
    """
    solver.check_knots(dataset.design, 1)
    n = dataset.n
    K = space.gram(dataset.design, 'K')
    sigma = space.gram(dataset.design, 'K1')
    kept, vecs = _kernel_eigen(K)
    betas, psis = linalg.eigh(K / n)
    betas, psis = betas[::-1], psis[:, ::-1]
    if cutoff is None:
        cutoff = constants.EIGEN_CUTOFF * max(betas[0], 0.0)
    keep = betas > cutoff

    leak = []
    for beta, a in zip(betas[keep], psis[:, keep].T):
        a = a / np.sqrt(n * beta)  # ||sum a_i eta_i||**2 = a'Ka = n*beta
        sa = sigma.dot(a)
        inside = np.sum(vecs.T.dot(sa) ** 2 / kept)  # sa' K^+ sa
        leak.append(np.sqrt(max(a.dot(sa) - inside, 0.0)))
    return np.array(leak)


def _projection(space, design, values, xi):
    """
    ``(P mu, xi)`` for the orthogonal projection ``P`` onto span{eta_i},
    given ``values = mu(t_i)``.
    """
    kept, vecs = _kernel_eigen(space.gram(design, 'K'))
    a = vecs.dot(vecs.T.dot(values) / kept)
    # (eta_i, xi) = xi(t_i)
    return float(a.dot(space.evaluate(xi, design)))


def rate_terms(space, dataset, truth, xi, lam, sigma):
    """
    Bias, projection and noise terms of ``F(mu_hat) - F(mu)`` for
    ``F = (., xi)``.

    * ``bias_term = |(S mu - P mu, xi)|`` with ``S mu = G^-1 U_n mu`` the
      noiseless fit and ``P`` the orthogonal projection onto span{eta_i}
    * ``proj_term = |(mu - P mu, xi)|``
    * ``noise_term = (sigma/n) * sqrt(sum_i (G^-1 eta_i, xi)**2)``, the
      conditional standard deviation of ``(G^-1 nu_n, xi)``

    ``G^-1 nu_n`` is the fit to pure noise, so ``(G^-1 nu_n, xi) = w . eps``
    for the fit's weights ``w`` on ``F``. Both ``S mu`` and ``w`` come from
    the bordered system of :func:`~splinelab.solver.fit`, which stays well
    conditioned when design points crowd together.

    :param space:
        The kernel space

    :param dataset:
        Observations (only the design is used)

    :param truth:
        True element ``mu``

    :param xi:
        Representer of ``F``

    :param lam:
        Regularization parameter, ``> 0``

    :param sigma:
        Noise standard deviation
    """
    _check_lam(lam)
    system = solver.assemble(space, dataset, lam)
    n, m = system.n, system.m
    design = np.asarray(dataset.design)

    values = space.evaluate(truth, design)
    g_poly, g_knots = _pairing(space, design, xi)
    rhs = np.zeros((n + m, 2))
    rhs[:n, 0] = values
    rhs[:n, 1] = g_knots
    rhs[n:, 1] = g_poly
    x, _ = solver.solve_kkt(system, rhs)

    smooth_xi = float(x[:n, 0].dot(g_knots) + x[n:, 0].dot(g_poly))
    proj_xi = _projection(space, design, values, xi)
    truth_xi = space.inner(truth, xi)
    bias_signed = smooth_xi - proj_xi
    proj_signed = truth_xi - proj_xi
    noise = float(sigma) * float(np.linalg.norm(x[:n, 1]))

    log.debug('rate_terms: n=%d m=%d lam=%r bias=%r proj=%r noise=%r',
              n, m, lam, bias_signed, proj_signed, noise)
    return RateReport(abs(bias_signed), abs(proj_signed), noise,
                      bias_signed, proj_signed)


def representer_residual(space, fitted, dataset):
    """
    Relative residual of ``G mu_hat = (1/n) sum y_i eta_i`` in coefficient
    space.
    """
    ops = build_operators(space, dataset, fitted.lam)
    x = np.concatenate([fitted.d, fitted.c])
    rhs = ops.embed.dot(dataset.responses) / ops.n
    scale = max(np.linalg.norm(rhs), np.finfo(float).tiny)
    return float(np.linalg.norm(ops.G.dot(x) - rhs) / scale)


def spectral_report(space, dataset, lam, cutoff=None):
    """
    Collect betas, the operator norm and radius, ``sum 1/beta`` and the
    largest range leakage for one dataset.
    """
    betas = un_spectrum(space, dataset)
    total = inv_beta_sum(betas, cutoff)
    op_norm = g_inverse_un_norm(space, dataset, lam)
    radius = g_inverse_un_radius(space, dataset, lam)
    leakage = range_leakage(space, dataset, total.cutoff)
    return SpectralReport(
        betas=betas,
        op_norm=op_norm,
        inv_beta_sum=total.total,
        cutoff=total.cutoff,
        rank=int(betas.size - total.discarded),
        spectral_radius=radius,
        discarded=total.discarded,
        leakage_max=float(leakage.max()) if leakage.size else 0.0,
    )
