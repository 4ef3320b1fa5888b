# -*- coding: utf-8 -*-

"""
Test spectral quantities of the empirical operator.
"""

import logging

import numpy as np
import pytest
from scipy import linalg

from splinelab import observation, solver, spectral
from splinelab.observation import Dataset
from splinelab.rkhs import KernelSpace
from splinelab.spectral import SpectralError

from .fixtures import space, rng, noisy
from .util import make_dataset, random_element, spaced_design


log = logging.getLogger(__name__)


__all__ = ('space', 'rng', 'noisy')


def random_instances(rng, count, max_n=60):
    """Spaced designs with m in {1, 2, 3} and lam in [1e-8, 1e3]."""
    for _ in range(count):
        m = int(rng.integers(1, 4))
        n = int(rng.integers(m, max_n + 1))
        lam = float(10 ** rng.uniform(-8, 3))
        yield KernelSpace(m), Dataset(spaced_design(rng, n), np.zeros(n)), lam


def test_build_operators():
    """Test ``spectral.build_operators()``."""
    space = KernelSpace(1)
    ops = spectral.build_operators(space, Dataset([0.5], [0.0]), 0.0)
    np.testing.assert_allclose(ops.U, [[1.0, 0.5], [1.0, 0.5]])
    np.testing.assert_allclose(ops.M, [[1.0, 0.0], [0.0, 0.5]])
    assert ops.embed.tolist() == [[1.0], [1.0]]


def test_operator_structure(noisy, space):
    lam = 0.05
    ops = spectral.build_operators(space, noisy, lam)
    m, n = ops.m, ops.n

    chi1 = np.zeros((m + n, m + n))
    chi1[m:, m:] = np.eye(n)
    np.testing.assert_allclose(ops.G - ops.U, lam * chi1, rtol=0, atol=1e-14)

    assert np.linalg.eigvalsh(ops.M).min() > 0

    raw = ops.M.dot(ops.U)
    asym = np.linalg.norm(raw - ops.U.T.dot(ops.M)) / np.linalg.norm(raw)
    assert asym < 1e-10


def test_un_spectrum(rng):
    space = KernelSpace(1)
    np.testing.assert_allclose(
        spectral.un_spectrum(space, Dataset([0.5], [0.0])), [1.5])

    for _ in range(20):
        space = KernelSpace(int(rng.integers(1, 4)))
        n = int(rng.integers(1, 40))
        ds = Dataset(spaced_design(rng, n), np.zeros(n))
        betas = spectral.un_spectrum(space, ds)
        gram = space.gram(ds.design)

        assert np.all(np.diff(betas) <= 0)
        assert betas.min() >= -1e-10
        assert betas.sum() == pytest.approx(np.trace(gram) / n)
        expected = np.sort(np.linalg.eigvalsh(gram / n))[::-1]
        np.testing.assert_allclose(betas, expected, atol=1e-10)


def test_inv_beta_sum():
    total = spectral.inv_beta_sum([2.0, 0.5], 1e-12)
    assert total.total == pytest.approx(2.5)
    assert total.discarded == 0

    total = spectral.inv_beta_sum([1e-15, 1e-14], 1e-12)
    assert total.total == 0.0
    assert total.discarded == 2

    total = spectral.inv_beta_sum([1.0, 1e-13])
    assert total.cutoff == pytest.approx(1e-12)
    assert total.discarded == 1

    with pytest.raises(ValueError):
        spectral.inv_beta_sum([0.0])


def test_op_norm_exceeds_one():
    """One design point already pushes the norm to sqrt(1.5)."""
    space = KernelSpace(1)
    ds = Dataset([0.5], [0.0])
    for lam in (0.1, 1.0, 1e3):
        norm = spectral.g_inverse_un_norm(space, ds, lam)
        assert norm == pytest.approx(np.sqrt(1.5), rel=1e-10)


def test_spectral_radius_is_one(rng):
    """Polynomials are fixed points and nothing grows faster."""
    for space, ds, lam in random_instances(rng, 200):
        radius = spectral.g_inverse_un_radius(space, ds, lam)
        norm = spectral.g_inverse_un_norm(space, ds, lam)
        assert radius == pytest.approx(1.0, abs=1e-6)
        assert norm >= 1.0 - 1e-4


def test_g_inverse_un_spectrum(rng):
    for m in (1, 2, 3):
        space = KernelSpace(m)
        n = 8
        ds = Dataset(spaced_design(rng, n), np.zeros(n))
        ops = spectral.build_operators(space, ds, 0.1)
        thetas = spectral.g_inverse_un_spectrum(space, ds, 0.1)

        assert thetas.size == n + m
        assert np.all(np.diff(thetas) <= 0)
        assert np.all((thetas >= 0) & (thetas <= 1))
        expected = np.sort(linalg.eigvals(ops.U, ops.G).real)[::-1]
        np.testing.assert_allclose(thetas, expected, atol=1e-8)

    # no room left once n == m
    thetas = spectral.g_inverse_un_spectrum(
        KernelSpace(2), Dataset([0.2, 0.7], [0.0, 0.0]), 1.0)
    np.testing.assert_allclose(thetas, [1.0, 1.0, 0.0, 0.0])


def test_g_inverse_needs_lambda(noisy, space):
    with pytest.raises(SpectralError):
        spectral.g_inverse_un_norm(space, noisy, 0.0)
    with pytest.raises(SpectralError):
        spectral.g_inverse_un_radius(space, noisy, 0.0)
    with pytest.raises(SpectralError):
        spectral.rate_terms(space, noisy, noisy.truth,
                            space.representer(0.5), 0.0, 0.5)


def test_rate_terms_crowded_design(space):
    """Nearly coincident design points leave the terms finite."""
    design = np.concatenate([np.linspace(0.05, 0.95, 40), [0.5, 0.5 + 1e-7]])
    truth = space.representer(0.35) + 0.5 * space.representer(0.8)
    ds = Dataset(design, space.evaluate(truth, design))
    terms = spectral.rate_terms(
        space, ds, truth, space.representer(0.5), 1e-5, 0.5)
    assert np.isfinite([terms.bias_term, terms.proj_term,
                        terms.noise_term]).all()
    assert 0 < terms.noise_term < 0.5


def test_representer_residual(noisy, space):
    fitted = solver.fit(space, noisy, 0.01)
    assert spectral.representer_residual(space, fitted, noisy) < 1e-8


def test_range_leakage(noisy, space):
    leakage = spectral.range_leakage(space, noisy)
    assert leakage.ndim == 1
    assert 0 < leakage.size <= noisy.n
    assert np.all(leakage >= 0)


def test_rate_terms_identity(space, rng):
    """``bias - proj`` is the error of the noiseless fit."""
    xi = space.representer(0.5)
    for _ in range(10):
        truth = random_element(rng, 2)
        lam = float(10 ** rng.uniform(-3, 0))
        ds = make_dataset(space, truth, spaced_design(rng, 15))
        terms = spectral.rate_terms(space, ds, truth, xi, lam, 0.5)

        smooth = solver.fit(space, ds, lam)
        expected = (space.evaluate(smooth.element, 0.5) -
                    space.evaluate(truth, 0.5))
        assert terms.bias_signed - terms.proj_signed == pytest.approx(
            expected, abs=1e-8)
        assert terms.bias_term == abs(terms.bias_signed)
        assert terms.proj_term == abs(terms.proj_signed)


def test_rate_terms_truth_in_span(space, rng):
    design = spaced_design(rng, 8)
    truth = space.representer(design[1]) + 0.5 * space.representer(design[5])
    ds = make_dataset(space, truth, design)
    terms = spectral.rate_terms(
        space, ds, truth, space.representer(0.5), 0.1, 0.5)
    assert terms.proj_term < 1e-8


def test_rate_terms_truth_in_large_design(space, rng):
    """Knots of the truth among 800 random points project to nothing."""
    design = np.concatenate([[0.35, 0.8], rng.uniform(size=798)])
    truth = space.representer(0.35) + 0.5 * space.representer(0.8)
    ds = make_dataset(space, truth, design)
    lam = 1e-3 * 800 ** -0.25
    terms = spectral.rate_terms(
        space, ds, truth, space.representer(0.5), lam, 0.5)
    assert terms.proj_term < 1e-7


def test_rate_terms_bias_grows_with_lambda(noisy, space):
    """
    At a design point the bias of an indicator truth is a diagonal entry of
    ``I - H`` for the hat matrix ``H``, which grows with lam.
    """
    k = noisy.n // 2
    indicator = np.zeros(noisy.n)
    indicator[k] = 1.0
    truth = solver.fit(space, Dataset(noisy.design, indicator), 0.0).element
    xi = space.representer(noisy.design[k])

    biases = [
        spectral.rate_terms(space, noisy, truth, xi, lam, 0.5).bias_term
        for lam in (1e-6, 1e-4, 1e-2, 1.0, 10.0)
    ]
    assert np.all(np.diff(biases) > 0)
    assert 0 < biases[0] < biases[-1] <= 1.0 + 1e-8


def test_rate_terms_bias_persists(space, rng):
    """As lam goes to 0 the bias term tends to the interpolant's, not 0."""
    truth = random_element(rng, 2)
    ds = make_dataset(space, truth, spaced_design(rng, 6))
    xi = space.representer(0.5)
    terms = spectral.rate_terms(space, ds, truth, xi, 1e-6, 0.5)

    interpolant = solver.fit(space, ds, 0.0)
    limit = (space.evaluate(interpolant.element, 0.5) -
             space.evaluate(truth, 0.5) + terms.proj_signed)
    assert abs(limit) > 1e-6
    assert abs(terms.bias_signed - limit) <= 0.05 * abs(limit) + 1e-7


def test_noise_term_monte_carlo(noisy, space):
    """Closed form matches the spread of ``(G^-1 nu_n, xi)``."""
    lam, sigma = 0.05, 0.5
    xi = space.representer(0.5)
    terms = spectral.rate_terms(space, noisy, noisy.truth, xi, lam, sigma)

    ops = spectral.build_operators(space, noisy, lam)
    draws = np.random.default_rng(3).standard_normal((noisy.n, 10000))
    rhs = ops.embed.dot(sigma * draws) / noisy.n
    coefs = np.linalg.solve(ops.G, rhs)
    values = ops.pairing(xi, space).dot(coefs)

    second = values ** 2
    std_error = second.std() / np.sqrt(second.size)
    assert abs(second.mean() - terms.noise_term ** 2) < 4 * std_error


def test_noise_term_scaling(space):
    """At fixed lam the noise term shrinks like n**-1/2."""
    truth = xi = space.representer(0.5)
    uniform = observation.DesignDistribution.uniform()
    noise = observation.NoiseModel('gaussian', 0.5)

    means = []
    for n in (100, 200):
        values = []
        for seed in range(10):
            ds = observation.sample_dataset(space, truth, uniform, noise, n,
                                            seed)
            values.append(spectral.rate_terms(
                space, ds, truth, xi, 0.5, noise.sigma).noise_term)
        means.append(np.mean(values))
    assert 1.25 <= means[0] / means[1] <= 1.6


def test_spectral_report(noisy, space):
    report = spectral.spectral_report(space, noisy, 0.01)
    data = report.to_dict()
    assert sorted(data) == [
        'betas', 'cutoff', 'discarded', 'inv_beta_sum', 'leakage_max',
        'op_norm', 'rank', 'spectral_radius',
    ]
    assert data['rank'] + data['discarded'] == noisy.n
    assert len(data['betas']) == noisy.n
    assert data['spectral_radius'] == pytest.approx(1.0, abs=1e-6)
    assert data['op_norm'] >= 1.0 - 1e-6
