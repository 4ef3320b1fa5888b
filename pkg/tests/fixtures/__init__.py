# -*- coding: utf-8 -*-

"""
Plans, datasets and fixtures shared by the tests.
"""

import logging

import numpy as np
import pytest

from splinelab.plan import build_plan
from splinelab.rkhs import KernelSpace
from tests.util import CliRunner, make_dataset, spaced_design


# Logger
log = logging.getLogger(__name__)

# Truth, noise and grids shared by every standard plan.
STANDARD_PLAN = {
    'm': '2',
    'truth': 'eta(0.35) + 0.5*eta(0.8)',
    'design': 'uniform',
    'noise': 'gaussian',
    'sigma': '0.5',
    'functional': 'point(0.5)',
    'n_grid': '50, 100, 200, 400, 800',
    'replicates': '200',
    'base_seed': '20170301',
}

CONVERGE_PLAN = dict(STANDARD_PLAN, p_grid='0.25, 0.5', lambda_scale='1.0')

# Regime split: bounded below 1/2, blowing up above.
BLOWUP_PLAN = dict(STANDARD_PLAN, p_grid='0.25, 1.0', lambda_scale='1e-3')

# Heavy smoothing keeps the full norm flat.
BOUNDED_PLAN = dict(STANDARD_PLAN, p_grid='0.25', lambda_scale='1.0')

RATE_PLAN = dict(
    STANDARD_PLAN, p_grid='0.1, 0.25, 0.4, 0.6', lambda_scale='1e-3',
)

GAMMA_PLAN = dict(
    STANDARD_PLAN, p_grid='0.5', lambda_scale='1e-3', probes='3',
    n_grid='100, 200, 400, 800, 1600', replicates='100',
)

# Small enough to run on every test invocation.
QUICK_PLAN = dict(
    STANDARD_PLAN, n_grid='20, 40, 80, 160', p_grid='0.25, 1.0',
    replicates='4', lambda_scale='1e-3',
)

# Affine truths are fit exactly when m = 2.
AFFINE_TRUTH = '1.5*zeta(0) - 0.75*zeta(1)'


def quick_plan(study, **changes):
    """Build a validated quick plan for ``study``."""
    raw = dict(QUICK_PLAN)
    raw.update(changes)
    return build_plan(study, raw)


@pytest.fixture
def space():
    """The cubic smoothing spline space."""
    return KernelSpace(2)


@pytest.fixture
def rng():
    return np.random.default_rng(20170301)


@pytest.fixture
def line_data():
    """Ten spaced points on the line ``y = 1 + 2t``."""
    design = np.linspace(0.05, 0.95, 10)
    return design, 1.0 + 2.0 * design


@pytest.fixture
def runner(line_data):
    """CLI runner with the quick plan and the line dataset."""
    return CliRunner(QUICK_PLAN, dataset=line_data)


@pytest.fixture
def noisy(space, rng):
    """A noisy dataset of 30 spaced points from the standard truth."""
    truth = build_plan('converge', STANDARD_PLAN).truth
    design = spaced_design(rng, 30)
    return make_dataset(space, truth, design, sigma=0.5, seed=7)
