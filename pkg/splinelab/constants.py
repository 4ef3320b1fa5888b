# -*- coding: utf-8 -*-

"""
Constant values used across the project.
"""

import os


# Two design points closer than this are treated as the same knot.
KNOT_TOLERANCE = 1e-12

# Condition number above which a fit is flagged as ill-conditioned.
CONDITION_WARNING = 1e12

# Relative eigenvalue cutoff for sums of 1/beta_j (times beta_max).
EIGEN_CUTOFF = 1e-12

# Cell means at or below this are round-off and stay out of slope fits.
SLOPE_FLOOR = 1e-10

# Default Gauss-Legendre nodes per integration piece.
QUAD_NODES = 201

# Grid used for the representer bound and Lipschitz estimates.
BOUND_GRID = 1001

# Largest sample size the dense solver is meant for.
MAX_N = 1600

# Exponent range accepted for lambda_n = scale * n**-p.
P_RANGE = (0.0, 1.5)

# Study kinds and the statistics that get a log-log slope per p.
STUDIES = ('converge', 'blowup', 'rate', 'gamma')
SLOPE_STATISTICS = {
    'converge': ('abs_error',),
    'blowup': ('norm_sq', 'h1_sq', 'h0_sq'),
    'rate': ('abs_error', 'bias_term', 'proj_term', 'noise_term'),
    'gamma': (),  # Filled per probe at runtime (gap_probe<k>).
}

# Minimum number of grid points before a slope is reported.
MIN_SLOPE_POINTS = 4

# CSV header for study results. Do not reorder.
CSV_HEADER = (
    'study', 'm', 'p', 'n', 'replicates', 'statistic', 'mean', 'std_error',
    'median',
)

# Config section names
SECTION_NAME = 'splinelab'

# Mapping of plan keys to default values. An empty string means unset.
PLAN_FIELDS = {
    'm': '2',
    'truth': 'eta(0.35) + 0.5*eta(0.8)',
    'design': 'uniform',
    'design_edges': '',
    'design_weights': '',
    'noise': 'gaussian',
    'sigma': '0.5',
    'functional': 'point(0.5)',
    'n_grid': '50, 100, 200, 400, 800',
    'p_grid': '0.25',
    'lambda_scale': '1.0',
    'replicates': '200',
    'base_seed': '20170301',
    'quad': str(QUAD_NODES),
    'epsilons': '0.05, 0.1, 0.2',
    'probes': '3',
    'output_dir': 'results',
}

# Tag mixed into probe seeds so they never collide with dataset seeds.
PROBE_SEED_TAG = 0x5EED

# Environment variable that turns on debug logging for the CLI.
DEBUG_ENV = 'SPLINELAB_DEBUG'

# Default number of worker processes for studies.
DEFAULT_WORKERS = int(os.getenv('SPLINELAB_WORKERS', '1'))
