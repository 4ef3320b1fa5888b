# -*- coding: utf-8 -*-

"""
Utilities for testing.
"""

import contextlib
import csv
import logging
import math
import os
import shlex
import shutil
import tempfile

from click.testing import CliRunner as BaseCliRunner
import numpy as np
from scipy import integrate

from splinelab.app import app
from splinelab import observation, plan
from splinelab.rkhs import SpanElement


log = logging.getLogger(__name__)

# Hard-code the app name as 'splinelab' to match the CLI util.
app.name = 'splinelab'

# File names written into the isolated filesystem.
PLAN_NAME = 'plan.ini'
DATA_NAME = 'data.csv'


class CliRunner(BaseCliRunner):
    """
    Subclass of CliRunner that also writes a plan file and a dataset into
    the isolated filesystem.
    """
    def __init__(self, plan_config, dataset=None, *args, **kwargs):
        self.plan_config = plan_config
        self.dataset = dataset
        super(CliRunner, self).__init__(*args, **kwargs)

    @contextlib.contextmanager
    def isolated_filesystem(self):
        """
        A context manager that creates a temporary folder and changes
        the current working directory to it for isolated filesystem tests.
        """
        cwd = os.getcwd()
        t = tempfile.mkdtemp()
        os.chdir(t)
        plan.PlanFile(PLAN_NAME).write(self.plan_config)
        if self.dataset is not None:
            write_dataset(DATA_NAME, *self.dataset)
        try:
            yield t
        finally:
            os.chdir(cwd)
            try:
                shutil.rmtree(t)
            except (OSError, IOError):
                pass

    def run(self, command, **kwargs):
        """
        Shortcut to invoke to parse command and pass app along.

        :param command:
            Command args e.g. 'study converge -c plan.ini'

        :param kwargs:
            Extra keyword arguments to pass to ``invoke()``
        """
        cmd_parts = shlex.split(command)
        result = self.invoke(app, cmd_parts, **kwargs)
        return result


def assert_output(result, expected, exit_code=0):
    """
    Assert that output matches the conditions.

    :param result:
        CliRunner result object

    :param expected:
        List/tuple of expected outputs

    :param exit_code:
        Expected exit code
    """
    if not isinstance(expected, (tuple, list)):
        raise TypeError('Expected must be a list or tuple')

    assert result.exit_code == exit_code
    output = result.output.splitlines()

    for line in output:
        # Assert that the expected items are found on the same line
        if not all((e in line) for e in expected):
            continue
        else:
            log.info('matched: %r', (expected,))
            break
    else:
        assert False


def write_dataset(path, design, responses):
    """Write a t,y CSV file."""
    with open(path, 'w', newline='') as fh:
        writer = csv.writer(fh, lineterminator='\n')
        writer.writerow(['t', 'y'])
        for t, y in zip(design, responses):
            writer.writerow([repr(float(t)), repr(float(y))])


def spaced_design(rng, n, lo=0.05, hi=0.95):
    """
    Sorted random design with one jittered point per cell of an even grid,
    so neighbouring points are never closer than ``0.2 * (hi - lo) / n``.
    """
    cells = (np.arange(n) + 0.5 + 0.4 * rng.uniform(-1.0, 1.0, n)) / n
    return lo + (hi - lo) * cells


def random_element(rng, m, knots=3):
    """Random element with standard normal coefficients."""
    return SpanElement(
        rng.standard_normal(m),
        rng.random(knots),
        rng.standard_normal(knots),
    )


def make_dataset(space, truth, design, sigma=0.0, seed=0):
    """Dataset on a fixed design with gaussian noise."""
    rng = np.random.default_rng(seed)
    design = np.asarray(design, dtype=float)
    responses = space.evaluate(truth, design)
    responses = responses + sigma * rng.standard_normal(design.size)
    return observation.Dataset(design, responses, sigma, seed, truth)


def k1_quadrature(m, s, t):
    """``K1(s, t)`` by adaptive quadrature of the Green's function product."""
    top = min(s, t)
    if top == 0.0:
        return 0.0
    scale = float(math.factorial(m - 1)) ** 2

    def integrand(u):
        return (s - u) ** (m - 1) * (t - u) ** (m - 1) / scale

    value, _ = integrate.quad(integrand, 0.0, top, epsabs=0.0, epsrel=1e-13)
    return value
