# -*- coding: utf-8 -*-

"""
Test the plan file.
"""

import copy
import logging
import os
import tempfile
import unittest

import numpy as np

from splinelab import constants, plan
from splinelab.plan import PlanError
from splinelab.rkhs import DomainError, KernelSpace

from .fixtures import BLOWUP_PLAN, QUICK_PLAN


log = logging.getLogger(__name__)


class TestPlanFile(unittest.TestCase):
    def setUp(self):
        """Automatically create a tempfile for each test."""
        fd, filepath = tempfile.mkstemp(suffix='.ini')
        os.close(fd)
        self.filepath = filepath
        self.config_data = copy.deepcopy(QUICK_PLAN)

    def tearDown(self):
        if os.path.exists(self.filepath):
            os.remove(self.filepath)

    def append(self, text):
        with open(self.filepath, 'a') as fh:
            fh.write(text)

    def test_read_success(self):
        """Test that file can be read."""
        config = plan.PlanFile(self.filepath)
        config.write(self.config_data)
        self.assertEqual(config.read('converge'), self.config_data)

    def test_read_failure(self):
        """Test that a missing file raises an error."""
        os.remove(self.filepath)
        config = plan.PlanFile(self.filepath)
        self.assertRaises(PlanError, config.read, 'converge')

    def test_unknown_field(self):
        config = plan.PlanFile(self.filepath)
        self.config_data['bogus'] = 'spam'
        config.write(self.config_data)
        with self.assertRaisesRegex(PlanError, 'Unknown field: bogus'):
            config.read('converge')

    def test_unknown_section(self):
        plan.PlanFile(self.filepath).write(self.config_data)
        self.append('\n[sideways]\nm = 3\n')
        self.assertRaises(
            PlanError, plan.PlanFile(self.filepath).read, 'converge')

    def test_no_sections(self):
        with open(self.filepath, 'w') as fh:
            fh.write('')
        self.assertRaises(
            PlanError, plan.PlanFile(self.filepath).read, 'converge')

    def test_study_section_overrides(self):
        """Keys in [blowup] win for the blowup study only."""
        plan.PlanFile(self.filepath).write(self.config_data)
        self.append('\n[blowup]\np_grid = 1.0\n')
        self.assertEqual(plan.load_plan(self.filepath, 'blowup').p_grid, [1.0])
        self.assertEqual(
            plan.load_plan(self.filepath, 'converge').p_grid, [0.25, 1.0])

    def test_write_section(self):
        config = plan.PlanFile(self.filepath)
        config.write(self.config_data)
        other = self.filepath + '.rate'
        try:
            config.write({'p_grid': '0.4'}, filepath=other, section='rate')
            with open(other) as fh:
                self.assertIn('[rate]', fh.read())
        finally:
            os.remove(other)

    def test_load_plan(self):
        plan.PlanFile(self.filepath).write(BLOWUP_PLAN)
        study = plan.load_plan(self.filepath, 'blowup')
        self.assertEqual(study.study, 'blowup')
        self.assertEqual(study.m, 2)
        self.assertEqual(study.n_grid, [50, 100, 200, 400, 800])
        self.assertEqual(study.p_grid, [0.25, 1.0])
        self.assertEqual(study.lambda_scale, 1e-3)
        self.assertEqual(study.replicates, 200)
        self.assertEqual(study.noise.sigma, 0.5)
        self.assertEqual(study.functional.kind, 'point')
        self.assertEqual(len(study.schedules), 2)
        self.assertEqual(study.space, KernelSpace(2))

    def test_invalid_values(self):
        cases = [
            ('n_grid', '100, 50'),
            ('n_grid', '1, 2'),
            ('n_grid', '50, 5000'),
            ('p_grid', '2.0'),
            ('p_grid', ''),
            ('replicates', '0'),
            ('lambda_scale', '-1'),
            ('truth', 'eta(0.3) +'),
            ('truth', 'eta(1.5)'),
            ('functional', 'sup(0.5)'),
            ('design', 'triangular'),
            ('sigma', '-0.1'),
            ('quad', '1'),
            ('m', 'two'),
        ]
        for key, value in cases:
            raw = dict(self.config_data, **{key: value})
            with self.assertRaisesRegex(PlanError, key):
                plan.build_plan('converge', raw)

    def test_piecewise_design(self):
        raw = dict(self.config_data, design='piecewise',
                   design_edges='0, 0.5, 1', design_weights='3, 1')
        study = plan.build_plan('rate', raw)
        self.assertEqual(study.design.heights.tolist(), [1.5, 0.5])

    def test_unknown_study(self):
        self.assertRaises(PlanError, plan.build_plan, 'sideways', {})

    def test_defaults(self):
        study = plan.build_plan('gamma', {})
        self.assertEqual(study.quad, constants.QUAD_NODES)
        self.assertEqual(study.probes, 3)
        self.assertEqual(study.raw, {})

    def test_replace(self):
        study = plan.build_plan('converge', self.config_data)
        changed = study.replace(replicates=7, p_grid=[0.5])
        self.assertEqual(changed.replicates, 7)
        self.assertEqual(changed.p_grid, [0.5])
        self.assertEqual(study.replicates, 4)

    def test_write_plan(self):
        study = plan.build_plan('converge', self.config_data)
        plan.write_plan(study, self.filepath)
        raw = plan.PlanFile(self.filepath).read('converge')
        self.assertEqual(sorted(raw), sorted(constants.PLAN_FIELDS))
        self.assertEqual(raw['replicates'], '4')


class TestExpressions(unittest.TestCase):
    def setUp(self):
        self.space = KernelSpace(2)
        self.grid = np.linspace(0.0, 1.0, 21)

    def assertSameFunction(self, a, b):
        np.testing.assert_allclose(
            self.space.evaluate(a, self.grid),
            self.space.evaluate(b, self.grid),
            atol=1e-14,
        )

    def test_parse_element(self):
        space = self.space
        parsed = plan.parse_element('eta(0.35) + 0.5*eta(0.8)', 2)
        expected = space.representer(0.35) + 0.5 * space.representer(0.8)
        self.assertSameFunction(parsed, expected)

        parsed = plan.parse_element('-zeta(1)+2e-1*chi1(0.5)', 2)
        expected = -1.0 * plan.parse_element('zeta(1)', 2) + \
            0.2 * space.chi1(0.5)
        self.assertSameFunction(parsed, expected)

        zero = plan.parse_element('zero', 2)
        self.assertEqual(space.norms(zero), (0.0, 0.0, 0.0))

    def test_parse_element_errors(self):
        for expr in ('eta(0.3) +', '+-eta(0.3)', 'sin(0.3)', '2*eta()'):
            self.assertRaises(ValueError, plan.parse_element, expr, 2)
        self.assertRaises(DomainError, plan.parse_element, 'eta(1.5)', 2)
        self.assertRaises(DomainError, plan.parse_element, 'zeta(2)', 2)

    def test_parse_functional(self):
        point = plan.parse_functional('point(0.5)', 2)
        self.assertEqual((point.kind, point.t), ('point', 0.5))

        inner = plan.parse_functional('inner(eta(0.3) - zeta(0))', 2)
        self.assertEqual(inner.kind, 'inner')
        self.assertSameFunction(
            inner.xi, plan.parse_element('eta(0.3) - zeta(0)', 2))

        self.assertRaises(ValueError, plan.parse_functional, 'sup(0.5)', 2)
