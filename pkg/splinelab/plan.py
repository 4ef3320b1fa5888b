# -*- coding: utf-8 -*-

"""
Handle the read, write, and validation of study plan files.

A plan is an INI file. Keys in ``[splinelab]`` apply to every study; a
section named after a study (``[converge]``, ``[blowup]``, ``[rate]``,
``[gamma]``) overrides them for that study only::

    [splinelab]
    m = 2
    truth = eta(0.35) + 0.5*eta(0.8)
    sigma = 0.5
    n_grid = 50, 100, 200, 400, 800

    [blowup]
    p_grid = 0.25, 1.0
    lambda_scale = 1e-3

Elements are written as sums of ``eta(s)``, ``chi1(s)`` and ``zeta(j)``
terms, each optionally scaled as ``c*term``; ``zero`` is the zero element.
Functionals are ``point(t)`` or ``inner(<element>)``.
"""

from configparser import ConfigParser, RawConfigParser
from configparser import Error as ConfigError
import logging
import os
import re

import attr

from . import constants, util
from .observation import DesignDistribution, FunctionalSpec, NoiseModel
from .rkhs import KernelSpace, SpanElement
from .solver import LambdaSchedule


log = logging.getLogger(__name__)


__all__ = (
    'PlanError', 'StudyPlan', 'PlanFile', 'parse_element',
    'parse_functional', 'load_plan', 'write_plan',
)


class PlanError(Exception):
    """Raised when a plan file is missing, malformed or invalid."""


TERM_RE = re.compile(
    r'(?:(?P<coef>[^*]+)\*)?(?P<func>eta|chi1|zeta)\((?P<arg>[^()]+)\)'
)
FUNCTIONAL_RE = re.compile(r'(?P<kind>point|inner)\((?P<body>.+)\)')


def _split_terms(expr):
    """Split ``expr`` at top-level ``+``/``-`` into (sign, term) pairs."""
    text = expr.replace(' ', '')
    terms = []
    sign, buf, depth, pending = 1.0, '', 0, False
    for i, ch in enumerate(text):
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        exponent = (i > 1 and text[i - 1] in 'eE' and
                    (text[i - 2].isdigit() or text[i - 2] == '.'))
        if ch in '+-' and depth == 0 and not exponent:
            if buf:
                terms.append((sign, buf))
                buf, sign = '', 1.0
            elif pending:
                raise ValueError('Dangling operator in %r' % (expr,))
            sign *= 1.0 if ch == '+' else -1.0
            pending = True
            continue
        buf += ch
        pending = False
    if not buf:
        raise ValueError('Empty term in %r' % (expr,))
    terms.append((sign, buf))
    return terms


def parse_element(expr, m):
    """
    Parse an element expression into a :class:`SpanElement` of order ``m``.

    :param expr:
        Expression like ``'eta(0.35) + 0.5*eta(0.8) - zeta(1)'``

    :param m:
        Order of the space
    """
    space = KernelSpace(m)
    if expr.strip() == 'zero':
        return SpanElement.zero(m)

    element = SpanElement.zero(m)
    for sign, term in _split_terms(expr):
        match = TERM_RE.fullmatch(term)
        if match is None:
            raise ValueError('Cannot parse term %r' % (term,))
        coef = sign * float(match.group('coef') or 1.0)
        func, arg = match.group('func'), match.group('arg')
        if func == 'eta':
            piece = space.representer(float(arg))
        elif func == 'chi1':
            piece = space.chi1(float(arg))
        else:
            piece = SpanElement.basis(m, int(arg))
        element = element + coef * piece
    return element


def parse_functional(expr, m):
    """
    Parse ``point(t)`` or ``inner(<element>)`` into a
    :class:`~splinelab.observation.FunctionalSpec`.
    """
    match = FUNCTIONAL_RE.fullmatch(expr.replace(' ', ''))
    if match is None:
        raise ValueError('Cannot parse functional %r' % (expr,))
    if match.group('kind') == 'point':
        return FunctionalSpec.point(float(match.group('body')))
    return FunctionalSpec.inner(parse_element(match.group('body'), m))


@attr.s(frozen=True, eq=False)
class StudyPlan(object):
    """A validated plan for one study."""
    study = attr.ib()
    m = attr.ib()
    truth = attr.ib()
    design = attr.ib()
    noise = attr.ib()
    functional = attr.ib()
    n_grid = attr.ib()
    p_grid = attr.ib()
    lambda_scale = attr.ib()
    replicates = attr.ib()
    base_seed = attr.ib()
    quad = attr.ib()
    epsilons = attr.ib()
    probes = attr.ib()
    output_dir = attr.ib()
    raw = attr.ib(factory=dict)

    @property
    def space(self):
        return KernelSpace(self.m)

    @property
    def schedules(self):
        return [LambdaSchedule(p, self.lambda_scale) for p in self.p_grid]

    def replace(self, **changes):
        """Return a copy with ``changes`` applied to both fields and raw."""
        raw = dict(self.raw)
        for key, value in changes.items():
            raw[key] = value if isinstance(value, str) else _unparse(value)
        return build_plan(self.study, raw)


def _unparse(value):
    if isinstance(value, (list, tuple)):
        return ', '.join(str(v) for v in value)
    return str(value)


def _design(raw):
    kind = raw['design']
    if kind == 'uniform':
        return DesignDistribution.uniform()
    if kind == 'piecewise':
        return DesignDistribution.piecewise(
            util.parse_floats(raw['design_edges']),
            util.parse_floats(raw['design_weights']),
        )
    raise ValueError('design must be uniform or piecewise; got %r' % (kind,))


def _check(condition, message):
    if not condition:
        raise ValueError(message)


def build_plan(study, raw):
    """
    Validate raw string settings and build a :class:`StudyPlan`.

    :param study:
        Study kind

    :param raw:
        Dict of key to string value
    """
    if study not in constants.STUDIES:
        raise PlanError('Unknown study %r; choose from %s' % (
            study, ', '.join(constants.STUDIES)))

    unknown = sorted(set(raw) - set(constants.PLAN_FIELDS))
    if unknown:
        raise PlanError('Unknown plan key(s): %s' % ', '.join(unknown))
    settings = dict(constants.PLAN_FIELDS)
    settings.update(raw)

    key = None
    try:
        key = 'm'
        m = int(settings['m'])
        _check(m >= 1, 'm must be >= 1')
        key = 'truth'
        truth = parse_element(settings['truth'], m)
        key = 'design'
        design = _design(settings)
        key = 'noise'
        noise = NoiseModel(settings['noise'], float(settings['sigma']))
        key = 'functional'
        functional = parse_functional(settings['functional'], m)
        key = 'n_grid'
        n_grid = util.parse_ints(settings['n_grid'])
        _check(n_grid, 'n_grid is empty')
        _check(all(a < b for a, b in zip(n_grid, n_grid[1:])),
               'n_grid must be strictly ascending')
        _check(n_grid[0] >= m, 'sizes must be >= m')
        _check(n_grid[-1] <= constants.MAX_N,
               'sizes must be <= %d' % constants.MAX_N)
        key = 'p_grid'
        p_grid = util.parse_floats(settings['p_grid'])
        _check(p_grid, 'p_grid is empty')
        lo, hi = constants.P_RANGE
        _check(all(lo < p <= hi for p in p_grid),
               'exponents must be in (%r, %r]' % (lo, hi))
        key = 'lambda_scale'
        lambda_scale = float(settings['lambda_scale'])
        _check(lambda_scale > 0, 'lambda_scale must be > 0')
        key = 'replicates'
        replicates = int(settings['replicates'])
        _check(replicates >= 1, 'replicates must be >= 1')
        key = 'base_seed'
        base_seed = int(settings['base_seed'])
        _check(base_seed >= 0, 'base_seed must be >= 0')
        key = 'quad'
        quad = int(settings['quad'])
        _check(quad >= 2, 'quad must be >= 2')
        key = 'epsilons'
        epsilons = util.parse_floats(settings['epsilons'])
        _check(all(e > 0 for e in epsilons), 'epsilons must be > 0')
        key = 'probes'
        probes = int(settings['probes'])
        _check(probes >= 1, 'probes must be >= 1')
    except ValueError as err:
        raise PlanError('Invalid value for %s: %s' % (key, err))

    return StudyPlan(
        study=study, m=m, truth=truth, design=design, noise=noise,
        functional=functional, n_grid=n_grid, p_grid=p_grid,
        lambda_scale=lambda_scale, replicates=replicates,
        base_seed=base_seed, quad=quad, epsilons=epsilons, probes=probes,
        output_dir=settings['output_dir'], raw=dict(raw),
    )


class PlanFile(object):
    """Read and write a plan file."""
    def __init__(self, filepath):
        self.filepath = filepath

    def read(self, study):
        """
        Return merged raw settings for ``study``: ``[splinelab]`` first,
        then the study's own section.

        :param study:
            Study kind
        """
        if not os.path.exists(self.filepath):
            raise PlanError('%s: plan file not found' % (self.filepath,))

        parser = ConfigParser(interpolation=None)
        try:
            parser.read(self.filepath)
        except ConfigError as err:
            raise PlanError('%s: %s' % (self.filepath, err))

        allowed = (constants.SECTION_NAME,) + constants.STUDIES
        for section in parser.sections():
            if section not in allowed:
                raise PlanError('%s: unknown section [%s]' % (
                    self.filepath, section))
        if not parser.sections():
            raise PlanError('%s: no [%s] section' % (
                self.filepath, constants.SECTION_NAME))

        config = {}
        for section in (constants.SECTION_NAME, study):
            if parser.has_section(section):
                config.update(parser[section])
        self.validate_fields(config)
        log.debug('read %s for %s: %r', self.filepath, study, config)
        return config

    def validate_fields(self, field_names):
        """
        Make sure every field is a known plan key.

        :param field_names:
            Iterable of field names to validate
        """
        for name in sorted(field_names):
            if name not in constants.PLAN_FIELDS:
                msg = '%s: Unknown field: %s' % (self.filepath, name)
                raise PlanError(msg)

    def write(self, config_data, filepath=None, section=None):
        """
        Write settings to a plan file.

        :param config_data:
            Dict of settings

        :param filepath:
            (Optional) Path to write

        :param section:
            (Optional) Section name; defaults to ``[splinelab]``
        """
        if filepath is None:
            filepath = self.filepath
        if section is None:
            section = constants.SECTION_NAME
        config = RawConfigParser()
        config.add_section(section)

        for key, val in sorted(config_data.items()):
            config.set(section, key, str(val))

        with open(filepath, 'w') as planfile:
            config.write(planfile)

        log.debug('wrote %s', filepath)


def load_plan(filepath, study):
    """
    Read and validate the plan for ``study`` from ``filepath``.

    :param filepath:
        Path to the plan file

    :param study:
        Study kind
    """
    raw = PlanFile(filepath).read(study)
    try:
        return build_plan(study, raw)
    except PlanError as err:
        raise PlanError('%s: %s' % (filepath, err))


def write_plan(plan, filepath):
    """Write every setting of ``plan`` (defaults included) to ``filepath``."""
    settings = dict(constants.PLAN_FIELDS)
    settings.update(plan.raw)
    PlanFile(filepath).write(settings)
