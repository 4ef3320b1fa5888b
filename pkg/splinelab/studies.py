# -*- coding: utf-8 -*-

"""
Monte Carlo studies over ``lam_n = scale * n**-p``.

A study is split into tasks keyed by ``(n_index, replicate)``. Each task draws
one dataset from ``child_seed(base_seed, n, replicate)`` and evaluates every
exponent in ``p_grid`` on it, so all exponents see the same data. Tasks are
merged by key, which makes results independent of the worker count.
"""

from concurrent.futures import ProcessPoolExecutor
import collections
import csv
import functools
import json
import logging
import os

import attr
import numpy as np

from . import constants, observation, solver, spectral, util
from .rkhs import SpanElement
from .version import __version__


log = logging.getLogger(__name__)


__all__ = (
    'EmitError', 'StudyRow', 'StudyResult', 'run_convergence_study',
    'run_blowup_study', 'run_rate_study', 'run_gamma_study', 'run_study',
    'emit', 'write_outputs', 'gamma_probes',
)


# Errors that exclude one replicate from a cell instead of failing the study.
REPLICATE_ERRORS = (
    solver.SolverError, spectral.SpectralError, np.linalg.LinAlgError,
)

# Extra row reporting excluded replicates per cell.
FAILED_STATISTIC = 'failed_replicates'

# Number of knots in each random gamma probe.
PROBE_KNOTS = 3


class EmitError(IOError):
    """Raised when a result file can't be written."""
    def __init__(self, path, err):
        self.path = path
        super(EmitError, self).__init__('%s: %s' % (path, err))


StudyRow = collections.namedtuple(
    'StudyRow', constants.CSV_HEADER,
)


@attr.s(frozen=True, eq=False)
class StudyResult(object):
    """Aggregated rows, log-log slopes and study-level summaries."""
    study = attr.ib()
    m = attr.ib()
    rows = attr.ib(factory=list)
    slopes = attr.ib(factory=list)
    summary = attr.ib(factory=dict)

    def slope(self, p, statistic):
        """Slope entry for ``(p, statistic)`` or ``None``."""
        for entry in self.slopes:
            if entry['p'] == p and entry['statistic'] == statistic:
                return entry
        return None

    def to_dict(self):
        return {
            'study': self.study,
            'm': self.m,
            'rows': [dict(r._asdict()) for r in self.rows],
            'slopes': self.slopes,
            'summary': self.summary,
        }


def gamma_probes(plan):
    """
    Probe elements for the gamma study. Probe 0 is the truth; the rest are
    random elements seeded from ``base_seed`` and the probe index.
    """
    probes = [plan.truth]
    for k in range(1, plan.probes):
        seed = util.child_seed(plan.base_seed, constants.PROBE_SEED_TAG, k)
        rng = np.random.default_rng(seed)
        probes.append(SpanElement(
            rng.standard_normal(plan.m),
            rng.random(PROBE_KNOTS),
            rng.standard_normal(PROBE_KNOTS),
        ))
    return probes


def _error(plan, space, element):
    functional = plan.functional
    return abs(observation.functional_apply(space, functional, element) -
               observation.functional_apply(space, functional, plan.truth))


def _converge_stats(plan, space, dataset, lam, extra):
    fitted = solver.fit(space, dataset, lam)
    err = _error(plan, space, fitted.element)
    stats = [('abs_error', err)]
    for eps in plan.epsilons:
        stats.append(('exceed_%s' % util.format_float(eps),
                      1.0 if err >= eps else 0.0))
    return stats


def _blowup_stats(plan, space, dataset, lam, extra):
    fitted = solver.fit(space, dataset, lam)
    h0, h1, full = solver.fit_norms(fitted)
    return [('norm_sq', full ** 2), ('h1_sq', h1 ** 2), ('h0_sq', h0 ** 2)]


def _rate_stats(plan, space, dataset, lam, extra):
    fitted = solver.fit(space, dataset, lam)
    xi = plan.functional.representer(space)
    terms = spectral.rate_terms(
        space, dataset, plan.truth, xi, lam, plan.noise.sigma)
    return [
        ('abs_error', _error(plan, space, fitted.element)),
        ('bias_term', terms.bias_term),
        ('proj_term', terms.proj_term),
        ('noise_term', terms.noise_term),
    ]


def _gamma_stats(plan, space, dataset, lam, extra):
    stats = []
    for k, (probe, limit) in enumerate(zip(extra['probes'],
                                           extra['limits'])):
        risk = solver.empirical_risk(probe, dataset, lam, space)
        h1 = space.norms(probe)[1]
        stats.append(('gap_probe%d' % k, abs(risk - limit)))
        stats.append(('penalty_probe%d' % k, lam * h1 ** 2))
    return stats


STUDY_STATS = {
    'converge': _converge_stats,
    'blowup': _blowup_stats,
    'rate': _rate_stats,
    'gamma': _gamma_stats,
}


def _prepare(plan):
    """Per-plan values shared by every task."""
    if plan.study != 'gamma':
        return {}
    space = plan.space
    probes = gamma_probes(plan)
    limits = [
        observation.f_infinity(space, plan.truth, probe, plan.design,
                               plan.noise.sigma, plan.quad)
        for probe in probes
    ]
    return {'probes': probes, 'limits': limits}


def _run_task(plan, extra, key):
    """
    Run one ``(n_index, replicate)`` task.

    :returns:
        List with one entry per exponent: a list of (statistic, value)
        pairs, or ``None`` if the replicate failed at that exponent
    """
    n_idx, replicate = key
    n = plan.n_grid[n_idx]
    space = plan.space
    seed = util.child_seed(plan.base_seed, n, replicate)
    dataset = observation.sample_dataset(
        space, plan.truth, plan.design, plan.noise, n, seed)

    compute = STUDY_STATS[plan.study]
    out = []
    for schedule in plan.schedules:
        lam = schedule(n)
        try:
            out.append(compute(plan, space, dataset, lam, extra))
        except REPLICATE_ERRORS as err:
            log.debug('replicate %r failed at n=%d p=%r: %s',
                      replicate, n, schedule.p, err)
            out.append(None)
    return out


def _execute(plan, workers):
    """Run every task and return results keyed by ``(n_index, replicate)``."""
    keys = [(i, r) for i in range(len(plan.n_grid))
            for r in range(plan.replicates)]
    task = functools.partial(_run_task, plan, _prepare(plan))

    if workers > 1:
        chunksize = max(1, len(keys) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(task, keys, chunksize=chunksize))
    else:
        results = [task(key) for key in keys]
    return dict(zip(keys, results))


def _summarize(values):
    values = np.asarray(values, dtype=float)
    k = values.size
    std_error = float(values.std(ddof=1) / np.sqrt(k)) if k > 1 else 0.0
    return float(values.mean()), std_error, float(np.median(values))


def _aggregate(plan, outcomes):
    rows = []
    for p_idx, p in enumerate(plan.p_grid):
        for n_idx, n in enumerate(plan.n_grid):
            cell = [outcomes[(n_idx, r)][p_idx]
                    for r in range(plan.replicates)]
            included = [c for c in cell if c is not None]
            failed = len(cell) - len(included)
            if failed:
                log.warning('%s: excluded %d of %d replicates at p=%r n=%d',
                            plan.study, failed, len(cell), p, n)

            columns = collections.OrderedDict()
            for stats in included:
                for name, value in stats:
                    columns.setdefault(name, []).append(value)
            for name, values in columns.items():
                mean, std_error, median = _summarize(values)
                rows.append(StudyRow(plan.study, plan.m, p, n, len(included),
                                     name, mean, std_error, median))
            rows.append(StudyRow(plan.study, plan.m, p, n, len(included),
                                 FAILED_STATISTIC, float(failed), 0.0,
                                 float(failed)))
    return rows


def _slope_statistics(plan):
    if plan.study == 'gamma':
        return ['gap_probe%d' % k for k in range(plan.probes)]
    return list(constants.SLOPE_STATISTICS[plan.study])


def _slopes(plan, rows):
    slopes = []
    for p in plan.p_grid:
        for statistic in _slope_statistics(plan):
            points = [(r.n, r.mean) for r in rows
                      if r.p == p and r.statistic == statistic and
                      np.isfinite(r.mean) and
                      r.mean > constants.SLOPE_FLOOR]
            if len(points) < constants.MIN_SLOPE_POINTS:
                log.warning(
                    '%s: only %d usable points for %s at p=%r; no slope',
                    plan.study, len(points), statistic, p)
                continue
            slope, std_error = util.fit_slope(points, log_log=True)
            slopes.append({
                'p': p, 'statistic': statistic, 'slope': slope,
                'std_error': std_error, 'points': len(points),
            })
    return slopes


def _summary(plan, rows, slopes):
    summary = {'base_seed': plan.base_seed, 'replicates': plan.replicates}
    if plan.study != 'rate':
        return summary

    largest = plan.n_grid[-1]
    errors = {r.p: r.mean for r in rows
              if r.n == largest and r.statistic == 'abs_error'}
    if errors:
        summary['best_p'] = min(sorted(errors), key=lambda p: errors[p])
    # Replicate seeds do not depend on p and proj_term does not depend on
    # lam, so every p carries the same projection slope.
    for entry in slopes:
        if entry['statistic'] == 'proj_term':
            summary['q_estimate'] = -entry['slope']
            break
    return summary


def _run(plan, study, workers):
    if plan.study != study:
        raise ValueError('Plan is for %r, not %r' % (plan.study, study))
    log.info('running %s study: m=%d n_grid=%s p_grid=%s replicates=%d',
             study, plan.m, plan.n_grid, plan.p_grid, plan.replicates)
    outcomes = _execute(plan, workers)
    rows = _aggregate(plan, outcomes)
    slopes = _slopes(plan, rows)
    return StudyResult(plan.study, plan.m, rows, slopes,
                       _summary(plan, rows, slopes))


def run_convergence_study(plan, workers=1):
    """
    Error ``|F(mu_hat) - F(mu)|`` per ``(p, n)`` plus the fraction of
    replicates with error at least each of the plan's ``epsilons``.
    """
    return _run(plan, 'converge', workers)


def run_blowup_study(plan, workers=1):
    """Squared full, H1 and H0 norms of the fit per ``(p, n)``."""
    return _run(plan, 'blowup', workers)


def run_rate_study(plan, workers=1):
    """
    Realized error with its bias, projection and noise terms per ``(p, n)``.

    The summary carries ``best_p`` (smallest mean error at the largest
    ``n``) and ``q_estimate`` (decay exponent of the projection term).
    """
    return _run(plan, 'rate', workers)


def run_gamma_study(plan, workers=1):
    """
    Gap ``|f_n(probe) - f_inf(probe)|`` per probe and ``(p, n)``, with the
    penalty contribution ``lam * ||probe||_1**2`` alongside.
    """
    return _run(plan, 'gamma', workers)


STUDY_RUNNERS = {
    'converge': run_convergence_study,
    'blowup': run_blowup_study,
    'rate': run_rate_study,
    'gamma': run_gamma_study,
}


def run_study(plan, workers=constants.DEFAULT_WORKERS):
    """Run the study ``plan`` is for."""
    return STUDY_RUNNERS[plan.study](plan, workers=workers)


def _csv_row(row):
    return [
        row.study, str(row.m), util.format_float(row.p), str(row.n),
        str(row.replicates), row.statistic, util.format_float(row.mean),
        util.format_float(row.std_error), util.format_float(row.median),
    ]


def emit(result, fmt, path):
    """
    Write ``result`` to ``path`` as ``csv`` or ``json``.

    :param result:
        A :class:`StudyResult`

    :param fmt:
        ``'csv'`` or ``'json'``

    :param path:
        Output file path
    """
    if fmt not in ('csv', 'json'):
        raise ValueError('format must be csv or json; got %r' % (fmt,))
    try:
        with open(path, 'w', newline='') as fh:
            if fmt == 'csv':
                writer = csv.writer(fh, lineterminator='\n')
                writer.writerow(constants.CSV_HEADER)
                for row in result.rows:
                    writer.writerow(_csv_row(row))
            else:
                json.dump(result.to_dict(), fh, sort_keys=True, indent=2)
                fh.write('\n')
    except (IOError, OSError) as err:
        raise EmitError(path, err)
    log.debug('wrote %s', path)


def write_outputs(result, plan, out_dir):
    """
    Write ``<study>.csv``, ``<study>.json`` and ``<study>_manifest.json``
    into ``out_dir``.

    :returns:
        List of written paths
    """
    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as err:
        raise EmitError(out_dir, err)

    paths = []
    for fmt in ('csv', 'json'):
        path = os.path.join(out_dir, '%s.%s' % (result.study, fmt))
        emit(result, fmt, path)
        paths.append(path)

    settings = dict(constants.PLAN_FIELDS)
    settings.update(plan.raw)
    manifest = {
        'study': plan.study,
        'plan': settings,
        'base_seed': plan.base_seed,
        'version': __version__,
    }
    path = os.path.join(out_dir, '%s_manifest.json' % (result.study,))
    try:
        with open(path, 'w') as fh:
            json.dump(manifest, fh, sort_keys=True, indent=2)
            fh.write('\n')
    except (IOError, OSError) as err:
        raise EmitError(path, err)
    paths.append(path)
    return paths
