# -*- coding: utf-8 -*-

"""
Sub-command for fitting a smoothing spline to a CSV dataset.
"""

import os

import click
import numpy as np

from .. import solver, spectral, util
from ..app import RUNTIME_ERRORS
from ..rkhs import KernelSpace
from . import callbacks
from .types import NON_NEGATIVE


# Ordered list of 2-tuples of (field, display_name) for the fit summary.
DISPLAY_FIELDS = (
    ('n', 'n'),
    ('m', 'm'),
    ('lam', 'Lambda'),
    ('h0', '||mu||_0'),
    ('h1', '||mu||_1'),
    ('risk', 'Objective'),
    ('condition', 'Condition'),
    ('residual', 'Residual'),
)


@click.command()
@click.option(
    '-d',
    '--data',
    'dataset',
    required=True,
    callback=callbacks.load_dataset,
    metavar='CSV',
    help='Dataset with columns t and y.',
)
@click.option(
    '-m',
    '--m',
    'order',
    type=int,
    default=2,
    show_default=True,
    callback=callbacks.validate_order,
    help='Order of the space H^m([0, 1]).',
)
@click.option(
    '-l',
    '--lambda',
    'lam',
    type=NON_NEGATIVE,
    required=True,
    help='Regularization parameter (0 interpolates).',
)
@click.option(
    '-o',
    '--out',
    default='.',
    show_default=True,
    metavar='DIR',
    help='Directory for coefficients.csv and fit.csv.',
)
@click.option(
    '-g',
    '--grid',
    type=int,
    default=201,
    show_default=True,
    callback=callbacks.validate_grid,
    help='Number of evaluation points in fit.csv.',
)
@click.pass_context
def cli(ctx, dataset, order, lam, out, grid):
    """
    Fit a smoothing spline to observations (t_i, y_i).

    Writes the fitted coefficients to coefficients.csv (columns
    kind,index,knot,value) and the fit on an even grid to fit.csv (columns
    t,mu_hat).
    """
    action = 'fit'
    space = KernelSpace(order)
    try:
        fitted = solver.fit(space, dataset, lam)
        os.makedirs(out, exist_ok=True)

        coefficients = []
        for j, value in enumerate(fitted.d):
            coefficients.append(['poly', j, '', util.format_float(value)])
        for i, (knot, value) in enumerate(zip(fitted.knots, fitted.c)):
            coefficients.append(['knot', i, util.format_float(knot),
                                 util.format_float(value)])
        coef_path = os.path.join(out, 'coefficients.csv')
        ctx.obj.write_csv(('kind', 'index', 'knot', 'value'), coefficients,
                          coef_path)

        t = np.linspace(0.0, 1.0, grid)
        values = solver.evaluate(fitted, t)
        fit_path = os.path.join(out, 'fit.csv')
        ctx.obj.write_csv(
            ('t', 'mu_hat'),
            [[util.format_float(a), util.format_float(b)]
             for a, b in zip(t, values)],
            fit_path,
        )
        h0, h1, _ = solver.fit_norms(fitted)
        summary = {
            'n': dataset.n,
            'm': order,
            'lam': lam,
            'h0': h0,
            'h1': h1,
            'risk': solver.empirical_risk(fitted, dataset, lam),
            'condition': fitted.diagnostics['condition'],
            'residual': spectral.representer_residual(
                space, fitted, dataset),
        }
    except RUNTIME_ERRORS as err:
        ctx.obj.handle_error(action, {'m': order, 'lambda': lam}, err)

    ctx.obj.print_list([summary], DISPLAY_FIELDS)
    ctx.obj.handle_response(action, 'Wrote %s, %s' % (coef_path, fit_path))
