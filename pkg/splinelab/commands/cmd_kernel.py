# -*- coding: utf-8 -*-

"""
Sub-command for kernel tables.

Prints the chosen kernel at every pair of points as CSV with columns
``s,t,value``.
"""

import click
import numpy as np

from .. import constants, util
from ..rkhs import KernelSpace
from . import callbacks
from .types import POINT_LIST


# Ordered list of 2-tuples of (field, display_name) for --bounds.
BOUND_FIELDS = (
    ('m', 'm'),
    ('alpha', 'max ||eta_t||'),
    ('lipschitz', 'Lipschitz estimate'),
    ('grid', 'Grid'),
)


@click.command()
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
    '-p',
    '--points',
    type=POINT_LIST,
    metavar='T1,T2,...',
    help='Comma-separated points in [0, 1].',
)
@click.option(
    '-g',
    '--grid',
    type=int,
    callback=callbacks.validate_grid,
    metavar='N',
    help='Use N evenly spaced points on [0, 1] instead of --points.',
)
@click.option(
    '-w',
    '--which',
    type=click.Choice(['K', 'K0', 'K1']),
    default='K',
    show_default=True,
    help='Kernel to tabulate.',
)
@click.option(
    '-b',
    '--bounds',
    is_flag=True,
    help='Print the representer bound and Lipschitz estimate instead.',
)
@click.pass_context
def cli(ctx, order, points, grid, which, bounds):
    """
    Tabulate the reproducing kernel of H^m([0, 1]).

    Give the points with -p/--points or ask for an even grid with -g/--grid.

    With -b/--bounds, print max ||eta_t|| and the Lipschitz constant of t ->
    eta_t estimated on a grid (default size 1001).
    """
    space = KernelSpace(order)

    if bounds:
        size = grid or constants.BOUND_GRID
        row = {
            'm': order,
            'alpha': space.representer_bound(size),
            'lipschitz': space.lipschitz_estimate(size),
            'grid': size,
        }
        ctx.obj.print_list([row], BOUND_FIELDS)
        return

    if points is None and grid is None:
        raise click.UsageError('Provide -p/--points or -g/--grid.')
    if points is not None and grid is not None:
        raise click.UsageError('Use only one of -p/--points and -g/--grid.')
    if grid is not None:
        points = np.linspace(0.0, 1.0, grid).tolist()

    matrix = space.gram(points, which)
    rows = []
    for i, s in enumerate(points):
        for j, t in enumerate(points):
            rows.append([util.format_float(s), util.format_float(t),
                         util.format_float(matrix[i, j])])
    ctx.obj.write_csv(('s', 't', 'value'), rows)
