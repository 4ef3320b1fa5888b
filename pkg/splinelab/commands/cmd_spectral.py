# -*- coding: utf-8 -*-

"""
Sub-command for the spectrum of the empirical operator.
"""

import click

from .. import spectral
from ..app import RUNTIME_ERRORS
from ..rkhs import KernelSpace
from . import callbacks
from .types import NON_NEGATIVE


@click.command()
@click.option(
    '-d',
    '--data',
    'dataset',
    required=True,
    callback=callbacks.load_dataset,
    metavar='CSV',
    help='Dataset with columns t and y (only t is used).',
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
    help='Regularization parameter (must be > 0).',
)
@click.option(
    '-c',
    '--cutoff',
    type=NON_NEGATIVE,
    help='Absolute eigenvalue cutoff for sum 1/beta [default: 1e-12 * '
         'largest eigenvalue].',
)
@click.pass_context
def cli(ctx, dataset, order, lam, cutoff):
    """
    Print the spectral report of U_n and G^-1 U_n as JSON.

    Keys: betas, op_norm, inv_beta_sum, cutoff, rank, spectral_radius,
    discarded, leakage_max.
    """
    space = KernelSpace(order)
    try:
        report = spectral.spectral_report(space, dataset, lam, cutoff)
    except RUNTIME_ERRORS as err:
        ctx.obj.handle_error('spectral', {'m': order, 'lambda': lam}, err)
    ctx.obj.echo_json(report.to_dict())
