# -*- coding: utf-8 -*-

"""
Callbacks used in handling command plugins.
"""

import logging

import click

from .. import observation


log = logging.getLogger(__name__)


def validate_order(ctx, param, value):
    """Callback to make sure -m/--m is a usable order."""
    if value is not None and value < 1:
        raise click.BadParameter('order must be >= 1; got %r' % (value,))
    return value


def validate_grid(ctx, param, value):
    """Callback for --grid: at least two points are needed to span [0, 1]."""
    if value is not None and value < 2:
        raise click.BadParameter('grid needs at least 2 points')
    return value


def load_dataset(ctx, param, value):
    """
    Callback to read a t,y CSV file into a
    :class:`~splinelab.observation.Dataset`.
    """
    if value is None:
        return value
    log.debug('LOAD_DATASET: %s', value)
    try:
        return observation.read_dataset(value)
    except (IOError, ValueError) as err:
        raise click.BadParameter(str(err))
