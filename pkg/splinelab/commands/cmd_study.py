# -*- coding: utf-8 -*-

"""
Sub-command for running Monte Carlo studies from a plan file.

Exit status is 0 on success, 1 if the plan is invalid and 2 if the study
fails while running.
"""

import click

from .. import constants


@click.command()
@click.argument('kind', type=click.Choice(constants.STUDIES))
@click.option(
    '-c',
    '--config',
    required=True,
    metavar='FILE',
    help='Plan file (INI).',
)
@click.option(
    '-o',
    '--out',
    metavar='DIR',
    help='Output directory [default: output_dir from the plan].',
)
@click.option(
    '-w',
    '--workers',
    type=click.IntRange(min=1),
    default=constants.DEFAULT_WORKERS,
    show_default=True,
    help='Number of worker processes.',
)
@click.pass_context
def cli(ctx, kind, config, out, workers):
    """
    Run a study: converge, blowup, rate or gamma.

    Results go to <out>/<kind>.csv and <out>/<kind>.json, with the plan, seed
    and version recorded in <out>/<kind>_manifest.json. Re-running a plan
    gives byte-identical CSV for any number of workers.
    """
    ctx.obj.run_study(kind, config, out=out, workers=workers)
