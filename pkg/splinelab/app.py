# -*- coding: utf-8 -*-

"""
Base CLI commands and the context object shared by all command plugins.

Plugins live in the ``commands`` folder as ``cmd_{name}.py`` modules, each with
a top-level ``cli`` command.
"""

import csv
import io
import json
import logging
import os
import shutil
import sys

import click
import numpy as np
import prettytable

import splinelab
from . import constants, plan, solver, spectral, studies


# Constants/Globals
if os.getenv(constants.DEBUG_ENV):
    logging.basicConfig(level=logging.DEBUG)
log = logging.getLogger(__name__)

# Make the --help option also have -h
CONTEXT_SETTINGS = {
    'help_option_names': ['-h', '--help'],
}

# Errors that mean a valid request failed while running (exit code 2).
RUNTIME_ERRORS = (
    solver.SolverError, spectral.SpectralError, studies.EmitError,
    np.linalg.LinAlgError, ValueError, IOError,
)

# Exit codes
EXIT_PLAN_ERROR = 1
EXIT_RUNTIME_ERROR = 2

# Where to find the command plugins.
CMD_FOLDER = os.path.abspath(
    os.path.join(os.path.dirname(__file__), 'commands')
)


__all__ = (
    'SplinelabCLI', 'App', 'app'
)


class SplinelabCLI(click.MultiCommand):
    """
    Top-level command that loads its sub-commands from the "commands" folder.

    Plugins must be named "cmd_{foo}.py" and must have a top-level command
    named "cli".
    """
    def list_commands(self, ctx):
        """List all commands from python modules in plugin folder."""
        rv = []
        for filename in os.listdir(CMD_FOLDER):
            if filename.endswith('.py') and filename.startswith('cmd_'):
                rv.append(filename[4:-3])
        rv.sort()
        return rv

    def get_command(self, ctx, name):
        """Import a command module and return it."""
        try:
            mod = __import__('splinelab.commands.cmd_' + name,
                             None, None, ['cli'])
        except ImportError as err:
            log.debug('no command %r: %s', name, err)
            return None
        return mod.cli  # Each cmd_ plugin defines top-level "cli" command


class App(object):
    """Context object for holding state data for the CLI app."""
    def __init__(self, ctx, verbose=False):
        self.ctx = ctx
        self.verbose = verbose
        self.command_name = self.ctx.invoked_subcommand

    @staticmethod
    def pretty_dict(data, delim='=', sep=', '):
        """
        Return a dict in k=v format.

        :param data:
            A dict

        :param delim:
            Character between key and value

        :param sep:
            Character used to separate items
        """
        pretty = ''
        for key, val in sorted(data.items()):
            pretty += '%s%s%s%s' % (key, delim, val, sep)
        return pretty.rstrip(sep)  # Drop the trailing separator

    def handle_error(self, action, data, err, exit_code=EXIT_RUNTIME_ERROR):
        """
        Report a failure on stderr and exit.

        :param action:
            The action name

        :param data:
            Dict of arguments

        :param err:
            Exception object or message

        :param exit_code:
            Process exit code
        """
        msg = str(err)
        log.debug('ERROR [%s]: %r', action, err)

        # If we're being verbose, print some extra context.
        if self.verbose and data:
            t_ = '\n trying to %s with args: %s'
            msg += t_ % (action, self.pretty_dict(data))

        # Colorize the failure text as red.
        click.echo(click.style('[FAILURE] ', fg='red') + msg, err=True)
        self.ctx.exit(exit_code)

    def handle_response(self, action, message):
        """
        Report success.

        :param action:
            The action name

        :param message:
            What was done
        """
        click.echo(click.style('[SUCCESS] ', fg='green') + message)
        log.debug('%s done: %s', action, message)

    def print_list(self, objects, display_fields):
        """
        Print a list of objects in a table format.

        :param objects:
            List of object dicts

        :param display_fields:
            Ordered list of 2-tuples of (field, display_name) used
            to translate field names for display
        """
        fields = [f[0] for f in display_fields]  # Field names are 1st item
        headers = [f[1] for f in display_fields]

        table = prettytable.PrettyTable(headers)

        # Display table in a frame
        table.vrules = prettytable.FRAME
        table.align = 'l'  # Left-align everything
        table.left_padding_width = 1

        for obj in objects:
            table.add_row([self.format_field(obj[f]) for f in fields])

        # Only paginate if table is longer than terminal.
        _, t_height = shutil.get_terminal_size()
        if len(objects) > t_height:
            click.echo_via_pager(table.get_string())
        else:
            click.echo(table)

    @staticmethod
    def format_field(value):
        """Floats are shown with 6 significant digits."""
        if isinstance(value, float):
            return '%.6g' % value
        return value

    @staticmethod
    def write_csv(header, rows, path=None):
        """
        Write rows as CSV to ``path``, or to stdout if not given.

        :param header:
            Column names

        :param rows:
            Iterable of row sequences

        :param path:
            (Optional) Output path
        """
        if path is None:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator='\n')
            writer.writerow(header)
            writer.writerows(rows)
            click.echo(buf.getvalue(), nl=False)
            return
        with open(path, 'w', newline='') as fh:
            writer = csv.writer(fh, lineterminator='\n')
            writer.writerow(header)
            writer.writerows(rows)
        log.debug('wrote %s', path)

    @staticmethod
    def echo_json(data):
        click.echo(json.dumps(data, sort_keys=True, indent=2))

    def run_study(self, kind, config, out=None, workers=1):
        """
        Load a plan, run the study and write its outputs.

        :param kind:
            Study kind

        :param config:
            Plan file path

        :param out:
            (Optional) Output directory overriding the plan's ``output_dir``

        :param workers:
            Number of worker processes
        """
        action = 'run %s study' % (kind,)
        data = {'config': config, 'out': out, 'workers': workers}
        try:
            study_plan = plan.load_plan(config, kind)
        except plan.PlanError as err:
            self.handle_error(action, data, err, exit_code=EXIT_PLAN_ERROR)

        out_dir = out if out is not None else study_plan.output_dir
        try:
            result = studies.run_study(study_plan, workers=workers)
            paths = studies.write_outputs(result, study_plan, out_dir)
        except RUNTIME_ERRORS as err:
            self.handle_error(action, data, err)

        if result.slopes:
            self.print_list(result.slopes, SLOPE_FIELDS)
        for key, value in sorted(result.summary.items()):
            click.echo('%s: %s' % (key, value))
        self.handle_response(action, 'Wrote %s' % ', '.join(paths))


# Ordered list of 2-tuples of (field, display_name) for study slopes.
SLOPE_FIELDS = (
    ('p', 'p'),
    ('statistic', 'Statistic'),
    ('slope', 'Slope'),
    ('std_error', 'Std. Error'),
    ('points', 'Points'),
)


@click.command(cls=SplinelabCLI, context_settings=CONTEXT_SETTINGS)
@click.option('-v', '--verbose', is_flag=True, help='Toggle verbosity.')
@click.version_option(version=splinelab.__version__)
@click.pass_context
def app(ctx, verbose):
    """
    Smoothing spline estimator and regularization scaling studies.

    Fits penalized splines on H^m([0, 1]), inspects the spectrum of the
    empirical operator and runs seeded Monte Carlo studies.
    """
    if verbose and not os.getenv(constants.DEBUG_ENV):
        logging.basicConfig(level=logging.INFO)

    # This is the "app" object attached to all contexts.
    ctx.obj = App(ctx=ctx, verbose=verbose)


if __name__ == '__main__':
    sys.exit(app())
