# -*- coding: utf-8 -*-

"""
Custom Click parameter types.
"""

import click

from .. import util


class PointListParamType(click.ParamType):
    """Comma-separated list of points in [0, 1]."""
    name = 'point list'

    def convert(self, value, param, ctx):
        if value is None or isinstance(value, list):
            return value

        try:
            points = util.parse_floats(value)
        except ValueError:
            self.fail('%s is not a comma-separated list of numbers' % value,
                      param, ctx)
        if not points:
            self.fail('at least one point is required', param, ctx)
        bad = [p for p in points if not 0.0 <= p <= 1.0]
        if bad:
            self.fail('points must lie in [0, 1]; got %s' % bad, param, ctx)
        return points

    def __repr__(self):
        return 'POINT_LIST'


class NonNegativeFloatParamType(click.ParamType):
    """A float that is ``>= 0``."""
    name = 'non-negative number'

    def convert(self, value, param, ctx):
        if value is None:
            return

        try:
            number = float(value)
        except (TypeError, ValueError):
            self.fail('%s is not a number' % value, param, ctx)
        if not number >= 0:
            self.fail('%s must be >= 0' % value, param, ctx)
        return number

    def __repr__(self):
        return 'NON_NEGATIVE'


# Constants for these types
POINT_LIST = PointListParamType()
NON_NEGATIVE = NonNegativeFloatParamType()
