#!/usr/bin/env python

from setuptools import find_packages, setup

exec(open('splinelab/version.py').read())

with open('requirements.txt') as requirements:
    required = requirements.read().splitlines()

kwargs = {
    'name': 'splinelab',
    'version': str(__version__),  # noqa
    'packages': find_packages(exclude=['tests']),
    'description': (
        'Smoothing splines on H^m([0, 1]) and regularization scaling studies'
    ),
    'license': 'Apache',
    'install_requires': required,
    'python_requires': '>=3.8',
    'entry_points': """
        [console_scripts]
        splinelab=splinelab.app:app
    """,
    'classifiers': [
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Software Development :: Libraries :: Python Modules',
    ]
}

setup(**kwargs)
