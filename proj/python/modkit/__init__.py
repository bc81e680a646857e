"""Approximately modular set functions: scans, fits, learners and constructions."""

from ._modkit import *  # noqa: F401,F403
from ._modkit import __doc__  # noqa: F401
