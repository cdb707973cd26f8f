"""Threshold-logic synthesis and spin-memristor crossbar mapping."""

from ._smtl import *  # noqa: F401,F403
from ._smtl import __version__  # noqa: F401
