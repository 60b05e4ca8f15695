"""Planar Dirac QES levels in Coulomb plus magnetic field."""

from ._core import *  # noqa: F401,F403
from ._core import QesError, __version__, run_cli  # noqa: F401
