"""Exact concentration functions of Bernoulli forms, bound checks, and
structure detectors, backed by the C++ core."""

from aclab._core import *  # noqa: F401,F403
from aclab._core import __version__  # noqa: F401
