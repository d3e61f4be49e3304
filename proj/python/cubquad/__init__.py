"""Cubic-quadratic diagonal systems: exact moment and solution counts,
singular series and singular integral estimates."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
