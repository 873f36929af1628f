"""Raman-driven cascaded atom-cavity pair.

Closed-form single-excitation dynamics, quantum-jump trajectory sampling,
Wootters concurrence and null-click conditional detection for a source
cavity driving a target cavity through a unidirectional channel.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
