"""Stability of magnetic Ginzburg-Landau vortices."""

from ._core import (
    GridConfig,
    Profile,
    __version__,
    block_spectrum,
    classify,
    solve_profile,
    sweep,
)

__all__ = [
    "GridConfig",
    "Profile",
    "__version__",
    "block_spectrum",
    "classify",
    "solve_profile",
    "sweep",
]
