"""Series solutions of a fractional Helmholtz equation with involution.

Submodules:

- :mod:`frachelm.mittag_leffler`: two-parameter Mittag-Leffler function
- :mod:`frachelm.frac_kernels`: modal two-point kernels ``C`` and ``S``
- :mod:`frachelm.spectral_basis`: eigenpairs for the D/N/P/AP conditions
- :mod:`frachelm.boundary_data`: boundary functions and their expansions
- :mod:`frachelm.solver`: truncated series solutions and grid evaluation
- :mod:`frachelm.verify`: residuals, boundary checks and discrete Caputo operators
- :mod:`frachelm.cli`: the ``frachelm`` command
"""

from __future__ import annotations

from ._core import BACKEND
from .boundary_data import BoundaryFunction, compatibility_check, expand
from .frac_kernels import KernelParams, kernel_C, kernel_S, solve_two_point
from .mittag_leffler import MLParams, ml_eval
from .solver import ProblemSpec, Solution, assemble, evaluate, evaluate_grid
from .spectral_basis import ModeIndex, Parity, ProblemKind, eigenpair, enumerate_modes

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BoundaryFunction",
    "KernelParams",
    "MLParams",
    "ModeIndex",
    "Parity",
    "ProblemKind",
    "ProblemSpec",
    "Solution",
    "assemble",
    "compatibility_check",
    "eigenpair",
    "enumerate_modes",
    "evaluate",
    "evaluate_grid",
    "expand",
    "kernel_C",
    "kernel_S",
    "ml_eval",
    "solve_two_point",
]
