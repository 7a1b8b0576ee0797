"""Exponential energy-preserving integrators for charged-particle dynamics.

Thin re-export of the compiled core: built-in benchmark problems, the exact
invariants, one-step maps for every integrator, a trajectory driver, the phi
kernels, and the method condition checker.
"""

from ._core import (
    FixedPointError,
    Problem,
    State,
    check_conditions,
    energy,
    integrate,
    magnetic_moment,
    methods,
    momentum,
    phi_closed,
    phi_series,
    problem,
    reference_solution,
    skew_matrix,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "FixedPointError",
    "Problem",
    "State",
    "check_conditions",
    "energy",
    "integrate",
    "magnetic_moment",
    "methods",
    "momentum",
    "phi_closed",
    "phi_series",
    "problem",
    "reference_solution",
    "skew_matrix",
    "step",
    "__version__",
]
