"""L2 distance between two densities, kernel plug-in and targeted estimates."""

from ._core import designs, estimate, sample, simulate, true_psi

__all__ = ["designs", "estimate", "sample", "simulate", "true_psi"]
