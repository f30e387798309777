"""Toolkit for sharp L^p-L^q resolvent bounds of (fractional) Laplacians.

Subpackages by concern:

- ``exponents``: exact-rational geography of the (1/p, 1/q) square.
- ``spectral``: the spectral-parameter side (kappa weight, region membership,
  shape taxonomy, boundary sampling, eigenvalue enclosure).
- ``grid``: discrete Fourier multiplier laboratory on periodic grids.
- ``extremizers``: slab and spherical-shell test functions with all
  construction constants resolved.
- ``kernels``: closed-form kernels and the special functions they need.
- ``experiments``: scaling sweeps, slope fitting and the 1-d eigenvalue demo.
"""

from resolventlab.exponents import (
    ExponentPair,
    RegionLabel,
    classify,
    classify_fractional,
    critical_points,
    dual,
    gamma,
    gamma_branch,
    omega,
)

__version__ = "0.1.0"

__all__ = [
    "ExponentPair",
    "RegionLabel",
    "classify",
    "classify_fractional",
    "critical_points",
    "dual",
    "gamma",
    "gamma_branch",
    "omega",
    "__version__",
]
