"""Harmonic morphisms from three-dimensional Euclidean and spherical space forms.

Build discrete groups of isometries of R^3 or S^3, decide whether they
preserve the standard foliation by lines or Hopf circles, classify the
leaf-space orbifold, and check the induced harmonic morphisms numerically.
"""

from __future__ import annotations

from .foliation import Orbifold2, VerificationReport, run_pipeline
from .groups import DEFAULT_BUDGET, EnumerationBudget, GroupSpec, enumerate_group
from .motions import Angle, Isometry, rotation, screw, translation
from .quaternions import Quaternion, SO4Element, phi_cover

__all__ = [
    "Angle",
    "DEFAULT_BUDGET",
    "EnumerationBudget",
    "GroupSpec",
    "Isometry",
    "Orbifold2",
    "Quaternion",
    "SO4Element",
    "VerificationReport",
    "enumerate_group",
    "phi_cover",
    "rotation",
    "run_pipeline",
    "screw",
    "translation",
]

__version__ = "0.1.0"
