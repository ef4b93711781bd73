"""Isotropic Willmore two-spheres in S^4 from normalized potentials.

Weierstrass-type light-cone lifts, constant K^C dressing, space-form
classification, finite-difference geometry and Willmore energies of the
complete minimal pieces in H^4.
"""

__version__ = "0.1.0"

from .catalog import closed_form, expected, make  # noqa: E402
from .dressing import boost_element, circle_element, dress  # noqa: E402
from .potential import IsotropicPotential, SpaceFormClass, classify_space_form  # noqa: E402

__all__ = [
    "__version__",
    "IsotropicPotential",
    "SpaceFormClass",
    "boost_element",
    "circle_element",
    "classify_space_form",
    "closed_form",
    "dress",
    "expected",
    "make",
]
