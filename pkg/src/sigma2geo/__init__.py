"""Exact and numerical Riemannian geometry around the sigma-2 curvature
volume-comparison functional.

Two backends cover the same geometry:

* an exact backend (:mod:`sigma2geo.exact`, :mod:`sigma2geo.homogeneous`) for
  product-of-spheres metric families, where curvature, volume and the
  comparison functional are rational functions of the deformation parameter;
* a numerical backend (:mod:`sigma2geo.charts`, :mod:`sigma2geo.curvature`,
  :mod:`sigma2geo.quadrature`) computing pointwise curvature from coordinate
  charts by high-order finite differences and integrating with spectral
  product quadrature.

:mod:`sigma2geo.variation` cross-validates every closed-form first and second
variation against Richardson-extrapolated numerical derivatives, and
:mod:`sigma2geo.cli` exposes the verification suites as a command line tool.
"""

from .exact import (
    PiScalar,
    Polynomial,
    RatFun,
    Rational,
    Series,
    series_expand,
    series_pow,
)
from .homogeneous import (
    EinsteinData,
    ParallelTTTensor,
    SphereFactor,
    SphereProductFamily,
    counterexample_family,
    einstein_check,
    einstein_operator_parallel,
    h_functional_path,
    ricci_invariants_path,
    second_variation_closed_form,
    sigma2_path,
    stability_probe,
    unit_sphere_volume,
    volume_path,
)

__version__ = "0.1.0"

__all__ = [
    "PiScalar",
    "Polynomial",
    "RatFun",
    "Rational",
    "Series",
    "series_expand",
    "series_pow",
    "EinsteinData",
    "ParallelTTTensor",
    "SphereFactor",
    "SphereProductFamily",
    "counterexample_family",
    "einstein_check",
    "einstein_operator_parallel",
    "h_functional_path",
    "ricci_invariants_path",
    "second_variation_closed_form",
    "sigma2_path",
    "stability_probe",
    "unit_sphere_volume",
    "volume_path",
]
