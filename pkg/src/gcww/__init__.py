"""Benjamin-Feir stability of small-amplitude gravity-capillary Stokes waves.

Submodules:

* :mod:`gcww.params` for validated parameters and singular-set detection,
* :mod:`gcww.coefficients` for the closed-form stability coefficients,
* :mod:`gcww.stokes` for the second-order Stokes expansion,
* :mod:`gcww.reduced` for the leading-order 4x4 eigenvalue model,
* :mod:`gcww.bloch` for the Fourier-truncated spectral oracle,
* :mod:`gcww.exact_wave` for Stokes waves solved to machine precision,
* :mod:`gcww.diagram` for stability diagrams and curve tracing,
* :mod:`gcww.cli` for the ``python -m gcww`` command line.
"""

from .coefficients import CoefficientSet, KatoConstants, coefficient_set, e22_composite, e_wb_composite, kato_constants
from .diagram import StabilityVerdict, classify_point, scan_grid, trace_curve
from .errors import GcwwError, SingularPointError, StablePointError
from .params import PhysicalParams, make_params
from .stokes import StokesExpansion, build_expansion, closed_form_expansion

__version__ = "0.1.0"

__all__ = [
    "CoefficientSet", "KatoConstants", "PhysicalParams", "StabilityVerdict", "StokesExpansion",
    "GcwwError", "SingularPointError", "StablePointError",
    "build_expansion", "classify_point", "closed_form_expansion", "coefficient_set",
    "e22_composite", "e_wb_composite", "kato_constants", "make_params", "scan_grid", "trace_curve",
]
