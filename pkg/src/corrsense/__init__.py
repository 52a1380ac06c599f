"""Distributed LMMSE estimation over a coherent fading multiple-access channel.

Sensors observe a common Gaussian source with distance-decaying spatial
correlation, amplify and forward their noisy measurements over a coherent
MAC, and a fusion center applies a scalar LMMSE weight. The package
computes the exact normalized distortion, closed-form outage probability
from the eigenvalues of the indefinite outage matrix, analytic eigenvalue
bounds, and a seeded Monte Carlo oracle that cross-validates every closed
form.
"""

__version__ = "0.1.0"

from .channel import ChannelParams, epa_gain
from .correlation import (
    CorrelationModel,
    CorrelationParams,
    CorrelationStructure,
    build_correlation,
    correlation_coefficient,
)
from .errors import ConfigError, ModelValidityError, SpectrumDegeneracyError
from .estimator import (
    distortion_fullrank_epa,
    distortion_rankone_epa,
    distortion_unity_epa,
    lmmse_estimate,
    lmmse_weight,
    normalized_distortion,
)
from .geometry import NetworkGeometry, sample_geometry
from .kernels import distortion_samples, kernel_backend
from .outage import (
    EigenSpectrum,
    SpectrumPolicy,
    eigen_spectrum,
    epa_eigenvalue_cap,
    normalized_top_eigenvalue,
    outage_curve,
    outage_epa,
    outage_from_eigenvalues,
    outage_general,
    outage_simplified,
    outage_spectrum,
    top_eigenvalue,
    weyl_lower_bound,
)
from .quadforms import QuadraticForms, build_quadratic_forms, outage_matrix
from .simulation import (
    DistortionSample,
    OutagePoint,
    SimConfig,
    draw_fading,
    geometry_for_index,
    mc_distortion_mean,
    mc_distortion_records,
    mc_outage,
    outage_curves,
    sweep_eigenvalue,
    sweep_nodes,
)

__all__ = [
    "ChannelParams",
    "ConfigError",
    "CorrelationModel",
    "CorrelationParams",
    "CorrelationStructure",
    "DistortionSample",
    "EigenSpectrum",
    "ModelValidityError",
    "NetworkGeometry",
    "OutagePoint",
    "QuadraticForms",
    "SimConfig",
    "SpectrumDegeneracyError",
    "SpectrumPolicy",
    "build_correlation",
    "build_quadratic_forms",
    "correlation_coefficient",
    "distortion_fullrank_epa",
    "distortion_rankone_epa",
    "distortion_samples",
    "distortion_unity_epa",
    "draw_fading",
    "eigen_spectrum",
    "epa_eigenvalue_cap",
    "epa_gain",
    "geometry_for_index",
    "kernel_backend",
    "lmmse_estimate",
    "lmmse_weight",
    "mc_distortion_mean",
    "mc_distortion_records",
    "mc_outage",
    "normalized_distortion",
    "normalized_top_eigenvalue",
    "outage_curve",
    "outage_curves",
    "outage_epa",
    "outage_from_eigenvalues",
    "outage_general",
    "outage_matrix",
    "outage_simplified",
    "outage_spectrum",
    "sample_geometry",
    "sweep_eigenvalue",
    "sweep_nodes",
    "top_eigenvalue",
    "weyl_lower_bound",
]
