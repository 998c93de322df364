"""Avoidability of unions of balls for radial potential kernels.

The package decides whether a locally finite union of disjoint balls is
unavoidable (hit with probability one from every starting point) for Markov
processes whose potential kernel is a decreasing radial density, computes the
explicit comparability and shell constants behind that decision, and checks
both against walk-based Monte Carlo estimates of hitting probabilities.
"""

__version__ = "0.1.0"

from .errors import (
    CertificationError,
    ChampagneError,
    ConfigError,
    ExtrapolationError,
    KernelDomainError,
    QuadratureError,
    SimulationError,
)
from .kernel import (
    GeometricStableKernel,
    GeometricStableSmallR,
    Kernel,
    KernelCertificate,
    RieszKernel,
    TabulatedKernel,
    ball_average_potential,
    certify,
    kernel_from_json,
    kernel_to_json,
    ld_ratio,
    verify_ld,
    verify_ud,
)

__all__ = [
    "__version__",
    "ChampagneError",
    "KernelDomainError",
    "ExtrapolationError",
    "QuadratureError",
    "CertificationError",
    "ConfigError",
    "SimulationError",
    "Kernel",
    "RieszKernel",
    "GeometricStableKernel",
    "GeometricStableSmallR",
    "TabulatedKernel",
    "KernelCertificate",
    "ld_ratio",
    "verify_ld",
    "verify_ud",
    "certify",
    "ball_average_potential",
    "kernel_from_json",
    "kernel_to_json",
]
