"""hetpoly: Metropolis dynamics and shape-diffusion analysis for disordered
heteropolymer chains, with a Langevin normal-mode oracle and Hessian
spectral analysis."""

__version__ = "0.1.0"

from .model import (  # noqa: F401
    ModelParams,
    NoiseMatrix,
    EnergyBreakdown,
    total_energy,
    energy_delta,
    equilibrium_lj_distance,
    generate_noise,
)
