"""Quantum information measures for a solitonic position-dependent-mass model.

A particle with mass profile m(x) = m0 sech^2(a x) in the hyperbolic barrier
V = V1 coth^2 + V2 csch^2 has closed-form bound states; this package
evaluates them, cross-checks them against independent numerical oracles
(adaptive quadrature, numeric Fourier transform, a finite-difference
eigensolver), and computes Shannon entropies, Fisher information, moments
and the associated uncertainty inequalities.
"""

from .errors import (
    ConvergenceFailure,
    DomainError,
    InvalidRadicand,
    MomentMismatch,
    NonTerminating,
    NotConverged,
    PdmqiError,
    PoleInC,
    SingularAtOrigin,
    SingularPotentialOnGrid,
    UnsupportedLevel,
)
from .model import (
    ModelParams,
    dispersion_energy,
    effective_potential_z,
    mass_momentum,
    mass_position,
    potential_x,
    x_to_z,
    z_to_x,
)
from .special import HypergeometricArgs, hyp2f1_terminating
from .numerics import (
    CosineTransform,
    GridSpec,
    QuadratureResult,
    SpectrumResult,
    fd_eigensolve,
    integrate_interval,
    integrate_real_line,
    momentum_cutoff,
    numeric_fourier,
)
from .analytic import (
    BoundState,
    QuantizationParams,
    energy_level,
    fitted_phi_constant,
    general_psi1,
    make_bound_state,
    momentum_amplitude,
    momentum_amplitude_prime,
    normalized_phi,
    normalized_phi_prime,
    normalized_psi,
    psi_dprime,
    psi_prime,
    quantization_params,
)
from .info import (
    BBM_BOUND,
    InequalityMargins,
    InfoReport,
    Moments,
    build_report,
    entropy_density_p,
    entropy_density_x,
    fisher_density_p,
    fisher_density_x,
    fisher_p,
    fisher_x,
    inequality_report,
    moments,
    shannon_p,
    shannon_x,
)

__version__ = "0.1.0"
