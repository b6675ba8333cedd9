"""optbistab: linearized quantum fluctuations in absorptive optical bistability.

Steady states of the bistable absorber, the linearized drift/diffusion of
its fluctuations, stationary covariances, incoherent spectra (atomic and
forward, numeric and closed-form limits), squeezing diagnostics, and
second-order photon correlations -- every closed-form limit cross-checked
against independent numeric routes.
"""

__version__ = "0.1.0"

from . import (  # noqa: F401
    correlations,
    covariance,
    lindyn,
    numerics,
    params,
    presets,
    scattering,
    spectra,
    steady_state,
)
