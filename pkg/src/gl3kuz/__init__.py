"""gl3kuz: desk-scale numerics for the arithmetic side of the GL(3)
Kuznetsov formula attached to the generalized principal series.

Subpackages by concern:

- ``special_functions``: log-gamma, Bessel J, beta, Q(d, s), spectral density
- ``quadrature``: adaptive Gauss-Kronrod, vertical-contour integration,
  the compact bump weight and its Mellin-Fourier transform
- ``kloosterman``: exact Weyl-element Kloosterman sums and their finite
  Fourier transforms, plus brute-force verifiers
- ``lfunction``: Hecke eigenvalues from Satake parameters, amplifier,
  archimedean factor, conductor and convexity benchmarks
- ``kernels``: the archimedean kernels for the w4 and w6 Weyl elements in
  both Mellin-Barnes and Bessel-integral form, and the Whittaker function
- ``transforms``: spectrally averaged weights, Fourier-transformed kernels
  and the decay-wall scan drivers
- ``assembly``: the diagonal and Kloosterman terms of the summation formula
- ``phase``: the stationary-phase surface, its derivatives and the
  admissible-region measure estimates
- ``cli``: command-line front end with result cache and sweep tables
"""

__version__ = "0.1.0"

from .special_functions import (  # noqa: F401
    SpectralPoint,
    bessel_j,
    bessel_j_derivative,
    beta_fn,
    log_gamma,
    q_ratio,
    spec_density,
)
