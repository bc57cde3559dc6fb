"""Numerical laboratory for inverse spectral stability on a 2-D rectangle.

Forward Dirichlet spectra with boundary traces, Dirichlet-to-Neumann maps
at complex frequency (direct and spectral-series routes), high-frequency
plane-wave probing of Fourier transforms of the potential, and empirical
Hoelder-stability experiments, plus numerical certification of the
asymptotic lemmas behind the estimates.
"""

__version__ = "0.1.0"

from .errors import (
    EigensolverError,
    NearEigenvalueError,
    QuadratureError,
    TruncationError,
    ValidationError,
)
from .grid import (
    BoundaryField,
    GridSpec,
    Potential,
    boundary_inner_product,
    boundary_l2_norm,
    build_grid,
    hs_norm,
)
from .spectral import SpectralData, WeylReport, align_traces, solve_eigen, weyl_validate
from .dtn import (
    DtnMatrix,
    dtn_derivative_series,
    dtn_difference_series,
    dtn_direct,
    solve_bvp,
    split_hat_tilde,
)
from .probe import (
    FourierSample,
    ProbeGeometry,
    make_geometry,
    reconstruct_potential,
    recover_fourier,
    scattering_S,
    verify_identity_3_1,
)
from .stability import (
    DeltaMetrics,
    ExponentBundle,
    asymptotic_noise_experiment,
    compute_delta,
    gamma_of,
    holder_experiment,
)
from .lemmas import BoundReport, LemmaQuery, check_lemma1, check_lemma2, check_lemma3
