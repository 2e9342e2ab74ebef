"""Resonance statistics of finite-volume multi-particle Anderson operators.

Builds n-particle lattice Hamiltonians with i.i.d. (in particular two-point)
disorder on cubes, computes their spectra, evaluates resonance events
exactly through interval algebra, and estimates event probabilities by
reproducible counter-based Monte Carlo.
"""

from .errors import (
    CapacityError,
    DimensionMismatchError,
    DistributionError,
    FieldCoverageError,
)
from .hamiltonian import (
    InteractionSpec,
    SymMatrix,
    build_hamiltonian,
    interaction_sup_norm,
)
from .lattice import Cube, Site, enumerate_sites, index_of, one_norm, sup_norm
from .randomfield import DistributionSpec, FieldSample, sample_field, validate
from .spectral import (
    Spectrum,
    count_below,
    dist_to_spectrum,
    full_spectrum,
    resolvent_norm,
    smallest_singular_value,
)
from .tensor import SumsetSpectrum, sumset_spectrum, verify_decomposition
from .transfer import LyapunovEstimate, lyapunov, transfer_matrix
from .wegner import (
    DecayFit,
    EventQuery,
    IntervalUnion,
    MCResult,
    WegnerParams,
    decay_fit,
    delta0,
    fatten,
    fixed_energy_event,
    h_star,
    mc_estimate,
    perturbation_check,
    two_volume_event,
    variable_energy_event,
    wilson_interval,
)

__version__ = "0.1.0"
