"""Mutual information and probabilistic shaping for finite constellations on the AWGN channel."""

__version__ = "0.1.0"

from .analysis import capacity_gap_report, curve_difference_energy, kl_commutative, kl_divergence
from .blahut_arimoto import BaResult, ba_capacity, ba_sweep, numerical_capacity_oracle
from .channel import AwgnChannel, SnrPoint, awgn_capacity, gaussian_cdf, sample_noise, snr_from_sigma
from .constellation import (
    Constellation,
    Family,
    apply_gain,
    average_power,
    entropy,
    make_constellation,
    normalize_unit_energy,
    uniform,
)
from .constrained_ba import (
    ConstrainedBaResult,
    GainSearchConfig,
    cba_sweep,
    compute_t,
    gain_search,
    modified_ba,
    solve_lagrange_lambda,
)
from .curve import CurvePoint, MiCurve
from .mi_continuous import McConfig, mi_mc_general, mi_mc_uniform
from .mi_discrete import mi_discrete, mi_entropy_decomposition, quantizer_shift_sweep
from .quantizer import QuantSettings, QuantizerGrid, build_grid, channel_matrix, quantize, transition_matrix
from .shaping_mb import mb_distribution, mb_envelope, mb_unit_energy_system, negative_lambda_grid

__all__ = [
    "__version__",
    "capacity_gap_report",
    "curve_difference_energy",
    "kl_commutative",
    "kl_divergence",
    "BaResult",
    "ba_capacity",
    "ba_sweep",
    "numerical_capacity_oracle",
    "AwgnChannel",
    "SnrPoint",
    "awgn_capacity",
    "gaussian_cdf",
    "sample_noise",
    "snr_from_sigma",
    "Constellation",
    "Family",
    "apply_gain",
    "average_power",
    "entropy",
    "make_constellation",
    "normalize_unit_energy",
    "uniform",
    "ConstrainedBaResult",
    "GainSearchConfig",
    "cba_sweep",
    "compute_t",
    "gain_search",
    "modified_ba",
    "solve_lagrange_lambda",
    "CurvePoint",
    "MiCurve",
    "McConfig",
    "mi_mc_general",
    "mi_mc_uniform",
    "mi_discrete",
    "mi_entropy_decomposition",
    "quantizer_shift_sweep",
    "QuantSettings",
    "QuantizerGrid",
    "build_grid",
    "channel_matrix",
    "quantize",
    "transition_matrix",
    "mb_distribution",
    "mb_envelope",
    "mb_unit_energy_system",
    "negative_lambda_grid",
]
