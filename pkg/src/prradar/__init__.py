"""Delay-Doppler radar detection sandbox.

Core pipeline: generate a pseudo-random probing sequence, pass it through a
sparse time-frequency channel with additive noise, locate the echo's
ambiguity-grid peaks, and score detections. On top of that: Monte Carlo
performance sweeps and statistical oracles for the concentration facts the
detection analysis rests on. Everything is seeded and reproducible.
"""

from .ambiguity import (
    TimeFreqShift,
    ambiguity_fast,
    ambiguity_naive,
    ambiguity_point,
    shift_apply,
)
from .channel import (
    ChannelParams,
    NoiseModel,
    Target,
    apply_channel,
    make_channel,
    sample_attenuations,
    sample_noise,
    sample_shifts,
    synthesize_echo,
)
from .detector import (
    DetectionReport,
    DetectorConfig,
    TermBreakdown,
    classify,
    decompose_terms,
    delta_peaks,
    detect,
)
from .montecarlo import (
    SweepReport,
    SweepRow,
    TrialConfig,
    estimate_metrics,
    regime_sparsity,
    run_trial,
    sweep,
)
from .oracles import (
    OracleReport,
    intersectivity_search,
    oracle_almost_orthogonality,
    oracle_intersectivity,
    oracle_slice_largeness,
    oracle_sqrt_cancellation,
)
from .sequences import (
    PseudoRandomCert,
    certify_pseudo_random,
    gen_alltop,
    gen_random_phase,
    is_prime,
)

__version__ = "0.1.0"

__all__ = [
    "TimeFreqShift",
    "ambiguity_fast",
    "ambiguity_naive",
    "ambiguity_point",
    "shift_apply",
    "ChannelParams",
    "NoiseModel",
    "Target",
    "apply_channel",
    "make_channel",
    "sample_attenuations",
    "sample_noise",
    "sample_shifts",
    "synthesize_echo",
    "DetectionReport",
    "DetectorConfig",
    "TermBreakdown",
    "classify",
    "decompose_terms",
    "delta_peaks",
    "detect",
    "SweepReport",
    "SweepRow",
    "TrialConfig",
    "estimate_metrics",
    "regime_sparsity",
    "run_trial",
    "sweep",
    "OracleReport",
    "intersectivity_search",
    "oracle_almost_orthogonality",
    "oracle_intersectivity",
    "oracle_slice_largeness",
    "oracle_sqrt_cancellation",
    "PseudoRandomCert",
    "certify_pseudo_random",
    "gen_alltop",
    "gen_random_phase",
    "is_prime",
    "__version__",
]
