"""Sample-efficient characterization of a decohering qubit.

Simulates projective-measurement records of a single qubit's damped coherent
oscillation, reconstructs the continuous signal by either Nyquist-rate sinc
interpolation or second-order interleaved (bandpass) sampling, and estimates
the oscillation frequency and decoherence rate from a resonance fit to the
reconstruction's amplitude spectrum.
"""

from .config import ConfigError, ExperimentConfig, PlanSpec, parse_config
from .dynamics import (
    BlochState,
    InvalidBloch,
    NegativeTime,
    OverdampedRegime,
    QubitParams,
    StepTooLarge,
    bloch_at,
    damped_frequency,
    ode_evolve,
    ode_trajectory,
    prob_plus,
)
from .harness import (
    WindowMismatch,
    central_half,
    equivalent_sinc_plan,
    report_timing,
    run_reconstruction,
    run_spectrum,
    run_timing,
    sweep_estimates,
)
from .kernels import (
    InterleaveKernelParams,
    KernelSingular,
    default_offset,
    interleave_order,
    kernel_S,
)
from .measurement import (
    InvalidBand,
    MeasurementRecord,
    OddM,
    PlanMismatch,
    SamplingPlan,
    Scheme,
    build_interleaved_schedule,
    build_sinc_schedule,
    expected_record,
    min_total_time,
    record_from_csv,
    record_to_csv,
    simulate_record,
    split_interleaved,
)
from .reconstruction import (
    ReconstructedSignal,
    interleaved_reconstruct,
    reconstruct,
    rendering_to_csv,
    sinc_reconstruct,
)
from .spectral import (
    EmptyWindow,
    NoPeakInBand,
    PeakAtEdge,
    ResonanceFit,
    SearchGrid,
    Spectrum,
    amplitude_spectrum,
    fit_resonance,
    fit_to_kv,
    lorentzian_model,
    refine_peak,
    resonance_model,
    spectrum_to_csv,
)

__version__ = "0.1.0"
