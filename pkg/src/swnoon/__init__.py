"""Spin-wave NOON interferometer: blockade-protocol simulator and error budget.

Subpackages by role:

- ``collective``: four-mode collective state space with exact integer
  wave-vector bookkeeping and a structural single-Rydberg constraint.
- ``protocol``: pulse semantics, the 4l+2 generation sequence, reverse
  readout, displacement phases, ionization measurement.
- ``ode``: adaptive Runge-Kutta integration of the damped, detuned
  few-level systems behind each pulse-error channel.
- ``budget``: per-pulse Rabi optimization and the composed success
  probability, atom-number error, and fidelity estimate.
- ``fringe``: superresolution fringe scans, simulated counts, and
  least-squares displacement estimation.
- ``feasibility``: van der Waals shifts, ensemble atom numbers, and
  lab-parameter verdicts.
- ``cli``: the ``swnoon`` command-line driver.
"""

from .budget import (
    DEFAULT_BRACKET,
    MHZ_TO_ANGULAR,
    ChannelProbabilities,
    ErrorBudget,
    OptimizationResult,
    SweepRow,
    atom_number_error,
    channel_probabilities,
    compose_success,
    excitation_product,
    fidelity_from_errors,
    golden_section_max,
    interferometer_fidelity,
    lifetime_to_decay_rate,
    maximize_on_bracket,
    optimize_excitation_rabi,
    optimize_transfer_rabi,
    pulse_failure_probability,
    success_probability,
    sweep_error_vs_shift,
    transfer_product,
)
from .collective import (
    BasisConfig,
    Beam,
    CollectiveState,
    Mode,
    StateError,
)
from .config import ConfigError, RunConfig
from .feasibility import (
    EnsembleSpec,
    FeasibilityReport,
    VdwCoefficients,
    atom_number,
    energy_shift,
    feasibility_report,
    min_pair_shift,
)
from .fringe import (
    DisplacementEstimate,
    EstimationError,
    FringeResult,
    estimate_displacement,
    expected_fringe_probability,
    fringe_period,
    fringe_scan,
    run_interferometer,
    simulate_counts,
)
from .ode import (
    IntegrationError,
    OdeParams,
    cross_mode_hamiltonian,
    decay_survival,
    excitation_pulse_duration,
    integrate_cross_mode,
    integrate_general,
    integrate_same_mode,
    integrate_trajectory,
    integrate_transfer,
    same_mode_hamiltonian,
    transfer_hamiltonian,
    transfer_pulse_duration,
)
from .protocol import (
    BeamGeometry,
    Displace,
    IonizeMeasure,
    ProtocolError,
    PulseSpec,
    RunResult,
    Transition,
    apply_pulse,
    build_generation_sequence,
    build_readout_sequence,
    displace,
    generate_noon,
    inverse_sequence,
    noon_branch_configs,
    noon_state,
    run,
)

__version__ = "0.1.0"
