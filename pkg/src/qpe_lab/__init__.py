"""qpe_lab: quantum phase estimation under single-qubit unital noise.

Density-matrix and Monte Carlo trajectory simulation of the phase-estimation
circuit transpiled to the {I, X, SX, Rz, CX} basis with a noise channel after
every basis gate, plus sweep orchestration and exponential-saturation fits of
the output standard deviation.
"""

from .channels import (
    CHANNEL_KINDS,
    NoiseChannel,
    apply_channel,
    choi_matrix,
    kraus_to_map_check,
    make_channel,
)
from .circuit import (
    Circuit,
    CircuitOp,
    build_inverse_qft,
    build_qpe,
    circuit_unitary,
    parse_circuit,
    serialize_circuit,
)
from .engine import (
    PhaseDistribution,
    SimSpec,
    distribution_stats,
    qpe_distribution,
    run_exact,
    run_trajectories,
)
from .experiment import (
    FitResult,
    SweepConfig,
    SweepRow,
    fit_exponential,
    n_sweep_summary,
    run_sweep,
)
from .gates import Gate, controlled_power, eigenphase_unitary, embed, standard_gate
from .kernels import active_backend, available_backends, set_backend
from .linalg import check_state, dagger, kron, matmul, partial_trace
from .transpile import equivalent_up_to_phase, gate_census, transpile

__version__ = "0.1.0"

__all__ = [
    "CHANNEL_KINDS",
    "Circuit",
    "CircuitOp",
    "FitResult",
    "Gate",
    "NoiseChannel",
    "PhaseDistribution",
    "SimSpec",
    "SweepConfig",
    "SweepRow",
    "active_backend",
    "apply_channel",
    "available_backends",
    "build_inverse_qft",
    "build_qpe",
    "check_state",
    "choi_matrix",
    "circuit_unitary",
    "controlled_power",
    "dagger",
    "distribution_stats",
    "eigenphase_unitary",
    "embed",
    "equivalent_up_to_phase",
    "fit_exponential",
    "gate_census",
    "kraus_to_map_check",
    "kron",
    "make_channel",
    "matmul",
    "n_sweep_summary",
    "parse_circuit",
    "partial_trace",
    "qpe_distribution",
    "run_exact",
    "run_sweep",
    "run_trajectories",
    "serialize_circuit",
    "set_backend",
    "standard_gate",
    "transpile",
]
