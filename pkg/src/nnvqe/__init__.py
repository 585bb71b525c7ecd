"""Neural-network encoded VQE on an exact statevector simulator."""
from .active import AcquisitionConfig, acquisition_scores, active_learn
from .ansatz import Circuit, build_ansatz, build_hea, build_mera, evaluate_circuit
from .encoder import (
    EncoderKind,
    EncoderSpec,
    encoder_backward,
    encoder_forward,
    init_encoder,
    load_checkpoint,
    save_checkpoint,
)
from .errors import (
    ConfigurationError,
    DomainError,
    NNVQEError,
    NumericalError,
    ResourceError,
    StructuralError,
    UsageError,
)
from .gradients import EnergyGradient, adjoint_gradient, finite_difference_gradient
from .hamiltonian import (
    HamiltonianFamily,
    PauliString,
    PauliSum,
    apply_pauli_sum,
    build_xxz,
    exact_ground_state,
    expectation,
    phase_boundary_hc,
    phase_boundary_hs,
    variance,
    xxz_family,
)
from .kernels import BACKEND
from .metrics import EvalRecord, dump_circuit_parameters, evaluate_on_grid, fidelity
from .state import Gate, GateKind, StateVector, apply_gate, inner_product, new_zero_state
from .training import (
    AdamState,
    LrSchedule,
    Model,
    TrainConfig,
    TrainHistory,
    adam_step,
    convergence_rate_experiment,
    cost_and_grad,
    lr_at,
    parameter_update_magnitude,
    train,
)

__version__ = "0.1.0"
