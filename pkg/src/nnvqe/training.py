"""Joint pre-training of an encoder over a set of Hamiltonian parameters.

The cost is the plain sum of energies over the training points.  Each
epoch makes one full-batch pass and one Adam update; the learning rate
decays in steps counted in epochs.
"""
from __future__ import annotations

import csv
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .ansatz import Circuit, build_ansatz, evaluate_circuit
from .encoder import EncoderKind, EncoderSpec, encoder_backward, encoder_forward, init_encoder
from .errors import ConfigurationError, NumericalError, StructuralError, UsageError
from .gradients import adjoint_gradient
from .hamiltonian import HamiltonianFamily, PauliSum, expectation

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LrSchedule:
    initial: float
    factor: float = 1.0
    interval: int = 1000

    def __post_init__(self):
        if not self.initial > 0:
            raise ConfigurationError(f"learning rate must be positive, got {self.initial}")
        if not 0.0 < self.factor <= 1.0:
            raise ConfigurationError(f"decay factor must lie in (0, 1], got {self.factor}")
        if self.interval < 1:
            raise ConfigurationError(f"decay interval must be >= 1, got {self.interval}")


def lr_at(schedule: LrSchedule, step: int) -> float:
    if step < 0:
        raise ConfigurationError(f"step must be >= 0, got {step}")
    return schedule.initial * schedule.factor ** (step // schedule.interval)


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def zeros(cls, size: int, **kw) -> AdamState:
        return cls(np.zeros(size), np.zeros(size), **kw)


def adam_step(state: AdamState, weights, d_phi, rate: float):
    """Return ``(new_weights, new_state)``; inputs are not modified."""
    weights = np.asarray(weights, dtype=float)
    d_phi = np.asarray(d_phi, dtype=float)
    if not weights.shape == d_phi.shape == state.m.shape:
        raise StructuralError(
            f"Adam shapes disagree: weights {weights.shape}, grad {d_phi.shape}, state {state.m.shape}"
        )
    t = state.t + 1
    m = state.beta1 * state.m + (1.0 - state.beta1) * d_phi
    v = state.beta2 * state.v + (1.0 - state.beta2) * d_phi * d_phi
    m_hat = m / (1.0 - state.beta1 ** t)
    v_hat = v / (1.0 - state.beta2 ** t)
    new = weights - rate * m_hat / (np.sqrt(v_hat) + state.eps)
    return new, replace(state, m=m, v=v, t=t)


@dataclass
class Model:
    """A trained (or freshly initialized) encoder attached to its circuit."""

    family: HamiltonianFamily
    circuit: Circuit
    spec: EncoderSpec
    weights: np.ndarray

    def theta(self, point) -> np.ndarray:
        return encoder_forward(self.spec, self.weights, point, "eval")[0]

    def state(self, point):
        return evaluate_circuit(self.circuit, self.theta(point))

    def energy(self, point) -> float:
        return expectation(self.state(point), self.family(point))


@dataclass
class TrainConfig:
    family: HamiltonianFamily
    ansatz: str
    depth: int
    encoder: EncoderSpec
    points: np.ndarray
    epochs: int
    schedule: LrSchedule
    seed: int = 0
    threads: int = 1
    circuit: Circuit = field(default=None, repr=False)

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if self.points.shape[1] != self.family.dim and self.points.shape[0] == self.family.dim:
            self.points = self.points.T.copy()
        if self.points.shape[1] != self.family.dim:
            raise ConfigurationError(
                f"training points have dimension {self.points.shape[1]}, family needs {self.family.dim}"
            )
        if self.encoder.input_dim != self.family.dim:
            raise ConfigurationError("encoder input size differs from the Hamiltonian parameter count")
        if self.circuit is None:
            self.circuit = build_ansatz(self.ansatz, self.family.n_qubits, self.depth)
        if self.encoder.output_dim != self.circuit.n_params:
            raise ConfigurationError(
                f"encoder emits {self.encoder.output_dim} angles, circuit has {self.circuit.n_params}"
            )
        self._hams: dict[int, PauliSum] = {}

    def hamiltonian(self, index: int) -> PauliSum:
        if index not in self._hams:
            self._hams[index] = self.family(self.points[index])
        return self._hams[index]

    def model(self, weights) -> Model:
        return Model(self.family, self.circuit, self.encoder, np.asarray(weights))


@dataclass
class EpochRecord:
    epoch: int
    cost: float
    lr: float
    param_update: float
    point_energies: np.ndarray = field(repr=False, default=None)


@dataclass
class TrainHistory:
    records: list[EpochRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])

    def to_csv(self, path) -> Path:
        path = Path(path)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["epoch", "cost", "lr", "param_update"])
            for r in self.records:
                w.writerow([r.epoch, repr(r.cost), repr(r.lr), repr(r.param_update)])
        return path


def dropout_rng(seed: int, epoch: int, index: int) -> np.random.Generator:
    """Independent stream per (seed, epoch, point) so threading cannot change results."""
    return np.random.default_rng([seed, epoch, index])


def _point_cost_grad(config: TrainConfig, weights, index: int, epoch: int):
    rng = dropout_rng(config.seed, epoch, index)
    theta, cache = encoder_forward(config.encoder, weights, config.points[index], "train", rng)
    eg = adjoint_gradient(config.circuit, theta, config.hamiltonian(index))
    return eg.energy, encoder_backward(config.encoder, weights, cache, eg.d_theta)


def cost_and_grad(config: TrainConfig, weights, indices=None, epoch: int = 0, pool=None,
                  energies_out: list | None = None):
    """Summed energy over the chosen training points and its weight gradient.

    Points are reduced in ascending index order, with or without ``pool``.
    """
    if indices is None:
        indices = range(len(config.points))
    indices = sorted(indices)
    if not indices:
        raise UsageError("cost_and_grad needs at least one training point")
    weights = np.asarray(weights, dtype=float)
    if pool is not None and len(indices) > 1:
        results = list(pool.map(lambda i: _point_cost_grad(config, weights, i, epoch), indices))
    else:
        results = [_point_cost_grad(config, weights, i, epoch) for i in indices]
    cost = 0.0
    grad = np.zeros_like(weights)
    for e, g in results:
        cost += e
        grad += g
    if energies_out is not None:
        energies_out.extend(e for e, _ in results)
    return cost, grad


def parameter_update_magnitude(theta_prev, theta_curr) -> float:
    theta_prev = np.asarray(theta_prev, dtype=float)
    theta_curr = np.asarray(theta_curr, dtype=float)
    if theta_prev.shape != theta_curr.shape:
        raise StructuralError(f"parameter vectors differ in shape: {theta_prev.shape} vs {theta_curr.shape}")
    return float(np.abs(theta_curr - theta_prev).sum())


def train(config: TrainConfig, weights=None, epochs: int | None = None, callback=None):
    """Run full-batch Adam; returns ``(weights, TrainHistory)``.

    ``weights`` defaults to a fresh ``init_encoder``; pass previous weights to
    warm-start.  ``callback(epoch, weights, record)`` runs after every update.
    """
    epochs = config.epochs if epochs is None else epochs
    if epochs < 1:
        raise UsageError(f"training needs at least one epoch, got {epochs}")
    weights = init_encoder(config.encoder) if weights is None else np.array(weights, dtype=float)
    adam = AdamState.zeros(weights.size)
    history = TrainHistory()
    probe = config.points[0]
    theta_prev = encoder_forward(config.encoder, weights, probe, "eval")[0]

    pool = ThreadPoolExecutor(config.threads) if config.threads > 1 else None
    try:
        for step in range(epochs):
            epoch = step + 1
            rate = lr_at(config.schedule, step)
            energies = []
            cost, grad = cost_and_grad(config, weights, epoch=epoch, pool=pool,
                                       energies_out=energies)
            if not (math.isfinite(cost) and np.all(np.isfinite(grad))):
                raise NumericalError(f"non-finite cost or gradient at epoch {epoch}", epoch=epoch)
            weights, adam = adam_step(adam, weights, grad, rate)
            theta = encoder_forward(config.encoder, weights, probe, "eval")[0]
            rec = EpochRecord(epoch, cost, rate, parameter_update_magnitude(theta_prev, theta),
                              np.array(energies))
            theta_prev = theta
            history.records.append(rec)
            if callback is not None:
                callback(epoch, weights, rec)
    finally:
        if pool is not None:
            pool.shutdown()
    return weights, history


def direct_spec_for(spec: EncoderSpec) -> EncoderSpec:
    return EncoderSpec(EncoderKind.DIRECT, spec.input_dim, spec.output_dim, seed=spec.seed)


def relative_error(e_pred: float, e_exact: float) -> float:
    if abs(e_exact) < 1e-6:
        raise NumericalError(f"exact energy {e_exact:.3e} is too close to zero for a relative error")
    return abs(e_pred - e_exact) / abs(e_exact)


@dataclass
class ConvergenceRow:
    delta: float
    nn_rate: float
    vqe_rate: float
    nn_errors: list[float]
    vqe_errors: list[float]


def paired_runs(config: TrainConfig, trial_seed: int, epochs: int | None = None):
    """Train an encoder and a plain-VQE baseline started from the same angles.

    The baseline's angles are initialized to the untrained encoder's output at
    the first training point.  Returns ``((nn_weights, nn_hist), (vqe_weights,
    vqe_hist), direct_config)``.
    """
    spec = replace(config.encoder, seed=trial_seed)
    nn_cfg = replace(config, encoder=spec, seed=trial_seed, circuit=config.circuit)
    w0 = init_encoder(spec)
    theta0 = encoder_forward(spec, w0, nn_cfg.points[0], "eval")[0]
    vqe_cfg = replace(nn_cfg, encoder=direct_spec_for(spec), points=nn_cfg.points[:1])
    nn = train(nn_cfg, w0, epochs)
    vqe = train(vqe_cfg, theta0, epochs)
    return nn, vqe, vqe_cfg


def convergence_rate_experiment(config: TrainConfig, deltas, trials: int = 20,
                                threshold: float = 0.1, epoch_budget: int = 100,
                                seed0: int = 0, exact_energy=None) -> list[ConvergenceRow]:
    """Fraction of seeds whose final eval-mode relative error is below ``threshold``.

    ``config`` supplies the family, ansatz, encoder shape and schedule; its
    training points are replaced by each single delta in turn.
    """
    from .metrics import exact_energy as _exact

    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    exact_energy = exact_energy or _exact
    rows = []
    for delta in deltas:
        point = np.atleast_1d(np.asarray(delta, dtype=float))
        cfg = replace(config, points=point[None, :], circuit=config.circuit)
        e0 = exact_energy(cfg.family, point)
        nn_err, vqe_err = [], []
        for trial in range(trials):
            (w_nn, _), (w_vqe, _), vqe_cfg = paired_runs(cfg, seed0 + trial, epoch_budget)
            nn_err.append(relative_error(cfg.model(w_nn).energy(point), e0))
            vqe_err.append(relative_error(vqe_cfg.model(w_vqe).energy(point), e0))
            log.info("delta=%s trial=%d nn=%.4g vqe=%.4g", delta, trial, nn_err[-1], vqe_err[-1])
        rows.append(ConvergenceRow(
            float(point[0]),
            float(np.mean(np.array(nn_err) < threshold)),
            float(np.mean(np.array(vqe_err) < threshold)),
            nn_err, vqe_err,
        ))
    return rows
