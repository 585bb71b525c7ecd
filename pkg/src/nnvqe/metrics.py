"""Evaluation of trained models against exact diagonalization."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import StructuralError
from .hamiltonian import HamiltonianFamily, exact_spectrum_low, expectation, variance
from .state import StateVector
from .training import Model, parameter_update_magnitude, relative_error  # noqa: F401

_EXACT: dict = {}


def exact_ground_space(family: HamiltonianFamily, point):
    """``(E0, basis)`` of the ground space, cached per family and point."""
    point = np.atleast_1d(np.asarray(point, dtype=float))
    key = None if family.cache_key is None else (family.cache_key, tuple(point.tolist()))
    if key is not None and key in _EXACT:
        return _EXACT[key]
    e0, space, _ = exact_spectrum_low(family(point))
    space.flags.writeable = False
    if key is not None:
        _EXACT[key] = (e0, space)
    return e0, space


def exact_energy(family: HamiltonianFamily, point) -> float:
    return exact_ground_space(family, point)[0]


def fidelity(a: StateVector, b) -> float:
    """``|<a|b>|^2``; if ``b`` is a 2-D array its columns are taken as an
    orthonormal basis and the overlap with the whole subspace is returned."""
    amps_b = b.amplitudes if isinstance(b, StateVector) else np.asarray(b)
    if amps_b.shape[0] != a.amplitudes.shape[0]:
        raise StructuralError(f"dimension mismatch: {a.amplitudes.shape[0]} vs {amps_b.shape[0]}")
    if amps_b.ndim == 1:
        return float(abs(np.vdot(a.amplitudes, amps_b)) ** 2)
    return float(np.sum(np.abs(amps_b.conj().T @ a.amplitudes) ** 2))


@dataclass
class EvalRecord:
    point: np.ndarray
    e_pred: float
    e_exact: float
    rel_err: float
    fidelity: float
    variance: float


def evaluate_point(model: Model, point) -> EvalRecord:
    point = np.atleast_1d(np.asarray(point, dtype=float))
    state = model.state(point)
    h = model.family(point)
    e_pred = expectation(state, h)
    e0, space = exact_ground_space(model.family, point)
    return EvalRecord(point, e_pred, e0, relative_error(e_pred, e0),
                      fidelity(state, space), variance(state, h))


def evaluate_on_grid(model: Model, points) -> list[EvalRecord]:
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    return [evaluate_point(model, p) for p in points]


def grid_1d(lo: float, hi: float, num: int) -> np.ndarray:
    return np.linspace(lo, hi, num)


def grid_2d(delta_range, lam_range) -> np.ndarray:
    """All (delta, lambda) pairs, delta varying slowest."""
    d = np.linspace(*delta_range)
    lam = np.linspace(*lam_range)
    dd, ll = np.meshgrid(d, lam, indexing="ij")
    return np.column_stack([dd.ravel(), ll.ravel()])


def write_sweep_csv(path, records: list[EvalRecord], names=("delta",), extra=None) -> Path:
    """Sweep CSV ``delta[,lambda],e_pred,e_exact,rel_err,fidelity,variance``.

    ``extra`` maps additional column names to callables of the point.
    """
    extra = extra or {}
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([*names, "e_pred", "e_exact", "rel_err", "fidelity", "variance", *extra])
        for r in records:
            w.writerow([*(repr(float(v)) for v in r.point), repr(r.e_pred), repr(r.e_exact),
                        repr(r.rel_err), repr(r.fidelity), repr(r.variance),
                        *(repr(float(f(r.point))) for f in extra.values())])
    return path


def dump_circuit_parameters(model: Model, grid) -> np.ndarray:
    """Rows ``[point..., theta_0..theta_{m-1}, cos theta_0..cos theta_{m-1}]``."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim == 1:
        grid = grid[:, None]
    thetas = np.array([model.theta(p) for p in grid])
    return np.hstack([grid, thetas, np.cos(thetas)])


def write_param_dump_csv(path, model: Model, grid) -> Path:
    table = dump_circuit_parameters(model, grid)
    m = model.circuit.n_params
    names = list(model.family.parameter_names)
    header = names + [f"theta_{k}" for k in range(m)] + [f"cos_theta_{k}" for k in range(m)]
    path = Path(path)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in table:
            w.writerow([repr(float(v)) for v in row])
    return path


def summarize(records: list[EvalRecord]) -> dict:
    err = np.array([r.rel_err for r in records])
    fid = np.array([r.fidelity for r in records])
    return {
        "n_points": len(records),
        "median_rel_err": float(np.median(err)),
        "mean_rel_err": float(np.mean(err)),
        "max_rel_err": float(np.max(err)),
        "mean_fidelity": float(np.mean(fid)),
    }
