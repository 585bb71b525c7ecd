"""Active construction of the training set.

Each round trains on the points selected so far, scores every pool point
by energy variance plus ``mu`` times its distance to the nearest selected
point, and adds the best-scoring point.
"""
from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .encoder import init_encoder
from .errors import ConfigurationError, UsageError
from .hamiltonian import variance
from .metrics import evaluate_on_grid
from .training import Model, TrainConfig, train

log = logging.getLogger(__name__)


@dataclass
class AcquisitionConfig:
    pool: np.ndarray
    test_points: np.ndarray
    mu: float = 6.0
    threshold: float = 5e-3
    max_points: int = 20
    warm_start: bool = True
    seed: int = 0

    def __post_init__(self):
        self.pool = _as_points(self.pool)
        self.test_points = _as_points(self.test_points)
        if len(self.pool) == 0:
            raise ConfigurationError("the candidate pool is empty")
        if self.mu < 0:
            raise ConfigurationError(f"mu must be >= 0, got {self.mu}")
        if self.max_points < 1:
            raise ConfigurationError(f"max_points must be >= 1, got {self.max_points}")


def _as_points(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return a[:, None] if a.ndim == 1 else a


def acquisition_scores(model: Model, pool, selected, mu: float):
    """Return ``(scores, variance_terms, distance_terms)`` over the pool."""
    pool = _as_points(pool)
    selected = _as_points(selected)
    if len(selected) == 0:
        raise UsageError("acquisition scores need at least one selected point")
    var = np.array([variance(model.state(p), model.family(p)) for p in pool])
    dist = np.linalg.norm(pool[:, None, :] - selected[None, :, :], axis=2).min(axis=1)
    dist_term = mu * dist
    return var + dist_term, var, dist_term


@dataclass
class RoundRecord:
    round: int
    added_point: np.ndarray
    score: float
    variance_term: float
    distance_term: float
    test_max_rel_err: float


@dataclass
class ActiveResult:
    selected: np.ndarray
    selected_indices: list[int]
    weights: np.ndarray
    rounds: list[RoundRecord] = field(default_factory=list)
    converged: bool = False
    exhausted: bool = False

    def to_csv(self, path) -> Path:
        path = Path(path)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["round", "added_point", "score", "variance_term", "distance_term",
                        "test_max_rel_err"])
            for r in self.rounds:
                point = ";".join(repr(float(v)) for v in r.added_point)
                w.writerow([r.round, point, repr(r.score), repr(r.variance_term),
                            repr(r.distance_term), repr(r.test_max_rel_err)])
        return path


def active_learn(acq: AcquisitionConfig, train_config: TrainConfig, callback=None) -> ActiveResult:
    rng = np.random.default_rng(acq.seed)
    chosen = [int(rng.integers(len(acq.pool)))]
    added = dict(score=math.nan, variance_term=math.nan, distance_term=math.nan)
    weights = None
    result = ActiveResult(acq.pool[chosen], chosen, None)
    rnd = 0
    while True:
        cfg = replace(train_config, points=acq.pool[chosen], seed=train_config.seed + rnd,
                      circuit=train_config.circuit)
        start = weights if (acq.warm_start and weights is not None) else init_encoder(cfg.encoder)
        weights, _ = train(cfg, start)
        model = cfg.model(weights)
        max_err = max(r.rel_err for r in evaluate_on_grid(model, acq.test_points))
        rec = RoundRecord(rnd, acq.pool[chosen[-1]].copy(), test_max_rel_err=max_err, **added)
        result.rounds.append(rec)
        log.info("round %d: %d points, test max rel err %.3e", rnd, len(chosen), max_err)
        if callback is not None:
            callback(rec)
        result.selected, result.selected_indices, result.weights = acq.pool[chosen], list(chosen), weights
        if max_err < acq.threshold:
            result.converged = True
            break
        if len(chosen) >= min(acq.max_points, len(acq.pool)):
            result.exhausted = True
            break
        scores, var, dist = acquisition_scores(model, acq.pool, acq.pool[chosen], acq.mu)
        masked = np.where(np.isin(np.arange(len(acq.pool)), chosen), -np.inf, scores)
        best = int(np.argmax(masked))  # first maximum = lowest pool index
        chosen.append(best)
        added = dict(score=float(scores[best]), variance_term=float(var[best]),
                     distance_term=float(dist[best]))
        rnd += 1
    return result
