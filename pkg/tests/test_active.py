import math

import numpy as np
import pytest

from nnvqe import (
    AcquisitionConfig,
    ConfigurationError,
    EncoderSpec,
    LrSchedule,
    TrainConfig,
    UsageError,
    acquisition_scores,
    active_learn,
    build_hea,
    init_encoder,
    variance,
    xxz_family,
)
from nnvqe.training import Model


def model(seed=0):
    fam = xxz_family(4, 0.75)
    c = build_hea(4, 1)
    spec = EncoderSpec("mlp", 1, c.n_params, hidden_dim=4, seed=seed)
    return Model(fam, c, spec, init_encoder(spec) * 5)


def train_cfg(epochs=5):
    fam = xxz_family(4, 0.75)
    c = build_hea(4, 1)
    spec = EncoderSpec("mlp", 1, c.n_params, hidden_dim=4)
    return TrainConfig(fam, "hea", 1, spec, [[0.0]], epochs, LrSchedule(0.05))


POOL = np.linspace(-2, 2, 9)


def test_selected_point_has_variance_only():
    m = model()
    scores, var, dist = acquisition_scores(m, POOL, [POOL[3]], mu=6.0)
    assert dist[3] == 0.0
    assert scores[3] == var[3]


def test_mu_zero_ranks_by_variance():
    m = model()
    scores, var, _ = acquisition_scores(m, POOL, [POOL[0]], mu=0.0)
    np.testing.assert_array_equal(scores, var)


def test_eigenstate_scores_distance_only():
    # zero weights give zero angles and the eigenstate |0000>
    m = model()
    m.weights = np.zeros_like(m.weights)
    scores, var, dist = acquisition_scores(m, POOL, [[0.0]], mu=2.5)
    assert np.all(var < 1e-20)
    np.testing.assert_allclose(scores, 2.5 * np.abs(POOL), atol=1e-12)


def test_scores_use_eval_states():
    m = model()
    scores, var, _ = acquisition_scores(m, POOL[:2], [[5.0]], mu=1.0)
    for p, v in zip(POOL[:2], var):
        assert v == pytest.approx(variance(m.state([p]), m.family([p])))


def test_two_parameter_distance_is_euclidean():
    fam = xxz_family(4, None)
    c = build_hea(4, 1)
    spec = EncoderSpec("affine", 2, c.n_params)
    m = Model(fam, c, spec, np.zeros(spec.n_weights))
    _, _, dist = acquisition_scores(m, [[3.0, 4.0]], [[0.0, 0.0], [10.0, 10.0]], mu=1.0)
    assert dist[0] == pytest.approx(5.0)


def test_empty_selection_rejected():
    with pytest.raises(UsageError):
        acquisition_scores(model(), POOL, np.zeros((0, 1)), 1.0)


def test_mu_scaling_moves_argmax_outward():
    m = model(3)
    sel = [[0.0]]
    for c in (2.0, 10.0):
        s1, v1, d1 = acquisition_scores(m, POOL, sel, 1.0)
        s2, v2, d2 = acquisition_scores(m, POOL, sel, c)
        np.testing.assert_allclose(d2, c * d1)
        np.testing.assert_array_equal(v1, v2)
        assert abs(POOL[np.argmax(s2)]) >= abs(POOL[np.argmax(s1)])


def test_vacuous_threshold_stops_after_round_zero():
    acq = AcquisitionConfig(POOL, POOL, threshold=math.inf, seed=1)
    res = active_learn(acq, train_cfg())
    assert len(res.selected_indices) == 1 and res.converged and len(res.rounds) == 1


def test_single_point_pool():
    acq = AcquisitionConfig([0.5], [0.5, 1.0], threshold=0.0)
    res = active_learn(acq, train_cfg())
    np.testing.assert_array_equal(res.selected, [[0.5]])
    assert res.exhausted and not res.converged


@pytest.mark.parametrize("warm", [True, False])
def test_growth_and_score_dominance(warm):
    acq = AcquisitionConfig(POOL, POOL, mu=0.5, threshold=0.0, max_points=5, warm_start=warm, seed=2)
    rounds = []
    res = active_learn(acq, train_cfg(), callback=rounds.append)
    idx = res.selected_indices
    assert len(idx) == 5 and len(set(idx)) == 5
    assert [r.round for r in res.rounds] == list(range(5))
    assert res.exhausted
    assert math.isnan(res.rounds[0].score)
    for r in res.rounds[1:]:
        assert r.score == pytest.approx(r.variance_term + r.distance_term)


def test_added_point_is_argmax_of_rescan():
    cfg = train_cfg(epochs=3)
    acq = AcquisitionConfig(POOL, POOL, mu=0.3, threshold=0.0, max_points=2, seed=4)
    res = active_learn(acq, cfg)
    first, second = res.selected_indices
    # retrain the round-0 model and rescan the whole pool
    from dataclasses import replace
    from nnvqe import train

    c0 = replace(cfg, points=POOL[[first]][:, None], seed=cfg.seed, circuit=cfg.circuit)
    w, _ = train(c0, init_encoder(c0.encoder))
    scores, _, _ = acquisition_scores(c0.model(w), POOL, [[POOL[first]]], 0.3)
    scores[first] = -np.inf
    assert second == int(np.argmax(scores))


def test_round_log_csv(tmp_path):
    acq = AcquisitionConfig(POOL, POOL, threshold=0.0, max_points=2)
    res = active_learn(acq, train_cfg(3))
    lines = res.to_csv(tmp_path / "r.csv").read_text().splitlines()
    assert lines[0] == "round,added_point,score,variance_term,distance_term,test_max_rel_err"
    assert len(lines) == 3


def test_config_validation():
    with pytest.raises(ConfigurationError):
        AcquisitionConfig([], [0.0])
    with pytest.raises(ConfigurationError):
        AcquisitionConfig([0.0], [0.0], mu=-1)
