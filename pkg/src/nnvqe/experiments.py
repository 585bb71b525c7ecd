"""Experiment runners behind the CLI; each writes CSV artifacts to a directory."""
from __future__ import annotations

import csv
import datetime
import logging
import math
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import kernels
from .active import AcquisitionConfig, active_learn
from .ansatz import build_ansatz
from .encoder import EncoderSpec, save_checkpoint
from .hamiltonian import phase_boundary_hc, phase_boundary_hs, xxz_family
from .metrics import (
    evaluate_on_grid,
    exact_energy,
    grid_1d,
    grid_2d,
    summarize,
    write_param_dump_csv,
    write_sweep_csv,
)
from .training import (
    LrSchedule,
    TrainConfig,
    convergence_rate_experiment,
    paired_runs,
    relative_error,
    train,
)

log = logging.getLogger(__name__)


class Artifacts:
    """Collects every file written so the manifest can list them all."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.files: list[str] = []

    def path(self, name: str) -> Path:
        self.files.append(name)
        return self.root / name


def _points(section: dict, family) -> np.ndarray:
    delta = grid_1d(*section["delta"])
    if family.dim == 1:
        return delta[:, None]
    if section.get("lambda") is None:
        raise cfgmod.ConfigurationError("two-parameter runs need a lambda grid")
    return grid_2d(section["delta"], section["lambda"])


def _family(cfg, n=None):
    return xxz_family(n or cfg["model"]["n_qubits"], cfg["model"]["field"])


def _train_config(cfg, family, depth, points, encoder=None, hidden=None) -> TrainConfig:
    m = cfg["model"]
    lr = cfg["train"]["lr"]
    kind = encoder or m["encoder"]
    circuit = build_ansatz(m["ansatz"], family.n_qubits, depth)
    if kind == "mlp":
        if hidden is None:
            hidden = cfgmod.per_depth(m["hidden"], depth)
        dropout = float(cfgmod.per_depth(m["dropout"], depth))
    else:
        hidden, dropout = 0, 0.0
    spec = EncoderSpec(kind, family.dim, circuit.n_params, int(hidden), dropout, cfg["seed"])
    return TrainConfig(
        family, m["ansatz"], depth, spec, points, cfg["train"]["epochs"],
        LrSchedule(lr["initial"], lr["factor"], lr["interval"]),
        seed=cfg["seed"], threads=cfg["threads"], circuit=circuit,
    )


def _write_rows(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _hc_or_nan(delta):
    return phase_boundary_hc(delta) if delta >= 1.0 else math.nan


def _train_and_sweep(cfg, art, family, depth, tag, encoder=None):
    tc = _train_config(cfg, family, depth, _points(cfg["train"], family), encoder)
    log.info("training %s: %s, %d points, %d epochs", tag, tc.circuit.name,
             len(tc.points), tc.epochs)
    weights, hist = train(tc)
    hist.to_csv(art.path(f"history_{tag}.csv"))
    save_checkpoint(art.path(f"checkpoint_{tag}.npz"), tc.encoder, weights)
    records = evaluate_on_grid(tc.model(weights), _points(cfg["test"], family))
    if family.dim == 1:
        write_sweep_csv(art.path(f"sweep_{tag}.csv"), records)
    else:
        write_sweep_csv(art.path(f"sweep_{tag}.csv"), records, names=("delta", "lambda"),
                        extra={"hs": lambda p: phase_boundary_hs(p[0]),
                               "hc": lambda p: _hc_or_nan(p[0])})
    return tc, weights, records


def _summary_row(records, train_lo, train_hi):
    s = summarize(records)
    outside = [r.rel_err for r in records if not train_lo <= r.point[0] <= train_hi]
    s["max_rel_err_outside_train"] = float(max(outside)) if outside else math.nan
    return s


_SUMMARY_KEYS = ("n_points", "median_rel_err", "mean_rel_err", "max_rel_err",
                 "mean_fidelity", "max_rel_err_outside_train")


def run_sweep(cfg, art):
    family = _family(cfg)
    rows = []
    lo, hi = cfg["train"]["delta"][:2]
    for depth in cfg["model"]["depths"]:
        tc, _, records = _train_and_sweep(cfg, art, family, depth, f"D{depth}")
        s = _summary_row(records, lo, hi)
        rows.append([depth, tc.circuit.n_params, *(s[k] for k in _SUMMARY_KEYS)])
    _write_rows(art.path("summary.csv"), ["depth", "n_params", *_SUMMARY_KEYS], rows)


def run_baseline_compare(cfg, art):
    family = _family(cfg)
    rows = []
    lo, hi = cfg["train"]["delta"][:2]
    for kind in cfg["compare"]["encoders"]:
        for depth in cfg["model"]["depths"]:
            tc, _, records = _train_and_sweep(cfg, art, family, depth, f"{kind}_D{depth}", kind)
            s = _summary_row(records, lo, hi)
            rows.append([kind, depth, tc.circuit.n_params, *(s[k] for k in _SUMMARY_KEYS)])
    _write_rows(art.path("summary.csv"), ["encoder", "depth", "n_params", *_SUMMARY_KEYS], rows)


def run_param_dump(cfg, art):
    family = _family(cfg)
    depth = cfg["model"]["depths"][0]
    tc, weights, records = _train_and_sweep(cfg, art, family, depth, f"D{depth}")
    art.path("circuit.txt").write_text(tc.circuit.describe())
    write_param_dump_csv(art.path("params.csv"), tc.model(weights), _points(cfg["test"], family))


def run_active(cfg, art):
    family = _family(cfg)
    depth = cfg["model"]["depths"][0]
    a = cfg["active"]
    tc = _train_config(cfg, family, depth, np.zeros((1, family.dim)))
    acq = AcquisitionConfig(
        pool=grid_1d(*a["pool"]), test_points=_points(cfg["test"], family), mu=a["mu"],
        threshold=a["threshold"], max_points=a["max_points"], warm_start=a["warm_start"],
        seed=cfg["seed"],
    )
    result = active_learn(acq, tc)
    result.to_csv(art.path("rounds.csv"))
    _write_rows(art.path("selected.csv"), ["order", "pool_index", "delta"],
                [[k, i, float(acq.pool[i][0])] for k, i in enumerate(result.selected_indices)])
    save_checkpoint(art.path("checkpoint.npz"), tc.encoder, result.weights)
    records = evaluate_on_grid(tc.model(result.weights), acq.test_points)
    write_sweep_csv(art.path("sweep.csv"), records)
    s = summarize(records)
    _write_rows(art.path("summary.csv"),
                ["n_selected", "converged", "exhausted", *s],
                [[len(result.selected_indices), result.converged, result.exhausted, *s.values()]])


def run_speedup(cfg, art):
    family = _family(cfg)
    depth = cfg["model"]["depths"][0]
    sp = cfg["speedup"]
    k = sp["report_epoch"]
    summary = []
    for delta in sp["deltas"]:
        point = np.array([float(delta)])
        tc = _train_config(cfg, family, depth, point[None, :])
        e0 = exact_energy(family, point)
        rows, nn_cost, vqe_cost, wins = [], [], [], 0
        for seed in range(cfg["seed"], cfg["seed"] + sp["seeds"]):
            (_, h_nn), (_, h_vqe), _ = paired_runs(tc, seed)
            for method, hist in (("nn", h_nn), ("vqe", h_vqe)):
                for r in hist.records:
                    rows.append([seed, method, r.epoch, r.cost, relative_error(r.cost, e0),
                                 r.param_update])
            nn_cost.append(h_nn.records[k - 1].cost)
            vqe_cost.append(h_vqe.records[k - 1].cost)
            wins += h_nn.records[0].param_update > h_vqe.records[0].param_update
        _write_rows(art.path(f"speedup_delta{delta}.csv"),
                    ["seed", "method", "epoch", "cost", "rel_err", "param_update"], rows)
        summary.append([float(delta), e0, float(np.mean(nn_cost)), float(np.mean(vqe_cost)),
                        wins, sp["seeds"]])
    _write_rows(art.path("summary.csv"),
                ["delta", "e_exact", f"nn_mean_cost_epoch{k}", f"vqe_mean_cost_epoch{k}",
                 "nn_larger_first_update", "seeds"], summary)


def run_convergence(cfg, art):
    cv = cfg["convergence"]
    rows, detail = [], []
    for n in cv["n_qubits"]:
        family = _family(cfg, n)
        depth = cfg["model"]["depths"][0]
        tc = _train_config(cfg, family, depth, np.zeros((1, 1)), hidden=cv["hidden"][n])
        for row in convergence_rate_experiment(tc, cv["deltas"], cv["trials"], cv["threshold"],
                                               cfg["train"]["epochs"], seed0=cfg["seed"]):
            rows.append([n, row.delta, row.nn_rate, row.vqe_rate, cv["trials"], float(cv["threshold"])])
            for t, (a, b) in enumerate(zip(row.nn_errors, row.vqe_errors)):
                detail.append([n, row.delta, t, a, b])
    _write_rows(art.path("convergence.csv"),
                ["n_qubits", "delta", "nn_rate", "vqe_rate", "trials", "threshold"], rows)
    _write_rows(art.path("convergence_trials.csv"),
                ["n_qubits", "delta", "trial", "nn_rel_err", "vqe_rel_err"], detail)


RUNNERS = {
    "sweep1d": run_sweep,
    "sweep2d": run_sweep,
    "baseline_compare": run_baseline_compare,
    "param_dump": run_param_dump,
    "active_learn": run_active,
    "speedup": run_speedup,
    "convergence_table": run_convergence,
}


def run(cfg: dict, out_dir) -> Path:
    """Run a resolved config; returns the manifest path."""
    art = Artifacts(Path(out_dir))
    RUNNERS[cfg["experiment"]](cfg, art)
    if cfg.get("plots"):
        from .plotting import plot_csv

        for name in list(art.files):
            if name.endswith(".csv"):
                target = name[:-4] + ".png"
                plot_csv(art.root / name, art.root / target)
                art.files.append(target)
    manifest = {
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "experiment": cfg["experiment"],
        "seed": cfg["seed"],
        "kernel_backend": kernels.BACKEND,
        "artifacts": sorted(art.files),
        "config": cfg,
    }
    path = art.root / "manifest.yaml"
    path.write_text(cfgmod.dump(manifest))
    return path
