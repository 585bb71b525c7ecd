import hashlib

import numpy as np
import pytest
import yaml

from nnvqe import cli, config
from nnvqe.errors import ConfigurationError

SMALL = """\
experiment: sweep1d
seed: 3
model: {n_qubits: 4, ansatz: hea, depths: [1], hidden: 4, dropout: 0.1}
train: {delta: [-1.0, 1.0, 3], epochs: 4}
test: {delta: [-2.0, 2.0, 7]}
"""


def write(tmp_path, text, name="c.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def digests(root):
    return {p.name: hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(root.iterdir()) if p.suffix in (".csv", ".npz")}


def test_presets_listed(capsys):
    assert cli.main(["presets"]) == 0
    out = capsys.readouterr().out
    for name in config.PRESETS:
        assert name in out


@pytest.mark.parametrize("name", sorted(config.PRESETS))
def test_every_preset_resolves(name):
    cfg = config.preset(name)
    assert cfg["experiment"] in config.EXPERIMENTS
    assert config.resolve(yaml.safe_load(config.dump(cfg))) == cfg


def test_fig2_preset_values():
    cfg = config.preset("fig2")
    assert cfg["model"]["dropout"] == {1: 0.30, 2: 0.05, 3: 0.20}
    assert cfg["model"]["hidden"] == {1: 20, 2: 20, 3: 30}
    assert cfg["test"]["delta"] == [-4.0, 4.0, 201]


def test_unknown_key_exit_code(tmp_path, capsys):
    p = write(tmp_path, SMALL + "train_extra: 1\n")
    assert cli.main(["run", str(p), "--out", str(tmp_path / "o")]) == 2
    assert "train_extra" in capsys.readouterr().err


def test_nested_unknown_key_rejected():
    with pytest.raises(ConfigurationError, match="model.widht"):
        config.resolve({"model": {"widht": 3}})


def test_yaml_error_reports_position(tmp_path):
    p = write(tmp_path, "model: {n_qubits: 4\nseed: [\n")
    with pytest.raises(ConfigurationError, match="line"):
        config.load(p)


def test_unknown_preset(capsys):
    assert cli.main(["preset", "nope"]) == 2


def test_set_override():
    cfg = config.set_value(config.preset("fig2"), "train.epochs", "7")
    assert cfg["train"]["epochs"] == 7
    with pytest.raises(ConfigurationError):
        config.set_value(cfg, "train.epoch", "7")


def test_run_reproducible_and_manifest(tmp_path, monkeypatch):
    p = write(tmp_path, SMALL)
    monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path / "runs"))
    assert cli.main(["run", str(p)]) == 0
    first = tmp_path / "runs" / "c"
    assert cli.main(["run", str(p), "--out", str(tmp_path / "again")]) == 0
    a, b = digests(first), digests(tmp_path / "again")
    assert a and a == b
    man = yaml.safe_load((first / "manifest.yaml").read_text())
    assert man["seed"] == 3 and man["experiment"] == "sweep1d"
    assert man["kernel_backend"] in ("cython", "python")
    listed = set(man["artifacts"])
    on_disk = {q.name for q in first.iterdir() if q.name != "manifest.yaml"}
    assert listed == on_disk


def test_seed_flag_changes_output(tmp_path):
    p = write(tmp_path, SMALL)
    cli.main(["run", str(p), "--out", str(tmp_path / "a")])
    cli.main(["run", str(p), "--out", str(tmp_path / "b"), "--seed", "4"])
    assert digests(tmp_path / "a") != digests(tmp_path / "b")


def test_threads_do_not_change_results(tmp_path):
    p = write(tmp_path, SMALL)
    cli.main(["run", str(p), "--out", str(tmp_path / "a")])
    cli.main(["run", str(p), "--out", str(tmp_path / "b"), "--threads", "2"])
    assert digests(tmp_path / "a") == digests(tmp_path / "b")


def test_sweep2d_boundary_columns(tmp_path):
    text = """\
experiment: sweep2d
model: {n_qubits: 4, ansatz: hea, depths: [1], hidden: 4, dropout: 0.0}
train: {delta: [-1.0, 1.0, 2], lambda: [0.0, 1.0, 2], epochs: 2}
test: {delta: [0.5, 1.5, 3], lambda: [0.0, 1.0, 2]}
"""
    out = tmp_path / "o"
    assert cli.main(["run", str(write(tmp_path, text)), "--out", str(out)]) == 0
    csvs = [q for q in out.iterdir() if q.name.startswith("sweep")]
    data = np.genfromtxt(csvs[0], delimiter=",", names=True)
    assert {"hs", "hc"} <= set(data.dtype.names)
    assert len(data) == 6
    assert np.all(np.isnan(data["hc"][data["delta"] < 1]))
    np.testing.assert_allclose(data["hs"], 1 + data["delta"])
    assert np.all(data["e_pred"] >= data["e_exact"] - 1e-8)


def test_plot_command(tmp_path):
    pytest.importorskip("matplotlib")
    out = tmp_path / "o"
    cli.main(["run", str(write(tmp_path, SMALL)), "--out", str(out)])
    csv = next(q for q in out.iterdir() if q.name.startswith("sweep"))
    assert cli.main(["plot", str(csv), "--out", str(tmp_path / "x.png")]) == 0
    assert (tmp_path / "x.png").stat().st_size > 0
