"""Static plots from the CSV artifacts (needs matplotlib)."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np


def _read(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    cols = {}
    for j, name in enumerate(header):
        try:
            cols[name] = np.array([float(r[j]) for r in body])
        except ValueError:
            cols[name] = np.array([r[j] for r in body])
    return cols


def plot_csv(path, out=None) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    out = Path(out) if out else path.with_suffix(".png")
    cols = _read(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    if "rel_err" in cols and "lambda" in cols and "delta" in cols and "e_pred" in cols:
        d, lam = np.unique(cols["delta"]), np.unique(cols["lambda"])
        err = cols["rel_err"].reshape(len(d), len(lam)).T
        im = ax.pcolormesh(d, lam, np.log10(np.maximum(err, 1e-16)), shading="auto")
        fig.colorbar(im, ax=ax, label="log10 relative error")
        ax.plot(d, cols["hs"].reshape(len(d), len(lam))[:, 0], "w--", label="hs")
        ax.plot(d, cols["hc"].reshape(len(d), len(lam))[:, 0], "w:", label="hc")
        ax.set_ylim(lam[0], lam[-1])
        ax.set_xlabel("delta")
        ax.set_ylabel("lambda")
    elif "rel_err" in cols and "delta" in cols and "e_pred" in cols:
        ax.semilogy(cols["delta"], cols["rel_err"], label="relative error")
        ax.semilogy(cols["delta"], np.maximum(1 - cols["fidelity"], 1e-16), label="1 - fidelity")
        ax.set_xlabel("delta")
        ax.legend()
    elif {"epoch", "cost"} <= cols.keys() and "method" not in cols:
        ax.plot(cols["epoch"], cols["cost"])
        ax.set_xlabel("epoch")
        ax.set_ylabel("cost")
    elif "method" in cols:
        for method in ("nn", "vqe"):
            sel = cols["method"] == method
            ep = np.unique(cols["epoch"][sel])
            err = cols["rel_err"][sel].reshape(-1, len(ep))
            ax.semilogy(ep, err.mean(axis=0), label=method)
        ax.set_xlabel("epoch")
        ax.set_ylabel("relative error")
        ax.legend()
    else:
        names = [k for k, v in cols.items() if v.dtype.kind == "f"]
        for name in names[1:6]:
            ax.plot(cols[names[0]], cols[name], label=name)
        ax.set_xlabel(names[0] if names else "")
        ax.legend()
    ax.set_title(path.name)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out
