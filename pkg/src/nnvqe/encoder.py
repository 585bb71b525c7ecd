"""Parameter encoders mapping Hamiltonian parameters to circuit angles.

Three kinds share one flat weight vector ``phi``:

* ``mlp``    - ``theta = W2 @ dropout(tanh(W1 @ lam + b1)) + b2``
* ``affine`` - ``theta = W @ lam + b``
* ``direct`` - ``theta = phi``; the input is ignored (plain VQE)

Flat layout, row-major: ``W1 (h, p) | b1 (h) | W2 (m, h) | b2 (m)`` for the
MLP and ``W (m, p) | b (m)`` for the affine map.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, StructuralError, UsageError

CHECKPOINT_VERSION = 1
INIT_STD = 0.1


class EncoderKind(str, Enum):
    MLP = "mlp"
    AFFINE = "affine"
    DIRECT = "direct"


@dataclass(frozen=True)
class EncoderSpec:
    kind: EncoderKind
    input_dim: int
    output_dim: int
    hidden_dim: int = 0
    dropout_rate: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", EncoderKind(self.kind))
        if self.input_dim < 1 or self.output_dim < 1:
            raise ConfigurationError("encoder input and output sizes must be >= 1")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ConfigurationError(f"dropout rate must lie in [0, 1), got {self.dropout_rate}")
        if self.kind is EncoderKind.MLP and self.hidden_dim < 1:
            raise ConfigurationError("an MLP encoder needs hidden_dim >= 1")

    @property
    def n_weights(self) -> int:
        p, h, m = self.input_dim, self.hidden_dim, self.output_dim
        if self.kind is EncoderKind.MLP:
            return (p + 1) * h + (h + 1) * m
        if self.kind is EncoderKind.AFFINE:
            return (p + 1) * m
        return m

    def to_dict(self) -> dict:
        d = asdict(self)
        d["kind"] = self.kind.value
        return d


@dataclass
class ForwardCache:
    lam: np.ndarray
    hidden: np.ndarray | None = None  # tanh activations before dropout
    mask: np.ndarray | None = None


def split_weights(spec: EncoderSpec, phi: np.ndarray):
    """Views into ``phi`` for each layer, in flat-layout order."""
    phi = np.asarray(phi)
    if phi.shape != (spec.n_weights,):
        raise StructuralError(f"weights have shape {phi.shape}, spec needs ({spec.n_weights},)")
    p, h, m = spec.input_dim, spec.hidden_dim, spec.output_dim
    if spec.kind is EncoderKind.MLP:
        o = 0
        w1 = phi[o:o + h * p].reshape(h, p); o += h * p
        b1 = phi[o:o + h]; o += h
        w2 = phi[o:o + m * h].reshape(m, h); o += m * h
        b2 = phi[o:o + m]
        return w1, b1, w2, b2
    if spec.kind is EncoderKind.AFFINE:
        return phi[:m * p].reshape(m, p), phi[m * p:]
    return (phi,)


def init_encoder(spec: EncoderSpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    return rng.normal(0.0, INIT_STD, size=spec.n_weights)


def encoder_forward(spec: EncoderSpec, phi, lam, mode: str = "eval", rng=None):
    """Return ``(theta, cache)``; ``cache`` is None in eval mode.

    Train mode draws a fresh inverted-dropout mask from ``rng`` (required
    when the MLP has a non-zero dropout rate).
    """
    if mode not in ("train", "eval"):
        raise ConfigurationError(f"mode must be 'train' or 'eval', got {mode!r}")
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    if lam.shape != (spec.input_dim,):
        raise StructuralError(f"input has shape {lam.shape}, encoder expects ({spec.input_dim},)")
    layers = split_weights(spec, phi)
    cache = ForwardCache(lam=lam.copy()) if mode == "train" else None

    if spec.kind is EncoderKind.DIRECT:
        return layers[0].copy(), cache
    if spec.kind is EncoderKind.AFFINE:
        w, b = layers
        return w @ lam + b, cache

    w1, b1, w2, b2 = layers
    hidden = np.tanh(w1 @ lam + b1)
    out = hidden
    if mode == "train":
        cache.hidden = hidden
        rate = spec.dropout_rate
        if rate > 0.0:
            if rng is None:
                raise UsageError("train-mode dropout needs a random generator")
            keep = rng.random(hidden.shape[0]) >= rate
            cache.mask = keep / (1.0 - rate)
            out = hidden * cache.mask
    return w2 @ out + b2, cache


def encoder_backward(spec: EncoderSpec, phi, cache: ForwardCache | None, d_theta) -> np.ndarray:
    """Vector-Jacobian product ``(d theta / d phi)^T d_theta``."""
    if cache is None:
        raise UsageError("encoder_backward needs the cache of a train-mode forward pass")
    d_theta = np.asarray(d_theta, dtype=float)
    if d_theta.shape != (spec.output_dim,):
        raise StructuralError(f"d_theta has shape {d_theta.shape}, expected ({spec.output_dim},)")
    if spec.kind is EncoderKind.DIRECT:
        return d_theta.copy()
    lam = cache.lam
    if spec.kind is EncoderKind.AFFINE:
        return np.concatenate([np.outer(d_theta, lam).ravel(), d_theta])

    w1, b1, w2, b2 = split_weights(spec, phi)
    out = cache.hidden if cache.mask is None else cache.hidden * cache.mask
    d_w2 = np.outer(d_theta, out)
    d_out = w2.T @ d_theta
    if cache.mask is not None:
        d_out = d_out * cache.mask
    d_pre = d_out * (1.0 - cache.hidden ** 2)
    d_w1 = np.outer(d_pre, lam)
    return np.concatenate([d_w1.ravel(), d_pre, d_w2.ravel(), d_theta])


def save_checkpoint(path, spec: EncoderSpec, phi) -> Path:
    """Write spec and weights to a ``.npz`` archive (exact float64 round trip)."""
    path = Path(path)
    phi = np.asarray(phi, dtype=np.float64)
    split_weights(spec, phi)
    header = json.dumps({"version": CHECKPOINT_VERSION, "spec": spec.to_dict()}, sort_keys=True)
    with open(path, "wb") as fh:
        np.savez(fh, header=np.array(header), weights=phi)
    return path


def load_checkpoint(path) -> tuple[EncoderSpec, np.ndarray]:
    with np.load(Path(path), allow_pickle=False) as data:
        header = json.loads(str(data["header"]))
        phi = data["weights"].copy()
    if header.get("version") != CHECKPOINT_VERSION:
        raise ConfigurationError(f"unsupported checkpoint version {header.get('version')}")
    spec = EncoderSpec(**header["spec"])
    split_weights(spec, phi)
    return spec, phi
