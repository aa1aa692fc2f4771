"""Embedding + two conv/max-pool stages + dropout + sigmoid, with hand-written
forward/backward passes and Adam minibatch training. No autodiff framework;
everything is explicit numpy so gradients can be checked against finite
differences."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

FORMAT_VERSION = 1
_MAGIC = b"STMODEL1\n"
_LOSS_EPS = 1e-7


class ConfigError(ValueError):
    pass


class ModelFormatError(ValueError):
    pass


@dataclass
class ModelConfig:
    vocab_size: int = 2
    seq_len: int = 200          # padded input length
    embed_dim: int = 128        # embedding dimension
    conv1_filters: int = 64
    conv1_width: int = 5
    conv2_filters: int = 32
    conv2_width: int = 5
    pool_size: int = 8
    dropout_rate: float = 0.5
    learning_rate: float = 1e-3
    batch_size: int = 32
    epochs: int = 20
    dtype: str = "float32"  # float64 available for gradient verification

    def stage_lengths(self) -> tuple[int, int, int, int, int]:
        """(conv1_out, pool1_out, conv2_out, pool2_out, flatten) lengths.
        Raises ConfigError naming the first stage that fails to compose."""
        t1 = self.seq_len - self.conv1_width + 1
        if t1 < 1:
            raise ConfigError(f"conv1: width {self.conv1_width} exceeds input length {self.seq_len}")
        p1 = t1 // self.pool_size
        if p1 < 1:
            raise ConfigError(f"pool1: pool size {self.pool_size} exceeds conv1 output length {t1}")
        t2 = p1 - self.conv2_width + 1
        if t2 < 1:
            raise ConfigError(f"conv2: width {self.conv2_width} exceeds pool1 output length {p1}")
        p2 = t2 // self.pool_size
        if p2 < 1:
            raise ConfigError(f"pool2: pool size {self.pool_size} exceeds conv2 output length {t2}")
        return t1, p1, t2, p2, p2 * self.conv2_filters


PARAM_NAMES = ("emb", "w1", "b1", "w2", "b2", "wd", "bd")


@dataclass
class Model:
    cfg: ModelConfig
    emb: np.ndarray  # (V, q); row 0 frozen at zero
    w1: np.ndarray   # (F1, width1, q)
    b1: np.ndarray   # (F1,)
    w2: np.ndarray   # (F2, width2, F1)
    b2: np.ndarray   # (F2,)
    wd: np.ndarray   # (flatten,)
    bd: np.ndarray   # ()
    dict_hash: str = ""

    def params(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def copy(self) -> "Model":
        return Model(self.cfg, *(getattr(self, n).copy() for n in PARAM_NAMES),
                     dict_hash=self.dict_hash)


@dataclass
class TrainHistory:
    epochs: list[dict] = field(default_factory=list)  # {"epoch", "loss", "accuracy"}


def init_model(cfg: ModelConfig, seed: int, dict_hash: str = "") -> Model:
    """Embedding rows ~ U(-0.05, 0.05) with row 0 zeroed; conv/dense weights
    scaled-normal with variance 2/fan_in; biases zero. Deterministic per seed."""
    _, _, _, _, flat = cfg.stage_lengths()
    rng = np.random.default_rng(seed)
    dt = np.dtype(cfg.dtype)
    emb = rng.uniform(-0.05, 0.05, size=(cfg.vocab_size, cfg.embed_dim))
    emb[0] = 0.0
    fan1 = cfg.conv1_width * cfg.embed_dim
    w1 = rng.normal(0.0, np.sqrt(2.0 / fan1), size=(cfg.conv1_filters, cfg.conv1_width, cfg.embed_dim))
    fan2 = cfg.conv2_width * cfg.conv1_filters
    w2 = rng.normal(0.0, np.sqrt(2.0 / fan2), size=(cfg.conv2_filters, cfg.conv2_width, cfg.conv1_filters))
    wd = rng.normal(0.0, np.sqrt(2.0 / flat), size=(flat,))
    return Model(
        cfg=cfg,
        emb=emb.astype(dt),
        w1=w1.astype(dt), b1=np.zeros(cfg.conv1_filters, dtype=dt),
        w2=w2.astype(dt), b2=np.zeros(cfg.conv2_filters, dtype=dt),
        wd=wd.astype(dt), bd=np.zeros((), dtype=dt),
        dict_hash=dict_hash,
    )


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _pool(act: np.ndarray, pool: int, out_len: int):
    """Max-pool along axis 1; returns pooled values and argmax offsets
    (first occurrence on ties, which is numpy argmax behaviour)."""
    b, _, f = act.shape
    windows = act[:, : out_len * pool].reshape(b, out_len, pool, f)
    idx = windows.argmax(axis=2)
    pooled = np.take_along_axis(windows, idx[:, :, None, :], axis=2)[:, :, 0, :]
    return pooled, idx


def forward_batch(model: Model, X: np.ndarray, training: bool = False,
                  rng: np.random.Generator | None = None,
                  dropout_mask: np.ndarray | None = None) -> tuple[np.ndarray, dict]:
    """Probabilities for a batch of index sequences, plus cached activations."""
    cfg = model.cfg
    t1, p1, t2, p2, flat = cfg.stage_lengths()
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != cfg.seq_len:
        raise ValueError(f"sequence length {X.shape[1]} != configured {cfg.seq_len}")
    bad = np.argwhere(X >= cfg.vocab_size)
    if bad.size:
        r, c = bad[0]
        raise ValueError(f"index {X[r, c]} >= vocab size {cfg.vocab_size} at position {c}")
    b = X.shape[0]

    E = model.emb[X]                                            # (B, L, q)
    win1 = sliding_window_view(E, cfg.conv1_width, axis=1)      # (B, t1, q, width)
    win1 = np.ascontiguousarray(win1.transpose(0, 1, 3, 2)).reshape(b, t1, -1)
    w1f = model.w1.reshape(cfg.conv1_filters, -1)
    Z1 = win1 @ w1f.T + model.b1
    A1 = np.maximum(Z1, 0.0)
    P1, idx1 = _pool(A1, cfg.pool_size, p1)

    win2 = sliding_window_view(P1, cfg.conv2_width, axis=1)
    win2 = np.ascontiguousarray(win2.transpose(0, 1, 3, 2)).reshape(b, t2, -1)
    w2f = model.w2.reshape(cfg.conv2_filters, -1)
    Z2 = win2 @ w2f.T + model.b2
    A2 = np.maximum(Z2, 0.0)
    P2, idx2 = _pool(A2, cfg.pool_size, p2)

    flat_act = P2.reshape(b, flat)
    if dropout_mask is None and training and cfg.dropout_rate > 0.0:
        if rng is None:
            raise ValueError("training forward with dropout needs an rng")
        keep = 1.0 - cfg.dropout_rate
        dropout_mask = (rng.random(flat_act.shape) < keep).astype(flat_act.dtype) / keep
    dropped = flat_act if dropout_mask is None else flat_act * dropout_mask

    z = dropped @ model.wd + model.bd
    prob = _sigmoid(z)
    cache = {
        "X": X, "win1": win1, "Z1": Z1, "idx1": idx1, "win2": win2, "Z2": Z2,
        "idx2": idx2, "flat": flat_act, "mask": dropout_mask, "dropped": dropped,
        "prob": prob,
    }
    return prob, cache


def forward(model: Model, seq, training: bool = False,
            rng: np.random.Generator | None = None) -> tuple[float, dict]:
    """Single-sequence forward pass returning a probability in [0, 1]."""
    prob, cache = forward_batch(model, np.asarray(seq), training=training, rng=rng)
    return float(prob[0]), cache


def loss(prob, label) -> float:
    """Binary cross-entropy with probability clipped to [eps, 1-eps]."""
    p = np.clip(np.asarray(prob, dtype=np.float64), _LOSS_EPS, 1.0 - _LOSS_EPS)
    y = np.asarray(label, dtype=np.float64)
    return float(np.mean(-(y * np.log(p) + (1.0 - y) * np.log(1.0 - p))))


def _unpool(dP: np.ndarray, idx: np.ndarray, pool: int, full_len: int) -> np.ndarray:
    b, out_len, f = dP.shape
    d_windows = np.zeros((b, out_len, pool, f), dtype=dP.dtype)
    np.put_along_axis(d_windows, idx[:, :, None, :], dP[:, :, None, :], axis=2)
    d_full = np.zeros((b, full_len, f), dtype=dP.dtype)
    d_full[:, : out_len * pool] = d_windows.reshape(b, out_len * pool, f)
    return d_full


def backward_batch(model: Model, cache: dict, y: np.ndarray) -> dict[str, np.ndarray]:
    """Gradients of the mean batch loss for every trainable parameter.
    Max-pool routes gradient to the first argmax position; embedding row 0
    stays frozen (zero gradient)."""
    cfg = model.cfg
    t1, p1, t2, p2, flat = cfg.stage_lengths()
    X = cache["X"]
    b = X.shape[0]
    y = np.asarray(y, dtype=cache["prob"].dtype)

    p_clip = np.clip(cache["prob"], _LOSS_EPS, 1.0 - _LOSS_EPS)
    # d(mean BCE)/dz for sigmoid output; exact also under clipping because
    # dL/dp * dp/dz collapses to (p - y) only when unclipped -- compute fully
    dL_dp = (p_clip - y) / (p_clip * (1.0 - p_clip)) / b
    dz = dL_dp * cache["prob"] * (1.0 - cache["prob"])

    dwd = cache["dropped"].T @ dz
    dbd = dz.sum()
    d_dropped = dz[:, None] * model.wd[None, :]
    d_flat = d_dropped if cache["mask"] is None else d_dropped * cache["mask"]

    dP2 = d_flat.reshape(b, p2, cfg.conv2_filters)
    dA2 = _unpool(dP2, cache["idx2"], cfg.pool_size, t2)
    dZ2 = dA2 * (cache["Z2"] > 0)
    w2f = model.w2.reshape(cfg.conv2_filters, -1)
    dw2 = (dZ2.reshape(b * t2, -1).T @ cache["win2"].reshape(b * t2, -1)).reshape(model.w2.shape)
    db2 = dZ2.sum(axis=(0, 1))
    dwin2 = (dZ2 @ w2f).reshape(b, t2, cfg.conv2_width, cfg.conv1_filters)
    dP1 = np.zeros((b, p1, cfg.conv1_filters), dtype=dZ2.dtype)
    for j in range(cfg.conv2_width):
        dP1[:, j: j + t2] += dwin2[:, :, j, :]

    dA1 = _unpool(dP1, cache["idx1"], cfg.pool_size, t1)
    dZ1 = dA1 * (cache["Z1"] > 0)
    w1f = model.w1.reshape(cfg.conv1_filters, -1)
    dw1 = (dZ1.reshape(b * t1, -1).T @ cache["win1"].reshape(b * t1, -1)).reshape(model.w1.shape)
    db1 = dZ1.sum(axis=(0, 1))
    dwin1 = (dZ1 @ w1f).reshape(b, t1, cfg.conv1_width, cfg.embed_dim)
    dE = np.zeros((b, cfg.seq_len, cfg.embed_dim), dtype=dZ1.dtype)
    for j in range(cfg.conv1_width):
        dE[:, j: j + t1] += dwin1[:, :, j, :]
    demb = np.zeros_like(model.emb)
    np.add.at(demb, X, dE)
    demb[0] = 0.0

    return {"emb": demb, "w1": dw1, "b1": db1, "w2": dw2, "b2": db2,
            "wd": dwd, "bd": np.asarray(dbd, dtype=model.bd.dtype)}


def backward(model: Model, cache: dict, label) -> dict[str, np.ndarray]:
    """Single-sample gradient (mean over a batch of one)."""
    return backward_batch(model, cache, np.asarray([label]))


class _Adam:
    def __init__(self, params: dict[str, np.ndarray], lr: float,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr, self.b1, self.b2, self.eps = lr, beta1, beta2, eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]):
        self.t += 1
        for k, p in params.items():
            g = grads[k]
            self.m[k] = self.b1 * self.m[k] + (1 - self.b1) * g
            self.v[k] = self.b2 * self.v[k] + (1 - self.b2) * g * g
            mhat = self.m[k] / (1 - self.b1 ** self.t)
            vhat = self.v[k] / (1 - self.b2 ** self.t)
            p -= self.lr * mhat / (np.sqrt(vhat) + self.eps)


def train(model: Model, X: np.ndarray, y: np.ndarray, seed: int) -> tuple[Model, TrainHistory]:
    """Minibatch Adam on shuffled samples; per-epoch mean loss and training
    accuracy at threshold 0.5. Deterministic per seed; the input model is not
    modified. epochs=0 returns a copy of the initial model and empty history."""
    X = np.asarray(X)
    y = np.asarray(y)
    cfg = model.cfg
    if cfg.epochs > 0:
        if len(X) < 2 or len(np.unique(y)) < 2:
            raise ValueError("training needs at least two samples with both classes present")
    model = model.copy()
    history = TrainHistory()
    rng = np.random.default_rng(seed)
    opt = _Adam(model.params(), cfg.learning_rate)
    n = len(X)
    for epoch in range(cfg.epochs):
        perm = rng.permutation(n)
        total_loss = 0.0
        correct = 0
        for start in range(0, n, cfg.batch_size):
            batch = perm[start: start + cfg.batch_size]
            xb, yb = X[batch], y[batch]
            prob, cache = forward_batch(model, xb, training=True, rng=rng)
            grads = backward_batch(model, cache, yb)
            total_loss += loss(prob, yb) * len(batch)
            correct += int(np.sum((prob >= 0.5).astype(int) == yb))
            opt.step(model.params(), grads)
            model.emb[0] = 0.0  # padding row stays frozen
        history.epochs.append({
            "epoch": epoch + 1,
            "loss": total_loss / n,
            "accuracy": 100.0 * correct / n,
        })
    return model, history


def predict(model: Model, seq) -> tuple[int, float]:
    """Class 1 iff probability >= 0.5."""
    prob, _ = forward(model, seq, training=False)
    return (1 if prob >= 0.5 else 0), prob


def predict_batch(model: Model, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    prob, _ = forward_batch(model, X, training=False)
    return (prob >= 0.5).astype(int), prob


# ---------------------------------------------------------------------------
# Persistence: magic + JSON meta + raw row-major tensor bytes
# ---------------------------------------------------------------------------

def save_model(model: Model, path: str | Path) -> None:
    tensors = []
    blobs = []
    for name in PARAM_NAMES:
        arr = getattr(model, name)
        # note: ascontiguousarray would promote 0-d arrays to 1-d
        tensors.append({"name": name, "dtype": str(arr.dtype), "shape": list(arr.shape)})
        blobs.append(np.ascontiguousarray(arr).tobytes())
    meta = {
        "format_version": FORMAT_VERSION,
        "config": asdict(model.cfg),
        "dict_hash": model.dict_hash,
        "tensors": tensors,
    }
    meta_bytes = json.dumps(meta, sort_keys=True).encode("utf-8")
    with Path(path).open("wb") as fh:
        fh.write(_MAGIC)
        fh.write(len(meta_bytes).to_bytes(8, "little"))
        fh.write(meta_bytes)
        for blob in blobs:
            fh.write(blob)


def load_model(path: str | Path, expected_dict_hash: str | None = None) -> Model:
    data = Path(path).read_bytes()
    if not data.startswith(_MAGIC):
        raise ModelFormatError(f"{path}: bad magic at offset 0")
    pos = len(_MAGIC)
    if len(data) < pos + 8:
        raise ModelFormatError(f"{path}: truncated header at offset {pos}")
    meta_len = int.from_bytes(data[pos: pos + 8], "little")
    pos += 8
    if len(data) < pos + meta_len:
        raise ModelFormatError(f"{path}: truncated metadata at offset {pos}")
    meta = json.loads(data[pos: pos + meta_len].decode("utf-8"))
    pos += meta_len
    if meta.get("format_version") != FORMAT_VERSION:
        raise ModelFormatError(
            f"{path}: unsupported format version {meta.get('format_version')}"
        )
    cfg = ModelConfig(**meta["config"])
    arrays = {}
    for spec in meta["tensors"]:
        dt = np.dtype(spec["dtype"])
        shape = tuple(spec["shape"])
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * dt.itemsize
        if len(data) < pos + nbytes:
            raise ModelFormatError(f"{path}: truncated tensor {spec['name']} at offset {pos}")
        arr = np.frombuffer(data[pos: pos + nbytes], dtype=dt).reshape(shape).copy()
        arrays[spec["name"]] = arr
        pos += nbytes
    if expected_dict_hash is not None and meta.get("dict_hash") != expected_dict_hash:
        warnings.warn(
            f"dictionary hash mismatch: model carries {meta.get('dict_hash')!r}",
            stacklevel=2,
        )
    return Model(cfg=cfg, dict_hash=meta.get("dict_hash", ""),
                 **{name: arrays[name] for name in PARAM_NAMES})
