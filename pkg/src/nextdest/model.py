"""Architecture assembly, training loop and checkpoint serialization.

Per timestep the network consumes

    [emb(origin_t) | emb(dest_t) | dense feature block | emb(top_origin)]

through two stacked LSTM layers; the second layer's final hidden state is
concatenated with the embedding of the upcoming trip's origin city (which
therefore reaches only the classification head) and mapped through a dense
layer plus softmax onto the city vocabulary.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import nn
from .core import CityVocab
from .pipeline import DENSE_WIDTH, EncodedEntry, Preprocessor, WindowEntry, fit_preprocessor

CHECKPOINT_VERSION = 1


class CheckpointError(ValueError):
    """Base class for checkpoint load failures."""


class CheckpointFormatError(CheckpointError):
    """File is truncated, not JSON, or missing required keys."""


class CheckpointVersionError(CheckpointError):
    """Checkpoint format version is not supported."""


class CheckpointShapeError(CheckpointError):
    """A parameter's shape or payload is inconsistent."""


class TrainingDivergedError(RuntimeError):
    """Loss became non-finite during training."""


@dataclass(frozen=True)
class Hyperparams:
    window_size: int
    hidden1: int = 100
    hidden2: int = 20
    d_emb: int = 8
    batch_size: int = 64
    epochs: int = 20
    learning_rate: float = 1e-3
    seed: int = 0
    patience: int = 3
    val_fraction: float = 0.1

    def __post_init__(self) -> None:
        for name in ("window_size", "hidden1", "hidden2", "d_emb", "batch_size", "epochs", "patience"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not 0.0 <= self.val_fraction < 1.0:
            raise ValueError("val_fraction must lie in [0, 1)")

    def to_dict(self) -> dict:
        return {
            "window_size": self.window_size,
            "hidden1": self.hidden1,
            "hidden2": self.hidden2,
            "d_emb": self.d_emb,
            "batch_size": self.batch_size,
            "epochs": self.epochs,
            "learning_rate": self.learning_rate,
            "seed": self.seed,
            "patience": self.patience,
            "val_fraction": self.val_fraction,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "Hyperparams":
        return cls(**payload)


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    train_loss: float
    val_loss: float | None


@dataclass
class TrainedModel:
    params: nn.Params
    preprocessor: Preprocessor
    vocab: CityVocab
    hyper: Hyperparams
    history: list[EpochStats] = field(default_factory=list)

    def __post_init__(self) -> None:
        p = len(self.vocab)
        if self.params["dense_b"].shape != (p,):
            raise CheckpointShapeError(
                f"dense_b has shape {self.params['dense_b'].shape}, vocabulary holds {p} cities"
            )


def expected_param_shapes(p: int, hyper: Hyperparams) -> dict[str, tuple[int, ...]]:
    d = hyper.d_emb
    in_dim = 3 * d + DENSE_WIDTH
    h1, h2 = hyper.hidden1, hyper.hidden2
    return {
        "city_emb": (p, d),
        "lstm1_wx": (in_dim, 4 * h1),
        "lstm1_wh": (h1, 4 * h1),
        "lstm1_b": (4 * h1,),
        "lstm2_wx": (h1, 4 * h2),
        "lstm2_wh": (h2, 4 * h2),
        "lstm2_b": (4 * h2,),
        "dense_w": (h2 + d, p),
        "dense_b": (p,),
    }


def init_params(p: int, hyper: Hyperparams, rng: np.random.Generator) -> nn.Params:
    d = hyper.d_emb
    in_dim = 3 * d + DENSE_WIDTH
    h1, h2 = hyper.hidden1, hyper.hidden2
    l1 = nn.init_lstm_params(rng, in_dim, h1)
    l2 = nn.init_lstm_params(rng, h1, h2)
    return {
        "city_emb": rng.uniform(-0.05, 0.05, size=(p, d)),
        "lstm1_wx": l1[0],
        "lstm1_wh": l1[1],
        "lstm1_b": l1[2],
        "lstm2_wx": l2[0],
        "lstm2_wh": l2[1],
        "lstm2_b": l2[2],
        "dense_w": nn.glorot_uniform(rng, h2 + d, p, (h2 + d, p)),
        "dense_b": np.zeros(p),
    }


@dataclass(frozen=True)
class Batch:
    dense: np.ndarray  # (T, B, DENSE_WIDTH)
    origins: np.ndarray  # (T, B)
    destinations: np.ndarray  # (T, B)
    top_origin: np.ndarray  # (B,)
    target_origin: np.ndarray  # (B,)
    labels: np.ndarray  # (B,)

    @property
    def size(self) -> int:
        return self.labels.shape[0]


def batch_encode(entries: Sequence[EncodedEntry]) -> Batch:
    """Stack encoded entries time-major; all entries must share one window size."""
    widths = {e.dense.shape for e in entries}
    if len(widths) != 1:
        raise ValueError(f"entries disagree on encoded shape: {sorted(widths)}")
    dense = np.stack([e.dense for e in entries], axis=1)
    origins = np.stack([e.flight_origins for e in entries], axis=1)
    destinations = np.stack([e.flight_destinations for e in entries], axis=1)
    return Batch(
        dense=dense,
        origins=origins,
        destinations=destinations,
        top_origin=np.array([e.top_origin for e in entries], dtype=np.int64),
        target_origin=np.array([e.target_origin for e in entries], dtype=np.int64),
        labels=np.array([e.label for e in entries], dtype=np.int64),
    )


def _forward(params: nn.Params, batch: Batch, want_grads: bool):
    emb = params["city_emb"]
    p, d = emb.shape
    T, B = batch.origins.shape
    o_emb = nn.embedding_lookup(emb, batch.origins)  # (T, B, d)
    d_emb = nn.embedding_lookup(emb, batch.destinations)
    top_emb = nn.embedding_lookup(emb, batch.top_origin)  # (B, d)
    top_rep = np.broadcast_to(top_emb, (T, B, d))
    x = np.concatenate([o_emb, d_emb, batch.dense, top_rep], axis=2)

    hs1, cache1 = nn.lstm_forward(x, params["lstm1_wx"], params["lstm1_wh"], params["lstm1_b"])
    hs2, cache2 = nn.lstm_forward(hs1, params["lstm2_wx"], params["lstm2_wh"], params["lstm2_b"])
    h_final = hs2[-1]
    origin_emb = nn.embedding_lookup(emb, batch.target_origin)
    z = np.concatenate([h_final, origin_emb], axis=1)
    loss, probs, (d_w, d_b, d_z) = nn.dense_softmax_cross_entropy(
        params["dense_w"], params["dense_b"], z, batch.labels
    )
    if not want_grads:
        return loss, probs, None

    h2 = h_final.shape[1]
    d_h_final = d_z[:, :h2]
    d_emb_table = np.zeros_like(emb)
    np.add.at(d_emb_table, batch.target_origin, d_z[:, h2:])

    d_hs2 = np.zeros_like(hs2)
    d_hs1, d_wx2, d_wh2, d_b2, _, _ = nn.lstm_backward(cache2, d_hs2, d_h_last=d_h_final)
    d_x, d_wx1, d_wh1, d_b1, _, _ = nn.lstm_backward(cache1, d_hs1)

    np.add.at(d_emb_table, batch.origins.reshape(-1), d_x[:, :, :d].reshape(-1, d))
    np.add.at(d_emb_table, batch.destinations.reshape(-1), d_x[:, :, d : 2 * d].reshape(-1, d))
    d_top = d_x[:, :, 2 * d + DENSE_WIDTH :].sum(axis=0)
    np.add.at(d_emb_table, batch.top_origin, d_top)

    grads = {
        "city_emb": d_emb_table,
        "lstm1_wx": d_wx1,
        "lstm1_wh": d_wh1,
        "lstm1_b": d_b1,
        "lstm2_wx": d_wx2,
        "lstm2_wh": d_wh2,
        "lstm2_b": d_b2,
        "dense_w": d_w,
        "dense_b": d_b,
    }
    return loss, probs, grads


def batch_loss_and_grads(params: nn.Params, batch: Batch) -> tuple[float, nn.Grads]:
    loss, _, grads = _forward(params, batch, want_grads=True)
    return loss, grads


def batch_probs(params: nn.Params, batch: Batch) -> np.ndarray:
    _, probs, _ = _forward(params, batch, want_grads=False)
    return probs


def forward(model: TrainedModel, encoded: EncodedEntry) -> np.ndarray:
    """Probability vector over the city vocabulary for one encoded entry."""
    expected = expected_param_shapes(len(model.vocab), model.hyper)
    if encoded.dense.shape != (model.hyper.window_size, DENSE_WIDTH):
        raise ValueError(
            f"encoded entry shape {encoded.dense.shape} does not match "
            f"model window size {model.hyper.window_size}"
        )
    for name, shape in expected.items():
        if model.params[name].shape != shape:
            raise CheckpointShapeError(f"parameter {name!r} has shape {model.params[name].shape}, expected {shape}")
    return batch_probs(model.params, batch_encode([encoded]))[0]


def predict_proba(model: TrainedModel, entries: Sequence[WindowEntry], chunk: int = 512) -> np.ndarray:
    """Transform and score entries in chunks; rows sum to 1."""
    out = np.empty((len(entries), len(model.vocab)))
    for start in range(0, len(entries), chunk):
        part = entries[start : start + chunk]
        encoded = [model.preprocessor.transform(e) for e in part]
        out[start : start + len(part)] = batch_probs(model.params, batch_encode(encoded))
    return out


def _split_validation(
    entries: Sequence[WindowEntry], fraction: float, rng: np.random.Generator
) -> tuple[list[WindowEntry], list[WindowEntry]]:
    """Hold out a fraction of customers (never individual entries)."""
    customers = sorted({e.customer_id for e in entries})
    if fraction <= 0.0 or len(customers) < 2:
        return list(entries), []
    n_val = max(1, round(fraction * len(customers)))
    if n_val >= len(customers):
        n_val = len(customers) - 1
    order = rng.permutation(len(customers))
    val_ids = {customers[i] for i in order[:n_val]}
    train = [e for e in entries if e.customer_id not in val_ids]
    val = [e for e in entries if e.customer_id in val_ids]
    return train, val


ProgressFn = Callable[[dict], None]


def train(
    entries: Sequence[WindowEntry],
    vocab: CityVocab,
    hyper: Hyperparams,
    progress: ProgressFn | None = None,
) -> TrainedModel:
    """Mini-batch Adam on mean cross-entropy with customer-level early stopping.

    10% of the training customers (``hyper.val_fraction``) are held out for
    validation; the parameters from the best-validation epoch are returned.
    Fully deterministic for a fixed seed and input.
    """
    if not entries:
        raise ValueError("cannot train on an empty entry list")
    widths = {len(e.window) for e in entries}
    if widths != {hyper.window_size}:
        raise ValueError(f"entries have window sizes {sorted(widths)}, hyperparams say {hyper.window_size}")

    seed_root = np.random.SeedSequence(hyper.seed)
    init_seq, split_seq, shuffle_seq = seed_root.spawn(3)
    train_entries, val_entries = _split_validation(
        entries, hyper.val_fraction, np.random.default_rng(split_seq)
    )

    preprocessor = fit_preprocessor(train_entries, n_cities=len(vocab))
    train_batchable = [preprocessor.transform(e) for e in train_entries]
    val_batch = batch_encode([preprocessor.transform(e) for e in val_entries]) if val_entries else None

    params = init_params(len(vocab), hyper, np.random.default_rng(init_seq))
    state = nn.AdamState(lr=hyper.learning_rate)
    shuffle_rng = np.random.default_rng(shuffle_seq)

    history: list[EpochStats] = []
    best_val = np.inf
    best_params: nn.Params | None = None
    best_epoch = 0
    stale = 0
    n = len(train_batchable)

    for epoch in range(1, hyper.epochs + 1):
        started = time.perf_counter()
        order = shuffle_rng.permutation(n)
        loss_sum = 0.0
        for start in range(0, n, hyper.batch_size):
            idx = order[start : start + hyper.batch_size]
            batch = batch_encode([train_batchable[i] for i in idx])
            loss, grads = batch_loss_and_grads(params, batch)
            if not np.isfinite(loss):
                raise TrainingDivergedError(
                    f"loss became non-finite at epoch {epoch}; "
                    f"try a smaller learning rate than {hyper.learning_rate}"
                )
            nn.adam_step(params, grads, state)
            loss_sum += loss * len(idx)
        train_loss = loss_sum / n

        val_loss: float | None = None
        if val_batch is not None:
            val_loss, _, _ = _forward(params, val_batch, want_grads=False)
            if not np.isfinite(val_loss):
                raise TrainingDivergedError(
                    f"validation loss became non-finite at epoch {epoch}; "
                    f"try a smaller learning rate than {hyper.learning_rate}"
                )
        elapsed_ms = (time.perf_counter() - started) * 1e3
        # elapsed_ms goes only to the progress log, never into the checkpoint,
        # so identical runs write identical files.
        history.append(EpochStats(epoch, train_loss, val_loss))
        if progress is not None:
            progress(
                {"epoch": epoch, "train_loss": train_loss, "val_loss": val_loss, "elapsed_ms": elapsed_ms}
            )

        if val_loss is not None:
            if val_loss < best_val:
                best_val = val_loss
                best_params = {k: v.copy() for k, v in params.items()}
                best_epoch = epoch
                stale = 0
            else:
                stale += 1
                if stale >= hyper.patience:
                    break

    if best_params is not None:
        params = best_params
    if progress is not None and best_epoch:
        progress({"event": "restored_best", "epoch": best_epoch, "val_loss": best_val})
    return TrainedModel(params=params, preprocessor=preprocessor, vocab=vocab, hyper=hyper, history=history)


# --- checkpoints ---


def save(model: TrainedModel, path: str | Path) -> None:
    """Versioned JSON checkpoint; float64 values survive the round trip exactly."""
    payload = {
        "format_version": CHECKPOINT_VERSION,
        "hyperparams": model.hyper.to_dict(),
        "vocab": list(model.vocab.cities),
        "preprocessor": model.preprocessor.to_dict(),
        "history": [
            {"epoch": h.epoch, "train_loss": h.train_loss, "val_loss": h.val_loss}
            for h in model.history
        ],
        "params": {
            name: {"shape": list(arr.shape), "data": arr.reshape(-1).tolist()}
            for name, arr in model.params.items()
        },
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh)
    os.replace(tmp, path)


def load(path: str | Path) -> TrainedModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CheckpointFormatError(f"checkpoint {path} is truncated or not valid JSON: {exc}") from None
    if not isinstance(payload, dict):
        raise CheckpointFormatError(f"checkpoint {path} does not hold a JSON object")
    version = payload.get("format_version")
    if version != CHECKPOINT_VERSION:
        raise CheckpointVersionError(f"checkpoint version {version!r}, this build reads {CHECKPOINT_VERSION}")
    for key in ("hyperparams", "vocab", "preprocessor", "params"):
        if key not in payload:
            raise CheckpointFormatError(f"checkpoint {path} is missing the {key!r} section")

    hyper = Hyperparams.from_dict(payload["hyperparams"])
    vocab = CityVocab(tuple(payload["vocab"]))
    preprocessor = Preprocessor.from_dict(payload["preprocessor"])
    expected = expected_param_shapes(len(vocab), hyper)

    params: nn.Params = {}
    for name, want in expected.items():
        if name not in payload["params"]:
            raise CheckpointFormatError(f"checkpoint is missing parameter {name!r}")
        entry = payload["params"][name]
        shape = tuple(int(s) for s in entry["shape"])
        data = entry["data"]
        if shape != want:
            raise CheckpointShapeError(f"parameter {name!r} has shape {shape}, expected {want}")
        if len(data) != int(np.prod(shape)):
            raise CheckpointShapeError(f"parameter {name!r} holds {len(data)} values, shape {shape} needs {int(np.prod(shape))}")
        params[name] = np.asarray(data, dtype=np.float64).reshape(shape)

    history = [
        EpochStats(h["epoch"], h["train_loss"], h.get("val_loss"))
        for h in payload.get("history", [])
    ]
    return TrainedModel(params=params, preprocessor=preprocessor, vocab=vocab, hyper=hyper, history=history)
