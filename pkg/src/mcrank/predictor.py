"""Baseline multi-criteria rating predictor.

One independent biased matrix-factorization model per criterion, trained
with plain SGD. The ranking layer only needs criteria vectors, so any
external predictor can substitute for this one; this baseline exists so
the pipeline runs end to end with no heavyweight dependencies and fully
deterministic output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import Dataset
from .errors import DomainError, ParseError, TrainingError

_MODEL_FORMAT = "mcrank-model"
_MODEL_VERSION = 1


@dataclass(frozen=True)
class TrainConfig:
    latent_dim: int = 16
    learning_rate: float = 0.005
    reg: float = 0.02
    epochs: int = 30
    seed: int = 0

    def __post_init__(self):
        if self.latent_dim < 1:
            raise DomainError(f"latent_dim must be >= 1, got {self.latent_dim}")
        if self.learning_rate <= 0:
            raise DomainError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.epochs < 1:
            raise DomainError(f"epochs must be >= 1, got {self.epochs}")
        if self.reg < 0:
            raise DomainError(f"reg must be non-negative, got {self.reg}")
        if self.seed < 0:
            raise DomainError(f"seed must be non-negative, got {self.seed}")


@dataclass(frozen=True, eq=False)
class PredictorModel:
    """Per-criterion factor model parameters.

    Arrays are stacked along the criterion axis: biases are (M, U) and
    (M, I), factors are (M, U, d) and (M, I, d). ``loss_history`` holds
    the training MSE per criterion, entry 0 being the pre-training loss.
    """

    criteria_names: tuple[str, ...]
    user_ids: tuple[str, ...]
    item_ids: tuple[str, ...]
    scale_min: float
    scale_max: float
    latent_dim: int
    global_means: np.ndarray = field(repr=False)
    user_biases: np.ndarray = field(repr=False)
    item_biases: np.ndarray = field(repr=False)
    user_factors: np.ndarray = field(repr=False)
    item_factors: np.ndarray = field(repr=False)
    loss_history: tuple[tuple[float, ...], ...] = field(repr=False, default=())

    def __post_init__(self):
        object.__setattr__(self, "_user_index",
                           {u: i for i, u in enumerate(self.user_ids)})
        object.__setattr__(self, "_item_index",
                           {t: i for i, t in enumerate(self.item_ids)})

    @property
    def n_criteria(self) -> int:
        return len(self.criteria_names)

    def knows_user(self, user_id: str) -> bool:
        return user_id in self._user_index

    def knows_item(self, item_id: str) -> bool:
        return item_id in self._item_index


def fit(train: Dataset, cfg: TrainConfig) -> PredictorModel:
    """Train one biased-MF model per criterion with seeded SGD.

    Records are visited in a seeded shuffle each epoch; each criterion
    draws from its own seed stream so criteria stay fully independent.
    """
    if not train.records:
        raise TrainingError("cannot train on an empty dataset")
    users = sorted({r.user_id for r in train.records})
    items = sorted({r.item_id for r in train.records})
    u_index = {u: i for i, u in enumerate(users)}
    i_index = {t: i for i, t in enumerate(items)}
    n_u, n_i, m = len(users), len(items), train.n_criteria
    d = cfg.latent_dim

    u_idx = np.fromiter((u_index[r.user_id] for r in train.records), dtype=np.int64)
    i_idx = np.fromiter((i_index[r.item_id] for r in train.records), dtype=np.int64)
    ratings = np.asarray([r.criteria for r in train.records], dtype=np.float64)
    if ratings.shape[1] != m:
        raise TrainingError(
            f"records carry {ratings.shape[1]} criteria values, dataset declares {m}"
        )
    n_rec = len(train.records)

    global_means = np.empty(m)
    user_biases = np.zeros((m, n_u))
    item_biases = np.zeros((m, n_i))
    user_factors = np.empty((m, n_u, d))
    item_factors = np.empty((m, n_i, d))
    histories: list[tuple[float, ...]] = []

    lr, reg = cfg.learning_rate, cfg.reg
    for c in range(m):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, c]))
        r = ratings[:, c].copy()
        mu = float(r.mean())
        p = rng.normal(0.0, 0.05, size=(n_u, d))
        q = rng.normal(0.0, 0.05, size=(n_i, d))
        bu = np.zeros(n_u)
        bi = np.zeros(n_i)

        def mse() -> float:
            pred = mu + bu[u_idx] + bi[i_idx] + np.einsum(
                "nd,nd->n", p[u_idx], q[i_idx])
            return float(np.mean((r - pred) ** 2))

        history = [mse()]
        for _ in range(cfg.epochs):
            order = rng.permutation(n_rec)
            for t in order:
                u = u_idx[t]
                i = i_idx[t]
                pu = p[u]
                qi = q[i]
                err = r[t] - (mu + bu[u] + bi[i] + pu @ qi)
                bu[u] += lr * (err - reg * bu[u])
                bi[i] += lr * (err - reg * bi[i])
                pu_old = pu.copy()
                pu += lr * (err * qi - reg * pu)
                qi += lr * (err * pu_old - reg * qi)
            history.append(mse())

        global_means[c] = mu
        user_biases[c] = bu
        item_biases[c] = bi
        user_factors[c] = p
        item_factors[c] = q
        histories.append(tuple(history))

    return PredictorModel(
        criteria_names=train.criteria_names,
        user_ids=tuple(users),
        item_ids=tuple(items),
        scale_min=train.scale_min,
        scale_max=train.scale_max,
        latent_dim=d,
        global_means=global_means,
        user_biases=user_biases,
        item_biases=item_biases,
        user_factors=user_factors,
        item_factors=item_factors,
        loss_history=tuple(histories),
    )


def predict(model: PredictorModel, user_id: str, item_id: str) -> np.ndarray:
    """Predicted criteria vector for one (user, item) pair, clamped to scale.

    Cold cases fall back instead of failing: unseen item uses the user's
    bias-adjusted mean, unseen user the item's, and a fully unseen pair
    the per-criterion global means.
    """
    return predict_many(model, user_id, [item_id])[0]


def predict_many(model: PredictorModel, user_id: str, item_ids) -> np.ndarray:
    """Predicted criteria vectors for one user over many items, shape (n, M)."""
    item_ids = list(item_ids)
    n, m = len(item_ids), model.n_criteria
    u = model._user_index.get(user_id)
    base = np.tile(model.global_means, (n, 1))  # (n, M)
    if u is not None:
        base += model.user_biases[:, u]

    known = np.fromiter((model._item_index.get(t, -1) for t in item_ids),
                        dtype=np.int64, count=n)
    mask = known >= 0
    if mask.any():
        idx = known[mask]
        base[mask] += model.item_biases[:, idx].T
        if u is not None:
            # (M, k, d) . (M, d) summed over d, transposed to (k, M)
            dots = np.einsum("mkd,md->mk", model.item_factors[:, idx, :],
                             model.user_factors[:, u, :])
            base[mask] += dots.T
    return np.clip(base, model.scale_min, model.scale_max)


def save_model(model: PredictorModel, path: str | Path) -> None:
    """Write the model as a versioned JSON parameter dump (exact round-trip)."""
    doc = {
        "format": _MODEL_FORMAT,
        "version": _MODEL_VERSION,
        "criteria": list(model.criteria_names),
        "users": list(model.user_ids),
        "items": list(model.item_ids),
        "scale": [model.scale_min, model.scale_max],
        "dim": model.latent_dim,
        "global_means": model.global_means.tolist(),
        "user_biases": model.user_biases.tolist(),
        "item_biases": model.item_biases.tolist(),
        "user_factors": model.user_factors.tolist(),
        "item_factors": model.item_factors.tolist(),
        "loss_history": [list(h) for h in model.loss_history],
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_model(path: str | Path) -> PredictorModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not a valid model file: {exc}") from exc
    if doc.get("format") != _MODEL_FORMAT:
        raise ParseError(f"{path}: not a {_MODEL_FORMAT} file")
    if doc.get("version") != _MODEL_VERSION:
        raise ParseError(f"{path}: unsupported model version {doc.get('version')}")
    return PredictorModel(
        criteria_names=tuple(doc["criteria"]),
        user_ids=tuple(doc["users"]),
        item_ids=tuple(doc["items"]),
        scale_min=float(doc["scale"][0]),
        scale_max=float(doc["scale"][1]),
        latent_dim=int(doc["dim"]),
        global_means=np.asarray(doc["global_means"], dtype=np.float64),
        user_biases=np.asarray(doc["user_biases"], dtype=np.float64),
        item_biases=np.asarray(doc["item_biases"], dtype=np.float64),
        user_factors=np.asarray(doc["user_factors"], dtype=np.float64),
        item_factors=np.asarray(doc["item_factors"], dtype=np.float64),
        loss_history=tuple(tuple(h) for h in doc["loss_history"]),
    )
