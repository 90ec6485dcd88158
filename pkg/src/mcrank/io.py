"""File formats: rating CSVs, predicted-vector CSVs, config and report files.

Dataset files are UTF-8 CSV with header ``user_id,item_id,overall,<c1>,...``;
criterion names come from the header. Reports are JSON with a sibling
plot-ready CSV holding the same cells flattened. All numeric output uses
shortest round-trip formatting, so emitted files reload to exactly the
in-memory values.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .core import CandidateSet, Dataset, MethodSpec, RatingRecord, validate_dataset
from .errors import DatasetValidationError, ParseError
from .pipeline import ExperimentConfig, MetricsReport, Protocol, ReportCell
from .predictor import TrainConfig

_FIXED_COLUMNS = ("user_id", "item_id", "overall")


def format_rating(value: float) -> str:
    """Integral ratings print bare, predicted values keep full precision."""
    f = float(value)
    return str(int(f)) if f.is_integer() else repr(f)


def _read_rows(path: str | Path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read: {exc}") from exc
    reader = csv.reader(text.splitlines())
    rows = [(i + 1, [cell.strip() for cell in row])
            for i, row in enumerate(reader) if row]
    if not rows:
        raise ParseError(f"{path}: no header (file is empty)")
    return path, rows


def _parse_float(path: Path, line: int, column: str, text: str) -> float:
    try:
        return float(text)
    except ValueError as exc:
        raise ParseError(
            f"{path}: line {line}: {column} value {text!r} is not a number"
        ) from exc


def load_dataset(path: str | Path, *,
                 scale: tuple[float, float] = (1.0, 5.0)) -> Dataset:
    """Read and validate a rating CSV.

    Raises ParseError with a line number on malformed rows, and
    DatasetValidationError listing every invariant violation at once.
    """
    path, rows = _read_rows(path)
    _, header = rows[0]
    if tuple(header[:3]) != _FIXED_COLUMNS or len(header) < 4:
        raise ParseError(
            f"{path}: line 1: header must be user_id,item_id,overall,"
            f"<criterion,...>, got {','.join(header)}")
    names = tuple(header[3:])
    records = []
    for line, row in rows[1:]:
        if len(row) != len(header):
            raise ParseError(
                f"{path}: line {line}: expected {len(header)} columns, got {len(row)}")
        overall = _parse_float(path, line, "overall", row[2])
        criteria = tuple(_parse_float(path, line, names[i], cell)
                         for i, cell in enumerate(row[3:]))
        records.append(RatingRecord(user_id=row[0], item_id=row[1],
                                    overall=overall, criteria=criteria))
    dataset = Dataset(criteria_names=names, records=tuple(records),
                      scale_min=scale[0], scale_max=scale[1])
    result = validate_dataset(dataset)
    if not result.ok:
        raise DatasetValidationError(result.violations)
    return dataset


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(_FIXED_COLUMNS) + list(dataset.criteria_names))
        for r in dataset.records:
            writer.writerow([r.user_id, r.item_id, format_rating(r.overall)]
                            + [format_rating(v) for v in r.criteria])


def load_candidate_sets(path: str | Path) -> dict[str, CandidateSet]:
    """Read a predicted-vectors CSV into per-user candidate sets.

    Header is ``user_id,item_id,<criterion,...>``; a full dataset file
    (with an ``overall`` column) is also accepted, the overall being
    ignored since ranking uses criteria values only. Values may be
    continuous and are not checked against a rating scale.
    """
    path, rows = _read_rows(path)
    _, header = rows[0]
    if len(header) >= 4 and tuple(header[:3]) == _FIXED_COLUMNS:
        first_criterion = 3
    elif len(header) >= 3 and tuple(header[:2]) == _FIXED_COLUMNS[:2]:
        first_criterion = 2
    else:
        raise ParseError(
            f"{path}: line 1: header must be user_id,item_id[,overall],"
            f"<criterion,...>, got {','.join(header)}")
    names = header[first_criterion:]
    per_user: dict[str, list[tuple[str, list[float]]]] = {}
    for line, row in rows[1:]:
        if len(row) != len(header):
            raise ParseError(
                f"{path}: line {line}: expected {len(header)} columns, got {len(row)}")
        vector = [_parse_float(path, line, names[i], cell)
                  for i, cell in enumerate(row[first_criterion:])]
        user, item = row[0], row[1]
        seen = per_user.setdefault(user, [])
        if any(existing == item for existing, _ in seen):
            raise ParseError(
                f"{path}: line {line}: duplicate item {item!r} for user {user!r}")
        seen.append((item, vector))
    return {user: CandidateSet.from_pairs(user, pairs)
            for user, pairs in per_user.items()}


def save_predictions(path: str | Path, criteria_names, rows) -> None:
    """Write predicted vectors as ``user_id,item_id,<criterion,...>`` CSV.

    ``rows`` yields (user_id, item_id, vector) triples.
    """
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["user_id", "item_id"] + list(criteria_names))
        for user, item, vector in rows:
            writer.writerow([user, item] + [repr(float(v)) for v in vector])


_CONFIG_KEYS = {"methods", "folds", "seed", "n_values", "relevance_threshold",
                "protocol", "train"}
_TRAIN_KEYS = {"latent_dim", "learning_rate", "reg", "epochs", "seed"}


def experiment_config_from_dict(doc: dict, *,
                                dataset_path: str | None = None) -> ExperimentConfig:
    unknown = set(doc) - _CONFIG_KEYS
    if unknown:
        raise ParseError(f"unknown experiment config keys: {sorted(unknown)}")
    train_doc = doc.get("train", {})
    unknown = set(train_doc) - _TRAIN_KEYS
    if unknown:
        raise ParseError(f"unknown train config keys: {sorted(unknown)}")
    defaults = ExperimentConfig(methods=(MethodSpec.pr(),))
    return ExperimentConfig(
        methods=tuple(MethodSpec.parse(s) for s in doc.get("methods", ["pr"])),
        folds=int(doc.get("folds", defaults.folds)),
        seed=int(doc.get("seed", defaults.seed)),
        n_values=tuple(doc.get("n_values", defaults.n_values)),
        relevance_threshold=float(doc.get("relevance_threshold",
                                          defaults.relevance_threshold)),
        protocol=Protocol.parse(doc.get("protocol", defaults.protocol.value)),
        train=TrainConfig(**train_doc),
        dataset_path=dataset_path,
    )


def load_experiment_config(path: str | Path, *,
                           dataset_path: str | None = None) -> ExperimentConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"{path}: cannot read: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: config must be a JSON object")
    return experiment_config_from_dict(doc, dataset_path=dataset_path)


_CELL_FIELDS = ("method", "k", "sub", "n", "fold", "f1", "ndcg",
                "improvement_f1", "improvement_ndcg")


def emit_report(report: MetricsReport, path: str | Path) -> None:
    """Write the report JSON plus a sibling flat CSV next to it.

    Output is deterministic for a deterministic report: cell order is
    fixed and floats use shortest round-trip formatting, so reloading
    reproduces the in-memory report exactly.
    """
    path = Path(path)
    doc = {
        "metadata": report.metadata,
        "cells": [{f: getattr(c, f) for f in _CELL_FIELDS} for c in report.cells],
    }
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    csv_path = path.with_suffix(".csv")
    with csv_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(_CELL_FIELDS)
        for c in report.cells:
            writer.writerow(["" if (v := getattr(c, f)) is None else v
                             for f in _CELL_FIELDS])


def load_report(path: str | Path) -> MetricsReport:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    try:
        cells = tuple(ReportCell(**cell) for cell in doc["cells"])
        return MetricsReport(metadata=doc["metadata"], cells=cells)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"{path}: not a report file: {exc}") from exc
