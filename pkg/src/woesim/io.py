"""File formats: config JSON, results / summary / guideline CSV.

All CSV numeric fields use the shortest decimal representation that parses
back to the identical double, so save/load round-trips are lossless.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

from .configs import BUILTIN_CONFIGS, ConfigSpec, PredictorSpec
from .curve import GuidelineTable
from .engine import IterationRecord, SummaryRecord
from .errors import ConfigError, SchemaError

RESULTS_HEADER = [
    "config_id", "aiv", "n", "event_rate", "iteration", "clamped", "converged",
    "theta_f1", "theta_p4", "f1_val", "f1_test", "p4_val", "p4_test",
    "gini_val", "gini_test",
]
SUMMARY_HEADER = [
    "config_id", "aiv", "n", "event_rate", "metric", "split",
    "median", "q25", "q75", "p05", "p95", "n_iter", "n_nonconverged",
]
GUIDELINE_HEADER = ["event_rate", "aiv", "predicted_median"]

_CONFIG_KEYS = {"id", "predictors"}
_PREDICTOR_KEYS = {"name", "p_event", "p_nonevent"}


def _require_keys(path, where: str, obj: dict, expected: set[str]) -> None:
    unknown = set(obj) - expected
    if unknown:
        raise SchemaError(f"{path}: {where}: unexpected key(s) {sorted(unknown)}")
    missing = expected - set(obj)
    if missing:
        raise SchemaError(f"{path}: {where}: missing key(s) {sorted(missing)}")


def _number_list(path, where: str, value) -> list[float]:
    if not isinstance(value, list) or not value:
        raise SchemaError(f"{path}: {where} must be a nonempty list of numbers")
    out = []
    for i, v in enumerate(value):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise SchemaError(f"{path}: {where}[{i}] must be a number")
        out.append(float(v))
    return out


def load_config(path) -> ConfigSpec:
    """Load and validate a configuration from its JSON file."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}: top level must be an object")
    _require_keys(path, "top level", raw, _CONFIG_KEYS)
    if not isinstance(raw["id"], str):
        raise SchemaError(f"{path}: id must be a string")
    if not isinstance(raw["predictors"], list) or not raw["predictors"]:
        raise SchemaError(f"{path}: predictors must be a nonempty list")
    predictors = []
    for i, item in enumerate(raw["predictors"]):
        where = f"predictors[{i}]"
        if not isinstance(item, dict):
            raise SchemaError(f"{path}: {where} must be an object")
        _require_keys(path, where, item, _PREDICTOR_KEYS)
        if not isinstance(item["name"], str):
            raise SchemaError(f"{path}: {where}.name must be a string")
        p_event = _number_list(path, f"{where}.p_event", item["p_event"])
        p_nonevent = _number_list(path, f"{where}.p_nonevent", item["p_nonevent"])
        try:
            predictors.append(
                PredictorSpec(name=item["name"], p_event=p_event, p_nonevent=p_nonevent)
            )
        except ConfigError as exc:
            raise SchemaError(f"{path}: {where}: {exc}") from exc
    try:
        return ConfigSpec(id=raw["id"], predictors=tuple(predictors))
    except ConfigError as exc:
        raise SchemaError(f"{path}: {exc}") from exc


def save_config(config: ConfigSpec, path) -> None:
    """Write a configuration as schema-conformant JSON."""
    doc = {
        "id": config.id,
        "predictors": [
            {
                "name": p.name,
                "p_event": list(p.p_event),
                "p_nonevent": list(p.p_nonevent),
            }
            for p in config.predictors
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def resolve_config(spec: str) -> ConfigSpec:
    """Interpret a CLI config argument as a built-in id or a JSON path."""
    if spec in BUILTIN_CONFIGS:
        return BUILTIN_CONFIGS[spec]
    path = Path(spec)
    if path.exists():
        return load_config(path)
    raise ConfigError(f"{spec!r} is neither a built-in config id nor an existing file")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_bool(text: str) -> bool:
    if text == "true":
        return True
    if text == "false":
        return False
    raise SchemaError(f"expected 'true' or 'false', got {text!r}")


def _check_header(path, row, expected: Sequence[str]) -> None:
    if row != list(expected):
        raise SchemaError(f"{path}: bad header {row!r}, expected {list(expected)!r}")


def save_results_csv(records: Iterable[IterationRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULTS_HEADER)
        for r in records:
            writer.writerow([
                r.config_id, _fmt(r.aiv), r.n, _fmt(r.event_rate), r.iteration,
                _fmt(r.clamped), _fmt(r.converged), _fmt(r.theta_f1),
                _fmt(r.theta_p4), _fmt(r.f1_val), _fmt(r.f1_test),
                _fmt(r.p4_val), _fmt(r.p4_test), _fmt(r.gini_val),
                _fmt(r.gini_test),
            ])


def load_results_csv(path) -> list[IterationRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        _check_header(path, next(reader, []), RESULTS_HEADER)
        for row in reader:
            if len(row) != len(RESULTS_HEADER):
                raise SchemaError(f"{path}: row has {len(row)} fields, expected {len(RESULTS_HEADER)}")
            records.append(IterationRecord(
                config_id=row[0], aiv=float(row[1]), n=int(row[2]),
                event_rate=float(row[3]), iteration=int(row[4]),
                clamped=_parse_bool(row[5]), converged=_parse_bool(row[6]),
                theta_f1=float(row[7]), theta_p4=float(row[8]),
                f1_val=float(row[9]), f1_test=float(row[10]),
                p4_val=float(row[11]), p4_test=float(row[12]),
                gini_val=float(row[13]), gini_test=float(row[14]),
            ))
    return records


def save_summary_csv(records: Iterable[SummaryRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_HEADER)
        for r in records:
            writer.writerow([
                r.config_id, _fmt(r.aiv), r.n, _fmt(r.event_rate), r.metric,
                r.split, _fmt(r.median), _fmt(r.q25), _fmt(r.q75),
                _fmt(r.p05), _fmt(r.p95), r.n_iter, r.n_nonconverged,
            ])


def load_summary_csv(path) -> list[SummaryRecord]:
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        _check_header(path, next(reader, []), SUMMARY_HEADER)
        for row in reader:
            if len(row) != len(SUMMARY_HEADER):
                raise SchemaError(f"{path}: row has {len(row)} fields, expected {len(SUMMARY_HEADER)}")
            records.append(SummaryRecord(
                config_id=row[0], aiv=float(row[1]), n=int(row[2]),
                event_rate=float(row[3]), metric=row[4], split=row[5],
                median=float(row[6]), q25=float(row[7]), q75=float(row[8]),
                p05=float(row[9]), p95=float(row[10]), n_iter=int(row[11]),
                n_nonconverged=int(row[12]),
            ))
    return records


def save_guideline_csv(table: GuidelineTable, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(GUIDELINE_HEADER)
        for rate, aiv, value in table.rows():
            writer.writerow([_fmt(rate), _fmt(aiv), _fmt(value)])
