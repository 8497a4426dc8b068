"""CSV ingestion with a declared schema.

A schema file uses the same ``key = value`` format as grower configs::

    target = rings
    categorical = sex
    columns = sex, length, diameter, rings   # optional, default: all
    response_scale = 1.0                     # optional, y -> y * scale + shift
    response_shift = 0.0

Categorical columns become indicator columns, one per level in sorted order
with the first level dropped.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import read_config_file
from .core import ConfigError, Dataset


class DataError(ValueError):
    pass


class EmptyFileError(DataError):
    pass


class MissingColumnError(DataError):
    pass


class NonNumericTargetError(DataError):
    pass


class MalformedRowError(DataError):
    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


@dataclass(frozen=True)
class TabularSchema:
    target: str
    categorical: tuple = ()
    columns: tuple | None = None
    response_scale: float = 1.0
    response_shift: float = 0.0

    @classmethod
    def from_dict(cls, params: dict) -> "TabularSchema":
        known = {"target", "categorical", "columns", "response_scale", "response_shift"}
        for key in params:
            if key not in known:
                raise ConfigError(key, "not a schema key")
        if not params.get("target"):
            raise ConfigError("target", "schema needs a target column")

        def names(v):
            if v is None:
                return ()
            return tuple(s.strip() for s in str(v).split(",") if s.strip())

        cols = names(params.get("columns")) or None
        return cls(str(params["target"]).strip(), names(params.get("categorical")), cols,
                   float(params.get("response_scale", 1.0) or 1.0), float(params.get("response_shift", 0.0) or 0.0))

    @classmethod
    def from_file(cls, path) -> "TabularSchema":
        return cls.from_dict(read_config_file(path))


@dataclass(eq=False)
class TabularData:
    dataset: Dataset
    feature_names: list = field(default_factory=list)
    levels: dict = field(default_factory=dict)


def _read_rows(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    rows = [r for r in rows if r and any(c.strip() for c in r)]
    if not rows:
        raise EmptyFileError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    if len(rows) == 1:
        raise EmptyFileError(f"{path} has a header but no data rows")
    return header, rows[1:]


def load_table(path, schema: TabularSchema, require_target: bool = True, levels=None) -> TabularData:
    """Parse a CSV into features (with indicator expansion) and the scaled target.

    Row numbers in errors count the header as row 1.  With
    ``require_target=False`` a missing target column yields a zero response
    (for prediction inputs); ``levels`` fixes the categorical levels, e.g. to
    those seen at fit time.
    """
    header, body = _read_rows(path)
    index = {name: i for i, name in enumerate(header)}
    wanted = list(schema.columns) if schema.columns else header
    has_target = schema.target in index
    needed = set(wanted) | set(schema.categorical) | ({schema.target} if require_target else set())
    for name in sorted(needed):
        if name not in index:
            raise MissingColumnError(f"column {name!r} not in {path}")
    if schema.target in schema.categorical:
        raise NonNumericTargetError(f"target {schema.target!r} is declared categorical")
    features = [c for c in wanted if c != schema.target]
    if not features:
        raise DataError("no feature columns")

    y = np.empty(len(body))
    raw = {c: [] for c in features}
    for r, row in enumerate(body):
        line = r + 2
        if len(row) != len(header):
            raise MalformedRowError(line, f"expected {len(header)} fields, found {len(row)}")
        if has_target:
            cell = row[index[schema.target]].strip()
            try:
                y[r] = float(cell)
            except ValueError:
                raise NonNumericTargetError(f"row {line}: target value {cell!r} is not numeric") from None
            if not np.isfinite(y[r]):
                raise MalformedRowError(line, f"target value {cell!r} is not finite")
        else:
            y[r] = 0.0
        for c in features:
            raw[c].append(row[index[c]].strip())

    fixed_levels = levels or {}
    columns, names, levels = [], [], {}
    for c in features:
        if c in schema.categorical:
            lv = list(fixed_levels[c]) if c in fixed_levels else sorted(set(raw[c]))
            levels[c] = lv
            lookup = {v: k for k, v in enumerate(lv)}
            for r, v in enumerate(raw[c]):
                if v not in lookup:
                    raise MalformedRowError(r + 2, f"column {c!r} has unknown level {v!r}")
            codes = np.array([lookup[v] for v in raw[c]])
            for k, level in enumerate(lv[1:], start=1):
                columns.append((codes == k).astype(np.float64))
                names.append(f"{c}={level}")
            continue
        col = np.empty(len(body))
        for r, v in enumerate(raw[c]):
            try:
                col[r] = float(v)
            except ValueError:
                raise MalformedRowError(r + 2, f"column {c!r} value {v!r} is not numeric") from None
            if not np.isfinite(col[r]):
                raise MalformedRowError(r + 2, f"column {c!r} value {v!r} is not finite")
        columns.append(col)
        names.append(c)
    if not columns:
        raise DataError("categorical columns with a single level leave no features")
    X = np.column_stack(columns)
    y = y * schema.response_scale + schema.response_shift
    return TabularData(Dataset.from_arrays(X, y), names, levels)


def load_csv(path, schema: TabularSchema) -> Dataset:
    return load_table(path, schema).dataset


def write_csv(path, data: Dataset, feature_names=None, target: str = "y") -> None:
    """Write with 17 significant digits so doubles reload bit-identically."""
    names = list(feature_names) if feature_names else [f"x{j + 1}" for j in range(data.d)]
    if len(names) != data.d:
        raise ValueError("feature_names length does not match d")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(names + [target])
        for x, y in zip(data.features, data.response):
            w.writerow([f"{v:.17g}" for v in x] + [f"{y:.17g}"])


def write_predictions(path, pred) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["prediction"])
        for v in pred:
            w.writerow([f"{float(v):.17g}"])


def inferred_schema(path, target: str = "y") -> TabularSchema:
    """Schema treating every column as numeric."""
    header, _ = _read_rows(path)
    if target not in header:
        raise MissingColumnError(f"column {target!r} not in {Path(path)}")
    return TabularSchema(target)
