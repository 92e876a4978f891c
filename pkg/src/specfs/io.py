"""CSV dataset I/O, canonical JSON, and atomic file writes."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import ArgumentError, DataFormatError
from .spectra import LABEL_NAMES, LabeledDataset, Spectrum, parse_label


def fmt_float(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    if x == 0:
        return "0"
    return format(x, ".17g")


def atomic_write_text(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_float(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def write_csv(path, header, rows) -> None:
    atomic_write_text(path, csv_text(header, rows))


# --------------------------------------------------------------------------- canonical JSON


def canonical_json(obj) -> str:
    """Sorted keys, compact separators, floats at 17 significant digits."""
    out: list[str] = []
    _emit(obj, out)
    return "".join(out) + "\n"


def _emit(obj, out):
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj, ensure_ascii=False))
    elif isinstance(obj, dict):
        out.append("{")
        for i, key in enumerate(sorted(obj, key=str)):
            if i:
                out.append(",")
            _emit(str(key), out)
            out.append(":")
            _emit(obj[key], out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            _emit(item, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


# --------------------------------------------------------------------------- datasets


def _float(text, path, line, what):
    try:
        v = float(text)
    except ValueError:
        raise DataFormatError(f"bad {what} {text!r}", path, line) from None
    if not math.isfinite(v):
        raise DataFormatError(f"non-finite {what} {text!r}", path, line)
    return v


def read_dataset(path) -> LabeledDataset:
    """Read ``id,label,<mz...>`` CSV into a dataset."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = csv.reader(fh)
        try:
            header = next(rows)
        except StopIteration:
            raise DataFormatError("empty file", path, 1) from None
        if len(header) < 4 or [h.strip().lower() for h in header[:2]] != ["id", "label"]:
            raise DataFormatError(
                f"header must be 'id,label,<mz1>,<mz2>,...', got {','.join(header[:3])!r}...",
                path,
                1,
            )
        grid = np.array([_float(h, path, 1, "m/z header value") for h in header[2:]])
        if np.any(np.diff(grid) <= 0):
            raise DataFormatError("header m/z values must be strictly increasing", path, 1)
        ids, labels, X = [], [], []
        for lineno, row in enumerate(rows, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(header):
                raise DataFormatError(
                    f"expected {len(header)} fields, got {len(row)}", path, lineno
                )
            try:
                labels.append(parse_label(row[1]))
            except ArgumentError as exc:
                raise DataFormatError(str(exc), path, lineno) from None
            ids.append(row[0])
            X.append([_float(v, path, lineno, "intensity") for v in row[2:]])
    X = np.array(X, dtype=float).reshape(len(ids), grid.size)
    return LabeledDataset(grid, X, np.array(labels, dtype=np.int64), tuple(ids))


def dataset_csv_text(ds: LabeledDataset) -> str:
    header = ["id", "label"] + [fmt_float(m) for m in ds.grid]
    rows = (
        [ds.ids[i], LABEL_NAMES[int(ds.y[i])]] + [fmt_float(v) for v in ds.X[i]]
        for i in range(ds.n_samples)
    )
    return csv_text(header, rows)


def write_dataset(path, ds: LabeledDataset) -> None:
    atomic_write_text(path, dataset_csv_text(ds))


def read_raw_spectrum(path, sample_id) -> Spectrum:
    """Two-column ``mz,intensity`` file; a non-numeric first row is treated as a header."""
    mz, inten = [], []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 2:
                raise DataFormatError(f"expected 2 fields, got {len(row)}", path, lineno)
            if lineno == 1 and row[0].strip().lower() == "mz":
                continue
            mz.append(_float(row[0], path, lineno, "m/z"))
            inten.append(_float(row[1], path, lineno, "intensity"))
    try:
        return Spectrum(mz, inten, sample_id)
    except ArgumentError as exc:
        raise DataFormatError(str(exc), path) from None


def read_raw_samples(raw_dir, labels_path) -> list:
    """Pairs of (Spectrum, label) from ``<raw_dir>/<id>.csv`` files listed in ``labels_path``."""
    raw_dir = Path(raw_dir)
    out = []
    with open(labels_path, encoding="utf-8", newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header is None or [h.strip().lower() for h in header] != ["id", "label"]:
            raise DataFormatError("labels header must be 'id,label'", labels_path, 1)
        for lineno, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise DataFormatError(f"expected 2 fields, got {len(row)}", labels_path, lineno)
            try:
                label = parse_label(row[1])
            except ArgumentError as exc:
                raise DataFormatError(str(exc), labels_path, lineno) from None
            out.append((read_raw_spectrum(raw_dir / f"{row[0]}.csv", row[0]), label))
    return out


def write_raw_samples(raw_dir, labels_path, samples) -> None:
    raw_dir = Path(raw_dir)
    for spectrum, _ in samples:
        write_csv(raw_dir / f"{spectrum.id}.csv", ["mz", "intensity"],
                  zip(map(float, spectrum.mz), map(float, spectrum.intensity)))
    write_csv(labels_path, ["id", "label"],
              ((s.id, lab if isinstance(lab, str) else LABEL_NAMES[int(lab)]) for s, lab in samples))
