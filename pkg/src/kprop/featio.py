"""File formats: NPY arrays, CSV matrices, dataset manifests, run reports.

The array interchange format is NPY version 1.0 with a deliberately narrow
profile: C-order little-endian float32/float64 matrices for features and
int64 vectors for labels. Anything outside that profile is rejected rather
than coerced, so a file that loads here will load identically anywhere else.
Headerless CSV is accepted for hand-written fixtures. Reports serialize as
sorted-key JSON with the wall-clock timestamp quarantined in its own field,
keeping everything else byte-stable for fixed inputs.
"""

import ast
import json
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from .episodes import EvalReport
from .errors import (
    DataConsistencyError,
    FileFormatError,
    ShapeMismatchError,
    UnsupportedLayoutError,
)

_MAGIC = b"\x93NUMPY"
_DESCR_BY_KIND = {"f4": "<f4", "f8": "<f8", "i8": "<i8"}


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    split: str = "train"
    class_names: Optional[tuple] = None

    def __post_init__(self):
        if self.features.ndim != 2:
            raise ShapeMismatchError(f"features must be 2-D, got shape {self.features.shape}")
        if self.labels.ndim != 1:
            raise ShapeMismatchError(f"labels must be 1-D, got shape {self.labels.shape}")
        if self.features.shape[0] != self.labels.shape[0]:
            raise DataConsistencyError(
                f"{self.features.shape[0]} feature rows vs {self.labels.shape[0]} labels"
            )
        if not np.issubdtype(self.labels.dtype, np.integer):
            raise DataConsistencyError(f"labels must be integers, got {self.labels.dtype}")
        if self.labels.size and self.labels.min() < 0:
            raise DataConsistencyError("labels must be non-negative")

    @property
    def n_classes(self) -> int:
        return int(np.unique(self.labels).size)


# ---------------------------------------------------------------- NPY codec


def _npy_header_bytes(descr: str, shape: tuple) -> bytes:
    if len(shape) == 1:
        shape_repr = f"({shape[0]},)"
    else:
        shape_repr = "(" + ", ".join(str(s) for s in shape) + ")"
    body = "{'descr': '%s', 'fortran_order': False, 'shape': %s, }" % (descr, shape_repr)
    # total header (magic + version + length field + text) padded to 64 bytes
    unpadded = len(_MAGIC) + 2 + 2 + len(body) + 1
    pad = (64 - unpadded % 64) % 64
    text = body + " " * pad + "\n"
    return _MAGIC + bytes([1, 0]) + len(text).to_bytes(2, "little") + text.encode("latin1")


def save_array(path, array) -> None:
    """Write a matrix or label vector as an NPY 1.0 file.

    Float arrays must be 2-D and are stored at their own precision (float32
    stays float32); integer arrays must be 1-D and are stored as int64.
    """
    array = np.asarray(array)
    if np.issubdtype(array.dtype, np.floating):
        if array.ndim != 2:
            raise ShapeMismatchError(f"float arrays must be 2-D, got shape {array.shape}")
        descr = "<f4" if array.dtype == np.float32 else "<f8"
        out = array.astype(np.dtype(descr), copy=False)
    elif np.issubdtype(array.dtype, np.integer):
        if array.ndim != 1:
            raise ShapeMismatchError(f"integer arrays must be 1-D, got shape {array.shape}")
        descr = "<i8"
        out = array.astype("<i8", copy=False)
    else:
        raise FileFormatError(f"cannot save dtype {array.dtype}")
    with open(path, "wb") as fh:
        fh.write(_npy_header_bytes(descr, out.shape))
        fh.write(np.ascontiguousarray(out).tobytes(order="C"))


def _load_npy(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(6)
        if magic != _MAGIC:
            raise FileFormatError(f"{path}: bad magic bytes {magic!r}")
        version = fh.read(2)
        if version != bytes([1, 0]):
            raise FileFormatError(f"{path}: unsupported NPY version {tuple(version)}")
        hlen_bytes = fh.read(2)
        if len(hlen_bytes) != 2:
            raise FileFormatError(f"{path}: truncated header")
        hlen = int.from_bytes(hlen_bytes, "little")
        header = fh.read(hlen).decode("latin1")
        try:
            meta = ast.literal_eval(header.strip())
        except (ValueError, SyntaxError) as exc:
            raise FileFormatError(f"{path}: unparseable header: {exc}") from exc
        if not isinstance(meta, dict) or not {"descr", "fortran_order", "shape"} <= set(meta):
            raise FileFormatError(f"{path}: header missing required keys")
        if meta["fortran_order"]:
            raise UnsupportedLayoutError(f"{path}: fortran-order arrays are not supported")
        descr = meta["descr"]
        if descr not in ("<f4", "<f8", "<i8"):
            raise FileFormatError(f"{path}: unsupported dtype descr {descr!r}")
        shape = tuple(int(s) for s in meta["shape"])
        if descr in ("<f4", "<f8") and len(shape) != 2:
            raise ShapeMismatchError(f"{path}: float arrays must be 2-D, header says {shape}")
        if descr == "<i8" and len(shape) != 1:
            raise ShapeMismatchError(f"{path}: int64 arrays must be 1-D, header says {shape}")
        data = fh.read()
    dtype = np.dtype(descr)
    expected = int(np.prod(shape)) * dtype.itemsize
    if len(data) != expected:
        raise FileFormatError(f"{path}: expected {expected} data bytes, found {len(data)}")
    return np.frombuffer(data, dtype=dtype).reshape(shape).copy()


def _load_csv(path) -> np.ndarray:
    try:
        return np.loadtxt(path, delimiter=",", dtype=float, ndmin=2)
    except ValueError as exc:
        raise FileFormatError(f"{path}: not a numeric CSV: {exc}") from exc


def load_array(path) -> np.ndarray:
    """Load a feature matrix or label vector from NPY 1.0 or headerless CSV."""
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(6)
    if head[:1] == _MAGIC[:1]:
        return _load_npy(path)
    return _load_csv(path)


# ---------------------------------------------------------------- manifests


def load_dataset(manifest_path, split: str = "train") -> Dataset:
    """Load the features and labels named by a manifest for one split.

    The manifest is a JSON object, or list of objects, each of the form
    ``{"features": path, "labels": path, "split": "train"|"test"}`` with
    paths resolved relative to the manifest file. An optional "class_names"
    list maps label values to names.
    """
    manifest_path = Path(manifest_path)
    with open(manifest_path) as fh:
        doc = json.load(fh)
    entries = doc if isinstance(doc, list) else [doc]
    for entry in entries:
        if not isinstance(entry, dict) or "features" not in entry or "labels" not in entry:
            raise FileFormatError(f"{manifest_path}: each entry needs 'features' and 'labels'")
    match = [e for e in entries if e.get("split", "train") == split]
    if not match:
        raise FileFormatError(f"{manifest_path}: no entry for split {split!r}")
    entry = match[0]
    base = manifest_path.parent
    features = load_array(base / entry["features"])
    labels = load_array(base / entry["labels"])
    names = entry.get("class_names")
    return Dataset(
        features=np.asarray(features, dtype=float),
        labels=np.asarray(labels),
        split=split,
        class_names=tuple(names) if names else None,
    )


def write_dataset(out_dir, features, labels, split: str = "train") -> Path:
    """Save features.npy, labels.npy and a manifest; returns the manifest path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    save_array(out_dir / "features.npy", np.asarray(features, dtype=float))
    save_array(out_dir / "labels.npy", np.asarray(labels, dtype=np.int64))
    manifest = [{"features": "features.npy", "labels": "labels.npy", "split": split}]
    manifest_path = out_dir / "manifest.json"
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest_path


# ---------------------------------------------------------------- reports


def _csv_sibling(path: Path) -> Path:
    return path.with_suffix(".csv") if path.suffix == ".json" else Path(str(path) + ".csv")


def write_report(report: EvalReport, path) -> None:
    """Write a report as sorted-key JSON plus a per-task accuracy CSV.

    Everything except the "created_at" field is a pure function of the run
    inputs, so two identical runs differ only in that one field.
    """
    path = Path(path)
    doc = {
        "method": report.method,
        "config": report.config,
        "task_count": report.task_count,
        "mean": report.mean,
        "se": report.se,
        "per_task_accuracies": list(report.per_task_accuracies),
        "created_at": datetime.now(timezone.utc).isoformat(),
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    lines = ["task_index,accuracy"]
    lines += [f"{i},{acc!r}" for i, acc in enumerate(report.per_task_accuracies)]
    _csv_sibling(path).write_text("\n".join(lines) + "\n")


def load_report(path) -> EvalReport:
    with open(path) as fh:
        doc = json.load(fh)
    return EvalReport(
        method=doc["method"],
        per_task_accuracies=tuple(doc["per_task_accuracies"]),
        mean=doc["mean"],
        se=doc["se"],
        task_count=doc["task_count"],
        config=doc["config"],
    )
