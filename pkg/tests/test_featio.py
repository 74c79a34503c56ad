"""Array files, dataset manifests, and report round-trips."""

import json
import struct

import numpy as np
import pytest

from kprop.episodes import EvalReport
from kprop.errors import (
    DataConsistencyError,
    FileFormatError,
    ShapeMismatchError,
    UnsupportedLayoutError,
)
from kprop.featio import (
    Dataset,
    load_array,
    load_dataset,
    load_report,
    save_array,
    write_dataset,
    write_report,
)


def npy_bytes(descr, shape, payload, fortran=False, version=(1, 0)):
    """Hand-rolled NPY container for byte-level fixtures."""
    header = "{'descr': %r, 'fortran_order': %s, 'shape': %r, }" % (
        descr,
        fortran,
        shape,
    )
    base = 8 + 2 + len(header) + 1
    header = header + " " * ((64 - base % 64) % 64) + "\n"
    return (
        b"\x93NUMPY"
        + bytes(version)
        + struct.pack("<H", len(header))
        + header.encode("latin1")
        + payload
    )


def test_float_round_trips(tmp_path):
    rng = np.random.default_rng(111)
    for dtype in (np.float32, np.float64):
        arr = rng.normal(size=(100, 8)).astype(dtype)
        path = tmp_path / f"feat_{arr.dtype.name}.npy"
        save_array(path, arr)
        back = load_array(path)
        assert back.dtype == arr.dtype
        assert np.array_equal(back, arr)


def test_label_round_trip(tmp_path):
    labels = np.array([0, 0, 1, 2, 2, 2], dtype=np.int64)
    path = tmp_path / "labels.npy"
    save_array(path, labels)
    back = load_array(path)
    assert back.dtype == np.int64
    assert np.array_equal(back, labels)


def test_save_then_save_is_byte_identical(tmp_path):
    rng = np.random.default_rng(112)
    arr = rng.normal(size=(20, 3)).astype(np.float32)
    a, b = tmp_path / "a.npy", tmp_path / "b.npy"
    save_array(a, arr)
    save_array(b, arr)
    assert a.read_bytes() == b.read_bytes()


def test_header_is_64_byte_aligned(tmp_path):
    path = tmp_path / "x.npy"
    save_array(path, np.ones((3, 2), dtype=np.float32))
    raw = path.read_bytes()
    hlen = struct.unpack("<H", raw[8:10])[0]
    assert (10 + hlen) % 64 == 0
    assert raw[:6] == b"\x93NUMPY" and raw[6:8] == bytes((1, 0))


def test_hand_built_float64_fixture(tmp_path):
    vals = np.array([[1.5, -2.0, 0.25], [8.0, 1e-3, 4.0]])
    blob = npy_bytes("<f8", (2, 3), vals.tobytes())
    path = tmp_path / "hand.npy"
    path.write_bytes(blob)
    assert np.array_equal(load_array(path), vals)


def test_rejects_foreign_files(tmp_path):
    path = tmp_path / "bad.npy"
    good_payload = np.zeros((2, 2)).tobytes()

    path.write_bytes(npy_bytes("<f8", (2, 2), good_payload, version=(2, 0)))
    with pytest.raises(FileFormatError):
        load_array(path)

    path.write_bytes(npy_bytes("<f8", (2, 2), good_payload, fortran=True))
    with pytest.raises(UnsupportedLayoutError):
        load_array(path)

    path.write_bytes(npy_bytes(">f8", (2, 2), good_payload))
    with pytest.raises(FileFormatError):
        load_array(path)

    path.write_bytes(b"\x93NOTNPY" + good_payload)
    with pytest.raises(FileFormatError):
        load_array(path)


def test_rejects_wrong_rank(tmp_path):
    path = tmp_path / "rank.npy"
    path.write_bytes(npy_bytes("<f8", (8,), np.zeros(8).tobytes()))
    with pytest.raises(ShapeMismatchError):
        load_array(path)  # floats must be 2-D
    path.write_bytes(npy_bytes("<i8", (2, 4), np.zeros(8, dtype=np.int64).tobytes()))
    with pytest.raises(ShapeMismatchError):
        load_array(path)  # labels must be 1-D


def test_rejects_truncated_payload(tmp_path):
    path = tmp_path / "short.npy"
    path.write_bytes(npy_bytes("<f8", (4, 4), np.zeros(7).tobytes()))
    with pytest.raises(FileFormatError):
        load_array(path)


def test_csv_parsing(tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("1.0,2.0\n3.0,4.0\n")
    assert np.array_equal(load_array(path), [[1.0, 2.0], [3.0, 4.0]])
    path.write_text("1.0,oops\n")
    with pytest.raises(FileFormatError):
        load_array(path)


def test_save_array_type_rules(tmp_path):
    with pytest.raises(FileFormatError):
        save_array(tmp_path / "x.npy", np.array(["a", "b"]))
    with pytest.raises(ShapeMismatchError):
        save_array(tmp_path / "x.npy", np.zeros((2, 2, 2)))
    with pytest.raises(ShapeMismatchError):
        save_array(tmp_path / "x.npy", np.zeros((4,)))  # 1-D floats not allowed


def test_dataset_validation():
    feats = np.zeros((4, 2))
    Dataset(features=feats, labels=np.array([0, 1, 0, 1]))
    with pytest.raises(DataConsistencyError):
        Dataset(features=feats, labels=np.array([0, 1]))
    with pytest.raises(DataConsistencyError):
        Dataset(features=feats, labels=np.array([0, -1, 0, 1]))
    with pytest.raises(DataConsistencyError):
        Dataset(features=feats, labels=np.array([0.0, 1.0, 0.0, 1.0]))


def test_write_then_load_dataset(tmp_path):
    rng = np.random.default_rng(113)
    feats = rng.normal(size=(30, 5)).astype(np.float32)
    labels = np.repeat(np.arange(3), 10).astype(np.int64)
    manifest = write_dataset(tmp_path, feats, labels, split="train")
    ds = load_dataset(manifest, split="train")
    assert np.array_equal(ds.features, feats)
    assert np.array_equal(ds.labels, labels)
    assert ds.split == "train" and ds.n_classes == 3


def test_manifest_split_selection(tmp_path):
    rng = np.random.default_rng(114)
    write_dataset(tmp_path / "tr", rng.normal(size=(4, 2)), np.array([0, 0, 1, 1]), "train")
    write_dataset(tmp_path / "te", rng.normal(size=(6, 2)), np.array([0, 1, 1, 1, 2, 2]), "test")
    # paths resolve relative to the manifest file, not the cwd
    merged = [
        {"features": "tr/features.npy", "labels": "tr/labels.npy", "split": "train"},
        {"features": "te/features.npy", "labels": "te/labels.npy", "split": "test"},
    ]
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps(merged))
    ds = load_dataset(path, split="test")
    assert ds.split == "test" and ds.features.shape == (6, 2)
    assert load_dataset(path, split="train").features.shape == (4, 2)
    with pytest.raises(FileFormatError):
        load_dataset(path, split="val")


def test_manifest_single_object_form(tmp_path):
    rng = np.random.default_rng(116)
    save_array(tmp_path / "f.npy", rng.normal(size=(4, 3)))
    save_array(tmp_path / "l.npy", np.array([0, 1, 0, 1], dtype=np.int64))
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"features": "f.npy", "labels": "l.npy"}))
    ds = load_dataset(path)  # split defaults to train on both sides
    assert ds.split == "train" and ds.features.shape == (4, 3)
    path.write_text(json.dumps({"features": "f.npy"}))
    with pytest.raises(FileFormatError):
        load_dataset(path)


def test_manifest_mismatched_counts(tmp_path):
    rng = np.random.default_rng(115)
    save_array(tmp_path / "f.npy", rng.normal(size=(5, 2)))
    save_array(tmp_path / "l.npy", np.zeros(4, dtype=np.int64))
    path = tmp_path / "manifest.json"
    path.write_text(json.dumps({"features": "f.npy", "labels": "l.npy"}))
    with pytest.raises(DataConsistencyError):
        load_dataset(path)


def test_report_round_trip(tmp_path):
    report = EvalReport(
        method="kprop",
        per_task_accuracies=(0.5, 1.0, 0.75),
        mean=0.75,
        se=0.1,
        task_count=3,
        config={"sigma": 16.0, "q": 1, "seed": 4},
    )
    path = tmp_path / "report.json"
    write_report(report, path)
    back = load_report(path)
    assert back.mean == report.mean and back.se == report.se
    assert back.per_task_accuracies == report.per_task_accuracies
    assert back.config["sigma"] == 16.0
    csv = (tmp_path / "report.csv").read_text().splitlines()
    assert csv[0] == "task_index,accuracy"
    assert len(csv) == 4


def test_report_deterministic_sections_are_byte_stable(tmp_path):
    report = EvalReport(
        method="linear",
        per_task_accuracies=(1.0, 0.0),
        mean=0.5,
        se=0.35,
        task_count=2,
        config={"seed": 0},
    )
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_report(report, a)
    write_report(report, b)
    da = json.loads(a.read_text())
    db = json.loads(b.read_text())
    da.pop("created_at")
    db.pop("created_at")
    assert json.dumps(da, sort_keys=True) == json.dumps(db, sort_keys=True)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
