"""Write a dataset to disk, evaluate it through the CLI, read the report.

The on-disk interchange is deliberately plain: NPY 1.0 arrays, a JSON
manifest naming them, JSON + CSV reports. Anything that writes these files
can feed the evaluator; this script plays that producer role by hand.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from kprop.cli import main
from kprop.featio import load_report, write_dataset

rng = np.random.default_rng(3)

# ten well-separated blobs stand in for an external feature dump
centers = rng.normal(size=(10, 16)) * 6.0
feats = np.vstack([c + 0.3 * rng.normal(size=(40, 16)) for c in centers])
labels = np.repeat(np.arange(10), 40)

with tempfile.TemporaryDirectory() as tmp:
    data = Path(tmp) / "data"
    manifest = write_dataset(data, feats, labels)
    print("manifest:", json.loads(manifest.read_text()))
    print()

    out = Path(tmp) / "run"
    code = main([
        "eval",
        "--manifest", str(manifest),
        "--out", str(out),
        "--tasks", "50",
        "--seed", "1",
        "--methods", "prototype,kprop",
    ])
    assert code == 0

    print()
    for name in ("prototype", "kprop"):
        report = load_report(out / f"eval_{name}.json")
        print(f"{name}: mean {report.mean:.4f}, se {report.se:.4f}, "
              f"q={report.config['q']}, M={report.config['extra_per_class']}")
