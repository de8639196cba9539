import json
import math
from pathlib import Path

import numpy as np
import pytest

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "golden"


def load_golden(file_id, function_id=None):
    path = GOLDEN_DIR / f"{file_id}.v1.jsonl"
    if not path.exists() and function_id is None:
        # some files hold several related function_ids
        for cand in GOLDEN_DIR.glob("*.v1.jsonl"):
            with open(cand) as fh:
                if any(json.loads(l)["function_id"] == file_id for l in fh):
                    return load_golden(cand.stem.replace(".v1", ""), file_id)
        raise FileNotFoundError(path)
    out = []
    with open(path) as fh:
        for line in fh:
            rec = json.loads(line)
            if function_id is not None and rec["function_id"] != function_id:
                continue
            rec["value"] = complex(float(rec["value_re"]), float(rec["value_im"]))
            out.append(rec)
    return out


def golden_map(file_id, function_id=None):
    """inputs-tuple -> complex value."""
    return {tuple(rec["inputs"]): rec["value"]
            for rec in load_golden(file_id, function_id)}


def rel_err(got, expected):
    got = complex(got)
    expected = complex(expected)
    return abs(got - expected) / max(abs(expected), 1e-300)


@pytest.fixture(scope="session")
def h_default():
    from symsq.testfn import GaussianPairTestFunction

    return GaussianPairTestFunction(10.0, 1.0, 4)


@pytest.fixture(scope="session")
def fixture_dataset():
    """Calibrated spectral dataset from the committed fixture."""
    from symsq.lmfdb import build_dataset, calibrate, load_fixture
    from symsq.testfn import GaussianPairTestFunction

    records, meta = load_fixture()
    h = GaussianPairTestFunction(10.0, 1.0, 4)
    ds0 = build_dataset(records, completeness_claim=meta.get("completeness_cutoff"))
    cal = calibrate(ds0, h, (1, 1), 1000, validation_pairs=((1, 2), (2, 2), (1, 4)))
    ds = build_dataset(records, calibration=cal,
                       completeness_claim=meta.get("completeness_cutoff"))
    return ds, cal, h
