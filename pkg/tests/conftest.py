import json
import os

import pytest

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(scope="session")
def frozen():
    """30-digit oracle values computed offline with mpmath."""
    with open(os.path.join(DATA_DIR, "frozen_values.json")) as fh:
        return json.load(fh)


def rel_err(got: float, want: float) -> float:
    if want == 0.0:
        return abs(got)
    return abs(got - want) / abs(want)


def nig_args(frozen, name):
    return eval(frozen[f"NIG_{name}_args"])


def nig_ref(frozen, name) -> float:
    return float(frozen[f"NIG_{name}"])
