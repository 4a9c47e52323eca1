import os
from pathlib import Path

import numpy as np
import pytest

from phishguard.datasets import Dataset
from phishguard.features import CANONICAL_FEATURES

# The real UCI phishing CSV (11,055 rows, 30 features + Result) is not
# redistributable with this repo. Acceptance tests that need it look here.
UCI_ENV_VAR = "PHISHGUARD_UCI_CSV"
UCI_DEFAULT = Path(__file__).resolve().parent.parent / "data" / "uci_phishing.csv"


def uci_csv_path() -> Path | None:
    candidate = os.environ.get(UCI_ENV_VAR)
    if candidate and Path(candidate).exists():
        return Path(candidate)
    if UCI_DEFAULT.exists():
        return UCI_DEFAULT
    return None


def make_ternary_dataset(n=600, n_features=23, seed=0, informative=8,
                         flip=0.15, provenance=("Unknown",)):
    """Synthetic stand-in with UCI-like shape: ternary features, a binary
    label driven by a subset of features with label noise."""
    rng = np.random.default_rng(seed)
    X = rng.choice([-1, 0, 1], size=(n, n_features)).astype(float)
    weights = np.zeros(n_features)
    weights[:informative] = rng.uniform(0.8, 2.0, size=informative)
    logits = X @ weights
    y = (logits + rng.normal(0, 1, size=n) > 0).astype(int)
    flips = rng.random(n) < flip
    y[flips] = 1 - y[flips]
    prov = tuple(provenance[i % len(provenance)] for i in range(n))
    names = CANONICAL_FEATURES[:n_features] if n_features <= 23 else tuple(
        f"f{i}" for i in range(n_features)
    )
    return Dataset(X, y, tuple(names), prov)


@pytest.fixture
def toy_dataset():
    return make_ternary_dataset(n=400, seed=42)
