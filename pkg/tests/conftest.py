"""Shared fixtures: reference tables and small instance generators."""

from __future__ import annotations

import numpy as np
import pytest

from qsopt import SubsetBits, make_com, make_tabular
from qsopt.functions import _stream

# Two-element reference tables, index order: {}, {1}, {2}, {1,2}.
# QSB but not submodular; unique min {1}, unique max {2}.
PROP_TABLE = [1.0, 0.0, 1.5, 1.0]
# Submodular with two incomparable local maxima {1} and {2}.
TWIN_PEAKS_TABLE = [1.0, 1.5, 1.5, 1.0]


@pytest.fixture
def prop_oracle():
    return make_tabular(PROP_TABLE)


@pytest.fixture
def twin_peaks_oracle():
    return make_tabular(TWIN_PEAKS_TABLE)


def random_spaced_values(n: int, rng: np.random.Generator, gap: float = 1e-6) -> np.ndarray:
    """Arbitrary subset values with every pair at least ``gap`` apart."""
    size = 1 << n
    while True:
        values = rng.uniform(0.0, 100.0, size)
        ordered = np.sort(values)
        if np.min(np.diff(ordered)) >= gap:
            return values


def nonneg_submodular_oracle(n: int, seed: int):
    """Random nonnegative submodular instance: coverage or concave-over-modular."""
    if seed % 2:
        return make_com(n, seed)
    rng = _stream(seed, 0)
    m = 2 * n
    covers = rng.random((n, m)) < 0.35
    weights = rng.uniform(0.0, 1.0, m)
    table = np.empty(1 << n)
    for mask in range(1 << n):
        sel = SubsetBits(n, mask).to_bool_array()
        covered = covers[sel].any(axis=0) if sel.any() else np.zeros(m, dtype=bool)
        table[mask] = float(weights @ covered)
    return make_tabular(table)
