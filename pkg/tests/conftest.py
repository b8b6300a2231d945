"""Shared fixtures: bundled table key sets and a tiny worked example."""

import pytest

from qhashlab import KeySet, load_keyset, load_table_fixtures


@pytest.fixture(scope="session")
def table_rows():
    """All bundled table fixtures as (path, KeySetFile), sorted by (N, d)."""
    return load_table_fixtures()


@pytest.fixture(scope="session")
def n32_keyset(table_rows):
    """The N=32, d=15 table set; the workhorse for exhaustive checks."""
    for path, loaded in table_rows:
        if loaded.keyset.modulus == 32:
            return loaded.keyset
    raise RuntimeError("bundled N=32 table fixture missing")


@pytest.fixture(scope="session")
def n1024_keyset(table_rows):
    for path, loaded in table_rows:
        if loaded.keyset.modulus == 1024:
            return loaded.keyset
    raise RuntimeError("bundled N=1024 table fixture missing")


@pytest.fixture()
def tiny_keyset():
    """N=8, K={1,2}: small enough to check against hand-computed values."""
    return KeySet(modulus=8, keys=(1, 2))
