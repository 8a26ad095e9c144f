"""Shared fixtures: systems and trace tables are cached per session since
table construction is pure and deterministic."""

from functools import lru_cache

import pytest

from juliazeta import approximant, build_trace_table, make_system


@lru_cache(maxsize=None)
def cached_system(c: float):
    return make_system(c)


@lru_cache(maxsize=None)
def cached_table(c: float, N: int):
    return build_trace_table(N, cached_system(c))


@lru_cache(maxsize=None)
def cached_approximant(c: float, N: int):
    return approximant(cached_table(c, N))


@pytest.fixture(scope="session")
def system_m4():
    return cached_system(-4.0)


@pytest.fixture(scope="session")
def table_factory():
    return cached_table


@pytest.fixture(scope="session")
def approximant_factory():
    return cached_approximant
