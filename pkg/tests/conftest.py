"""Shared fixtures: parsed example knowledge bases and expensive saturations."""

import os

import pytest

from spel.parser import parse_kb
from spel.preprocess import prep
from spel.saturation import saturate

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture_text(name):
    with open(os.path.join(FIXTURES, name)) as fh:
        return fh.read()


def fixture_kb(name):
    kb = parse_kb(fixture_text(name))
    assert not isinstance(kb, list), f"fixture {name} failed to parse: {kb}"
    return kb


@pytest.fixture(scope="session")
def example1_kb():
    return fixture_kb("example1.spel")


@pytest.fixture(scope="session")
def merged_kb():
    return fixture_kb("example1_merged.spel")


@pytest.fixture(scope="session")
def queries_kb():
    return fixture_kb("example2_queries.spel")


@pytest.fixture(scope="session")
def example1_store(example1_kb):
    """Fully saturated fact store for the main example (no early exit)."""
    return saturate(prep(example1_kb), early_exit_on_refutation=False)
