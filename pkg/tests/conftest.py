"""Shared fixtures for the witt-strata tests"""

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import settings

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

from fa_family import FaSpec, build_fa
from newton import ConvexProfile

# interval arithmetic makes single examples slow
settings.register_profile("witt", deadline=None)
settings.load_profile("witt")


@pytest.fixture
def three_node_polygon():
    """Nodes (0,3), (1,1), (3,0) with a constant tail"""
    return ConvexProfile(((0, 3), (1, 1), (3, 0)))


@pytest.fixture(scope="session")
def f2_report():
    return build_fa(FaSpec.with_default_precision(Fraction(2), 50))


@pytest.fixture(scope="session")
def f2_long_report():
    return build_fa(FaSpec(Fraction(2), 300, 512))
