import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from core import catalog  # noqa: E402
from core.abgroup import FgAbGroup  # noqa: E402


@pytest.fixture
def z2():
    return FgAbGroup.cyclic(2)


@pytest.fixture
def z4():
    return FgAbGroup.cyclic(4)


@pytest.fixture
def nonpolar():
    return catalog.nonpolar()


@pytest.fixture
def koszul():
    return catalog.koszul()


@pytest.fixture
def picard():
    return catalog.picard()


@pytest.fixture
def settings():
    return {"box": 3, "max_candidates": 1_000_000, "enumerate_max_candidates": 10_000_000,
            "parallel": 1, "log_level": "WARNING"}
