import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make `oracles` importable

from nbthermo import PhysicalSystem


@pytest.fixture
def default_sys() -> PhysicalSystem:
    """Dimensionless default: B0 = 2.5, alpha = 1, k_y = 0.1 (C0 = 0.5, C1 = -4.8)."""
    return PhysicalSystem.dimensionless()
