import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spxtrack.ordering import eahsi_order  # noqa: E402


@pytest.fixture(scope="session")
def eahsi128():
    """EAHSI ordering of the full n=128 pattern set (scans 16384 patterns);
    computed once per session."""
    return eahsi_order(128)


@pytest.fixture(scope="session")
def data_dir():
    return Path(__file__).parent.parent / "data"


@pytest.fixture(scope="session")
def golden_dir():
    return Path(__file__).parent / "data"
