import sys
from pathlib import Path

import pytest

from probrange import parse_spec

sys.path.insert(0, str(Path(__file__).parent))

from helpers import CORPUS  # noqa: E402


@pytest.fixture(scope="session")
def spec4():
    return parse_spec((CORPUS / "uniform-1e4.spec").read_text())[0]


@pytest.fixture(scope="session")
def spec7():
    return parse_spec((CORPUS / "uniform-1e7.spec").read_text())[0]
