import json
from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def regression():
    return json.loads((DATA / "regression.json").read_text())
