import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from support import BUDGET_A, BUDGET_B, CHANNEL_A, CHANNEL_B  # noqa: E402

from irwd import channel_spec_dict  # noqa: E402


@pytest.fixture
def spec_file(tmp_path):
    """Factory writing a channel spec JSON file and returning its path."""

    def write(gains, budget, name="chan.json", mutate=None):
        obj = channel_spec_dict(gains, budget)
        if mutate:
            mutate(obj)
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return write


@pytest.fixture
def spec_a(spec_file):
    return spec_file(CHANNEL_A, BUDGET_A, "a.json")


@pytest.fixture
def spec_b(spec_file):
    return spec_file(CHANNEL_B, BUDGET_B, "b.json")
