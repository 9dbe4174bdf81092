import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from util import write_fixture_posts  # noqa: E402


@pytest.fixture
def fixture_posts(tmp_path) -> Path:
    path = tmp_path / "posts.jsonl"
    write_fixture_posts(path)
    return path


@pytest.fixture
def fixture_config(tmp_path, fixture_posts) -> Path:
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# end-to-end fixture run\n"
        f"input = {fixture_posts}\n"
        "min_cluster_size = 3\n"
        "seed = 7\n"
        "lda_iters = 60\n"
        "lda_min_count = 1\n",
        encoding="utf-8",
    )
    return cfg
