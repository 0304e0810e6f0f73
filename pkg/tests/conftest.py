import os
import pathlib

import pytest

from rigicount.counting import CountCache

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent


@pytest.fixture()
def cache(tmp_path):
    return CountCache(tmp_path / "counts.jsonl")


@pytest.fixture(scope="session")
def shared_cache():
    """Session cache; points at a repo-local journal so re-runs are incremental."""
    path = os.environ.get("RIGICOUNT_CACHE")
    if path is None:
        cache_dir = REPO_ROOT / ".cache"
        cache_dir.mkdir(exist_ok=True)
        path = cache_dir / "counts.jsonl"
    return CountCache(path)


@pytest.fixture(scope="session")
def jobs():
    return min(2, os.cpu_count() or 1)
