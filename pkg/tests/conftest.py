import os
import pathlib

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def dataset_dir() -> pathlib.Path:
    env = os.environ.get("BMCHANGE_DATA")
    if env:
        return pathlib.Path(env)
    return pathlib.Path(__file__).resolve().parent.parent / "data"


def dataset_path(name: str) -> pathlib.Path | None:
    base = dataset_dir()
    for candidate in (base / f"{name}.csv", base / f"{name}.txt"):
        if candidate.exists():
            return candidate
    return None
