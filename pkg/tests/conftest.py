import os
import sys

import numpy as np
import pytest
import scipy.sparse as sp

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from Core.graph import normalized_laplacian  # noqa: E402
from Core.video import DataMatrix, VideoFrames, to_matrix  # noqa: E402

# 小规模合成视频描述，端到端测试使用
SMALL_SPEC = """\
height = 16
width = 20
frames = 8
background = linear-gradient
object = square
object_size = 4
start_row = 8
start_col = 4
step_row = 0
step_col = 1.5
"""


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def small_spec_file(tmp_path):
    path = tmp_path / "small.spec"
    path.write_text(SMALL_SPEC, encoding="utf-8")
    return str(path)


def path_laplacian(size: int, weights=None):
    """带权路径图的归一化拉普拉斯。"""
    weights = np.ones(size - 1) if weights is None else np.asarray(weights, dtype=np.float64)
    index = np.arange(size - 1)
    adjacency = sp.csr_matrix((weights, (index, index + 1)), shape=(size, size))
    return normalized_laplacian(adjacency + adjacency.T)


def random_matrix(rng, height: int, width: int, frames: int) -> DataMatrix:
    return to_matrix(VideoFrames(rng.uniform(0.0, 1.0, size=(frames, height, width))))
