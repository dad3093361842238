import math
from typing import Callable, List, Sequence, Tuple

import numpy as np
import pytest

from placerank import resources, generators


def unit(vector: Sequence[float]) -> np.ndarray:
    vector = np.asarray(vector, dtype=np.float64)
    return vector / np.linalg.norm(vector)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def make_records() -> Callable[..., List['resources.SubmapRecord']]:
    """Submap records from centers and descriptors (random descriptors when omitted)."""
    def _make(centers: Sequence[Tuple[float, float]], descriptors: np.ndarray | None = None, dim: int = 16, seed: int = 0):
        if descriptors is None:
            descriptors = np.random.default_rng(seed).standard_normal((len(centers), dim))
        return [
            resources.SubmapRecord(id=i, center_u=float(u), center_v=float(v), descriptor=np.asarray(d, dtype=np.float32))
            for i, ((u, v), d) in enumerate(zip(centers, descriptors))
        ]
    return _make


@pytest.fixture
def make_hits() -> Callable[..., List['resources.RetrievalHit']]:
    """Retrieval hits at the given positions with decreasing similarity."""
    def _make(positions: Sequence[Tuple[float, float]], ids: Sequence[int] | None = None):
        ids = list(range(len(positions))) if ids is None else list(ids)
        return [
            resources.RetrievalHit(submap_id=i, similarity=1.0 - 0.001 * rank, position=(float(x), float(y)))
            for rank, (i, (x, y)) in enumerate(zip(ids, positions))
        ]
    return _make


@pytest.fixture
def frames_from_poses() -> Callable[..., List['resources.QueryFrame']]:
    """Noiseless query frames along a sequence of true poses."""
    def _make(poses: Sequence['resources.Pose2'], dim: int = 16, descriptors: np.ndarray | None = None):
        if descriptors is None:
            descriptors = np.ones((len(poses), dim), dtype=np.float32)
        return [
            resources.QueryFrame(
                index=k,
                descriptor=np.asarray(descriptors[k], dtype=np.float32),
                rel=resources.between(poses[k - 1], pose) if k else resources.IDENTITY,
                heading=resources.HeadingSample(pose.theta, valid=True),
                gt=(pose.x, pose.y),
            )
            for k, pose in enumerate(poses)
        ]
    return _make


@pytest.fixture
def straight_poses() -> Callable[..., List['resources.Pose2']]:
    def _make(count: int, spacing: float = 5.0, heading: float = 0.0):
        return [
            resources.Pose2(k * spacing * math.cos(heading), k * spacing * math.sin(heading), heading)
            for k in range(count)
        ]
    return _make


@pytest.fixture(scope='session')
def small_world_spec() -> 'generators.WorldSpec':
    return generators.WorldSpec(extent_m=(500.0, 500.0), descriptor_dim=64, seed=7)


@pytest.fixture(scope='session')
def small_scenario(small_world_spec) -> 'generators.GeneratedScenario':
    return generators.generate_scenario(small_world_spec)
