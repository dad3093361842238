__all__ = ['road_walk', 'generate_trajectory']

import logging
import math
from typing import List, Tuple

import numpy as np

import placerank
from placerank import resources
from placerank.generators import world as world_module
from placerank.generators.database import DescriptorModel


logger = logging.getLogger(__name__)

# East, north, west, south
DIRECTIONS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def road_walk(grid: 'world_module.SemanticGrid', rng: np.random.Generator, segments: int) -> List[Tuple[int, int]]:
    """
    Random walk over the intersections of the road grid.

    The walk never turns back on itself unless it reaches a dead end.

    :arg grid: SemanticGrid instance.
    :arg rng: Random generator.
    :arg segments: Number of road segments to travel.
    :return: Intersection (column, row) indices, segments + 1 of them.
    """
    nx, ny = len(grid.road_lines_x), len(grid.road_lines_y)
    node = (int(rng.integers(nx)), int(rng.integers(ny)))
    path = [node]
    previous = None

    for _ in range(segments):
        options = [
            (node[0] + dx, node[1] + dy) for dx, dy in DIRECTIONS
            if 0 <= node[0] + dx < nx and 0 <= node[1] + dy < ny
        ]
        forward = [option for option in options if option != previous] or options

        previous, node = node, forward[int(rng.integers(len(forward)))]
        path.append(node)

    return path


def _poses_along(grid: 'world_module.SemanticGrid', path: List[Tuple[int, int]], spacing: float, count: int):
    """True poses sampled every `spacing` meters along the walk."""
    pitch = float(grid.road_lines_x[1] - grid.road_lines_x[0])
    poses = []

    for k in range(count):
        s = k * spacing
        segment = min(int(s // pitch), len(path) - 2)
        (c0, r0), (c1, r1) = path[segment], path[segment + 1]

        start = np.array([grid.road_lines_x[c0], grid.road_lines_y[r0]])
        direction = np.array([c1 - c0, r1 - r0], dtype=np.float64)
        x, y = start + direction * (s - segment * pitch)

        poses.append(resources.Pose2(float(x), float(y), math.atan2(direction[1], direction[0])))

    return poses


def generate_trajectory(
        grid: 'world_module.SemanticGrid',
        spec: 'world_module.WorldSpec',
        length_m: float | None = None,
        model: DescriptorModel | None = None,
) -> List['resources.QueryFrame']:
    """
    Generates a road-following query trajectory with one frame per query spacing.

    Each frame carries the descriptor of the window centered at its true
    pose (independent noise draw), the true relative motion from the
    previous frame, a magnetometer sample within the configured bound of
    the true heading and the ground-truth position.

    :arg grid: SemanticGrid instance.
    :arg spec: WorldSpec instance.
    :param length_m: Trajectory length (defaults to WorldSpec.trajectory_length_m).
    :param model: Descriptor model to reuse.
    :return: Query frames.
    """
    length_m = spec.trajectory_length_m if length_m is None else length_m
    count = int(round(length_m / spec.query_spacing_m))

    if count < 1:
        raise placerank.PlacerankError(code='EmptyTrajectory', message=f'Length {length_m} m yields no frames.')

    if grid.road_components() != 1:
        raise placerank.PlacerankError(
            code='DisconnectedRoads',
            message=f'Road network has {grid.road_components()} components; trajectories need exactly one.'
        )

    pitch = float(grid.road_lines_x[1] - grid.road_lines_x[0])
    segments = int(math.ceil(count * spec.query_spacing_m / pitch)) + 1

    path = road_walk(grid, world_module.seed_stream(spec.seed, world_module.WALK_STREAM), segments)
    poses = _poses_along(grid, path, spec.query_spacing_m, count)

    model = model if model is not None else DescriptorModel(grid, spec)
    descriptors = model.describe(
        np.array([[p.x, p.y] for p in poses]),
        world_module.seed_stream(spec.seed, world_module.QUERY_NOISE_STREAM),
    )

    bound = math.radians(spec.magnetometer_noise_deg)
    heading_noise = world_module.seed_stream(spec.seed, world_module.MAGNETOMETER_STREAM).uniform(-bound, bound, count)

    frames = []
    for k, pose in enumerate(poses):
        frames.append(resources.QueryFrame(
            index=k,
            descriptor=descriptors[k],
            rel=resources.between(poses[k - 1], pose) if k else resources.IDENTITY,
            heading=resources.HeadingSample(pose.theta + float(heading_noise[k]), valid=True),
            gt=(pose.x, pose.y),
        ))

    logger.info('Generated %d query frames over %g m (%d segments)', len(frames), length_m, segments)
    return frames
