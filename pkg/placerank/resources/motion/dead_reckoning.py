__all__ = ['DEFAULT_HEADING_INTERVAL_M', 'DeadReckoner', 'apply_heading_correction', 'integrate_frames', 'world_displacement']

import logging
from typing import List, Tuple

import placerank
from placerank import resources


logger = logging.getLogger(__name__)

DEFAULT_HEADING_INTERVAL_M = 20.0


class DeadReckoner:
    def __init__(
            self,
            interval_m: float = DEFAULT_HEADING_INTERVAL_M,
            correct: bool = True,
            origin: 'resources.Pose2 | None' = None,
    ) -> None:
        """
        Incremental dead reckoning with periodic absolute heading correction.

        The first pose is the origin (heading taken from the first valid
        sample when correction is enabled). Each later step composes the
        relative motion and, once the path travelled since the last
        correction reaches `interval_m`, replaces the heading with a valid
        magnetometer sample.

        :param interval_m: Path length between corrections.
        :param correct: Disable to integrate relative motions only.
        :param origin: Starting pose (defaults to the world origin).
        """
        if not interval_m > 0:
            raise placerank.PlacerankError(code='InvalidArgument', message='interval_m must be greater than 0.')

        self.interval_m = interval_m
        self.correct = correct
        self.origin = origin if origin is not None else resources.Pose2(0.0, 0.0, 0.0)
        self.pose: 'resources.Pose2 | None' = None
        self.since_correction = 0.0
        self.corrections = 0

    def advance(self, rel: 'resources.RelativeMotion', heading: 'resources.HeadingSample') -> 'resources.Pose2':
        """
        Integrates one step.

        :arg rel: Body-frame motion from the previous step (ignored on the first step).
        :arg heading: Magnetometer sample at this step.
        :return: Estimated pose at this step.
        """
        if self.pose is None:
            pose = self.origin
            if self.correct and heading.valid:
                pose = resources.Pose2(pose.x, pose.y, heading.heading)
            self.pose = pose
            return pose

        pose = resources.compose(self.pose, rel)
        self.since_correction += rel.distance

        if self.correct and heading.valid and self.since_correction >= self.interval_m:
            pose = resources.Pose2(pose.x, pose.y, heading.heading)
            self.since_correction = 0.0
            self.corrections += 1

        self.pose = pose
        return pose


def apply_heading_correction(
        trajectory: List['resources.Pose2'],
        samples: List['resources.HeadingSample'],
        interval_m: float = DEFAULT_HEADING_INTERVAL_M,
) -> List['resources.Pose2']:
    """
    Re-integrates a dead-reckoned trajectory with periodic magnetometer heading corrections.

    :arg trajectory: Dead-reckoned poses.
    :arg samples: Heading samples aligned with the trajectory.
    :param interval_m: Path length between corrections.
    :return: Corrected poses.
    """
    if not trajectory:
        raise placerank.PlacerankError(code='EmptyTrajectory', message='Trajectory must not be empty.')

    if len(samples) != len(trajectory):
        raise placerank.PlacerankError(
            code='LengthMismatch',
            message=f'{len(samples)} heading samples for {len(trajectory)} poses.'
        )

    reckoner = DeadReckoner(interval_m=interval_m, origin=trajectory[0])
    output = [reckoner.advance(resources.IDENTITY, samples[0])]

    for previous, current, sample in zip(trajectory, trajectory[1:], samples[1:]):
        output.append(reckoner.advance(resources.between(previous, current), sample))

    logger.debug('Applied %d heading corrections over %d poses', reckoner.corrections, len(trajectory))
    return output


def integrate_frames(
        frames: List['resources.QueryFrame'],
        interval_m: float = DEFAULT_HEADING_INTERVAL_M,
        correct: bool = True,
) -> List['resources.Pose2']:
    """
    Estimated world poses of a query sequence, with frame 0 at the origin.

    :arg frames: Query frames in order.
    :param interval_m: Path length between heading corrections.
    :param correct: Apply heading corrections.
    :return: One pose per frame.
    """
    reckoner = DeadReckoner(interval_m=interval_m, correct=correct)
    return [reckoner.advance(frame.rel, frame.heading) for frame in frames]


def world_displacement(
        frames: List['resources.QueryFrame'],
        j: int,
        t: int,
        interval_m: float = DEFAULT_HEADING_INTERVAL_M,
        correct: bool = True,
) -> Tuple[float, float]:
    """
    World-frame displacement from frame j's position to frame t's position.

    :arg frames: Query frames in order.
    :arg j: Earlier frame (list position).
    :arg t: Later frame (list position).
    :param interval_m: Path length between heading corrections.
    :param correct: Apply heading corrections.
    :return: (dx, dy) in meters.
    """
    if not (0 <= j <= t < len(frames)):
        raise placerank.PlacerankError(
            code='IndexOutOfRange',
            message=f'Frame positions must satisfy 0 <= j <= t < {len(frames)}, got j={j}, t={t}.'
        )

    poses = integrate_frames(frames[:t + 1], interval_m=interval_m, correct=correct)
    return poses[t].x - poses[j].x, poses[t].y - poses[j].y
