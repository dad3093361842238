__all__ = ['Pose2', 'RelativeMotion', 'HeadingSample', 'IDENTITY', 'wrap_angle', 'compose', 'between', 'concat']

import math
from dataclasses import dataclass
from typing import Iterable


def wrap_angle(theta: float) -> float:
    """
    Wraps an angle to (-pi, pi].

    :arg theta: Angle in radians.
    :return: Wrapped angle.
    """
    wrapped = math.remainder(theta, 2.0 * math.pi)
    return math.pi if wrapped <= -math.pi else wrapped


@dataclass(frozen=True)
class Pose2:
    x: float
    y: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, 'theta', wrap_angle(self.theta))


@dataclass(frozen=True)
class RelativeMotion:
    dx: float
    dy: float
    dtheta: float = 0.0

    @property
    def distance(self) -> float:
        return math.hypot(self.dx, self.dy)


@dataclass(frozen=True)
class HeadingSample:
    heading: float
    valid: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, 'heading', wrap_angle(self.heading))


IDENTITY = RelativeMotion(0.0, 0.0, 0.0)


def compose(p: Pose2, m: RelativeMotion) -> Pose2:
    """
    SE(2) composition: applies a body-frame motion to a pose.

    :arg p: Starting pose.
    :arg m: Relative motion expressed in the frame of `p`.
    :return: Resulting pose.
    """
    cos_t, sin_t = math.cos(p.theta), math.sin(p.theta)
    return Pose2(
        x=p.x + cos_t * m.dx - sin_t * m.dy,
        y=p.y + sin_t * m.dx + cos_t * m.dy,
        theta=p.theta + m.dtheta,
    )


def between(a: Pose2, b: Pose2) -> RelativeMotion:
    """
    Relative motion taking pose `a` to pose `b` (inverse of compose).

    :arg a: Starting pose.
    :arg b: Target pose.
    :return: Motion such that compose(a, motion) == b.
    """
    cos_t, sin_t = math.cos(a.theta), math.sin(a.theta)
    ex, ey = b.x - a.x, b.y - a.y
    return RelativeMotion(
        dx=cos_t * ex + sin_t * ey,
        dy=-sin_t * ex + cos_t * ey,
        dtheta=wrap_angle(b.theta - a.theta),
    )


def concat(motions: Iterable[RelativeMotion]) -> RelativeMotion:
    """
    Collapses a chain of motions into one by composing from the identity pose.

    :arg motions: Motions in order of application.
    :return: Equivalent single motion.
    """
    pose = Pose2(0.0, 0.0, 0.0)
    for m in motions:
        pose = compose(pose, m)
    return RelativeMotion(pose.x, pose.y, pose.theta)
