import math

import numpy as np
import pytest

import placerank
from placerank import resources


def _matrix(x: float, y: float, theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s, x], [s, c, y], [0.0, 0.0, 1.0]])


def _random_motions(rng: np.random.Generator, n: int):
    return [
        resources.RelativeMotion(float(dx), float(dy), float(dt))
        for dx, dy, dt in zip(rng.uniform(-5, 5, n), rng.uniform(-5, 5, n), rng.uniform(-math.pi, math.pi, n))
    ]


def test_compose_quarter_turn():
    pose = resources.compose(resources.Pose2(0.0, 0.0, math.pi / 2), resources.RelativeMotion(1.0, 0.0, 0.0))
    assert pose.x == pytest.approx(0.0, abs=1e-12)
    assert pose.y == pytest.approx(1.0)
    assert pose.theta == pytest.approx(math.pi / 2)


def test_compose_identity():
    pose = resources.Pose2(3.0, -2.0, 1.0)
    assert resources.compose(pose, resources.IDENTITY) == pose


def test_wrap_angle_range():
    assert resources.wrap_angle(-math.pi) == math.pi
    assert resources.wrap_angle(3 * math.pi) == pytest.approx(math.pi)
    for theta in np.linspace(-20, 20, 101):
        wrapped = resources.wrap_angle(float(theta))
        assert -math.pi < wrapped <= math.pi
        assert math.cos(wrapped) == pytest.approx(math.cos(theta), abs=1e-9)


def test_chain_matches_matrix_fold():
    rng = np.random.default_rng(0)
    motions = _random_motions(rng, 100)

    pose = resources.Pose2(0.0, 0.0, 0.0)
    expected = np.eye(3)
    for m in motions:
        pose = resources.compose(pose, m)
        expected = expected @ _matrix(m.dx, m.dy, m.dtheta)

    assert pose.x == pytest.approx(expected[0, 2], abs=1e-9)
    assert pose.y == pytest.approx(expected[1, 2], abs=1e-9)
    assert math.cos(pose.theta) == pytest.approx(expected[0, 0], abs=1e-9)
    assert math.sin(pose.theta) == pytest.approx(expected[1, 0], abs=1e-9)


def test_concat_is_associative():
    rng = np.random.default_rng(1)

    for _ in range(50):
        a, b = _random_motions(rng, 2)
        p = resources.Pose2(*rng.uniform(-10, 10, 3))

        stepwise = resources.compose(resources.compose(p, a), b)
        collapsed = resources.compose(p, resources.concat([a, b]))

        assert collapsed.x == pytest.approx(stepwise.x, abs=1e-9)
        assert collapsed.y == pytest.approx(stepwise.y, abs=1e-9)
        assert resources.wrap_angle(collapsed.theta - stepwise.theta) == pytest.approx(0.0, abs=1e-9)


def test_between_inverts_compose():
    rng = np.random.default_rng(2)

    for _ in range(50):
        a = resources.Pose2(*rng.uniform(-10, 10, 3))
        b = resources.Pose2(*rng.uniform(-10, 10, 3))
        restored = resources.compose(a, resources.between(a, b))
        assert restored.x == pytest.approx(b.x, abs=1e-9)
        assert restored.y == pytest.approx(b.y, abs=1e-9)
        assert resources.wrap_angle(restored.theta - b.theta) == pytest.approx(0.0, abs=1e-9)


def test_heading_correction_with_perfect_samples(straight_poses):
    truth = [resources.Pose2(p.x, p.y, 0.3 * math.sin(k / 5)) for k, p in enumerate(straight_poses(40))]
    samples = [resources.HeadingSample(p.theta) for p in truth]

    corrected = resources.apply_heading_correction(truth, samples)

    for got, want in zip(corrected, truth):
        assert got.x == pytest.approx(want.x, abs=1e-9)
        assert got.y == pytest.approx(want.y, abs=1e-9)


def test_heading_correction_without_valid_samples_is_dead_reckoning():
    rng = np.random.default_rng(3)
    trajectory = [resources.Pose2(0.0, 0.0, 0.0)]
    for m in _random_motions(rng, 30):
        trajectory.append(resources.compose(trajectory[-1], m))
    samples = [resources.HeadingSample(0.0, valid=False)] * len(trajectory)

    corrected = resources.apply_heading_correction(trajectory, samples)

    for got, want in zip(corrected, trajectory):
        assert got.x == pytest.approx(want.x, abs=1e-9)
        assert got.y == pytest.approx(want.y, abs=1e-9)


def test_heading_correction_reduces_yaw_bias_drift():
    bias = math.radians(5.0)
    biased = [resources.Pose2(0.0, 0.0, 0.0)]
    for _ in range(40):
        biased.append(resources.compose(biased[-1], resources.RelativeMotion(5.0, 0.0, bias)))
    # Vehicle actually drove due east
    samples = [resources.HeadingSample(0.0)] * len(biased)

    corrected = resources.apply_heading_correction(biased, samples)

    assert abs(corrected[-1].y) < abs(biased[-1].y)


def test_heading_correction_errors():
    with pytest.raises(placerank.PlacerankError) as exc:
        resources.apply_heading_correction([], [])
    assert exc.value.code == 'EmptyTrajectory'

    with pytest.raises(placerank.PlacerankError) as exc:
        resources.apply_heading_correction([resources.Pose2(0, 0, 0)], [])
    assert exc.value.code == 'LengthMismatch'


def test_dead_reckoner_corrects_after_crossing_step():
    reckoner = resources.DeadReckoner(interval_m=20.0)
    sample = resources.HeadingSample(0.5)
    step = resources.RelativeMotion(5.0, 0.0, 0.1)

    thetas = [reckoner.advance(resources.IDENTITY, sample).theta]
    for _ in range(4):
        thetas.append(reckoner.advance(step, sample).theta)

    assert thetas == pytest.approx([0.5, 0.6, 0.7, 0.8, 0.5])
    assert reckoner.corrections == 1

    with pytest.raises(placerank.PlacerankError) as exc:
        resources.DeadReckoner(interval_m=0.0)
    assert exc.value.code == 'InvalidArgument'


def test_inject_noise_zero_is_identity():
    rng = np.random.default_rng(4)
    motions = _random_motions(rng, 20)
    assert resources.inject_noise(motions, resources.NoiseSpec()) == motions


def test_inject_noise_bounds_and_seed():
    motions = [resources.RelativeMotion(5.0, 0.0, 0.0)] * 10_000
    spec = resources.NoiseSpec.from_config({'eps_xy': 4.0, 'eps_yaw_deg': 2.0, 'seed': 9})

    assert spec.eps_axis == pytest.approx(4.0 / math.sqrt(2.0))
    assert spec.eps_yaw == pytest.approx(math.radians(2.0))

    noisy = resources.inject_noise(motions, spec)
    dx = np.array([m.dx - 5.0 for m in noisy])
    dy = np.array([m.dy for m in noisy])
    dt = np.array([m.dtheta for m in noisy])

    assert np.all(np.abs(dx) <= spec.eps_axis)
    assert np.all(np.abs(dy) <= spec.eps_axis)
    assert np.all(np.abs(dt) <= spec.eps_yaw)
    assert np.max(np.abs(dx)) > 0.95 * spec.eps_axis

    assert resources.inject_noise(motions[:50], spec) == noisy[:50]
    other = resources.NoiseSpec.from_config({'eps_xy': 4.0, 'eps_yaw_deg': 2.0, 'seed': 10})
    assert resources.inject_noise(motions[:50], other) != noisy[:50]


def test_world_displacement_of_frame_to_itself(frames_from_poses, straight_poses):
    frames = frames_from_poses(straight_poses(5))
    assert resources.world_displacement(frames, 3, 3) == (0.0, 0.0)


def test_world_displacement_single_step(frames_from_poses, straight_poses):
    frames = frames_from_poses(straight_poses(2))
    assert resources.world_displacement(frames, 0, 1) == pytest.approx((5.0, 0.0))


def test_world_displacement_matches_ground_truth(frames_from_poses):
    poses = [resources.Pose2(0.0, 0.0, 0.0)]
    for k in range(9):
        turn = math.pi / 2 if k == 4 else 0.0
        heading = poses[-1].theta + turn
        poses.append(resources.Pose2(
            poses[-1].x + 5.0 * math.cos(heading), poses[-1].y + 5.0 * math.sin(heading), heading
        ))
    frames = frames_from_poses(poses)

    for j in range(10):
        for t in range(j, 10):
            dx, dy = resources.world_displacement(frames, j, t)
            assert dx == pytest.approx(poses[t].x - poses[j].x, abs=1e-9)
            assert dy == pytest.approx(poses[t].y - poses[j].y, abs=1e-9)


def test_world_displacement_is_additive(frames_from_poses):
    rng = np.random.default_rng(6)
    poses = [resources.Pose2(0.0, 0.0, 0.0)]
    for m in _random_motions(rng, 15):
        poses.append(resources.compose(poses[-1], m))
    frames = frames_from_poses(poses)

    a = resources.world_displacement(frames, 2, 7)
    b = resources.world_displacement(frames, 7, 12)
    c = resources.world_displacement(frames, 2, 12)
    assert a[0] + b[0] == pytest.approx(c[0], abs=1e-9)
    assert a[1] + b[1] == pytest.approx(c[1], abs=1e-9)


def test_world_displacement_range(frames_from_poses, straight_poses):
    frames = frames_from_poses(straight_poses(3))
    for j, t in ((2, 1), (-1, 1), (0, 3)):
        with pytest.raises(placerank.PlacerankError) as exc:
            resources.world_displacement(frames, j, t)
        assert exc.value.code == 'IndexOutOfRange'


def test_inject_noise_prefix_is_stable():
    motions = _random_motions(np.random.default_rng(6), 200)
    spec = resources.NoiseSpec.from_config({'eps_xy': 9.0, 'eps_yaw_deg': 15.0, 'seed': 3})

    full = resources.inject_noise(motions, spec)
    for length in (1, 50, 199):
        assert resources.inject_noise(motions[:length], spec) == full[:length]


def test_heading_interval_default_is_public():
    assert resources.DEFAULT_HEADING_INTERVAL_M == 20.0
    assert resources.DeadReckoner().interval_m == resources.DEFAULT_HEADING_INTERVAL_M
