import math

import numpy as np
import pytest
from scipy.integrate import simpson

import placerank
from placerank import resources


def _cluster_set(groups):
    payload = iter(range(10_000))
    return resources.ClusterSet(clusters=tuple(
        tuple(resources.Point2(float(x), float(y), next(payload)) for x, y in group) for group in groups
    ))


def _naive_fit(groups, floor):
    total = sum(len(g) for g in groups)
    output = []
    for group in groups:
        n = len(group)
        mx = sum(x for x, _ in group) / n
        my = sum(y for _, y in group) / n
        sx = math.sqrt(sum((x - mx) ** 2 for x, _ in group) / n)
        sy = math.sqrt(sum((y - my) ** 2 for _, y in group) / n)
        output.append((n / total, mx, my, max(sx, floor), max(sy, floor)))
    return output


def _naive_eval(components, x, y):
    return sum(
        a * math.exp(-0.5 * ((x - mx) / sx) ** 2 - 0.5 * ((y - my) / sy) ** 2)
        for a, mx, my, sx, sy in components
    )


def _random_mixture(rng, count, spread=100.0):
    return resources.MixtureDensity(
        rng.uniform(0.05, 1.0, count),
        rng.uniform(-spread, spread, count),
        rng.uniform(-spread, spread, count),
        rng.uniform(5.0, 25.0, count),
        rng.uniform(5.0, 25.0, count),
    )


def test_fit_worked_example():
    clusters = _cluster_set([[(0, 0), (2, 0), (4, 0)], [(1000, 1000)] * 7])
    density = resources.fit_components(clusters, sigma_floor_m=1.0)

    first = density.components[0]
    assert first.amplitude == pytest.approx(0.3)
    assert (first.mu_x, first.mu_y) == pytest.approx((2.0, 0.0))
    assert first.sigma_x == pytest.approx(math.sqrt(8.0 / 3.0))
    assert first.sigma_y == pytest.approx(1.0)
    assert density.components[1].amplitude == pytest.approx(0.7)

    floored = resources.fit_components(clusters, sigma_floor_m=5.0)
    assert floored.components[0].sigma_x == pytest.approx(5.0)


def test_fit_singleton():
    density = resources.fit_components(_cluster_set([[(12.0, -4.0)]]))
    component = density.components[0]
    assert component.amplitude == 1.0
    assert (component.mu_x, component.mu_y) == (12.0, -4.0)
    assert (component.sigma_x, component.sigma_y) == (5.0, 5.0)


def test_fit_matches_naive_oracle():
    rng = np.random.default_rng(0)

    for _ in range(500):
        groups = [
            [tuple(rng.uniform(-200, 200, 2)) for _ in range(int(rng.integers(1, 8)))]
            for _ in range(int(rng.integers(1, 6)))
        ]
        density = resources.fit_components(_cluster_set(groups), sigma_floor_m=5.0)
        expected = _naive_fit(groups, 5.0)

        for got, want in zip(density.components, expected):
            got = (got.amplitude, got.mu_x, got.mu_y, got.sigma_x, got.sigma_y)
            assert got == pytest.approx(want, abs=1e-12, rel=1e-12)
        assert density.total_amplitude == pytest.approx(1.0, abs=1e-12)


def test_fit_rejects_empty_clusters():
    with pytest.raises(placerank.PlacerankError) as exc:
        resources.fit_components(resources.ClusterSet(clusters=()))
    assert exc.value.code == 'EmptyClusterSet'


def test_eval_at_mean_and_one_sigma():
    density = resources.MixtureDensity.from_components([resources.GaussianComponent(1.0, 10.0, 20.0, 5.0, 8.0)])
    assert resources.eval_density(density, 10.0, 20.0) == 1.0
    assert resources.eval_density(density, 15.0, 20.0) == pytest.approx(math.exp(-0.5))
    assert resources.eval_density(density, 10.0, 28.0) == pytest.approx(math.exp(-0.5))


def test_eval_matches_naive_oracle():
    rng = np.random.default_rng(1)
    density = _random_mixture(rng, 5)
    components = [(c.amplitude, c.mu_x, c.mu_y, c.sigma_x, c.sigma_y) for c in density.components]

    xs, ys = rng.uniform(-150, 150, 200), rng.uniform(-150, 150, 200)
    values = resources.eval_density(density, xs, ys)
    for x, y, value in zip(xs, ys, values):
        assert value == pytest.approx(_naive_eval(components, x, y), abs=1e-12)


def test_translate():
    rng = np.random.default_rng(2)
    density = _random_mixture(rng, 4)

    same = resources.translate(density, (0.0, 0.0))
    for a, b in zip(same.columns, density.columns):
        assert np.array_equal(a, b)

    shifted = resources.translate(density, (12.5, -7.25))
    for x, y in rng.uniform(-100, 100, (50, 2)):
        assert resources.eval_density(shifted, x + 12.5, y - 7.25) == pytest.approx(
            resources.eval_density(density, x, y), abs=1e-12
        )

    twice = resources.translate(resources.translate(density, (3.0, 4.0)), (-1.0, 2.0))
    once = resources.translate(density, (2.0, 6.0))
    assert np.allclose(twice.mu_x, once.mu_x, atol=1e-12)
    assert np.allclose(twice.mu_y, once.mu_y, atol=1e-12)


def test_mix():
    rng = np.random.default_rng(3)
    density = _random_mixture(rng, 3)
    points = rng.uniform(-100, 100, (100, 2))

    single = resources.mix([density])
    assert np.array_equal(single.amplitude, density.amplitude)

    doubled = resources.mix([density, density])
    assert np.allclose(
        resources.eval_density(doubled, points[:, 0], points[:, 1]),
        resources.eval_density(density, points[:, 0], points[:, 1]),
        atol=1e-12,
    )

    densities = [_random_mixture(rng, int(rng.integers(1, 5))) for _ in range(5)]
    mixed = resources.mix(densities)
    expected = np.mean([resources.eval_density(d, points[:, 0], points[:, 1]) for d in densities], axis=0)
    assert np.allclose(resources.eval_density(mixed, points[:, 0], points[:, 1]), expected, atol=1e-12)

    with pytest.raises(placerank.PlacerankError) as exc:
        resources.mix([])
    assert exc.value.code == 'EmptyMixtureList'


def test_mixture_validation_and_dict_form():
    with pytest.raises(placerank.PlacerankError):
        resources.MixtureDensity([1.0], [0.0], [0.0], [0.0], [1.0])
    with pytest.raises(placerank.PlacerankError):
        resources.MixtureDensity([-1.0], [0.0], [0.0], [1.0], [1.0])

    density = _random_mixture(np.random.default_rng(4), 3)
    restored = resources.MixtureDensity.from_dict(density.to_dict())
    for a, b in zip(restored.columns, density.columns):
        assert np.array_equal(a, b)


def test_rect_probability_reference_value():
    density = resources.MixtureDensity.from_components([resources.GaussianComponent(1.0, 0.0, 0.0, 10.0, 10.0)])
    value = resources.rect_probability(density, 0.0, 0.0, 30.0)

    assert isinstance(value, float)
    assert value == pytest.approx(0.173592, abs=1e-6)
    assert value == pytest.approx(0.17360, abs=1e-5)


def test_rect_probability_far_tail():
    density = resources.MixtureDensity.from_components([resources.GaussianComponent(1.0, 0.0, 0.0, 5.0, 5.0)])
    value = resources.rect_probability(density, 1000.0, 0.0, 30.0)
    assert 0.0 <= value < 1e-20


def _adaptive_simpson(lo, hi, mu, sigma):
    """Composite Simpson of one Gaussian factor, doubling the grid until two estimates agree."""
    n, previous = 16, None
    while True:
        xs = np.linspace(lo, hi, n + 1)
        value = simpson(np.exp(-0.5 * ((xs - mu) / sigma) ** 2), x=xs)
        if previous is not None and abs(value - previous) <= 1e-12 * abs(value):
            return value
        if n >= 1 << 18:
            return value
        previous, n = value, 2 * n


def test_rect_probability_matches_simpson():
    rng = np.random.default_rng(5)
    floor = resources.DEFAULT_STPE_CONFIG['sigma_floor_m']

    for _ in range(1000):
        r = float(rng.uniform(5, 60))
        u, v = rng.uniform(-500, 500, 2)
        count = int(rng.integers(1, 9))
        sigma_x, sigma_y = rng.uniform(floor, 50, count), rng.uniform(floor, 50, count)
        mu_x = u + rng.uniform(-1, 1, count) * (r + 2 * sigma_x)
        mu_y = v + rng.uniform(-1, 1, count) * (r + 2 * sigma_y)
        amplitude = rng.uniform(0.05, 1.0, count)
        density = resources.MixtureDensity(amplitude, mu_x, mu_y, sigma_x, sigma_y)

        # The integrand is a product per component, so the square integral is a product of line integrals
        expected = sum(
            a * _adaptive_simpson(u - r, u + r, mx, sx) * _adaptive_simpson(v - r, v + r, my, sy)
            for a, mx, my, sx, sy in zip(amplitude, mu_x, mu_y, sigma_x, sigma_y)
        ) / (4 * r * r)

        assert resources.rect_probability(density, u, v, r) == pytest.approx(expected, rel=1e-6)


def test_rect_probability_matches_two_dimensional_simpson():
    rng = np.random.default_rng(15)

    for _ in range(20):
        r = float(rng.uniform(5, 60))
        count = int(rng.integers(1, 9))
        sigma_x, sigma_y = rng.uniform(5, 50, count), rng.uniform(5, 50, count)
        mu_x, mu_y = rng.uniform(-1, 1, count) * (r + sigma_x), rng.uniform(-1, 1, count) * (r + sigma_y)
        amplitude = rng.uniform(0.1, 1.0, count)
        density = resources.MixtureDensity(amplitude, mu_x, mu_y, sigma_x, sigma_y)

        n = 2 * int(math.ceil(r / (min(sigma_x.min(), sigma_y.min()) / 16)))
        xs = np.linspace(-r, r, n + 1)
        gx, gy = np.meshgrid(xs, xs)
        values = np.zeros_like(gx)
        for a, mx, my, sx, sy in zip(amplitude, mu_x, mu_y, sigma_x, sigma_y):
            values += a * np.exp(-0.5 * ((gx - mx) / sx) ** 2 - 0.5 * ((gy - my) / sy) ** 2)
        expected = simpson(simpson(values, x=xs, axis=1), x=xs) / (4 * r * r)

        assert resources.rect_probability(density, 0.0, 0.0, r) == pytest.approx(expected, rel=1e-6)


def test_rect_probability_pairs_matches_dense():
    rng = np.random.default_rng(8)
    density = _random_mixture(rng, 6)
    single = resources.MixtureDensity.from_components(density.components[:1])
    lattice = np.array([(x, y) for y in range(-200, 201, 20) for x in range(-200, 201, 20)], dtype=np.float64)
    scattered = rng.uniform(-200, 200, (300, 2))

    for centers in (lattice, scattered):
        u, v = centers[:, 0], centers[:, 1]
        rows = np.repeat(np.arange(centers.shape[0]), len(density))
        components = np.tile(np.arange(len(density)), centers.shape[0])
        values = resources.rect_probability_pairs(density, u, v, 30.0, rows, components)
        assert np.allclose(values, resources.rect_probability(density, u, v, 30.0), rtol=1e-12, atol=0.0)

        # Only the listed pairs count
        first = resources.rect_probability_pairs(
            density, u, v, 30.0, np.arange(centers.shape[0]), np.zeros(centers.shape[0], dtype=np.int64)
        )
        assert np.allclose(first, resources.rect_probability(single, u, v, 30.0), rtol=1e-12, atol=0.0)

    empty = resources.rect_probability_pairs(density, lattice[:, 0], lattice[:, 1], 30.0, [], [])
    assert np.array_equal(empty, np.zeros(lattice.shape[0]))

    with pytest.raises(placerank.PlacerankError):
        resources.rect_probability_pairs(density, lattice[:, 0], lattice[:, 1], 30.0, [0, 1], [0])


def test_merge_components_preserves_moments():
    density = resources.MixtureDensity(
        [0.2, 0.3, 0.1, 0.4], [10.0, 20.0, 14.0, 200.0], [5.0, 8.0, 20.0, 5.0], [5.0, 6.0, 7.0, 5.0], [5.0, 5.0, 9.0, 5.0]
    )
    merged = resources.merge_components(density, 30.0, 5.0)

    assert len(merged) == 2
    assert merged.total_amplitude == pytest.approx(density.total_amplitude)

    near = merged.components[0]
    weights = np.array([0.2, 0.3, 0.1])
    xs, sx = np.array([10.0, 20.0, 14.0]), np.array([5.0, 6.0, 7.0])
    mean = float(weights @ xs / weights.sum())
    assert near.amplitude == pytest.approx(0.6)
    assert near.mu_x == pytest.approx(mean)
    assert near.sigma_x ** 2 == pytest.approx(float(weights @ (sx ** 2 + xs ** 2) / weights.sum() - mean ** 2))
    far = merged.components[1]
    assert (far.amplitude, far.mu_x, far.mu_y, far.sigma_x, far.sigma_y) == pytest.approx((0.4, 200.0, 5.0, 5.0, 5.0))

    # Labels keep groups apart
    labelled = resources.merge_components(density, 30.0, 5.0, labels=[0, 1, 0, 1])
    assert len(labelled) == 3
    assert labelled.total_amplitude == pytest.approx(1.0)

    with pytest.raises(placerank.PlacerankError):
        resources.merge_components(density, 0.0, 5.0)
    with pytest.raises(placerank.PlacerankError):
        resources.merge_components(density, 30.0, 5.0, labels=[0, 1])


def test_rect_probability_properties():
    rng = np.random.default_rng(6)
    density = _random_mixture(rng, 4)
    centers = rng.uniform(-120, 120, (30, 2))
    values = resources.rect_probability(density, centers[:, 0], centers[:, 1], 30.0)

    assert values.shape == (30,)
    assert np.all(values >= 0)

    shifted = resources.translate(density, (12.5, -7.25))
    moved = resources.rect_probability(shifted, centers[:, 0] + 12.5, centers[:, 1] - 7.25, 30.0)
    assert np.allclose(moved, values, rtol=1e-12, atol=1e-15)

    scaled = resources.MixtureDensity(density.amplitude * 3.0, density.mu_x, density.mu_y, density.sigma_x, density.sigma_y)
    scaled_values = resources.rect_probability(scaled, centers[:, 0], centers[:, 1], 30.0)
    assert np.array_equal(np.argsort(-scaled_values, kind='stable'), np.argsort(-values, kind='stable'))

    # Additive over components
    parts = [
        resources.MixtureDensity.from_components([c]) for c in density.components
    ]
    summed = sum(resources.rect_probability(p, centers[:, 0], centers[:, 1], 30.0) for p in parts)
    assert np.allclose(summed, values, rtol=1e-12, atol=1e-15)


def test_rect_probability_rejects_bad_radius():
    density = resources.MixtureDensity.from_components([resources.GaussianComponent(1.0, 0.0, 0.0, 5.0, 5.0)])
    for r in (0.0, -5.0):
        with pytest.raises(placerank.PlacerankError) as exc:
            resources.rect_probability(density, 0.0, 0.0, r)
        assert exc.value.code == 'InvalidArgument'
