import math

import numpy as np
import pytest

from taskseq.metrics import (
    MetricKind,
    MetricParams,
    default_weights,
    edge_cost,
    linear_interp_duration,
    max_joint_difference,
    pairwise_cost,
    trapezoid_duration_1d,
    weighted_euclidean,
)
from taskseq.model import planar_arm


def test_weighted_euclidean_reduces_to_euclidean():
    assert weighted_euclidean([0.0, 0.0], [3.0, 4.0], [1.0, 1.0]) == pytest.approx(5.0)


def test_weighted_euclidean_weights_squared_difference():
    assert weighted_euclidean([0.0, 0.0], [1.0, 2.0], [4.0, 1.0]) == pytest.approx(math.sqrt(8.0))


def test_weighted_euclidean_identity():
    q = np.array([0.3, -1.2, 2.0])
    assert weighted_euclidean(q, q, [2.0, 1.0, 0.5]) == 0.0


def test_weighted_euclidean_length_mismatch():
    with pytest.raises(ValueError):
        weighted_euclidean([0.0], [1.0, 2.0], [1.0, 1.0])
    with pytest.raises(ValueError):
        weighted_euclidean([0.0, 1.0], [1.0, 2.0], [1.0])


def test_max_joint_difference_direct():
    assert max_joint_difference([0.0, 0.0], [1.0, 2.0], [1.0, 1.0]) == pytest.approx(2.0)
    assert max_joint_difference([0.0, 0.0], [1.0, 2.0], [1.0, 4.0]) == pytest.approx(1.0)


def test_max_joint_difference_symmetric():
    rng = np.random.default_rng(2)
    for _ in range(50):
        a, b = rng.normal(size=4), rng.normal(size=4)
        v = rng.uniform(0.5, 2.0, 4)
        assert max_joint_difference(a, b, v) == max_joint_difference(b, a, v)


@pytest.mark.parametrize(
    "delta,vmax,amax,expected",
    [
        (2.0, 1.0, 1.0, 3.0),    # trapezoidal profile
        (1.0, 1.0, 1.0, 2.0),    # exact triangle/trapezoid boundary
        (0.25, 1.0, 1.0, 1.0),   # triangular profile
        (0.0, 1.0, 1.0, 0.0),
        (-2.0, 1.0, 1.0, 3.0),   # sign-independent
    ],
)
def test_trapezoid_durations(delta, vmax, amax, expected):
    assert trapezoid_duration_1d(delta, vmax, amax) == pytest.approx(expected)


def test_trapezoid_continuous_at_profile_boundary():
    vmax, amax = 1.3, 0.7
    boundary = vmax * vmax / amax
    below = trapezoid_duration_1d(boundary * (1 - 1e-12), vmax, amax)
    above = trapezoid_duration_1d(boundary * (1 + 1e-12), vmax, amax)
    assert below == pytest.approx(2 * vmax / amax, rel=1e-9)
    assert above == pytest.approx(2 * vmax / amax, rel=1e-9)


def test_trapezoid_rejects_bad_limits():
    with pytest.raises(ValueError):
        trapezoid_duration_1d(1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        trapezoid_duration_1d(1.0, 1.0, -1.0)


def test_linear_interp_single_joint_reduces_to_1d():
    assert linear_interp_duration([0.0], [2.0], [1.0], [1.0]) == pytest.approx(3.0)


def test_linear_interp_identity_and_symmetry():
    rng = np.random.default_rng(3)
    for _ in range(50):
        a, b = rng.normal(size=3), rng.normal(size=3)
        v = rng.uniform(0.5, 2.0, 3)
        acc = rng.uniform(0.5, 2.0, 3)
        assert linear_interp_duration(a, a, v, acc) == 0.0
        assert linear_interp_duration(a, b, v, acc) == linear_interp_duration(b, a, v, acc)


def test_linear_interp_dominates_max_joint_difference():
    rng = np.random.default_rng(4)
    for _ in range(1000):
        a, b = rng.normal(size=5), rng.normal(size=5)
        v = rng.uniform(0.2, 3.0, 5)
        acc = rng.uniform(0.2, 3.0, 5)
        assert linear_interp_duration(a, b, v, acc) >= max_joint_difference(a, b, v) - 1e-12


@pytest.mark.parametrize("kind", list(MetricKind))
def test_metric_axioms(kind):
    rng = np.random.default_rng(6)
    params = MetricParams(
        weights=rng.uniform(0.5, 3.0, 4),
        vel_max=rng.uniform(0.5, 2.0, 4),
        acc_max=rng.uniform(0.5, 2.0, 4),
    )
    triangle = kind in (MetricKind.WEIGHTED_EUCLIDEAN, MetricKind.MAX_JOINT_DIFFERENCE)
    for _ in range(1000):
        a, b, c = (rng.uniform(-math.pi, math.pi, 4) for _ in range(3))
        dab = edge_cost(kind, params, a, b)
        assert dab >= 0.0
        assert edge_cost(kind, params, a, a) == 0.0
        assert dab == edge_cost(kind, params, b, a)
        if triangle:
            assert edge_cost(kind, params, a, c) <= dab + edge_cost(kind, params, b, c) + 1e-12


def test_default_weights_are_distal_reach_sums():
    assert np.allclose(default_weights(planar_arm((1.0, 1.0, 1.0))), [3.0, 2.0, 1.0])
    assert np.allclose(default_weights(planar_arm((2.0, 1.0))), [3.0, 1.0])
    assert np.allclose(default_weights(planar_arm((5.0,))), [5.0])


def test_edge_cost_dispatch_matches_direct_calls():
    params = MetricParams(weights=[1.0, 1.0], vel_max=[1.0, 1.0], acc_max=[1.0, 1.0])
    a, b = np.array([0.0, 0.0]), np.array([3.0, 4.0])
    assert edge_cost(MetricKind.WEIGHTED_EUCLIDEAN, params, a, b) == pytest.approx(5.0)
    assert edge_cost(MetricKind.MAX_JOINT_DIFFERENCE, params, a, b) == pytest.approx(4.0)
    assert edge_cost(MetricKind.LINEAR_INTERP_DURATION, params, a, b) == pytest.approx(5.0)


@pytest.mark.parametrize("kind", list(MetricKind))
def test_pairwise_kernel_matches_scalar_metric(kind):
    rng = np.random.default_rng(8)
    params = MetricParams(
        weights=rng.uniform(0.5, 3.0, 3),
        vel_max=rng.uniform(0.5, 2.0, 3),
        acc_max=rng.uniform(0.5, 2.0, 3),
    )
    a = rng.uniform(-math.pi, math.pi, (4, 3))
    b = rng.uniform(-math.pi, math.pi, (5, 3))
    table = pairwise_cost(kind, params, a, b)
    assert table.shape == (4, 5)
    for i in range(4):
        for j in range(5):
            assert table[i, j] == edge_cost(kind, params, a[i], b[j])


def test_params_from_planar_robot_uses_reach_weights():
    params = MetricParams.from_robot(planar_arm((1.0, 1.0, 1.0)))
    assert np.allclose(params.weights, [3.0, 2.0, 1.0])
