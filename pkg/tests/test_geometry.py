"""Metrics, point clouds, synthetic maps, and CSV round trips."""
import math

import numpy as np
import pytest

from phmap.errors import DimMismatchError, EmptySetError, InputError, NotPrimeError
from phmap.geometry import (
    EUCLIDEAN,
    Metric,
    PointCloud,
    SampledMap,
    cross_distances,
    dedup_points,
    dist,
    graph_hausdorff,
    hausdorff,
    read_point_cloud_csv,
    read_sampled_map_csv,
    synth_circle_map,
    synth_torus_map,
    torus_metric,
    winding_number,
    winding_vector,
    wrap_displacement,
    write_point_cloud_csv,
    write_sampled_map_csv,
)
from oracles import torus_dist


def test_torus_distance_matches_lattice_search():
    rng = np.random.default_rng(21)
    for _ in range(200):
        d = int(rng.integers(1, 4))
        periods = tuple(float(p) for p in rng.uniform(0.5, 3.0, size=d))
        met = torus_metric(periods)
        a = rng.uniform(0, 1, size=d) * periods
        b = rng.uniform(0, 1, size=d) * periods
        assert dist(met, a, b) == pytest.approx(torus_dist(a, b, periods), abs=1e-12)


def test_wrap_displacement_is_minimal():
    met = torus_metric((1.0, 1.0))
    delta = wrap_displacement(np.array([0.9, -0.6]), (1.0, 1.0))
    assert np.allclose(delta, [-0.1, 0.4])
    assert dist(met, np.array([0.05, 0.0]), np.array([0.95, 0.0])) == pytest.approx(0.1)


def test_euclidean_dist_and_cross_distances():
    a = np.array([[0.0, 0.0], [1.0, 0.0]])
    b = np.array([[0.0, 3.0]])
    m = cross_distances(EUCLIDEAN, a, b)
    assert m.shape == (2, 1)
    assert m[0, 0] == pytest.approx(3.0)
    assert m[1, 0] == pytest.approx(math.sqrt(10))


def test_pairwise_and_diameter():
    cloud = PointCloud(np.array([[0.0, 0.0], [3.0, 4.0], [0.0, 1.0]]))
    pw = cloud.pairwise()
    assert pw.shape == (3, 3)
    assert pw[0, 1] == pytest.approx(5.0)
    assert np.allclose(pw, pw.T)
    assert np.allclose(np.diag(pw), 0.0)
    assert cloud.diameter() == pytest.approx(5.0)


def test_point_cloud_validation():
    with pytest.raises(InputError):
        PointCloud(np.zeros(3))
    with pytest.raises(InputError):
        PointCloud(np.zeros((2, 3)), torus_metric((1.0, 1.0)))
    with pytest.raises(InputError):
        Metric("torus", ())
    with pytest.raises(InputError):
        Metric("hyperbolic", ())


def test_sampled_map_requires_matching_sizes():
    dom = PointCloud(np.zeros((3, 2)))
    img = PointCloud(np.zeros((2, 2)))
    with pytest.raises(InputError):
        SampledMap(dom, img)


def test_hausdorff_hand_values():
    a = PointCloud(np.array([[0.0, 0.0]]))
    b = PointCloud(np.array([[3.0, 0.0], [0.0, 0.0]]))
    assert hausdorff(a, a) == 0.0
    assert hausdorff(a, b) == pytest.approx(3.0)
    assert hausdorff(b, a) == pytest.approx(3.0)


def test_graph_hausdorff_uses_max_of_coordinates():
    dom = PointCloud(np.array([[0.0, 0.0]]))
    m1 = SampledMap(dom, PointCloud(np.array([[0.0, 0.0]])))
    m2 = SampledMap(dom, PointCloud(np.array([[0.0, 2.0]])))
    assert graph_hausdorff(m1, m1) == 0.0
    assert graph_hausdorff(m1, m2) == pytest.approx(2.0)


def test_winding_number_of_circle_loop():
    ang = np.arange(12) * 2 * np.pi / 12
    loop = np.column_stack([np.cos(ang), np.sin(ang)])
    assert winding_number(loop) == 1
    assert winding_number(loop[::-1]) == -1


def test_winding_vector_on_torus():
    path = np.array([[0.0, 0.0], [0.3, 0.0], [0.6, 0.0], [0.9, 0.0]])
    assert tuple(winding_vector(path, (1.0, 1.0))) == (1, 0)
    diag = np.array([[0.0, 0.0], [0.25, 0.25], [0.5, 0.5], [0.75, 0.75]])
    assert tuple(winding_vector(diag, (1.0, 1.0))) == (1, 1)


def test_synth_circle_map_clean():
    smap = synth_circle_map(4, 2)
    assert smap.n == 4
    assert np.allclose(np.linalg.norm(smap.domain.points, axis=1), 1.0)
    assert np.allclose(smap.domain.points[1], [0.0, 1.0])
    assert np.allclose(smap.image.points[1], [-1.0, 0.0], atol=1e-12)
    inv = synth_circle_map(4, -1)
    assert np.allclose(inv.image.points[1], [0.0, -1.0], atol=1e-12)


def test_synth_circle_map_noise_is_seeded():
    a = synth_circle_map(10, 2, sigma=0.1, seed=5)
    b = synth_circle_map(10, 2, sigma=0.1, seed=5)
    c = synth_circle_map(10, 2, sigma=0.1, seed=6)
    assert np.array_equal(a.domain.points, b.domain.points)
    assert np.array_equal(a.image.points, b.image.points)
    assert not np.array_equal(a.domain.points, c.domain.points)
    clean = synth_circle_map(10, 2)
    assert not np.array_equal(a.domain.points, clean.domain.points)
    assert not np.array_equal(a.image.points, clean.image.points)


def test_synth_torus_map_fixture():
    smap = synth_torus_map(8, [[2, 1], [1, 1]])
    assert smap.n == 64
    assert smap.domain.metric.kind == "torus"
    pts = smap.domain.points
    i = next(k for k in range(64) if np.allclose(pts[k], [0.125, 0.0]))
    assert np.allclose(smap.image.points[i], [0.25, 0.125])
    assert np.all((smap.image.points >= 0) & (smap.image.points < 1))
    small = synth_torus_map(2, [[2, 1], [1, 1]])
    assert small.n == 4
    j = next(k for k in range(4) if np.allclose(small.domain.points[k], [0.5, 0.5]))
    assert np.allclose(small.image.points[j], [0.5, 0.0])


def test_dedup_points():
    cloud = PointCloud(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0], [2.0, 0.0]]))
    uniq, idx = dedup_points(cloud)
    assert uniq.n == 3
    for i in range(cloud.n):
        assert np.array_equal(uniq.points[idx[i]], cloud.points[i])
    already = PointCloud(np.array([[0.0, 0.0], [1.0, 0.0]]))
    uniq2, idx2 = dedup_points(already)
    assert uniq2.n == 2
    assert list(idx2) == [0, 1]


def test_point_cloud_csv_round_trip(tmp_path):
    cloud = PointCloud(np.array([[0.125, -1.5], [2.0, 3.25]]))
    path = tmp_path / "cloud.csv"
    write_point_cloud_csv(path, cloud)
    back = read_point_cloud_csv(path)
    assert np.array_equal(back.points, cloud.points)
    met = torus_metric((1.0, 1.0))
    wrapped = read_point_cloud_csv(path, metric=EUCLIDEAN)
    assert wrapped.metric == EUCLIDEAN
    assert met.kind == "torus"


def test_sampled_map_csv_round_trip(tmp_path):
    smap = synth_circle_map(6, 2, sigma=0.05, seed=3)
    path = tmp_path / "map.csv"
    write_sampled_map_csv(path, smap)
    back = read_sampled_map_csv(path)
    assert np.array_equal(back.domain.points, smap.domain.points)
    assert np.array_equal(back.image.points, smap.image.points)
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().strip().split(",")
    assert len(first) == 4


def test_hausdorff_of_empty_cloud_rejected():
    empty = PointCloud(np.zeros((0, 2)))
    other = PointCloud(np.zeros((1, 2)))
    with pytest.raises(EmptySetError):
        hausdorff(empty, other)
