"""Point clouds, metrics, sampled maps, and synthetic fixtures.

Two metrics are supported: Euclidean, and the flat torus obtained from a
box with per-axis periods.  A sampled map pairs a domain cloud with an
index-aligned image cloud; its graph lives in the product space carrying
the max of the two factor metrics.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousLiftError,
    DimMismatchError,
    EmptySetError,
    IndexMismatchError,
    ParseError,
)

_HALF_PERIOD_TOL = 1e-12


@dataclass(frozen=True)
class Metric:
    kind: str
    periods: tuple = None

    def __post_init__(self):
        if self.kind not in ("euclidean", "torus"):
            raise DimMismatchError(f"unknown metric kind {self.kind!r}")
        if self.kind == "torus":
            if not self.periods or any(p <= 0 for p in self.periods):
                raise DimMismatchError("torus metric needs positive periods")


EUCLIDEAN = Metric("euclidean")


def torus_metric(periods) -> Metric:
    return Metric("torus", tuple(float(p) for p in periods))


def wrap_displacement(delta: np.ndarray, periods) -> np.ndarray:
    """Per-axis displacement lifted to the representative nearest zero."""
    per = np.asarray(periods, dtype=float)
    return delta - per * np.round(delta / per)


def dist(metric: Metric, a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimMismatchError(f"point dims {a.shape} vs {b.shape}")
    if metric.kind == "euclidean":
        return float(np.sqrt(np.sum((a - b) ** 2)))
    if len(metric.periods) != a.shape[-1]:
        raise DimMismatchError("periods do not match point dimension")
    d = wrap_displacement(a - b, metric.periods)
    return float(np.sqrt(np.sum(d**2)))


def cross_distances(metric: Metric, pts_a: np.ndarray, pts_b: np.ndarray) -> np.ndarray:
    """Distance matrix of shape (len(a), len(b))."""
    pts_a = np.asarray(pts_a, dtype=float)
    pts_b = np.asarray(pts_b, dtype=float)
    diff = pts_a[:, None, :] - pts_b[None, :, :]
    if metric.kind == "torus":
        per = np.asarray(metric.periods, dtype=float)
        diff = diff - per * np.round(diff / per)
    return np.sqrt(np.sum(diff**2, axis=2))


@dataclass
class PointCloud:
    points: np.ndarray
    metric: Metric = EUCLIDEAN

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2:
            raise DimMismatchError("points must be an (n, dim) array")
        if self.metric.kind == "torus" and len(self.metric.periods) != self.dim:
            raise DimMismatchError("periods do not match point dimension")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def pairwise(self) -> np.ndarray:
        return cross_distances(self.metric, self.points, self.points)

    def diameter(self) -> float:
        if self.n == 0:
            return 0.0
        return float(self.pairwise().max())


@dataclass
class SampledMap:
    """A finite map given by index-aligned domain and image samples."""

    domain: PointCloud
    image: PointCloud

    def __post_init__(self):
        if self.domain.n != self.image.n:
            raise IndexMismatchError(
                f"domain has {self.domain.n} points, image has {self.image.n}"
            )

    @property
    def n(self) -> int:
        return self.domain.n

    def graph_pairwise(self) -> np.ndarray:
        """Pairwise distances of graph points under the product max metric."""
        return np.maximum(self.domain.pairwise(), self.image.pairwise())


def graph_cross_distances(m1: SampledMap, m2: SampledMap) -> np.ndarray:
    da = cross_distances(m1.domain.metric, m1.domain.points, m2.domain.points)
    db = cross_distances(m1.image.metric, m1.image.points, m2.image.points)
    return np.maximum(da, db)


def hausdorff(a: PointCloud, b: PointCloud) -> float:
    if a.n == 0 or b.n == 0:
        raise EmptySetError("hausdorff distance needs nonempty clouds")
    d = cross_distances(a.metric, a.points, b.points)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def graph_hausdorff(m1: SampledMap, m2: SampledMap) -> float:
    """Hausdorff distance between the two graphs in the product max metric."""
    if m1.n == 0 or m2.n == 0:
        raise EmptySetError("hausdorff distance needs nonempty graphs")
    d = graph_cross_distances(m1, m2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def dedup_points(cloud: PointCloud):
    """Collapse exactly coincident points.

    Returns (deduplicated cloud, index map) where index map sends each
    original index to its representative in first-occurrence order.
    """
    seen = {}
    order = []
    idx_map = np.zeros(cloud.n, dtype=np.int64)
    for i in range(cloud.n):
        key = cloud.points[i].tobytes()
        if key not in seen:
            seen[key] = len(order)
            order.append(i)
        idx_map[i] = seen[key]
    unique = PointCloud(cloud.points[order].copy(), cloud.metric)
    return unique, idx_map


def synth_circle_map(n: int, power: int, sigma: float = 0.0, seed: int = 0) -> SampledMap:
    """Sample z -> z^power on the unit circle at n equispaced points.

    Image angles are computed by index arithmetic mod n so that coincident
    image points agree to the last bit.  Gaussian noise of scale sigma is
    added independently to domain and image coordinates.
    """
    if n < 1:
        raise DimMismatchError("need at least one sample point")
    j = np.arange(n)
    theta = 2.0 * np.pi * j / n
    image_idx = (power * j) % n
    phi = 2.0 * np.pi * image_idx / n
    dom = np.column_stack([np.cos(theta), np.sin(theta)])
    img = np.column_stack([np.cos(phi), np.sin(phi)])
    if sigma > 0:
        rng = np.random.default_rng(seed)
        dom = dom + rng.normal(0.0, sigma, size=dom.shape)
        img = img + rng.normal(0.0, sigma, size=img.shape)
    return SampledMap(PointCloud(dom, EUCLIDEAN), PointCloud(img, EUCLIDEAN))


def synth_torus_map(grid: int, matrix) -> SampledMap:
    """Sample the linear torus map induced by an integer matrix.

    Domain points form a grid x grid lattice on the unit flat torus; the
    image of (i, j)/grid is (M @ (i, j) mod grid)/grid, exact in floating
    point so repeated image points coincide bitwise.
    """
    m = np.asarray(matrix, dtype=np.int64)
    if m.shape != (2, 2):
        raise DimMismatchError("torus map matrix must be 2x2")
    ii, jj = np.meshgrid(np.arange(grid), np.arange(grid), indexing="ij")
    lattice = np.column_stack([ii.ravel(), jj.ravel()])
    image_lattice = (lattice @ m.T) % grid
    metric = torus_metric((1.0, 1.0))
    dom = PointCloud(lattice / grid, metric)
    img = PointCloud(image_lattice / grid, metric)
    return SampledMap(dom, img)


def winding_vector(path_points, periods) -> np.ndarray:
    """Integer winding of a closed vertex path on a flat torus.

    Sums the minimal per-edge displacement lifts, including the closing
    edge from the last point back to the first.  Raises AmbiguousLiftError
    when an edge displacement sits exactly at half a period.
    """
    pts = np.asarray(path_points, dtype=float)
    per = np.asarray(periods, dtype=float)
    total = np.zeros(pts.shape[1])
    for k in range(pts.shape[0]):
        delta = pts[(k + 1) % pts.shape[0]] - pts[k]
        wrapped = wrap_displacement(delta, per)
        if np.any(np.abs(np.abs(wrapped) - per / 2) < _HALF_PERIOD_TOL * np.maximum(per, 1.0)):
            raise AmbiguousLiftError(f"edge {k} displacement is half a period")
        total += wrapped
    vec = total / per
    out = np.round(vec).astype(np.int64)
    if np.max(np.abs(vec - out)) > 1e-6:
        raise AmbiguousLiftError("path does not close up to an integer lattice shift")
    return out


def winding_number(path_points) -> int:
    """Planar winding about the origin of a closed path, by signed angles."""
    pts = np.asarray(path_points, dtype=float)
    if pts.shape[1] != 2:
        raise DimMismatchError("planar winding needs 2-d points")
    angles = np.arctan2(pts[:, 1], pts[:, 0])
    total = 0.0
    for k in range(len(pts)):
        d = angles[(k + 1) % len(pts)] - angles[k]
        d = (d + np.pi) % (2.0 * np.pi) - np.pi
        total += d
    w = total / (2.0 * np.pi)
    out = int(round(w))
    if abs(w - out) > 1e-6:
        raise AmbiguousLiftError("signed angle sum is not an integer multiple of 2*pi")
    return out


def write_point_cloud_csv(path, cloud: PointCloud) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in cloud.points:
            writer.writerow([repr(float(x)) for x in row])


def read_point_cloud_csv(path, metric: Metric = EUCLIDEAN) -> PointCloud:
    rows = _read_float_rows(path)
    return PointCloud(np.array(rows, dtype=float), metric)


def write_sampled_map_csv(path, smap: SampledMap) -> None:
    """One row per sample: domain coordinates then image coordinates."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for a, b in zip(smap.domain.points, smap.image.points):
            writer.writerow([repr(float(x)) for x in a] + [repr(float(x)) for x in b])


def read_sampled_map_csv(path, metric: Metric = EUCLIDEAN) -> SampledMap:
    rows = _read_float_rows(path)
    width = len(rows[0])
    if width % 2 != 0:
        raise ParseError(f"{path}: expected an even column count, got {width}")
    half = width // 2
    arr = np.array(rows, dtype=float)
    return SampledMap(
        PointCloud(arr[:, :half], metric), PointCloud(arr[:, half:], metric)
    )


def _read_float_rows(path):
    rows = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if len(rows[-1]) != len(rows[0]):
                raise ParseError(f"{path}:{lineno}: ragged row")
    if not rows:
        raise ParseError(f"{path}: no data rows")
    return rows
