"""Filtered simplicial complexes.

A FilteredComplex is a birth-labelled list of simplices sorted by
(birth, dimension, lexicographic order), so faces always precede cofaces.
Vietoris-Rips births follow the convention birth = max pairwise distance
over the simplex divided by two; a ball of that radius around each vertex
first covers the simplex there.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DimMismatchError, IndexMismatchError, ParseError
from .geometry import PointCloud, SampledMap, dedup_points


class FilteredComplex:
    """Simplices with births, indexable per dimension."""

    def __init__(self, simplices, max_dim: int):
        self.max_dim = max_dim
        items = []
        for simplex, birth in simplices:
            t = tuple(int(v) for v in simplex)
            if any(t[i] >= t[i + 1] for i in range(len(t) - 1)):
                raise ParseError(f"vertices of {t} are not strictly increasing")
            items.append((float(birth), len(t) - 1, t))
        items.sort()
        self.simplices = [(t, b) for (b, _, t) in items]
        self.birth = {t: b for (t, b) in self.simplices}
        self._by_dim = {}
        self._index_in_dim = {}
        self._births_by_dim = {}
        for d in range(max_dim + 1):
            lst = [(t, b) for (t, b) in self.simplices if len(t) == d + 1]
            self._by_dim[d] = lst
            self._index_in_dim[d] = {t: i for i, (t, _) in enumerate(lst)}
            self._births_by_dim[d] = np.array([b for (_, b) in lst], dtype=float)

    def __len__(self):
        return len(self.simplices)

    def __contains__(self, simplex):
        return tuple(simplex) in self.birth

    def dim_list(self, d: int):
        """Simplices of dimension d with births, in filtration order."""
        return self._by_dim.get(d, [])

    def dim_index(self, d: int):
        return self._index_in_dim.get(d, {})

    def dim_births(self, d: int) -> np.ndarray:
        return self._births_by_dim.get(d, np.empty(0))

    def count_at(self, d: int, radius: float) -> int:
        """How many d-simplices have birth <= radius."""
        return int(np.searchsorted(self.dim_births(d), radius, side="right"))

    def vertex_count(self) -> int:
        return len(self.dim_list(0))


def vietoris_rips(
    cloud: PointCloud, max_dim: int, max_radius: float | None = None
) -> FilteredComplex:
    """Rips complex up to max_dim with births capped at max_radius."""
    if max_dim < 0:
        raise DimMismatchError("max_dim must be nonnegative")
    if max_radius is None:
        max_radius = math.inf
    n = cloud.n
    dm = cloud.pairwise()
    edge_birth = dm / 2.0
    simplices = [((i,), 0.0) for i in range(n)]
    nbrs = [
        [j for j in range(i + 1, n) if edge_birth[i, j] <= max_radius]
        for i in range(n)
    ]
    frontier = []
    for i in range(n):
        for j in nbrs[i]:
            b = float(edge_birth[i, j])
            simplices.append(((i, j), b))
            frontier.append(((i, j), b))
    d = 1
    while d < max_dim and frontier:
        nxt = []
        for t, b in frontier:
            shared = set(nbrs[t[0]])
            for v in t[1:]:
                shared.intersection_update(nbrs[v])
            last = t[-1]
            for j in sorted(shared):
                if j <= last:
                    continue
                bj = max(float(edge_birth[v, j]) for v in t)
                birth = max(b, bj)
                if birth <= max_radius:
                    nxt.append((t + (j,), birth))
        for t, b in nxt:
            simplices.append((t, b))
        frontier = nxt
        d += 1
    return FilteredComplex(simplices, max_dim)


def image_simplex(simplex, idx_map) -> tuple:
    """Vertex set of the image of a simplex, possibly of lower dimension."""
    return tuple(sorted({int(idx_map[v]) for v in simplex}))


def mapped_graph_complex(
    C: FilteredComplex, D: FilteredComplex, vertex_map
) -> FilteredComplex:
    """Graph complex of a vertex assignment from C's vertices into D's.

    A simplex of C enters the graph complex once the vertex set of its
    image lies in D; the birth is the larger of the two births.  Simplices
    whose image never appears in D (a capped D, say) are dropped.
    """
    vm = np.asarray(vertex_map, dtype=np.int64)
    if vm.ndim != 1 or len(vm) != C.vertex_count():
        raise IndexMismatchError(
            f"vertex map covers {len(vm)} vertices, C has {C.vertex_count()}"
        )
    if len(vm) and (vm.min() < 0 or vm.max() >= D.vertex_count()):
        raise IndexMismatchError("vertex map leaves D's vertex range")
    out = []
    for t, b in C.simplices:
        img = image_simplex(t, vm)
        b_img = D.birth.get(img)
        if b_img is None:
            continue
        out.append((t, max(b, b_img)))
    return FilteredComplex(out, C.max_dim)


def graph_complex(smap: SampledMap, C: FilteredComplex, D: FilteredComplex) -> FilteredComplex:
    """Complex on the graph of the sampled map.

    A simplex on graph points is present once its domain simplex lies in C
    and the vertex set of its image lies in D; the birth is the larger of
    the two births.  Coincident image points share a single vertex of D, so
    image simplices may be degenerate.
    """
    if C.vertex_count() != smap.n:
        raise IndexMismatchError(
            f"C has {C.vertex_count()} vertices, map has {smap.n} samples"
        )
    _, idx_map = dedup_points(smap.image)
    n_distinct = int(idx_map.max()) + 1 if smap.n else 0
    if D.vertex_count() != n_distinct:
        raise IndexMismatchError(
            f"D has {D.vertex_count()} vertices, map has {n_distinct} distinct image points"
        )
    return mapped_graph_complex(C, D, idx_map)


def validate_filtration(fc: FilteredComplex) -> None:
    """Check closure under faces and monotone births; raises ParseError."""
    for t, b in fc.simplices:
        if len(t) == 1:
            continue
        for i in range(len(t)):
            face = t[:i] + t[i + 1 :]
            fb = fc.birth.get(face)
            if fb is None:
                raise ParseError(f"face {face} of {t} is missing")
            if fb > b:
                raise ParseError(
                    f"face {face} born at {fb}, after its coface {t} at {b}"
                )


def critical_radii(fc: FilteredComplex):
    """Sorted distinct birth values."""
    return sorted({b for (_, b) in fc.simplices})


def write_complex_dump(fc: FilteredComplex, path) -> None:
    """One simplex per line as birth;v1,v2,..."""
    with open(path, "w", encoding="utf-8") as fh:
        for t, b in fc.simplices:
            fh.write(f"{b!r};{','.join(str(v) for v in t)}\n")
