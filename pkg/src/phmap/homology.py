"""Homology of filtered complexes over a prime field.

One ComplexHomology object reduces the degree-k and degree-(k+1) boundary
matrices of a filtered complex once, in filtration order, and can then
answer every per-radius question exactly: dimension, a cycle basis, the
coordinates of an arbitrary cycle in that basis, and matrices of maps
induced by inclusions and simplicial vertex maps.

Chains are sparse dicts.  Internally they are keyed by the position of a
simplex in the per-dimension filtration order; the tuple-keyed form is
used at API boundaries.
"""
from __future__ import annotations

import math

import numpy as np

from .complexes import FilteredComplex
from .errors import (
    CycleNotInComplexError,
    DimMismatchError,
    NotACycleError,
)
from .ffield import FieldContext
from .linalg import FieldMatrix


def boundary_matrix(fc: FilteredComplex, k: int, field: FieldContext) -> FieldMatrix:
    """Dense matrix of the boundary map from k-chains to (k-1)-chains."""
    if k < 0:
        raise DimMismatchError("degree must be nonnegative")
    rows = fc.dim_index(k - 1) if k > 0 else {}
    cols = fc.dim_list(k)
    data = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, (t, _) in enumerate(cols):
        for i in range(len(t)):
            face = t[:i] + t[i + 1 :]
            if not face:
                continue
            sign = 1 if i % 2 == 0 else -1
            data[rows[face], j] = sign % field.p
    return FieldMatrix(data, field)


def _boundary_dict(t, row_index, p):
    col = {}
    for i in range(len(t)):
        face = t[:i] + t[i + 1 :]
        if not face:
            continue
        col[row_index[face]] = 1 if i % 2 == 0 else p - 1
    return col


def _reduce_columns(columns, field: FieldContext, track_v: bool):
    """Left-to-right column reduction with lowest-index pivots.

    Stored pivot columns are normalized so the coefficient at their low is
    one.  When track_v is set, the combination of original columns forming
    each reduced column is kept; it is needed for cycle representatives of
    columns that reduce to zero.
    """
    p = field.p
    inv = field.inv
    pivot_holder = {}
    stored = {}
    vcols = {}
    zero_cols = []
    for j, col in enumerate(columns):
        work = dict(col)
        v = {j: 1} if track_v else None
        while work:
            low = max(work)
            holder = pivot_holder.get(low)
            if holder is None:
                break
            other = stored[holder]
            c = work[low]
            for row, val in other.items():
                nv = (work.get(row, 0) - c * val) % p
                if nv:
                    work[row] = nv
                else:
                    work.pop(row, None)
            if track_v:
                vo = vcols[holder]
                for cid, val in vo.items():
                    nv = (v.get(cid, 0) - c * val) % p
                    if nv:
                        v[cid] = nv
                    else:
                        v.pop(cid, None)
        if work:
            low = max(work)
            cinv = inv(work[low])
            stored[j] = {row: (val * cinv) % p for row, val in work.items()}
            pivot_holder[low] = j
            if track_v:
                vcols[j] = {cid: (val * cinv) % p for cid, val in v.items()}
        else:
            zero_cols.append(j)
            if track_v:
                vcols[j] = v
    return pivot_holder, stored, vcols, zero_cols


class HomologyClass:
    """One persistent class: birth position and values plus a cycle rep."""

    __slots__ = ("birth_pos", "birth", "death", "cycle")

    def __init__(self, birth_pos, birth, death, cycle):
        self.birth_pos = birth_pos
        self.birth = birth
        self.death = death
        self.cycle = cycle

    def alive_at(self, r: float) -> bool:
        return self.birth <= r < self.death


class ComplexHomology:
    """Reduced boundary data of one complex in one fixed degree."""

    def __init__(self, fc: FilteredComplex, degree: int, field: FieldContext):
        if degree < 0:
            raise DimMismatchError("degree must be nonnegative")
        self.fc = fc
        self.degree = degree
        self.field = field
        self.k_list = fc.dim_list(degree)
        self.k_index = fc.dim_index(degree)
        self.k_births = fc.dim_births(degree)
        km1_index = fc.dim_index(degree - 1) if degree > 0 else {}
        kp1_list = fc.dim_list(degree + 1)

        p = field.p
        bd_k = (_boundary_dict(t, km1_index, p) for t, _ in self.k_list)
        _, neg_store, vcols, positive = _reduce_columns(bd_k, field, track_v=True)
        self._negative_positions = set(neg_store.keys())

        bd_kp1 = (_boundary_dict(t, self.k_index, p) for t, _ in kp1_list)
        pivot_holder, death_store, _, _ = _reduce_columns(bd_kp1, field, track_v=False)

        death_of = {}
        for low, j in pivot_holder.items():
            death_of[low] = (kp1_list[j][1], death_store[j])

        classes = []
        for bpos in positive:
            birth = float(self.k_births[bpos])
            if bpos in death_of:
                dval, cyc = death_of[bpos]
                classes.append(HomologyClass(bpos, birth, float(dval), cyc))
            else:
                classes.append(HomologyClass(bpos, birth, math.inf, vcols[bpos]))
        classes.sort(key=lambda c: c.birth_pos)
        self.classes = classes
        self._class_by_low = {c.birth_pos: (i, c) for i, c in enumerate(classes)}

        # Verify the boundary of a boundary vanishes: push each stored
        # reduced (k+1)-column through the degree-k boundary once.
        for cyc in (c.cycle for c in classes if c.death < math.inf):
            acc = {}
            for pos, coeff in cyc.items():
                for row, val in _boundary_dict(self.k_list[pos][0], km1_index, p).items():
                    acc[row] = (acc.get(row, 0) + coeff * val) % p
            if any(acc.values()):
                raise NotACycleError("reduced column is not a cycle; boundary data corrupt")

    # ------------------------------------------------------------------
    def dim_at(self, r: float) -> int:
        return sum(1 for c in self.classes if c.alive_at(r))

    def basis_at(self, r: float):
        """Alive classes at radius r, ordered by birth position."""
        return [c for c in self.classes if c.alive_at(r)]

    def events(self):
        """Birth and death values of classes with positive value-length."""
        out = set()
        for c in self.classes:
            if c.death > c.birth:
                out.add(c.birth)
                if c.death < math.inf:
                    out.add(c.death)
        return out

    def check_cycle(self, z: dict, r: float) -> None:
        p = self.field.p
        km1_index = self.fc.dim_index(self.degree - 1) if self.degree > 0 else {}
        acc = {}
        for pos, coeff in z.items():
            if pos < 0 or pos >= len(self.k_list):
                raise CycleNotInComplexError(f"position {pos} out of range")
            if self.k_births[pos] > r:
                raise CycleNotInComplexError(
                    f"simplex {self.k_list[pos][0]} born after radius {r}"
                )
            for row, val in _boundary_dict(self.k_list[pos][0], km1_index, p).items():
                acc[row] = (acc.get(row, 0) + coeff * val) % p
        if any(acc.values()):
            raise NotACycleError("chain has nonzero boundary")

    def reduce_cycle(self, z: dict, r: float) -> dict:
        """Coordinates of a cycle in the alive basis at radius r.

        Returns {class index -> coefficient} over self.classes.  Boundary
        components are eliminated with the stored reduced columns of
        killing simplices already present at r.
        """
        self.check_cycle(z, r)
        p = self.field.p
        work = {pos: val % p for pos, val in z.items() if val % p}
        coords = {}
        while work:
            low = max(work)
            hit = self._class_by_low.get(low)
            if hit is None:
                raise NotACycleError(
                    f"cycle low sits on a non-positive simplex {self.k_list[low][0]}"
                )
            idx, cls = hit
            c = work[low]
            if cls.death <= r:
                pass  # the class is dead at r; its stored cycle bounds
            else:
                coords[idx] = (coords.get(idx, 0) + c) % p
            for row, val in cls.cycle.items():
                nv = (work.get(row, 0) - c * val) % p
                if nv:
                    work[row] = nv
                else:
                    work.pop(row, None)
        return {idx: coeff for idx, coeff in coords.items() if coeff}

    # ------------------------------------------------------------------
    def chain_to_tuples(self, z: dict) -> dict:
        return {self.k_list[pos][0]: coeff for pos, coeff in z.items()}

    def chain_from_tuples(self, chain: dict) -> dict:
        out = {}
        for t, coeff in chain.items():
            pos = self.k_index.get(tuple(t))
            if pos is None:
                raise CycleNotInComplexError(f"simplex {tuple(t)} not in complex")
            out[pos] = coeff
        return out


def push_chain_tuples(chain: dict, vertex_map, p: int) -> dict:
    """Apply a simplicial vertex map to a tuple-keyed chain.

    Simplices whose image collapses (repeated vertices) are dropped; other
    images are resorted with the sign of the sorting permutation.
    """
    out = {}
    for t, coeff in chain.items():
        image = [int(vertex_map[v]) for v in t]
        if len(set(image)) < len(image):
            continue
        sign = 1
        order = sorted(range(len(image)), key=lambda i: image[i])
        # parity of the sorting permutation by counting inversions
        for a in range(len(order)):
            for b in range(a + 1, len(order)):
                if order[a] > order[b]:
                    sign = -sign
        key = tuple(sorted(image))
        val = (out.get(key, 0) + sign * coeff) % p
        if val:
            out[key] = val
        else:
            out.pop(key, None)
    return out


def _coords_to_column(coords: dict, alive, class_positions) -> np.ndarray:
    col = np.zeros(len(alive), dtype=np.int64)
    for cls_idx, coeff in coords.items():
        row = class_positions.get(cls_idx)
        if row is None:
            raise NotACycleError("cycle involves a class outside the alive basis")
        col[row] = coeff
    return col


def _alive_positions(H: ComplexHomology, r: float):
    alive = H.basis_at(r)
    lookup = {}
    for row, c in enumerate(alive):
        lookup[H._class_by_low[c.birth_pos][0]] = row
    return alive, lookup


def inclusion_matrix(H: ComplexHomology, r1: float, r2: float) -> FieldMatrix:
    """Matrix of the map induced by including the complex at r1 into r2."""
    if r2 < r1:
        raise DimMismatchError("inclusion needs r1 <= r2")
    alive1 = H.basis_at(r1)
    alive2, lookup2 = _alive_positions(H, r2)
    data = np.zeros((len(alive2), len(alive1)), dtype=np.int64)
    for col_idx, cls in enumerate(alive1):
        coords = H.reduce_cycle(cls.cycle, r2)
        data[:, col_idx] = _coords_to_column(coords, alive2, lookup2)
    return FieldMatrix(data, H.field)


def projection_matrix(
    source: ComplexHomology,
    target: ComplexHomology,
    vertex_map,
    r: float,
) -> FieldMatrix:
    """Matrix of the map induced by a simplicial vertex map at radius r.

    vertex_map may be None for an identity on shared vertex labels.
    """
    alive_s = source.basis_at(r)
    alive_t, lookup_t = _alive_positions(target, r)
    p = source.field.p
    data = np.zeros((len(alive_t), len(alive_s)), dtype=np.int64)
    for col_idx, cls in enumerate(alive_s):
        chain = source.chain_to_tuples(cls.cycle)
        if vertex_map is not None:
            chain = push_chain_tuples(chain, vertex_map, p)
        pushed = target.chain_from_tuples(chain)
        coords = target.reduce_cycle(pushed, r)
        data[:, col_idx] = _coords_to_column(coords, alive_t, lookup_t)
    return FieldMatrix(data, source.field)


def betti_at(fc: FilteredComplex, degree: int, r: float, field: FieldContext) -> int:
    """Dimension of degree-k homology of the sublevel complex at r."""
    return ComplexHomology(fc, degree, field).dim_at(r)
