"""Interval decomposition of zigzag modules on a line quiver.

An AnRepresentation assigns a space K^d to each of n vertices and a matrix
to each arrow; the orientation string says whether arrow i points forward
(vertex i to i+1) or backward.  Every such representation splits into
interval summands I[b, d].  Two routes to that structure live here:

* decompose_an handles any orientation by a left-to-right sweep that keeps
  explicit basis vectors for every interval instance, and certifies the
  answer by conjugating each arrow matrix to its canonical 0/1 form.
* extract_i13 specializes to a three-vertex zigzag X <- M -> Y and finds
  only the full-interval block, by staged Smith reductions whose side
  effects are repaired with operations that cannot disturb earlier stages.

Vertices and interval endpoints are 0-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CertificateError, DimMismatchError, InputError, ShapeMismatchError
from .ffield import FieldContext
from .linalg import (
    FieldMatrix,
    extend_to_basis,
    kernel_basis,
    mat_inv,
    rank,
    smith_normal_form,
)


class AnRepresentation:
    """A representation of the line quiver with a given orientation.

    orientation: string over {'f', 'b'}, one symbol per arrow.  For 'f' the
    matrix maps vertex i to i+1 (shape dims[i+1] x dims[i]); for 'b' it
    maps i+1 to i.
    """

    def __init__(self, orientation: str, dims, maps, field: FieldContext):
        dims = [int(d) for d in dims]
        if len(orientation) != len(dims) - 1:
            raise DimMismatchError(
                f"{len(dims)} vertices need {len(dims) - 1} arrows, got {len(orientation)}"
            )
        if any(s not in "fb" for s in orientation):
            raise InputError(f"orientation must use only 'f'/'b': {orientation!r}")
        if len(maps) != len(orientation):
            raise DimMismatchError("one matrix per arrow required")
        for i, (s, m) in enumerate(zip(orientation, maps)):
            want = (dims[i + 1], dims[i]) if s == "f" else (dims[i], dims[i + 1])
            if m.shape != want:
                raise ShapeMismatchError(
                    f"arrow {i} ({s}): expected shape {want}, got {m.shape}"
                )
            if m.field.p != field.p:
                raise DimMismatchError("arrow matrix over a different field")
        self.orientation = orientation
        self.dims = dims
        self.maps = list(maps)
        self.field = field

    @property
    def n(self) -> int:
        return len(self.dims)

    def reversed(self) -> "AnRepresentation":
        """The same data read right to left; arrow directions flip."""
        n = self.n
        orientation = "".join(
            "b" if s == "f" else "f" for s in reversed(self.orientation)
        )
        return AnRepresentation(
            orientation, list(reversed(self.dims)), list(reversed(self.maps)), self.field
        )


class IntervalInstance:
    """One interval summand with a basis vector at each supported vertex."""

    __slots__ = ("birth", "death", "vecs", "seq")

    def __init__(self, birth, death, vecs, seq):
        self.birth = birth
        self.death = death
        self.vecs = vecs
        self.seq = seq

    @property
    def interval(self):
        return (self.birth, self.death)

    def __repr__(self):
        return f"IntervalInstance[{self.birth},{self.death}]"


@dataclass
class IntervalDecomposition:
    rep: AnRepresentation
    instances: list

    def __post_init__(self):
        self.instances = sorted(self.instances, key=lambda I: (I.birth, I.death, I.seq))

    @property
    def multiplicities(self) -> dict:
        out = {}
        for inst in self.instances:
            out[inst.interval] = out.get(inst.interval, 0) + 1
        return out

    def instances_at(self, v: int):
        return [I for I in self.instances if I.birth <= v <= I.death]

    def basis_change(self, v: int) -> FieldMatrix:
        """Columns are the instance vectors at v, in canonical instance order."""
        cols = [I.vecs[v] for I in self.instances_at(v)]
        if not cols:
            return FieldMatrix.zeros(self.rep.dims[v], 0, self.rep.field)
        return FieldMatrix(np.column_stack(cols), self.rep.field)

    def block_positions(self, v: int, interval) -> list:
        return [
            i
            for i, inst in enumerate(self.instances_at(v))
            if inst.interval == tuple(interval)
        ]

    def verify(self) -> None:
        """Certificate: conjugating every arrow gives its exact 0/1 canonical form."""
        rep = self.rep
        for v in range(rep.n):
            alive = self.instances_at(v)
            if len(alive) != rep.dims[v]:
                raise CertificateError(
                    f"vertex {v}: {len(alive)} instances for dimension {rep.dims[v]}"
                )
        inverses = {}
        for v in range(rep.n):
            b = self.basis_change(v)
            if b.shape[1] != b.shape[0]:
                raise CertificateError(f"vertex {v}: basis not square")
            try:
                inverses[v] = mat_inv(b) if b.shape[0] else b
            except Exception as exc:
                raise CertificateError(f"vertex {v}: basis not invertible") from exc
        for a, s in enumerate(rep.orientation):
            if s == "f":
                src, tgt = a, a + 1
            else:
                src, tgt = a + 1, a
            conj = (
                (inverses[tgt] @ rep.maps[a] @ self.basis_change(src))
                if rep.dims[tgt] and rep.dims[src]
                else FieldMatrix.zeros(rep.dims[tgt], rep.dims[src], rep.field)
            )
            want = np.zeros((rep.dims[tgt], rep.dims[src]), dtype=np.int64)
            rows = {inst.seq: i for i, inst in enumerate(self.instances_at(tgt))}
            for jcol, inst in enumerate(self.instances_at(src)):
                irow = rows.get(inst.seq)
                if irow is not None:
                    want[irow, jcol] = 1
            if not np.array_equal(conj.data, want):
                raise CertificateError(f"arrow {a}: conjugated matrix is not canonical")


def _fborn(birth: int, orientation: str) -> bool:
    return birth == 0 or orientation[birth - 1] == "f"


def _choose_absorber(cands, orientation):
    """Index (within cands) of the instance permitted to absorb the others.

    Additions into an instance born at a backward arrow would break the
    canonical form at its birth, so prefer the youngest forward-born
    candidate; when all are backward-born the oldest works because younger
    backward-born instances may always be folded into older ones.
    """
    fborn = [i for i, inst in enumerate(cands) if _fborn(inst.birth, orientation)]
    if fborn:
        return max(fborn, key=lambda i: (cands[i].birth, -i))
    return min(range(len(cands)), key=lambda i: (cands[i].birth, i))


def _absorb(target: IntervalInstance, source: IntervalInstance, c: int, v: int, p: int):
    lo = max(target.birth, source.birth)
    for u in range(lo, v + 1):
        target.vecs[u] = (target.vecs[u] + c * source.vecs[u]) % p


def decompose_an(rep: AnRepresentation) -> IntervalDecomposition:
    """Full interval decomposition with explicit bases, any orientation.

    Sweeps vertices left to right keeping the processed prefix in exact
    canonical form.  At a forward arrow, dependencies among the images of
    open instances are cancelled by folding instances into a chosen victim,
    which then closes; at a backward arrow the roles of rows and columns
    swap.  The result always passes IntervalDecomposition.verify before
    being returned.
    """
    field = rep.field
    p = field.p
    instances: list[IntervalInstance] = []
    open_: list[IntervalInstance] = []
    seq = 0
    for i in range(rep.dims[0]):
        e = np.zeros(rep.dims[0], dtype=np.int64)
        e[i] = 1
        inst = IntervalInstance(0, 0, {0: e}, seq)
        seq += 1
        instances.append(inst)
        open_.append(inst)

    for v in range(rep.n - 1):
        if rep.orientation[v] == "f":
            open_, seq = _forward_step(rep, open_, instances, v, seq)
        else:
            open_, seq = _backward_step(rep, open_, instances, v, seq)

    dec = IntervalDecomposition(rep, instances)
    dec.verify()
    return dec


def _forward_step(rep, open_, instances, v, seq):
    field = rep.field
    p = field.p
    phi = rep.maps[v].data
    while open_:
        w = np.column_stack([(phi @ inst.vecs[v]) % p for inst in open_])
        ker = kernel_basis(FieldMatrix(w, field))
        if ker.shape[1] == 0:
            break
        kappa = ker.data[:, 0]
        dep = [i for i in range(len(open_)) if kappa[i] % p]
        vi = dep[_choose_absorber([open_[i] for i in dep], rep.orientation)]
        victim = open_[vi]
        scale = field.inv(int(kappa[vi]))
        for i in dep:
            if i == vi:
                continue
            c = (int(kappa[i]) * scale) % p
            _absorb(victim, open_[i], c, v, p)
        open_.pop(vi)
    for inst in open_:
        inst.vecs[v + 1] = (phi @ inst.vecs[v]) % p
        inst.death = v + 1
    if open_:
        img = FieldMatrix(np.column_stack([inst.vecs[v + 1] for inst in open_]), field)
    else:
        img = FieldMatrix.zeros(rep.dims[v + 1], 0, field)
    comp = extend_to_basis(img)
    new_open = list(open_)
    for jcol in range(comp.shape[1]):
        inst = IntervalInstance(v + 1, v + 1, {v + 1: comp.data[:, jcol].copy()}, seq)
        seq += 1
        instances.append(inst)
        new_open.append(inst)
    return new_open, seq


def _backward_step(rep, open_, instances, v, seq):
    field = rep.field
    p = field.p
    psi = rep.maps[v].data
    k = len(open_)
    m = rep.dims[v + 1]
    if k:
        basis = FieldMatrix(
            np.column_stack([inst.vecs[v] for inst in open_]), field
        )
        try:
            binv = mat_inv(basis)
        except Exception as exc:
            raise CertificateError("open instance vectors degenerated") from exc
        z = (binv.data @ psi) % p
    else:
        z = np.zeros((0, m), dtype=np.int64)
    y = np.eye(m, dtype=np.int64)
    consumed_rows = set()
    consumed_cols = set()
    while True:
        target = None
        for j in range(m):
            if j in consumed_cols:
                continue
            if z[:, j].any() if k else False:
                target = j
                break
        if target is None:
            break
        support = [i for i in range(k) if z[i, target] % p]
        cands = [open_[i] for i in support]
        pi = support[_choose_absorber(cands, rep.orientation)]
        survivor = open_[pi]
        cp = int(z[pi, target])
        cp_inv = field.inv(cp)
        for i in support:
            if i == pi:
                continue
            c = (int(z[i, target]) * cp_inv) % p
            _absorb(survivor, open_[i], c, v, p)
            z[i, :] = (z[i, :] - c * z[pi, :]) % p
        z[:, target] = (z[:, target] * cp_inv) % p
        y[:, target] = (y[:, target] * cp_inv) % p
        for l in range(m):
            if l == target:
                continue
            c = int(z[pi, l])
            if c:
                z[:, l] = (z[:, l] - c * z[:, target]) % p
                y[:, l] = (y[:, l] - c * y[:, target]) % p
        survivor.death = v + 1
        survivor.vecs[v + 1] = y[:, target].copy()
        consumed_rows.add(pi)
        consumed_cols.add(target)
    new_open = [open_[i] for i in range(k) if i in consumed_rows]
    for j in range(m):
        if j in consumed_cols:
            continue
        inst = IntervalInstance(v + 1, v + 1, {v + 1: y[:, j].copy()}, seq)
        seq += 1
        instances.append(inst)
        new_open.append(inst)
    return new_open, seq


# ----------------------------------------------------------------------
# Three-vertex zigzag X <- M -> Y and its full-interval block.


@dataclass
class A3Triple:
    """Maps p: M -> X and q: M -> Y out of a shared middle space."""

    p: FieldMatrix
    q: FieldMatrix

    def __post_init__(self):
        if self.p.shape[1] != self.q.shape[1]:
            raise ShapeMismatchError(
                f"middle dimensions differ: p has {self.p.shape[1]}, q has {self.q.shape[1]}"
            )
        if self.p.field.p != self.q.field.p:
            raise DimMismatchError("p and q over different fields")

    @property
    def field(self):
        return self.p.field

    @property
    def dim_x(self):
        return self.p.shape[0]

    @property
    def dim_mid(self):
        return self.p.shape[1]

    @property
    def dim_y(self):
        return self.q.shape[0]


@dataclass
class I13Extraction:
    """Transforms putting a triple into staged normal form.

    In the new coordinates (left_transform on X, middle_basis on M,
    right_transform on Y) the first r3 middle columns carry the full
    intervals: p restricted to them is the identity onto p_image_rows and q
    the identity onto q_image_rows.
    """

    r1: int
    r2: int
    r3: int
    middle_basis: FieldMatrix
    middle_basis_inv: FieldMatrix
    left_transform: FieldMatrix
    right_transform: FieldMatrix
    p_final: FieldMatrix
    q_final: FieldMatrix

    @property
    def i13_columns(self):
        return list(range(self.r3))

    @property
    def p_image_rows(self):
        return list(range(self.r3))

    @property
    def q_image_rows(self):
        return list(range(self.r2, self.r2 + self.r3))

    @property
    def multiplicities(self) -> dict:
        dim_x = self.p_final.shape[0]
        dim_mid = self.p_final.shape[1]
        dim_y = self.q_final.shape[0]
        return {
            (0, 0): dim_x - self.r1,
            (0, 1): self.r1 - self.r3,
            (0, 2): self.r3,
            (1, 1): dim_mid - self.r1 - self.r2,
            (1, 2): self.r2,
            (2, 2): dim_y - self.r2 - self.r3,
        }


def extract_i13(t: A3Triple) -> I13Extraction:
    """Find the full-interval block of X <- M -> Y by staged reduction.

    Stage 1 brings p to Smith form; the middle column operations are pushed
    into q.  Stage 2 normalizes the part of q supported on ker p.  Stage 3
    clears the rows above it with column additions out of ker p columns,
    which cannot touch p.  Stage 4 normalizes what remains of q on the
    non-kernel columns; its column operations disturb the identity block of
    p, which row operations on X restore.  Columns where both final
    matrices hold an identity are the full intervals; their count is r3.
    """
    field = t.field
    p_mod = field.p
    nx, nmid, ny = t.dim_x, t.dim_mid, t.dim_y

    red1 = smith_normal_form(t.p)
    r1 = red1.rank
    p_mat = red1.result.data.copy()
    pp = red1.row_transform.data.copy()
    q_col = red1.col_transform.data.copy()
    q_mat = (t.q.data @ q_col) % p_mod

    red2 = smith_normal_form(FieldMatrix(q_mat[:, r1:], field))
    r2 = red2.rank
    pq = red2.row_transform.data.copy()
    q_mat = (pq @ q_mat) % p_mod
    q_mat[:, r1:] = (q_mat[:, r1:] @ red2.col_transform.data) % p_mod
    q_col[:, r1:] = (q_col[:, r1:] @ red2.col_transform.data) % p_mod

    # Clear rows 0..r2 of the first r1 columns using the identity block
    # sitting in columns r1..r1+r2; those columns vanish under p.
    x3 = q_mat[:r2, :r1].copy()
    if x3.any():
        q_mat[:, :r1] = (q_mat[:, :r1] - q_mat[:, r1 : r1 + r2] @ x3) % p_mod
        q_col[:, :r1] = (q_col[:, :r1] - q_col[:, r1 : r1 + r2] @ x3) % p_mod

    red4 = smith_normal_form(FieldMatrix(q_mat[r2:, :r1], field))
    r3 = red4.rank
    q_mat[r2:, :] = (red4.row_transform.data @ q_mat[r2:, :]) % p_mod
    pq[r2:, :] = (red4.row_transform.data @ pq[r2:, :]) % p_mod
    q_mat[:, :r1] = (q_mat[:, :r1] @ red4.col_transform.data) % p_mod
    q_col[:, :r1] = (q_col[:, :r1] @ red4.col_transform.data) % p_mod
    p_mat[:, :r1] = (p_mat[:, :r1] @ red4.col_transform.data) % p_mod
    # p's identity block became red4.col_transform; undo with row operations.
    fix = mat_inv(FieldMatrix(p_mat[:r1, :r1], field)).data
    p_mat[:r1, :] = (fix @ p_mat[:r1, :]) % p_mod
    pp[:r1, :] = (fix @ pp[:r1, :]) % p_mod

    if r3 > min(r1, r2 + r3):
        raise CertificateError("full-interval count exceeds a tracked rank")
    expect_p = np.zeros((nx, nmid), dtype=np.int64)
    expect_p[:r1, :r1] = np.eye(r1, dtype=np.int64)
    expect_q = np.zeros((ny, nmid), dtype=np.int64)
    expect_q[:r2, r1 : r1 + r2] = np.eye(r2, dtype=np.int64)
    expect_q[r2 : r2 + r3, :r3] = np.eye(r3, dtype=np.int64)
    if not np.array_equal(p_mat, expect_p) or not np.array_equal(q_mat, expect_q):
        raise CertificateError("staged reduction did not reach the expected form")
    if not np.array_equal((pp @ t.p.data @ q_col) % p_mod, p_mat) or not np.array_equal(
        (pq @ t.q.data @ q_col) % p_mod, q_mat
    ):
        raise CertificateError("tracked transforms do not reproduce the normal form")

    middle = FieldMatrix(q_col, field)
    return I13Extraction(
        r1=r1,
        r2=r2,
        r3=r3,
        middle_basis=middle,
        middle_basis_inv=mat_inv(middle),
        left_transform=FieldMatrix(pp, field),
        right_transform=FieldMatrix(pq, field),
        p_final=FieldMatrix(p_mat, field),
        q_final=FieldMatrix(q_mat, field),
    )


def a3_multiplicities(t: A3Triple) -> dict:
    """Interval multiplicities of the triple from ranks and kernels alone.

    Independent of extract_i13; used to cross-check it.  Keys are 0-based
    (birth, death) pairs on vertices X=0, M=1, Y=2.
    """
    kp = kernel_basis(t.p)
    kq = kernel_basis(t.q)
    dim_kp = kp.shape[1]
    dim_kq = kq.shape[1]
    if dim_kp and dim_kq:
        joint = FieldMatrix(np.hstack([kp.data, kq.data]), t.field)
        m11 = dim_kp + dim_kq - rank(joint)
    else:
        m11 = 0
    rank_p = t.dim_mid - dim_kp
    rank_q = t.dim_mid - dim_kq
    return {
        (0, 0): t.dim_x - rank_p,
        (0, 1): dim_kq - m11,
        (0, 2): t.dim_mid - dim_kp - dim_kq + m11,
        (1, 1): m11,
        (1, 2): dim_kp - m11,
        (2, 2): t.dim_y - rank_q,
    }


def restrict_block(
    phi: FieldMatrix, src: I13Extraction, tgt: I13Extraction
) -> FieldMatrix:
    """Full-interval block of a middle-space map between two extracted triples."""
    if phi.shape != (tgt.middle_basis.shape[0], src.middle_basis.shape[0]):
        raise ShapeMismatchError(
            f"middle map shape {phi.shape} does not match the extractions"
        )
    conj = tgt.middle_basis_inv @ phi @ src.middle_basis
    return FieldMatrix(conj.data[: tgt.r3, : src.r3], phi.field)


def diagonal_block(
    vertex_maps, src: IntervalDecomposition, tgt: IntervalDecomposition, interval
) -> FieldMatrix:
    """Block of a morphism carried by one interval, in decomposed bases.

    vertex_maps lists one matrix per vertex.  For a genuine morphism the
    answer is the same at every vertex of the interval; it is read off at
    the first one.
    """
    a, b = int(interval[0]), int(interval[1])
    if src.rep.n != tgt.rep.n or len(vertex_maps) != src.rep.n:
        raise DimMismatchError("vertex map count does not match the representations")
    if not (0 <= a <= b < src.rep.n):
        raise DimMismatchError(f"interval {interval} out of range")
    rows = tgt.block_positions(a, (a, b))
    cols = src.block_positions(a, (a, b))
    if tgt.rep.dims[a] == 0 or src.rep.dims[a] == 0:
        return FieldMatrix.zeros(len(rows), len(cols), src.rep.field)
    conj = mat_inv(tgt.basis_change(a)) @ vertex_maps[a] @ src.basis_change(a)
    return FieldMatrix(conj.data[np.ix_(rows, cols)], src.rep.field)


@dataclass
class InducedMap:
    """Map X -> Y recovered by passing through the full-interval block."""

    matrix: FieldMatrix
    homologically_complete: bool
    consistent: bool
    extraction: I13Extraction


def induced_map_from_triple(t: A3Triple) -> InducedMap:
    """Compose projection to the full-interval coordinates with inclusion.

    The completeness flag says p covers all of X; the consistency flag says
    q kills ker p (checked directly on a kernel basis, not through the
    extraction).  When both hold the matrix equals q composed with any
    right inverse of p.
    """
    ext = extract_i13(t)
    field = t.field
    kp = kernel_basis(t.p)
    consistent = (t.q @ kp).is_zero() if kp.shape[1] else True
    complete = ext.r1 == t.dim_x
    pq_inv = mat_inv(ext.right_transform)
    left = pq_inv.data[:, ext.q_image_rows] if ext.r3 else np.zeros(
        (t.dim_y, 0), dtype=np.int64
    )
    right = ext.left_transform.data[ext.p_image_rows, :] if ext.r3 else np.zeros(
        (0, t.dim_x), dtype=np.int64
    )
    mat = FieldMatrix((left @ right) % field.p, field)
    return InducedMap(
        matrix=mat,
        homologically_complete=complete,
        consistent=consistent,
        extraction=ext,
    )


# ----------------------------------------------------------------------
# Hom spaces between intervals and canonical block-form morphisms.


def hom_dim(orientation: str, src, tgt) -> int:
    """Dimension (0 or 1) of the morphism space I[src] -> I[tgt].

    A morphism is a scalar on the overlap, constant along it, subject to
    vanishing forced at the ends by arrows leaving or entering only one of
    the two supports.
    """
    a, b = src
    c, d = tgt
    n = len(orientation) + 1
    if not (0 <= a <= b < n and 0 <= c <= d < n):
        raise DimMismatchError("interval out of range")
    lo, hi = max(a, c), min(b, d)
    if lo > hi:
        return 0
    in_src = lambda v: a <= v <= b
    in_tgt = lambda v: c <= v <= d
    for i, s in enumerate(orientation):
        v, w = i, i + 1
        if s == "f":
            # for x at v in the source: scalar at w must match scalar at v
            if in_src(v) and in_tgt(w):
                left_on = in_src(w) and in_tgt(w)
                right_on = in_src(v) and in_tgt(v)
                if left_on != right_on and (left_on or right_on):
                    return 0
        else:
            if in_src(w) and in_tgt(v):
                left_on = in_src(v) and in_tgt(v)
                right_on = in_src(w) and in_tgt(w)
                if left_on != right_on and (left_on or right_on):
                    return 0
    return 1


def interval_sum_representation(orientation: str, mults: dict, field: FieldContext):
    """Canonical direct sum of intervals with its trivial decomposition."""
    n = len(orientation) + 1
    instances = []
    seq = 0
    for (b, d) in sorted(mults):
        if not (0 <= b <= d < n):
            raise DimMismatchError(f"interval {(b, d)} out of range")
        for _ in range(mults[(b, d)]):
            instances.append(IntervalInstance(b, d, {}, seq))
            seq += 1
    dims = []
    at_vertex = []
    for v in range(n):
        alive = [inst for inst in instances if inst.birth <= v <= inst.death]
        at_vertex.append(alive)
        dims.append(len(alive))
        for i, inst in enumerate(alive):
            e = np.zeros(len(alive), dtype=np.int64)
            e[i] = 1
            inst.vecs[v] = e
    maps = []
    for i, s in enumerate(orientation):
        src, tgt = (i, i + 1) if s == "f" else (i + 1, i)
        data = np.zeros((dims[tgt], dims[src]), dtype=np.int64)
        rows = {inst.seq: r for r, inst in enumerate(at_vertex[tgt])}
        for jcol, inst in enumerate(at_vertex[src]):
            r = rows.get(inst.seq)
            if r is not None:
                data[r, jcol] = 1
        maps.append(FieldMatrix(data, field))
    rep = AnRepresentation(orientation, dims, maps, field)
    return rep, IntervalDecomposition(rep, instances)


def morphism_from_blocks(
    src: IntervalDecomposition, tgt: IntervalDecomposition, blocks: dict
):
    """Per-vertex matrices of a morphism given by scalar interval blocks.

    blocks maps (src_interval, tgt_interval) to a FieldMatrix of shape
    (tgt multiplicity, src multiplicity).  Blocks on prohibited pairs
    (hom_dim zero) are rejected.
    """
    rep_s, rep_t = src.rep, tgt.rep
    if rep_s.orientation != rep_t.orientation:
        raise DimMismatchError("morphism needs a shared orientation")
    field = rep_s.field
    for (si, ti), mat in blocks.items():
        if hom_dim(rep_s.orientation, si, ti) == 0:
            raise InputError(f"no morphisms from I{list(si)} to I{list(ti)}")
        want = (tgt.multiplicities.get(tuple(ti), 0), src.multiplicities.get(tuple(si), 0))
        if mat.shape != want:
            raise ShapeMismatchError(f"block {si}->{ti}: expected shape {want}")
    out = []
    for v in range(rep_s.n):
        alive_s = src.instances_at(v)
        alive_t = tgt.instances_at(v)
        s_copy = {}
        for inst in alive_s:
            s_copy[inst.seq] = sum(
                1 for j in src.instances if j.interval == inst.interval and j.seq < inst.seq
            )
        t_copy = {}
        for inst in alive_t:
            t_copy[inst.seq] = sum(
                1 for j in tgt.instances if j.interval == inst.interval and j.seq < inst.seq
            )
        data = np.zeros((len(alive_t), len(alive_s)), dtype=np.int64)
        for jcol, inst_s in enumerate(alive_s):
            for irow, inst_t in enumerate(alive_t):
                mat = blocks.get((inst_s.interval, inst_t.interval))
                if mat is None:
                    continue
                data[irow, jcol] = mat.data[t_copy[inst_t.seq], s_copy[inst_s.seq]]
        out.append(FieldMatrix(data, field))
    return out


def verify_morphism(src: AnRepresentation, tgt: AnRepresentation, vertex_maps) -> bool:
    """Check the commuting squares of a candidate morphism."""
    if src.orientation != tgt.orientation or len(vertex_maps) != src.n:
        return False
    for i, s in enumerate(src.orientation):
        if s == "f":
            lhs = vertex_maps[i + 1] @ src.maps[i]
            rhs = tgt.maps[i] @ vertex_maps[i]
        else:
            lhs = vertex_maps[i] @ src.maps[i]
            rhs = tgt.maps[i] @ vertex_maps[i + 1]
        if lhs != rhs:
            return False
    return True
