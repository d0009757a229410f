"""End-to-end persistence of a sampled map.

build_module turns a sampled map into three filtrations (domain, image,
graph), computes their homology in one degree, and at every radius where
any of them changes assembles the zigzag HC <- HG -> HD.  The staged
extraction keeps only the full-interval part, and the maps induced by
inclusions connect consecutive radii into an ordinary one-direction
persistence module.  Its interval decomposition is the persistence diagram
of the map; each diagram point carries explicit cycles in all three
complexes, recovered by running the instance vectors back through the
tracked basis changes.

timeseries_module does the same for a composable chain of sampled maps,
with a longer zigzag per radius and any choice of diagonal block.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .complexes import (
    FilteredComplex,
    graph_complex,
    mapped_graph_complex,
    vietoris_rips,
)
from .diagram_io import DiagramPoint, PersistenceDiagram
from .errors import (
    AmbiguousLiftError,
    ChainMismatchError,
    DegenerateSpanError,
    DimMismatchError,
)
from .ffield import FieldContext, make_field, rational_reconstruct
from .geometry import PointCloud, SampledMap, dedup_points, wrap_displacement
from .homology import (
    ComplexHomology,
    inclusion_matrix,
    projection_matrix,
    push_chain_tuples,
)
from .linalg import FieldMatrix, mat_inv, random_invertible, rref
from .quiver import (
    A3Triple,
    AnRepresentation,
    I13Extraction,
    IntervalDecomposition,
    decompose_an,
    diagonal_block,
    extract_i13,
    restrict_block,
)


@dataclass
class GeneratorPair:
    """Cycles witnessing one diagram point, reported at the birth radius."""

    birth: float
    death: float
    interval: tuple
    graph_cycle: dict
    domain_cycle: dict
    image_cycle: dict


@dataclass
class SampledMapModule:
    smap: SampledMap
    degree: int
    field: FieldContext
    max_radius: float | None
    radii: list
    C: FilteredComplex
    D: FilteredComplex
    G: FilteredComplex
    HC: ComplexHomology
    HD: ComplexHomology
    HG: ComplexHomology
    image_cloud: PointCloud
    image_index: np.ndarray
    triples: list
    extractions: list
    transitions: list
    rep: AnRepresentation | None
    mid_unshuffle: list | None = None
    _decomposition: IntervalDecomposition | None = dc_field(
        default=None, repr=False, compare=False
    )

    @property
    def dims(self):
        return [ext.r3 for ext in self.extractions]

    @property
    def cap(self) -> float:
        """Largest radius the module describes; finite even when uncapped."""
        if self.max_radius is not None:
            return float(self.max_radius)
        births = [b for (_, b) in self.C.simplices]
        births += [b for (_, b) in self.D.simplices]
        return float(max(births, default=0.0))

    def decomposition(self) -> IntervalDecomposition | None:
        if self.rep is not None and self._decomposition is None:
            self._decomposition = decompose_an(self.rep)
        return self._decomposition


def build_module(
    smap: SampledMap,
    degree: int = 1,
    field: FieldContext | None = None,
    max_dim: int | None = None,
    max_radius: float | None = None,
    basis_shuffle_seed: int | None = None,
) -> SampledMapModule:
    """Assemble the persistence module of a sampled map in one degree.

    The module is evaluated at every radius where the homology of the
    domain, image, or graph complex changes; between those the triples are
    constant up to the inclusion isomorphisms, so nothing is lost.  With
    basis_shuffle_seed set, every space is conjugated by a seeded random
    invertible matrix before extraction; the diagram must not change, and
    tests use the hook to confirm that.
    """
    if field is None:
        field = make_field()
    if max_dim is None:
        max_dim = degree + 1
    if max_dim < degree + 1:
        raise DimMismatchError("max_dim below degree + 1 cannot carry the homology")
    C = vietoris_rips(smap.domain, max_dim, max_radius)
    image_cloud, image_index = dedup_points(smap.image)
    D = vietoris_rips(image_cloud, max_dim, max_radius)
    G = graph_complex(smap, C, D)
    HC = ComplexHomology(C, degree, field)
    HD = ComplexHomology(D, degree, field)
    HG = ComplexHomology(G, degree, field)
    radii = sorted(HC.events() | HD.events() | HG.events())

    rng = (
        np.random.default_rng(basis_shuffle_seed)
        if basis_shuffle_seed is not None
        else None
    )
    triples = []
    extractions = []
    mid_unshuffle = [] if rng is not None else None
    mid_shuffles = []
    for r in radii:
        p_mat = projection_matrix(HG, HC, None, r)
        q_mat = projection_matrix(HG, HD, image_index, r)
        if rng is not None:
            s_x = random_invertible(p_mat.shape[0], field, rng)
            s_m = random_invertible(p_mat.shape[1], field, rng)
            s_y = random_invertible(q_mat.shape[0], field, rng)
            s_m_inv = mat_inv(s_m)
            p_mat = s_x @ p_mat @ s_m_inv
            q_mat = s_y @ q_mat @ s_m_inv
            mid_shuffles.append(s_m)
            mid_unshuffle.append(s_m_inv)
        triple = A3Triple(p_mat, q_mat)
        triples.append(triple)
        extractions.append(extract_i13(triple))

    transitions = []
    for i in range(len(radii) - 1):
        j_mat = inclusion_matrix(HG, radii[i], radii[i + 1])
        if rng is not None:
            j_mat = mid_shuffles[i + 1] @ j_mat @ mid_unshuffle[i]
        transitions.append(restrict_block(j_mat, extractions[i], extractions[i + 1]))

    rep = None
    if radii:
        rep = AnRepresentation(
            "f" * (len(radii) - 1),
            [ext.r3 for ext in extractions],
            transitions,
            field,
        )
    return SampledMapModule(
        smap=smap,
        degree=degree,
        field=field,
        max_radius=max_radius,
        radii=radii,
        C=C,
        D=D,
        G=G,
        HC=HC,
        HD=HD,
        HG=HG,
        image_cloud=image_cloud,
        image_index=image_index,
        triples=triples,
        extractions=extractions,
        transitions=transitions,
        rep=rep,
        mid_unshuffle=mid_unshuffle,
    )


def _instance_endpoints(inst, radii):
    birth = radii[inst.birth]
    death = radii[inst.death + 1] if inst.death + 1 < len(radii) else math.inf
    return float(birth), float(death)


def _diagram_from_rep(module) -> PersistenceDiagram:
    counts = {}
    dec = module.decomposition()
    if dec is not None:
        for inst in dec.instances:
            key = _instance_endpoints(inst, module.radii)
            counts[key] = counts.get(key, 0) + 1
    points = [
        DiagramPoint(birth, death, mult) for (birth, death), mult in counts.items()
    ]
    return PersistenceDiagram(
        degree=module.degree, field=module.field.p, cap=module.cap, points=points
    )


def module_diagram(module) -> PersistenceDiagram:
    """Persistence diagram of an assembled module."""
    return _diagram_from_rep(module)


def homology_diagram(H: ComplexHomology, cap: float | None = None) -> PersistenceDiagram:
    """Ordinary persistence diagram of one complex, for comparisons."""
    counts = {}
    for c in H.classes:
        if c.death > c.birth:
            key = (float(c.birth), float(c.death))
            counts[key] = counts.get(key, 0) + 1
    if cap is None:
        finite = [d for (_, d) in counts if d < math.inf]
        finite += [b for (b, _) in counts]
        cap = max(finite, default=0.0)
    points = [DiagramPoint(b, d, m) for (b, d), m in counts.items()]
    return PersistenceDiagram(degree=H.degree, field=H.field.p, cap=cap, points=points)


def _scale_chain(chain: dict, field: FieldContext) -> dict:
    """Scale a position-keyed chain so its largest position has coefficient one."""
    if not chain:
        return chain
    lead = max(chain)
    s = field.inv(chain[lead] % field.p)
    return {pos: (val * s) % field.p for pos, val in chain.items()}


def _combine_basis(vec, basis_classes, p: int) -> dict:
    out = {}
    for coeff, cls in zip(vec, basis_classes):
        c = int(coeff) % p
        if not c:
            continue
        for pos, val in cls.cycle.items():
            nv = (out.get(pos, 0) + c * val) % p
            if nv:
                out[pos] = nv
            else:
                out.pop(pos, None)
    return out


def extract_generators(module: SampledMapModule, point=None) -> list:
    """Cycle triples for every interval instance of the module.

    Each instance's vector at its birth radius is carried back through the
    extraction's middle basis to a cycle in the graph complex, then pushed
    to the domain (same vertex labels) and the image (vertex map, possibly
    collapsing).  Cycles are scaled so the graph cycle's leading
    coefficient is one.  With point set, only pairs matching that
    (birth, death) are returned.
    """
    dec = module.decomposition()
    if dec is None:
        return []
    p = module.field.p
    out = []
    for inst in dec.instances:
        birth, death = _instance_endpoints(inst, module.radii)
        if point is not None and (birth, death) != (
            float(point[0]),
            float(point[1]),
        ):
            continue
        i = inst.birth
        r = module.radii[i]
        ext: I13Extraction = module.extractions[i]
        x = inst.vecs[i]
        w = ext.middle_basis.data[:, : ext.r3] @ np.asarray(x, dtype=np.int64)
        w %= p
        if module.mid_unshuffle is not None:
            w = (module.mid_unshuffle[i].data @ w) % p
        basis = module.HG.basis_at(r)
        graph_pos = _scale_chain(_combine_basis(w, basis, p), module.field)
        graph_cycle = module.HG.chain_to_tuples(graph_pos)
        domain_cycle = dict(graph_cycle)
        image_cycle = push_chain_tuples(graph_cycle, module.image_index, p)
        out.append(
            GeneratorPair(
                birth=birth,
                death=death,
                interval=(inst.birth, inst.death),
                graph_cycle=graph_cycle,
                domain_cycle=domain_cycle,
                image_cycle=image_cycle,
            )
        )
    return out


# ----------------------------------------------------------------------
# Winding numbers of generator cycles.


def cycle_winding_number(chain: dict, cloud: PointCloud, field: FieldContext) -> int:
    """Planar winding about the origin of a 1-cycle with field coefficients.

    Coefficients are lifted symmetrically around zero; the summed signed
    angles must land on an integer multiple of a full turn.
    """
    total = 0.0
    half = field.p // 2
    for t, coeff in chain.items():
        if len(t) != 2:
            raise DimMismatchError("winding numbers need 1-chains")
        c = coeff % field.p
        if c > half:
            c -= field.p
        u, v = t
        au = math.atan2(cloud.points[u][1], cloud.points[u][0])
        av = math.atan2(cloud.points[v][1], cloud.points[v][0])
        d = av - au
        while d <= -math.pi:
            d += 2 * math.pi
        while d > math.pi:
            d -= 2 * math.pi
        total += c * d
    w = total / (2 * math.pi)
    if abs(w - round(w)) > 1e-6:
        raise AmbiguousLiftError(f"angle sum {w} is not close to an integer")
    return int(round(w))


def cycle_winding_field(chain: dict, cloud: PointCloud, field: FieldContext):
    """Per-axis winding of a mod-p 1-cycle on a flat torus, as residues.

    Edge displacements use minimal lifts and exact binary fractions, so a
    displacement of one eighth of the period contributes exactly 1/8; the
    total winding of a mod-p cycle is well defined only as a residue.
    """
    if cloud.metric.kind != "torus":
        raise DimMismatchError("field windings are defined on flat-torus clouds")
    periods = cloud.metric.periods
    acc = [Fraction(0)] * cloud.dim
    for t, coeff in chain.items():
        if len(t) != 2:
            raise DimMismatchError("winding vectors need 1-chains")
        u, v = t
        delta = wrap_displacement(
            np.asarray(cloud.points[v]) - np.asarray(cloud.points[u]),
            np.asarray(periods),
        )
        for axis in range(cloud.dim):
            step = Fraction(float(delta[axis])) / Fraction(float(periods[axis]))
            if abs(step) == Fraction(1, 2):
                raise AmbiguousLiftError(
                    f"edge {t} spans exactly half the period on axis {axis}"
                )
            acc[axis] += int(coeff) * step
    out = []
    for axis in range(cloud.dim):
        num = acc[axis].numerator % field.p
        den = acc[axis].denominator % field.p
        out.append((num * field.inv(den)) % field.p)
    return out


def induced_h1_matrix(module: SampledMapModule, pairs=None):
    """The degree-1 map on torus homology recovered from generator windings.

    Solves image_winding = M . domain_winding over the field across all
    generator pairs and reconstructs each entry as a rational number.
    Raises DegenerateSpan when the domain windings do not span, or when no
    single matrix fits every pair.
    """
    if pairs is None:
        pairs = extract_generators(module)
    dom_cloud = module.smap.domain
    img_cloud = module.image_cloud
    d = dom_cloud.dim
    field = module.field
    if not pairs:
        raise DegenerateSpanError("no generator pairs to solve from")
    w_dom = np.zeros((d, len(pairs)), dtype=np.int64)
    w_img = np.zeros((d, len(pairs)), dtype=np.int64)
    for j, pair in enumerate(pairs):
        w_dom[:, j] = cycle_winding_field(pair.domain_cycle, dom_cloud, field)
        w_img[:, j] = cycle_winding_field(pair.image_cycle, img_cloud, field)
    wd = FieldMatrix(w_dom, field)
    _, pivots = rref(wd)
    if len(pivots) < d:
        raise DegenerateSpanError(
            f"domain windings span only {len(pivots)} of {d} directions"
        )
    sel = list(pivots)
    m = FieldMatrix(w_img[:, sel], field) @ mat_inv(FieldMatrix(w_dom[:, sel], field))
    if (m @ wd) != FieldMatrix(w_img, field):
        raise DegenerateSpanError("generator pairs are inconsistent with one matrix")
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            row.append(rational_reconstruct(int(m.data[i, j]), field.p))
        out.append(row)
    return out


# ----------------------------------------------------------------------
# Time series: a composable chain of sampled maps.


@dataclass
class TimeseriesGenerator:
    """Cycles of one diagram point at every vertex of the zigzag row."""

    birth: float
    death: float
    interval: tuple
    cycles: dict


@dataclass
class TimeseriesModule:
    maps: list
    degree: int
    field: FieldContext
    max_radius: float | None
    block: tuple
    radii: list
    complexes: list
    homologies: list
    row_orientation: str
    row_decompositions: list
    transitions: list
    rep: AnRepresentation | None
    _decomposition: IntervalDecomposition | None = dc_field(
        default=None, repr=False, compare=False
    )

    @property
    def cap(self) -> float:
        if self.max_radius is not None:
            return float(self.max_radius)
        births = [b for fc in self.complexes[::2] for (_, b) in fc.simplices]
        return float(max(births, default=0.0))

    def decomposition(self) -> IntervalDecomposition | None:
        if self.rep is not None and self._decomposition is None:
            self._decomposition = decompose_an(self.rep)
        return self._decomposition


def timeseries_module(
    maps,
    degree: int = 1,
    field: FieldContext | None = None,
    max_dim: int | None = None,
    max_radius: float | None = None,
    block: tuple | None = None,
) -> TimeseriesModule:
    """Persistence of a chain of sampled maps along one diagonal block.

    Each map's image cloud must be, point for point, the next map's domain
    cloud.  A chain of T maps gives rows with 2T+1 vertices: the T+1
    sample complexes interleaved with the T graph complexes.  Per radius
    the whole row is decomposed; inclusion maps between radii restrict to
    the chosen interval block (default: the full row, whose instances are
    the features surviving every step).
    """
    if field is None:
        field = make_field()
    if max_dim is None:
        max_dim = degree + 1
    maps = list(maps)
    if not maps:
        raise ChainMismatchError("at least one sampled map is required")
    for t in range(len(maps) - 1):
        img, dom = maps[t].image, maps[t + 1].domain
        if img.metric != dom.metric or not np.array_equal(img.points, dom.points):
            raise ChainMismatchError(
                f"image cloud of map {t} differs from domain cloud of map {t + 1}"
            )
    clouds = [m.domain for m in maps] + [maps[-1].image]
    n_row = 2 * len(clouds) - 1
    if block is None:
        block = (0, n_row - 1)
    a, b = int(block[0]), int(block[1])
    if not (0 <= a <= b < n_row):
        raise DimMismatchError(f"block {block} outside vertices 0..{n_row - 1}")
    block = (a, b)

    complexes = []
    sample_cx = [vietoris_rips(c, max_dim, max_radius) for c in clouds]
    for i in range(len(maps)):
        complexes.append(sample_cx[i])
        ident = np.arange(clouds[i].n, dtype=np.int64)
        complexes.append(mapped_graph_complex(sample_cx[i], sample_cx[i + 1], ident))
    complexes.append(sample_cx[-1])
    homologies = [ComplexHomology(fc, degree, field) for fc in complexes]
    radii = sorted(set().union(*(H.events() for H in homologies)))
    orientation = "bf" * len(maps)

    row_decs = []
    for r in radii:
        arrows = []
        for i in range(len(maps)):
            arrows.append(projection_matrix(homologies[2 * i + 1], homologies[2 * i], None, r))
            arrows.append(
                projection_matrix(homologies[2 * i + 1], homologies[2 * i + 2], None, r)
            )
        dims = [H.dim_at(r) for H in homologies]
        row_decs.append(decompose_an(AnRepresentation(orientation, dims, arrows, field)))

    transitions = []
    for i in range(len(radii) - 1):
        vertex_maps = [
            inclusion_matrix(H, radii[i], radii[i + 1]) for H in homologies
        ]
        transitions.append(
            diagonal_block(vertex_maps, row_decs[i], row_decs[i + 1], block)
        )
    rep = None
    if radii:
        dims = [dec.multiplicities.get(block, 0) for dec in row_decs]
        rep = AnRepresentation("f" * (len(radii) - 1), dims, transitions, field)
    return TimeseriesModule(
        maps=maps,
        degree=degree,
        field=field,
        max_radius=max_radius,
        block=block,
        radii=radii,
        complexes=complexes,
        homologies=homologies,
        row_orientation=orientation,
        row_decompositions=row_decs,
        transitions=transitions,
        rep=rep,
    )


def timeseries_generators(module: TimeseriesModule) -> list:
    """Cycle families for every diagram point of a timeseries module."""
    dec = module.decomposition()
    if dec is None:
        return []
    p = module.field.p
    out = []
    a, b = module.block
    for inst in dec.instances:
        birth, death = _instance_endpoints(inst, module.radii)
        i = inst.birth
        r = module.radii[i]
        row_dec = module.row_decompositions[i]
        block_insts = [
            ri for ri in row_dec.instances_at(a) if ri.interval == module.block
        ]
        x = np.asarray(inst.vecs[i], dtype=np.int64)
        scale = None
        cycles = {}
        for v in range(a, b + 1):
            vec = np.zeros(module.homologies[v].dim_at(r), dtype=np.int64)
            for coeff, ri in zip(x, block_insts):
                vec = (vec + int(coeff) * ri.vecs[v]) % p
            basis = module.homologies[v].basis_at(r)
            chain = _combine_basis(vec, basis, p)
            if scale is None and chain:
                lead = max(chain)
                scale = module.field.inv(chain[lead] % p)
            if scale is not None:
                chain = {pos: (val * scale) % p for pos, val in chain.items()}
            cycles[v] = module.homologies[v].chain_to_tuples(chain)
        out.append(
            TimeseriesGenerator(
                birth=birth,
                death=death,
                interval=(inst.birth, inst.death),
                cycles=cycles,
            )
        )
    return out
