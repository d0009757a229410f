"""Persistent homology of sampled maps.

Given a finite sample S and its image under a map f, this package builds
filtered complexes on S, on f(S), and on the graph of f, decomposes the
resulting zigzag of homology triples into intervals, and keeps the block
carried by full intervals.  That block is an ordinary one-directional
persistence module: its diagram and generators describe how f acts on
homology at every scale.
"""

from .errors import CertificateError, InputError, PhmapError
from .ffield import DEFAULT_PRIME, FieldContext, FieldElement, make_field
from .linalg import FieldMatrix, smith_normal_form
from .geometry import (
    EUCLIDEAN,
    Metric,
    PointCloud,
    SampledMap,
    graph_hausdorff,
    hausdorff,
    read_point_cloud_csv,
    read_sampled_map_csv,
    synth_circle_map,
    synth_torus_map,
    torus_metric,
    write_point_cloud_csv,
    write_sampled_map_csv,
)
from .complexes import (
    FilteredComplex,
    graph_complex,
    mapped_graph_complex,
    vietoris_rips,
    write_complex_dump,
)
from .homology import ComplexHomology, betti_at
from .quiver import (
    A3Triple,
    AnRepresentation,
    I13Extraction,
    IntervalDecomposition,
    a3_multiplicities,
    decompose_an,
    extract_i13,
    hom_dim,
    induced_map_from_triple,
)
from .pipeline import (
    GeneratorPair,
    SampledMapModule,
    TimeseriesModule,
    build_module,
    cycle_winding_field,
    cycle_winding_number,
    extract_generators,
    induced_h1_matrix,
    module_diagram,
    timeseries_generators,
    timeseries_module,
)
from .diagram_io import (
    DiagramPoint,
    PersistenceDiagram,
    bottleneck,
    read_diagram_csv,
    read_diagram_json,
    write_diagram_csv,
    write_diagram_json,
    write_diagram_svg,
    write_generators_json,
)

__version__ = "0.1.0"

__all__ = [
    "PhmapError",
    "InputError",
    "CertificateError",
    "DEFAULT_PRIME",
    "FieldContext",
    "FieldElement",
    "make_field",
    "FieldMatrix",
    "smith_normal_form",
    "EUCLIDEAN",
    "Metric",
    "PointCloud",
    "SampledMap",
    "hausdorff",
    "graph_hausdorff",
    "torus_metric",
    "synth_circle_map",
    "synth_torus_map",
    "read_point_cloud_csv",
    "write_point_cloud_csv",
    "read_sampled_map_csv",
    "write_sampled_map_csv",
    "FilteredComplex",
    "vietoris_rips",
    "graph_complex",
    "mapped_graph_complex",
    "write_complex_dump",
    "ComplexHomology",
    "betti_at",
    "A3Triple",
    "AnRepresentation",
    "I13Extraction",
    "IntervalDecomposition",
    "a3_multiplicities",
    "decompose_an",
    "extract_i13",
    "hom_dim",
    "induced_map_from_triple",
    "GeneratorPair",
    "SampledMapModule",
    "TimeseriesModule",
    "build_module",
    "module_diagram",
    "extract_generators",
    "induced_h1_matrix",
    "cycle_winding_number",
    "cycle_winding_field",
    "timeseries_generators",
    "timeseries_module",
    "PersistenceDiagram",
    "DiagramPoint",
    "bottleneck",
    "read_diagram_json",
    "write_diagram_json",
    "read_diagram_csv",
    "write_diagram_csv",
    "write_diagram_svg",
    "write_generators_json",
]
