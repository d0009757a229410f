"""Command line front end.

Subcommands: synth (write sampled-map fixtures), ph (persistence of one
sampled map), stability (compare two maps), timeseries (a composable
chain of maps), diagram-render (redraw a stored diagram).  Exit codes:
0 success, 2 bad input, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import plots
from .diagram_io import (
    bottleneck,
    read_diagram_json,
    write_diagram_csv,
    write_diagram_json,
    write_diagram_svg,
    write_generators_json,
    write_timeseries_generators_json,
)
from .errors import CertificateError, InputError, PhmapError
from .ffield import make_field
from .geometry import (
    PointCloud,
    SampledMap,
    graph_hausdorff,
    read_sampled_map_csv,
    synth_circle_map,
    synth_torus_map,
    torus_metric,
    write_sampled_map_csv,
)
from .pipeline import (
    build_module,
    cycle_winding_field,
    cycle_winding_number,
    extract_generators,
    induced_h1_matrix,
    module_diagram,
    timeseries_generators,
    timeseries_module,
)

_EMITS = ("json", "csv", "svg", "png")


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--field", type=int, default=1009, metavar="P",
                   help="prime modulus for homology coefficients (default 1009)")
    p.add_argument("--degree", type=int, default=1, metavar="K",
                   help="homology degree (default 1)")
    p.add_argument("--max-dim", type=int, default=None, metavar="D",
                   help="largest simplex dimension (default degree + 1)")
    p.add_argument("--max-radius", type=float, default=None, metavar="R",
                   help="cap filtrations at this radius (default: none)")
    p.add_argument("--metric", choices=("euclidean", "torus"), default="euclidean",
                   help="metric for input points (default euclidean)")
    p.add_argument("--periods", default="1.0", metavar="P1[,P2,...]",
                   help="torus periods per axis; one value broadcasts")
    _add_output_flags(p)


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out-dir", default=None, metavar="DIR",
                   help="output directory (default $PHMAP_OUT_DIR or .)")
    p.add_argument("--emit", default="json,csv,svg", metavar="KINDS",
                   help="comma separated outputs among json,csv,svg,png")
    p.add_argument("--prefix", default=None,
                   help="output file name prefix (default: input stem)")


def _out_dir(args) -> str:
    d = args.out_dir or os.environ.get("PHMAP_OUT_DIR") or "."
    os.makedirs(d, exist_ok=True)
    return d


def _emits(args):
    kinds = [k.strip() for k in args.emit.split(",") if k.strip()]
    for k in kinds:
        if k not in _EMITS:
            raise InputError(f"unknown emit kind {k!r}; choose from {', '.join(_EMITS)}")
    return kinds


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _load_map(path: str, args) -> SampledMap:
    smap = read_sampled_map_csv(path)
    if args.metric == "euclidean":
        return smap
    vals = [float(x) for x in args.periods.split(",") if x.strip()]
    if not vals:
        raise InputError("--periods must list at least one value")
    dim = smap.domain.dim
    if len(vals) == 1:
        vals = vals * dim
    if len(vals) != dim:
        raise InputError(f"{len(vals)} periods for {dim}-dimensional points")
    met = torus_metric(vals)
    return SampledMap(
        PointCloud(smap.domain.points, met), PointCloud(smap.image.points, met)
    )


def _print_diagram(diagram) -> None:
    print(
        f"degree={diagram.degree} field={diagram.field} "
        f"points={len(diagram.points)} classes={diagram.total_multiplicity()}"
    )
    for pt in diagram.points:
        death = "inf" if math.isinf(pt.death) else format(pt.death, ".6g")
        print(
            f"  birth={format(pt.birth, '.6g')} death={death} "
            f"multiplicity={pt.multiplicity}"
        )


def _emit_diagram(diagram, prefix: str, out_dir: str, kinds) -> list:
    written = []
    if "json" in kinds:
        path = os.path.join(out_dir, f"{prefix}_diagram.json")
        write_diagram_json(diagram, path)
        written.append(path)
    if "csv" in kinds:
        path = os.path.join(out_dir, f"{prefix}_diagram.csv")
        write_diagram_csv(diagram, path)
        written.append(path)
    if "svg" in kinds:
        path = os.path.join(out_dir, f"{prefix}_diagram.svg")
        write_diagram_svg(diagram, path)
        written.append(path)
    if "png" in kinds:
        path = os.path.join(out_dir, f"{prefix}_diagram.png")
        plots.plot_diagram(diagram, path)
        written.append(path)
    return written


def cmd_synth(args) -> int:
    if args.kind == "circle":
        smap = synth_circle_map(args.n, args.power, args.sigma, args.seed)
    else:
        if len(args.matrix) != 4:
            raise InputError("--matrix needs four integers: a b c d")
        m = [[args.matrix[0], args.matrix[1]], [args.matrix[2], args.matrix[3]]]
        smap = synth_torus_map(args.grid, m)
    out = args.out or os.path.join(_out_dir(args), f"{args.kind}_map.csv")
    parent = os.path.dirname(out)
    if parent:
        os.makedirs(parent, exist_ok=True)
    write_sampled_map_csv(out, smap)
    print(f"wrote {out} ({smap.n} samples)")
    return 0


def _generator_extras(module, pairs):
    extras = []
    for pair in pairs:
        entry = {}
        try:
            if module.smap.domain.metric.kind == "euclidean":
                if module.smap.domain.dim == 2:
                    entry["domain_winding"] = cycle_winding_number(
                        pair.domain_cycle, module.smap.domain, module.field
                    )
                    entry["image_winding"] = cycle_winding_number(
                        pair.image_cycle, module.image_cloud, module.field
                    )
            else:
                entry["domain_winding_residues"] = [
                    int(v)
                    for v in cycle_winding_field(
                        pair.domain_cycle, module.smap.domain, module.field
                    )
                ]
                entry["image_winding_residues"] = [
                    int(v)
                    for v in cycle_winding_field(
                        pair.image_cycle, module.image_cloud, module.field
                    )
                ]
        except PhmapError:
            pass
        extras.append(entry)
    return extras


def cmd_ph(args) -> int:
    smap = _load_map(args.input, args)
    module = build_module(
        smap,
        degree=args.degree,
        field=make_field(args.field),
        max_dim=args.max_dim,
        max_radius=args.max_radius,
        basis_shuffle_seed=args.seed,
    )
    diagram = module_diagram(module)
    pairs = extract_generators(module)
    _print_diagram(diagram)
    out_dir = _out_dir(args)
    kinds = _emits(args)
    prefix = args.prefix or _stem(args.input)
    written = _emit_diagram(diagram, prefix, out_dir, kinds)
    if "json" in kinds:
        induced = None
        if smap.domain.metric.kind == "torus":
            try:
                induced = induced_h1_matrix(module, pairs)
            except PhmapError:
                induced = None
        path = os.path.join(out_dir, f"{prefix}_generators.json")
        write_generators_json(
            pairs,
            module.degree,
            module.field.p,
            path,
            induced=induced,
            extras=_generator_extras(module, pairs),
        )
        written.append(path)
    if "png" in kinds and pairs and smap.domain.dim >= 2:
        best = max(pairs, key=lambda pr: pr.death - pr.birth)
        path = os.path.join(out_dir, f"{prefix}_generators.png")
        plots.plot_generator_pair(smap.domain, module.image_cloud, best, path)
        written.append(path)
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_stability(args) -> int:
    smap_a = _load_map(args.input_a, args)
    smap_b = _load_map(args.input_b, args)
    field = make_field(args.field)
    diagrams = []
    for smap in (smap_a, smap_b):
        module = build_module(
            smap,
            degree=args.degree,
            field=field,
            max_dim=args.max_dim,
            max_radius=args.max_radius,
        )
        diagrams.append(module_diagram(module))
    h = graph_hausdorff(smap_a, smap_b)
    b = bottleneck(diagrams[0], diagrams[1])
    satisfied = b <= h + 1e-9
    print(
        f"hausdorff={format(h, '.6g')} "
        f"bottleneck={'inf' if math.isinf(b) else format(b, '.6g')} "
        f"satisfied={'true' if satisfied else 'false'}"
    )
    kinds = _emits(args)
    if "json" in kinds:
        out_dir = _out_dir(args)
        prefix = args.prefix or f"{_stem(args.input_a)}_vs_{_stem(args.input_b)}"
        path = os.path.join(out_dir, f"{prefix}_stability.json")
        report = {
            "degree": args.degree,
            "field": args.field,
            "hausdorff": h,
            "bottleneck": "inf" if math.isinf(b) else b,
            "satisfied": bool(satisfied),
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
        print(f"wrote {path}")
    return 0


def cmd_timeseries(args) -> int:
    maps = [_load_map(path, args) for path in args.inputs]
    block = None
    if args.block is not None:
        block = (args.block[0] - 1, args.block[1] - 1)
    module = timeseries_module(
        maps,
        degree=args.degree,
        field=make_field(args.field),
        max_dim=args.max_dim,
        max_radius=args.max_radius,
        block=block,
    )
    diagram = module_diagram(module)
    gens = timeseries_generators(module)
    _print_diagram(diagram)
    out_dir = _out_dir(args)
    kinds = _emits(args)
    prefix = args.prefix or f"{_stem(args.inputs[0])}_chain"
    written = _emit_diagram(diagram, prefix, out_dir, kinds)
    if "json" in kinds:
        path = os.path.join(out_dir, f"{prefix}_generators.json")
        write_timeseries_generators_json(gens, module.degree, module.field.p, path)
        written.append(path)
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_diagram_render(args) -> int:
    diagram = read_diagram_json(args.input)
    out_dir = _out_dir(args)
    kinds = _emits(args)
    prefix = args.prefix or _stem(args.input)
    written = []
    if "svg" in kinds:
        path = os.path.join(out_dir, f"{prefix}.svg")
        write_diagram_svg(diagram, path, cap=args.cap)
        written.append(path)
    if "png" in kinds:
        path = os.path.join(out_dir, f"{prefix}.png")
        plots.plot_diagram(diagram, path, cap=args.cap)
        written.append(path)
    if not written:
        raise InputError("diagram-render emits only svg or png; nothing requested")
    for path in written:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phmap",
        description="Persistent homology of sampled maps, with generators "
        "and induced-map reconstruction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="write a synthetic sampled-map CSV")
    kind = synth.add_subparsers(dest="kind", required=True)
    circle = kind.add_parser("circle", help="points on the unit circle under z^power")
    circle.add_argument("--n", type=int, default=100)
    circle.add_argument("--power", type=int, default=2)
    circle.add_argument("--sigma", type=float, default=0.0,
                        help="gaussian noise per coordinate")
    circle.add_argument("--seed", type=int, default=0)
    torus = kind.add_parser("torus", help="grid on the unit torus under a linear map")
    torus.add_argument("--grid", type=int, default=8)
    torus.add_argument("--matrix", type=int, nargs=4, default=[2, 1, 1, 1],
                       metavar=("A", "B", "C", "D"))
    for p in (circle, torus):
        p.add_argument("--out", default=None, help="output CSV path")
        p.add_argument("--out-dir", default=None,
                       help="directory for the default output name")
        p.set_defaults(func=cmd_synth)

    ph = sub.add_parser("ph", help="persistence diagram and generators of one map")
    ph.add_argument("input", help="sampled-map CSV")
    ph.add_argument("--seed", type=int, default=None,
                    help="shuffle internal homology bases; results must not "
                    "depend on it")
    _add_analysis_flags(ph)
    ph.set_defaults(func=cmd_ph)

    stab = sub.add_parser("stability", help="bottleneck vs graph Hausdorff of two maps")
    stab.add_argument("input_a")
    stab.add_argument("input_b")
    _add_analysis_flags(stab)
    stab.set_defaults(func=cmd_stability)

    ts = sub.add_parser("timeseries", help="persistence of a composable map chain")
    ts.add_argument("inputs", nargs="+", help="sampled-map CSVs, in order")
    ts.add_argument("--block", type=int, nargs=2, default=None, metavar=("B", "D"),
                    help="diagonal block as 1-based row vertices "
                    "(default: the full row)")
    _add_analysis_flags(ts)
    ts.set_defaults(func=cmd_timeseries)

    render = sub.add_parser("diagram-render", help="redraw a stored diagram JSON")
    render.add_argument("input", help="diagram JSON")
    render.add_argument("--cap", type=float, default=None)
    _add_output_flags(render)
    render.set_defaults(func=cmd_diagram_render)
    render.set_defaults(emit="svg,png")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CertificateError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
