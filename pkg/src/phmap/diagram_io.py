"""Persistence diagrams: model, bottleneck distance, serialization.

A diagram is a multiset of (birth, death, multiplicity) points for one
degree, together with the coefficient field and a cap radius recorded so
infinite deaths stay comparable across files.  The bottleneck distance is
computed exactly: the optimum is always one of finitely many candidate
values (pairwise distances and diagonal costs), and feasibility of a
candidate is a bipartite matching question.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass

from .errors import DimMismatchError, ParseError


@dataclass(frozen=True)
class DiagramPoint:
    birth: float
    death: float
    multiplicity: int = 1

    def __post_init__(self):
        if not self.birth <= self.death:
            raise ParseError(f"death {self.death} precedes birth {self.birth}")
        if self.multiplicity < 1:
            raise ParseError(f"multiplicity {self.multiplicity} below one")

    @property
    def lifetime(self) -> float:
        return self.death - self.birth


@dataclass
class PersistenceDiagram:
    degree: int
    field: int
    cap: float
    points: list

    def __post_init__(self):
        merged = {}
        for pt in self.points:
            key = (float(pt.birth), float(pt.death))
            merged[key] = merged.get(key, 0) + int(pt.multiplicity)
        self.points = [
            DiagramPoint(b, d, m) for (b, d), m in sorted(merged.items())
        ]

    def total_multiplicity(self) -> int:
        return sum(pt.multiplicity for pt in self.points)

    def max_lifetime(self) -> float:
        return max((pt.lifetime for pt in self.points), default=0.0)

    def same_points(self, other: "PersistenceDiagram") -> bool:
        """Multiset equality of points, ignoring cap and field."""
        return self.points == other.points


# ----------------------------------------------------------------------
# Bottleneck distance.


def _expand(diagram: PersistenceDiagram):
    finite, infinite = [], []
    for pt in diagram.points:
        for _ in range(pt.multiplicity):
            if math.isinf(pt.death):
                infinite.append(pt.birth)
            else:
                finite.append((pt.birth, pt.death))
    return finite, infinite


def _linf(a, b) -> float:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _diag(a) -> float:
    return (a[1] - a[0]) / 2.0


_EPS_SLACK = 1e-12


def _matchable(f1, f2, eps: float) -> bool:
    """Perfect matching test for threshold eps with diagonal proxies.

    Left side: the points of f1 then one diagonal proxy per point of f2.
    Right side: the points of f2 then one proxy per point of f1.  A real
    point connects to real points within eps and to its own proxy when its
    diagonal cost allows; proxies connect to each other freely.
    """
    n1, n2 = len(f1), len(f2)
    total = n1 + n2
    limit = eps + _EPS_SLACK

    def neighbors(u):
        if u < n1:
            a = f1[u]
            for v in range(n2):
                if _linf(a, f2[v]) <= limit:
                    yield v
            if _diag(a) <= limit:
                yield n2 + u
        else:
            b = f2[u - n1]
            if _diag(b) <= limit:
                yield u - n1
            for v in range(n2, total):
                yield v

    match_right = [-1] * total

    def try_augment(u, seen):
        for v in neighbors(u):
            if seen[v]:
                continue
            seen[v] = True
            if match_right[v] == -1 or try_augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    for u in range(total):
        if not try_augment(u, [False] * total):
            return False
    return True


def bottleneck(d1: PersistenceDiagram, d2: PersistenceDiagram) -> float:
    """Exact bottleneck distance; infinite deaths only match each other."""
    if d1.degree != d2.degree:
        raise DimMismatchError(
            f"diagrams compare in one degree: {d1.degree} vs {d2.degree}"
        )
    f1, i1 = _expand(d1)
    f2, i2 = _expand(d2)
    if len(i1) != len(i2):
        return math.inf
    inf_cost = 0.0
    for a, b in zip(sorted(i1), sorted(i2)):
        inf_cost = max(inf_cost, abs(a - b))
    if not f1 and not f2:
        return inf_cost
    cands = {0.0}
    for a in f1:
        cands.add(_diag(a))
        for b in f2:
            cands.add(_linf(a, b))
    for b in f2:
        cands.add(_diag(b))
    ordered = sorted(cands)
    lo, hi = 0, len(ordered) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _matchable(f1, f2, ordered[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(inf_cost, ordered[lo])


# ----------------------------------------------------------------------
# JSON and CSV serialization.


def _death_out(d: float):
    return "inf" if math.isinf(d) else d


def _death_in(raw, where: str) -> float:
    if raw == "inf":
        return math.inf
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    raise ParseError(f"{where}: death must be a number or \"inf\", got {raw!r}")


def diagram_to_dict(diagram: PersistenceDiagram) -> dict:
    return {
        "degree": diagram.degree,
        "field": diagram.field,
        "cap": diagram.cap,
        "points": [
            {
                "birth": pt.birth,
                "death": _death_out(pt.death),
                "multiplicity": pt.multiplicity,
            }
            for pt in diagram.points
        ],
    }


def diagram_from_dict(data: dict) -> PersistenceDiagram:
    if not isinstance(data, dict):
        raise ParseError("diagram JSON must be an object")
    for key in ("degree", "field", "points"):
        if key not in data:
            raise ParseError(f"diagram JSON lacks the {key!r} key")
    points = []
    raw_points = data["points"]
    if not isinstance(raw_points, list):
        raise ParseError("points must be a list")
    for i, raw in enumerate(raw_points):
        where = f"point {i}"
        if not isinstance(raw, dict):
            raise ParseError(f"{where}: not an object")
        try:
            birth = float(raw["birth"])
            death = _death_in(raw["death"], where)
            mult = int(raw.get("multiplicity", 1))
        except KeyError as exc:
            raise ParseError(f"{where}: missing {exc.args[0]!r}") from exc
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{where}: {exc}") from exc
        if death < birth:
            raise ParseError(f"{where}: death {death} precedes birth {birth}")
        points.append(DiagramPoint(birth, death, mult))
    cap = data.get("cap")
    try:
        return PersistenceDiagram(
            degree=int(data["degree"]),
            field=int(data["field"]),
            cap=float(cap) if cap is not None else 0.0,
            points=points,
        )
    except (TypeError, ValueError) as exc:
        raise ParseError(f"diagram header: {exc}") from exc


def write_diagram_json(diagram: PersistenceDiagram, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(diagram_to_dict(diagram), fh, indent=2)
        fh.write("\n")


def read_diagram_json(path) -> PersistenceDiagram:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc}") from exc
    return diagram_from_dict(data)


def write_diagram_csv(diagram: PersistenceDiagram, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["birth", "death", "multiplicity"])
        for pt in diagram.points:
            writer.writerow([repr(pt.birth), repr(pt.death), pt.multiplicity])


def read_diagram_csv(path, degree: int = 1, field: int = 0, cap: float = 0.0):
    points = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row:
                continue
            if i == 0 and row[0].strip() == "birth":
                continue
            if len(row) != 3:
                raise ParseError(f"{path} line {i + 1}: expected 3 columns")
            try:
                birth = float(row[0])
                death = float(row[1])
                mult = int(row[2])
            except ValueError as exc:
                raise ParseError(f"{path} line {i + 1}: {exc}") from exc
            if death < birth:
                raise ParseError(f"{path} line {i + 1}: death precedes birth")
            points.append(DiagramPoint(birth, death, mult))
    return PersistenceDiagram(degree=degree, field=field, cap=cap, points=points)


def _chain_out(chain: dict) -> list:
    return [
        {"simplex": list(t), "coeff": int(c)} for t, c in sorted(chain.items())
    ]


def generators_to_dict(pairs, degree: int, field: int, induced=None, extras=None) -> dict:
    """Generator cycles grouped under their diagram points.

    pairs is a list of GeneratorPair-like objects; induced, when given, is
    a square matrix of rationals serialized as strings; extras is an
    aligned list of dicts merged into each generator entry (windings and
    the like).
    """
    grouped = {}
    for idx, pair in enumerate(pairs):
        key = (pair.birth, pair.death)
        entry = {
            "domain_cycle": _chain_out(pair.domain_cycle),
            "graph_cycle": _chain_out(pair.graph_cycle),
            "image_cycle": _chain_out(pair.image_cycle),
        }
        if extras is not None and extras[idx]:
            entry.update(extras[idx])
        grouped.setdefault(key, []).append(entry)
    data = {
        "degree": degree,
        "field": field,
        "points": [
            {
                "birth": b,
                "death": _death_out(d),
                "multiplicity": len(gens),
                "generators": gens,
            }
            for (b, d), gens in sorted(grouped.items())
        ],
    }
    if induced is not None:
        data["induced_matrix"] = [[str(entry) for entry in row] for row in induced]
    return data


def write_generators_json(
    pairs, degree: int, field: int, path, induced=None, extras=None
) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(generators_to_dict(pairs, degree, field, induced, extras), fh, indent=2)
        fh.write("\n")


def timeseries_generators_to_dict(gens, degree: int, field: int) -> dict:
    """Per-vertex cycle families of a timeseries run, grouped by point."""
    grouped = {}
    for gen in gens:
        key = (gen.birth, gen.death)
        grouped.setdefault(key, []).append(
            {"cycles": {str(v): _chain_out(chain) for v, chain in sorted(gen.cycles.items())}}
        )
    return {
        "degree": degree,
        "field": field,
        "points": [
            {
                "birth": b,
                "death": _death_out(d),
                "multiplicity": len(gens_),
                "generators": gens_,
            }
            for (b, d), gens_ in sorted(grouped.items())
        ],
    }


def write_timeseries_generators_json(gens, degree: int, field: int, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(timeseries_generators_to_dict(gens, degree, field), fh, indent=2)
        fh.write("\n")


# ----------------------------------------------------------------------
# SVG rendering.


def _fmt(v: float) -> str:
    return format(v, ".6g")


def render_svg(diagram: PersistenceDiagram, cap: float | None = None) -> str:
    """Square diagram plot as deterministic SVG text.

    Finite points are circles scaled and labelled by multiplicity;
    infinite deaths sit on a dashed top line.
    """
    if cap is None:
        cap = diagram.cap
    finite_max = max(
        (pt.death for pt in diagram.points if not math.isinf(pt.death)),
        default=0.0,
    )
    lim = max(cap, finite_max, max((pt.birth for pt in diagram.points), default=0.0))
    if lim <= 0:
        lim = 1.0
    size, margin = 420, 50
    plot = size - 2 * margin

    def x(v):
        return margin + v / lim * plot

    def y(v):
        return size - margin - v / lim * plot

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect x="0" y="0" width="{size}" height="{size}" fill="white"/>',
        f'<rect x="{margin}" y="{margin}" width="{plot}" height="{plot}" '
        'fill="none" stroke="black" stroke-width="1"/>',
        f'<line x1="{_fmt(x(0))}" y1="{_fmt(y(0))}" x2="{_fmt(x(lim))}" '
        f'y2="{_fmt(y(lim))}" stroke="gray" stroke-width="1"/>',
        f'<text x="{size // 2}" y="{size - 12}" text-anchor="middle" '
        f'font-size="12">birth (degree {diagram.degree})</text>',
        f'<text x="14" y="{size // 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {size // 2})">death</text>',
        f'<text x="{margin}" y="{size - margin + 16}" text-anchor="middle" '
        'font-size="10">0</text>',
        f'<text x="{size - margin}" y="{size - margin + 16}" text-anchor="middle" '
        f'font-size="10">{_fmt(lim)}</text>',
    ]
    has_inf = any(math.isinf(pt.death) for pt in diagram.points)
    if has_inf:
        lines.append(
            f'<line x1="{margin}" y1="{margin}" x2="{size - margin}" y2="{margin}" '
            'stroke="gray" stroke-width="1" stroke-dasharray="4 3"/>'
        )
        lines.append(
            f'<text x="{size - margin + 6}" y="{margin + 4}" font-size="10">inf</text>'
        )
    for pt in diagram.points:
        px = x(pt.birth)
        py = margin if math.isinf(pt.death) else y(pt.death)
        radius = 4 + 2 * min(pt.multiplicity - 1, 3)
        lines.append(
            f'<circle cx="{_fmt(px)}" cy="{_fmt(py)}" r="{radius}" '
            'fill="steelblue" fill-opacity="0.7" stroke="black" stroke-width="1"/>'
        )
        if pt.multiplicity > 1:
            lines.append(
                f'<text x="{_fmt(px + radius + 3)}" y="{_fmt(py - radius - 1)}" '
                f'font-size="11">{pt.multiplicity}</text>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_diagram_svg(diagram: PersistenceDiagram, path, cap: float | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(diagram, cap))
