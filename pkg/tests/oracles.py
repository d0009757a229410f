"""Independent cross-checks used by the tests.

Everything in this module is deliberately naive: plain integer
arithmetic mod p, exhaustive searches, dense row reduction on lists of
lists.  Nothing imports from phmap, so agreement between these answers
and the library's is meaningful evidence, not circularity.
"""
import itertools
import math


def mod_rref(rows, p):
    """Row-reduce a list-of-lists matrix over Z/p.  Returns (rows, pivots)."""
    rows = [[v % p for v in row] for row in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if rows[i][c] % p), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = pow(rows[r][c], p - 2, p)
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows, pivots


def mod_rank(rows, p):
    if not rows or not rows[0]:
        return 0
    return len(mod_rref(rows, p)[1])


def mod_matmul(a, b, p):
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        for j in range(m):
            out[i][j] = sum(a[i][t] * b[t][j] for t in range(k)) % p
    return out


def kernel_dim(rows, p):
    """dim ker of the matrix acting on column vectors."""
    if not rows:
        return 0
    ncols = len(rows[0])
    return ncols - mod_rank(rows, p)


def common_kernel_dim(rows_a, rows_b, p):
    """dim (ker A  intersect  ker B) for two matrices with equal ncols."""
    stacked = [list(r) for r in rows_a] + [list(r) for r in rows_b]
    if not stacked:
        return 0
    return kernel_dim(stacked, p)


def torus_dist(a, b, periods):
    """Shortest euclidean distance on a flat torus, via lattice shifts."""
    best = math.inf
    d = len(a)
    for shift in itertools.product((-1, 0, 1), repeat=d):
        s = 0.0
        for i in range(d):
            delta = a[i] - b[i] + shift[i] * periods[i]
            s += delta * delta
        best = min(best, math.sqrt(s))
    return best


def boundary_rows(simplices, k):
    """Dense integer boundary matrix rows of dimension-k simplices.

    simplices: list of vertex tuples (any order, all dims mixed).
    Rows are indexed by (k-1)-simplices, columns by k-simplices.
    """
    cols = sorted(t for t in simplices if len(t) == k + 1)
    rows_ix = sorted(t for t in simplices if len(t) == k)
    row_pos = {t: i for i, t in enumerate(rows_ix)}
    mat = [[0] * len(cols) for _ in rows_ix]
    for j, t in enumerate(cols):
        for i in range(len(t)):
            face = t[:i] + t[i + 1 :]
            if face in row_pos:
                mat[row_pos[face]][j] = (-1) ** i
    return mat, rows_ix, cols


def betti(simplices, degree, p):
    """Betti number in one degree of a plain simplex list (faces included)."""
    n_k = sum(1 for t in simplices if len(t) == degree + 1)
    dk, _, _ = boundary_rows(simplices, degree)
    dk1, _, _ = boundary_rows(simplices, degree + 1)
    rank_dk = mod_rank(dk, p) if degree > 0 else 0
    rank_dk1 = mod_rank(dk1, p)
    return n_k - rank_dk - rank_dk1


def complex_at(fc_simplices, radius):
    """Subcomplex of a [(tuple, birth)] list at a given radius."""
    return [t for (t, b) in fc_simplices if b <= radius]


def forward_interval_multiplicities(dims, maps, p):
    """Interval multiplicities of an all-forward zigzag by the rank formula.

    maps[i] is the matrix of V_i -> V_{i+1} as list-of-lists rows.
    Returns {(b, d): count} over 0 <= b <= d < len(dims).
    """
    n = len(dims)

    def composite_rank(b, d):
        if b == d:
            return dims[b]
        m = [list(r) for r in maps[b]]
        for i in range(b + 1, d):
            m = mod_matmul(maps[i], m, p)
        return mod_rank(m, p)

    r = {}
    for b in range(n):
        for d in range(b, n):
            r[(b, d)] = composite_rank(b, d)
    out = {}
    for b in range(n):
        for d in range(b, n):
            m = r[(b, d)]
            if b > 0:
                m -= r[(b - 1, d)]
            if d + 1 < n:
                m -= r[(b, d + 1)]
            if b > 0 and d + 1 < n:
                m += r[(b - 1, d + 1)]
            if m:
                out[(b, d)] = m
    return out


def _match_cost(u, v):
    bu, du = u
    bv, dv = v
    if math.isinf(du) and math.isinf(dv):
        return abs(bu - bv)
    if math.isinf(du) or math.isinf(dv):
        return math.inf
    return max(abs(bu - bv), abs(du - dv))


def _diag_cost(u):
    b, d = u
    return math.inf if math.isinf(d) else (d - b) / 2.0


def bottleneck_small(pts1, pts2):
    """Exhaustive bottleneck distance for small multisets of (birth, death).

    Both lists must already have multiplicity expanded.  Feasible up to
    about eight points total per side.
    """
    n1, n2 = len(pts1), len(pts2)
    size = n1 + n2
    if size == 0:
        return 0.0

    def cost(i, j):
        if i < n1 and j < n2:
            return _match_cost(pts1[i], pts2[j])
        if i < n1:
            return _diag_cost(pts1[i])
        if j < n2:
            return _diag_cost(pts2[j])
        return 0.0

    best = math.inf
    for perm in itertools.permutations(range(size)):
        worst = 0.0
        for i, j in enumerate(perm):
            worst = max(worst, cost(i, j))
            if worst >= best:
                break
        best = min(best, worst)
    return best


def hom_space_dim(orientation, src_dims, src_maps, tgt_dims, tgt_maps, p):
    """dim Hom(S, T) for two zigzag representations, by brute linear algebra.

    Unknowns are the entries of one matrix per vertex; each arrow
    contributes commuting-square equations.  Maps are list-of-lists rows,
    with arrow i going i->i+1 when orientation[i] == 'f' and i+1->i
    otherwise (in both representations).
    """
    n = len(orientation) + 1
    offsets = []
    total = 0
    for v in range(n):
        offsets.append(total)
        total += tgt_dims[v] * src_dims[v]
    if total == 0:
        return 0

    def var(v, r, c):
        return offsets[v] + r * src_dims[v] + c

    equations = []
    for i, s in enumerate(orientation):
        a = src_maps[i]
        b = tgt_maps[i]
        if s == "f":
            for r in range(tgt_dims[i + 1]):
                for c in range(src_dims[i]):
                    row = [0] * total
                    for k in range(src_dims[i + 1]):
                        row[var(i + 1, r, k)] = (row[var(i + 1, r, k)] + a[k][c]) % p
                    for k in range(tgt_dims[i]):
                        row[var(i, k, c)] = (row[var(i, k, c)] - b[r][k]) % p
                    equations.append(row)
        else:
            for r in range(tgt_dims[i]):
                for c in range(src_dims[i + 1]):
                    row = [0] * total
                    for k in range(src_dims[i]):
                        row[var(i, r, k)] = (row[var(i, r, k)] + a[k][c]) % p
                    for k in range(tgt_dims[i + 1]):
                        row[var(i + 1, k, c)] = (row[var(i + 1, k, c)] - b[r][k]) % p
                    equations.append(row)
    if not equations:
        return total
    return total - mod_rank(equations, p)


def winding_of_angles(angles):
    """Net turns of a closed planar loop given vertex angles in order."""
    total = 0.0
    n = len(angles)
    for i in range(n):
        delta = angles[(i + 1) % n] - angles[i]
        while delta > math.pi:
            delta -= 2 * math.pi
        while delta < -math.pi:
            delta += 2 * math.pi
        total += delta
    return round(total / (2 * math.pi))
