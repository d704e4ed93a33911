"""The nine inflection points of a smooth plane cubic and their geometry.

The nine flexes carry twelve lines, three points each, falling into four
triangles; combinatorially this is the affine plane over F_3.  That rigidity
means the points can always be relabeled 1..9 so the collinear triples form
one fixed table, and the labeling is what everything else hangs off: the
dual construction intersects the two other lines of each triangle, collects
the twelve resulting vertices, and refits a line through the four vertices
sharing each label, giving nine points of the dual plane.
"""

from mpmath import mpf, workprec

from .core.intersect import common_zeros
from .core.linalg import cross, det3, mat_vec
from .core.numerics import (
    DEFAULT_PRECISION,
    loose_tol,
    normalize_projective,
    nullspace_vector,
    point_distance,
    to_mpc,
)
from .covariants.forms import hessian
from .covariants.singular import is_singular
from .errors import (
    BadConfiguration,
    DegenerateIntersection,
    MathError,
    SingularInput,
)

# the fixed table: twelve collinear label triples, grouped into the four
# triangles; label l sits at ((l-1) mod 3, (l-1) div 3) over F_3 and each
# triangle collects the lines of one direction
CANONICAL_TRIANGLES = (
    ((1, 2, 3), (4, 5, 6), (7, 8, 9)),
    ((1, 4, 7), (2, 5, 8), (3, 6, 9)),
    ((1, 5, 9), (2, 6, 7), (3, 4, 8)),
    ((1, 6, 8), (2, 4, 9), (3, 5, 7)),
)
CANONICAL_LINES = tuple(line for tri in CANONICAL_TRIANGLES for line in tri)


class FlexScheme:
    """Nine normalized projective points plus the precision they carry.

    source is the cubic they were computed from, or None for derived
    schemes (duals, transformed copies)."""

    def __init__(self, points, precision, source=None):
        self.points = tuple(tuple(p) for p in points)
        self.precision = precision
        self.source = source

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        return f"FlexScheme({len(self.points)} points at {self.precision} bits)"


class HesseLabeling:
    """order[k] = index (into the scheme's point tuple) of the point that
    gets label k+1; the lines are then always the canonical table."""

    def __init__(self, order):
        self.order = tuple(order)
        self.lines = CANONICAL_LINES
        self.triangles = CANONICAL_TRIANGLES

    def arranged(self, scheme):
        """The scheme's points permuted into label order 1..9."""
        return tuple(scheme.points[i] for i in self.order)


def flex_points(G, precision=DEFAULT_PRECISION, seed=0):
    """Intersect a smooth cubic with its Hessian: all nine flexes, polished
    and pairwise well separated."""
    if G.is_zero():
        raise MathError("the zero form has no flexes")
    flag, _ = is_singular(G, precision=min(precision, DEFAULT_PRECISION), seed=seed)
    if flag:
        raise SingularInput("flex scheme of a singular cubic")
    pts = common_zeros(G.to_tripoly(), hessian(G).to_tripoly(), precision, seed=seed)
    if len(pts) != 9:
        raise DegenerateIntersection(
            f"expected 9 flexes, found {len(pts)} at {precision} bits"
        )
    with workprec(precision + 32):
        sep = loose_tol(precision)
        for i in range(9):
            for j in range(i + 1, 9):
                if point_distance(pts[i], pts[j], precision) < sep:
                    raise DegenerateIntersection("flex points collide numerically")
    return FlexScheme(pts, precision, source=G)


def _collinear_triples(pts, prec):
    """The twelve collinear triples among nine points, as frozensets of
    indices, with a margin check separating them from everything else."""
    dets = {}
    with workprec(prec + 32):
        for i in range(9):
            for j in range(i + 1, 9):
                for k in range(j + 1, 9):
                    dets[(i, j, k)] = abs(det3((pts[i], pts[j], pts[k])))
        thin = mpf(2) ** (-(prec // 4))
        lines = [t for t, d in dets.items() if d < thin]
        others = [d for d in dets.values() if d >= thin]
    if len(lines) != 12:
        raise BadConfiguration(
            f"found {len(lines)} collinear triples among the flexes, want 12"
        )
    if others and min(others) < loose_tol(prec):
        raise BadConfiguration("collinearity margins too thin to trust")
    return [frozenset(t) for t in lines]


def _third_map(lines):
    third = {}
    for line in lines:
        a, b, c = sorted(line)
        third[frozenset((a, b))] = c
        third[frozenset((a, c))] = b
        third[frozenset((b, c))] = a
    return third


def hesse_labeling(scheme):
    """Relabel the nine points so the collinear triples match the canonical
    table.  The first three labels fix a line, label 4 an off-line point,
    and every further label is forced by third-point closure; candidates are
    tried in a fixed order, so the result is deterministic."""
    lines = _collinear_triples(scheme.points, scheme.precision)
    third = _third_map(lines)
    if len(third) != 36:
        raise BadConfiguration("the twelve lines do not cover every point pair")
    lineset = set(lines)
    for p1 in range(9):
        for p2 in range(9):
            if p2 == p1:
                continue
            p3 = third[frozenset((p1, p2))]
            for p4 in range(9):
                if p4 in (p1, p2, p3):
                    continue
                p7 = third[frozenset((p1, p4))]
                p9 = third[frozenset((p2, p4))]
                p8 = third[frozenset((p3, p4))]
                if len({p1, p2, p3, p4, p7, p8, p9}) != 7:
                    continue
                p5 = third[frozenset((p1, p9))]
                if p5 in (p1, p2, p3, p4, p7, p8, p9):
                    continue
                p6 = third[frozenset((p4, p5))]
                order = (p1, p2, p3, p4, p5, p6, p7, p8, p9)
                if len(set(order)) != 9:
                    continue
                if all(
                    frozenset(order[a - 1] for a in line) in lineset
                    for line in CANONICAL_LINES
                ):
                    return HesseLabeling(order)
    raise BadConfiguration("no labeling matches the canonical table")


def dual_scheme(scheme, labeling=None):
    """The nine lines p_i, each through the four triangle vertices whose
    labels contain i, returned as points of the dual plane."""
    if labeling is None:
        labeling = hesse_labeling(scheme)
    pts = labeling.arranged(scheme)
    prec = scheme.precision
    tight = mpf(2) ** (-(prec // 4))
    with workprec(prec + 32):
        coords = {}
        for line in CANONICAL_LINES:
            rows = [pts[a - 1] for a in line]
            vec, s0, s1 = nullspace_vector(rows, prec)
            if s0 > tight or s1 < loose_tol(prec):
                raise BadConfiguration("line fit through a label triple failed")
            coords[line] = tuple(vec)
        vertex = {}
        for tri in CANONICAL_TRIANGLES:
            for skip, line in enumerate(tri):
                a, b = [coords[l] for pos, l in enumerate(tri) if pos != skip]
                pt, _ = normalize_projective(cross(a, b), prec)
                vertex[line] = pt
        duals = []
        for label in range(1, 10):
            rows = [vertex[line] for line in CANONICAL_LINES if label in line]
            if len(rows) != 4:
                raise BadConfiguration("labeling does not give four vertices per index")
            vec, s0, s1 = nullspace_vector(rows, prec)
            if s0 > tight or s1 < loose_tol(prec):
                raise BadConfiguration(
                    "the four triangle vertices for one label are not collinear"
                )
            p, _ = normalize_projective(vec, prec)
            duals.append(p)
    return FlexScheme(duals, prec, source=None)


def scheme_equal(s1, s2, threshold=None):
    """Point-set equality modulo reordering, by greedy nearest matching."""
    if len(s1.points) != len(s2.points):
        return False
    prec = min(s1.precision, s2.precision)
    if threshold is None:
        threshold = loose_tol(prec)
    with workprec(prec + 32):
        unused = list(range(len(s2.points)))
        for p in s1.points:
            best, bidx = None, None
            for i in unused:
                d = point_distance(p, s2.points[i], prec)
                if best is None or d < best:
                    best, bidx = d, i
            if best is None or best > threshold:
                return False
            unused.remove(bidx)
    return True


def transform_scheme(scheme, M):
    """Apply a matrix to every point.  The source cubic is dropped: the
    transformed points belong to a different curve."""
    prec = scheme.precision
    with workprec(prec + 32):
        Mn = tuple(tuple(to_mpc(c, prec) for c in row) for row in M)
        out = []
        for p in scheme.points:
            q, _ = normalize_projective(mat_vec(Mn, p), prec)
            out.append(q)
    return FlexScheme(out, prec, source=None)
