"""The nine projective transformations preserving a flex scheme, and the
commutator pairing of their matrix lifts.

On labels, a flex configuration is the affine plane over F_3, and the
transformations preserving the scheme pointwise-on-labels realize exactly
the nine translations: commuting projective transforms of order three.
Their matrix lifts do not commute; the commutator of two lifts is a scalar
cube root of unity, and that scalar is the pairing.  The anti-isometry
check is the computational face of duality here: inverse-transpose carries
the stabilizer of a scheme onto the stabilizer of its dual scheme while
inverting the pairing.
"""

from mpmath import exp, mpc, mpf, pi, workprec

from . import flexconfig
from .core.linalg import inv3, mat_mul, mat_vec, transpose3
from .core.numerics import (
    DEFAULT_PRECISION,
    loose_tol,
    normalize_projective,
    point_distance,
    tol,
)
from .covariants.equivalence import _FRAME_LABELS, _frame_matrix, _label_of, _vec_of
from .errors import BadConfiguration, NonScalarCommutator


class ProjTransform:
    """A projective transformation held as one normalized lift (largest
    entry exactly 1); two transforms agree iff lifts are proportional."""

    def __init__(self, lift, precision):
        flat = [lift[i][j] for i in range(3) for j in range(3)]
        flat, _ = normalize_projective(flat, precision)
        self.lift = (tuple(flat[0:3]), tuple(flat[3:6]), tuple(flat[6:9]))
        self.precision = precision

    def flat(self):
        return tuple(c for row in self.lift for c in row)

    def same_as(self, other):
        prec = min(self.precision, other.precision)
        return point_distance(self.flat(), other.flat(), prec) < loose_tol(prec)

    def __repr__(self):
        return f"ProjTransform({self.precision} bits)"


class ThetaStabilizer:
    """elements: nine ProjTransforms, identity first (element k translates
    labels by the F_3 vector of label k+1).  cayley_table[i][j] is the index
    of the composition.  pairing[i][j] is an exponent in {0,1,2}: the lifts
    satisfy L_i L_j = w^pairing[i][j] L_j L_i with w = exp(2 pi i/3)."""

    def __init__(self, elements, cayley_table, pairing):
        self.elements = elements
        self.cayley_table = cayley_table
        self.pairing = pairing

    def __len__(self):
        return len(self.elements)


def _translation_sigma(k):
    """Label permutation of the k-th translation (k = 0 is the identity)."""
    t = _vec_of(k + 1)
    out = []
    for label in range(1, 10):
        x, y = _vec_of(label)
        out.append(_label_of(((x + t[0]) % 3, (y + t[1]) % 3)))
    return tuple(out)


def stabilizer(scheme, labeling=None):
    """The nine transforms permuting the scheme, one per F_3 translation.

    Each is built from a four-point frame correspondence, then verified to
    permute all nine points; closure of the composition table is also
    verified numerically rather than assumed."""
    if labeling is None:
        labeling = flexconfig.hesse_labeling(scheme)
    pts = labeling.arranged(scheme)
    prec = scheme.precision
    src = _frame_matrix([pts[l - 1] for l in _FRAME_LABELS], prec)
    if src is None:
        raise BadConfiguration("flex frame is numerically degenerate")
    with workprec(prec + 32):
        src_inv = inv3(src)
    elements = []
    for k in range(9):
        sigma = _translation_sigma(k)
        tgt = _frame_matrix([pts[sigma[l - 1] - 1] for l in _FRAME_LABELS], prec)
        if tgt is None:
            raise BadConfiguration("translated flex frame is degenerate")
        with workprec(prec + 32):
            M = mat_mul(tgt, src_inv)
            for label in range(1, 10):
                img, _ = normalize_projective(mat_vec(M, pts[label - 1]), prec)
                if point_distance(img, pts[sigma[label - 1] - 1], prec) > loose_tol(prec):
                    raise BadConfiguration(
                        "candidate stabilizer element does not permute the scheme"
                    )
        elements.append(ProjTransform(M, prec))
    cayley = []
    for i in range(9):
        vi = _vec_of(i + 1)
        row = []
        for j in range(9):
            vj = _vec_of(j + 1)
            k = _label_of(((vi[0] + vj[0]) % 3, (vi[1] + vj[1]) % 3)) - 1
            with workprec(prec + 32):
                prod = mat_mul(elements[i].lift, elements[j].lift)
                if not ProjTransform(prod, prec).same_as(elements[k]):
                    raise BadConfiguration("stabilizer is not closed under composition")
            row.append(k)
        cayley.append(tuple(row))
    pairing = _pairing_from_lifts(elements, prec)
    return ThetaStabilizer(tuple(elements), tuple(cayley), pairing)


def _pairing_from_lifts(elements, prec):
    """Exponent table of commutator scalars: L_i L_j = w^k L_j L_i."""
    with workprec(prec + 32):
        omega = exp(2 * pi * mpc(0, 1) / 3)
        roots = (mpc(1), omega, omega * omega)
        table = []
        for gi in elements:
            row = []
            for gj in elements:
                A = mat_mul(gi.lift, gj.lift)
                B = mat_mul(gj.lift, gi.lift)
                flat_a = [A[r][c] for r in range(3) for c in range(3)]
                flat_b = [B[r][c] for r in range(3) for c in range(3)]
                piv = max(range(9), key=lambda n: abs(flat_b[n]))
                if abs(flat_b[piv]) == 0:
                    raise NonScalarCommutator("degenerate lift product")
                scal = flat_a[piv] / flat_b[piv]
                scale = max(abs(x) for x in flat_b)
                resid = max(abs(a - scal * b) for a, b in zip(flat_a, flat_b))
                if resid > tol(prec) * scale:
                    raise NonScalarCommutator(
                        "commutator of lifts is not scalar to working accuracy"
                    )
                dists = [abs(scal - r) for r in roots]
                best = min(range(3), key=lambda n: dists[n])
                if dists[best] > loose_tol(prec):
                    raise NonScalarCommutator(
                        "commutator scalar is not a cube root of unity"
                    )
                row.append(best)
            table.append(tuple(row))
        return tuple(table)


def weil_pairing_table(stab):
    """Recompute the commutator pairing of a stabilizer from its lifts,
    as exponents of exp(2 pi i/3)."""
    prec = stab.elements[0].precision
    return _pairing_from_lifts(stab.elements, prec)


class AntiIsometryReport:
    """Outcome of the duality check; truthy iff everything matched."""

    def __init__(self, ok, index_map, max_distance, bijective, pairing_inverted):
        self.ok = ok
        self.index_map = index_map
        self.max_distance = max_distance
        self.bijective = bijective
        self.pairing_inverted = pairing_inverted

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return (
            f"AntiIsometryReport(ok={self.ok}, bijective={self.bijective}, "
            f"pairing_inverted={self.pairing_inverted})"
        )


def anti_isometry_check(scheme):
    """Verify that lift -> inverse-transpose maps the stabilizer of the
    scheme onto the stabilizer of its dual and inverts the pairing.

    Returns a report rather than raising on mismatch: a False report is a
    finding.  Errors from the constituent constructions still propagate."""
    labeling = flexconfig.hesse_labeling(scheme)
    s1 = stabilizer(scheme, labeling)
    dual = flexconfig.dual_scheme(scheme, labeling)
    s2 = stabilizer(dual)
    prec = scheme.precision
    index_map = []
    worst = mpf(0)
    with workprec(prec + 32):
        for g in s1.elements:
            cand = ProjTransform(transpose3(inv3(g.lift)), prec)
            best, bidx = None, None
            for idx, h in enumerate(s2.elements):
                d = point_distance(cand.flat(), h.flat(), prec)
                if best is None or d < best:
                    best, bidx = d, idx
            worst = max(worst, best)
            index_map.append(bidx)
    bijective = len(set(index_map)) == 9
    matched = worst < loose_tol(prec)
    inverted = all(
        s2.pairing[index_map[i]][index_map[j]] == (-s1.pairing[i][j]) % 3
        for i in range(9)
        for j in range(9)
    )
    ok = bijective and matched and inverted
    return AntiIsometryReport(ok, tuple(index_map), worst, bijective, inverted)
