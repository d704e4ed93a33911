"""Exact linear equivalences between smooth plane cubics.

A linear map carrying one cubic onto another must carry the nine flexes of
the first onto the nine flexes of the second while respecting collinearity,
and the collineations of the flex configuration form the affine group of
the plane over F_3: only 432 of them.  So the search enumerates those,
builds each candidate projectivity from a four-point frame numerically,
and keeps the first that survives rational reconstruction plus an exact
substitution check.
"""

from itertools import product

from mpmath import mpf, workprec

from ..core.linalg import det3, inv3, mat_from_cols, mat_mul, mat_vec
from ..core.numerics import (
    DEFAULT_PRECISION,
    loose_tol,
    normalize_projective,
    point_distance,
    solve_linear,
    to_mpc,
)
from ..core.poly import MONOMIALS, act_cubic
from ..core.reconstruct import reconstruct_projective
from ..errors import InsufficientPrecision, SingularInput
from .singular import is_singular

_F3 = (0, 1, 2)
# label l sits at ((l-1) mod 3, (l-1) div 3) in the affine plane over F_3;
# labels 1, 2, 4, 5 then form a frame with no three collinear
_FRAME_LABELS = (1, 2, 4, 5)


def _label_of(v):
    return v[0] + 3 * v[1] + 1


def _vec_of(label):
    return ((label - 1) % 3, (label - 1) // 3)


def _collineations():
    """All 432 label permutations induced by invertible affine maps of the
    F_3 plane; identity first, then a fixed deterministic order."""
    mats = []
    for a, b, c, d in product(_F3, repeat=4):
        if (a * d - b * c) % 3 != 0:
            mats.append(((a, b), (c, d)))
    mats.sort(key=lambda A: (A != ((1, 0), (0, 1)), A))
    out = []
    for A in mats:
        for t in product(_F3, repeat=2):
            sigma = []
            for label in range(1, 10):
                x, y = _vec_of(label)
                nx = (A[0][0] * x + A[0][1] * y + t[0]) % 3
                ny = (A[1][0] * x + A[1][1] * y + t[1]) % 3
                sigma.append(_label_of((nx, ny)))
            out.append(tuple(sigma))
    return out


def _frame_matrix(pts, prec):
    """Matrix whose columns are the first three frame points, scaled so the
    columns sum to the fourth; None when numerically degenerate."""
    p1, p2, p3, p4 = pts
    with workprec(prec + 32):
        rows = [[p1[i], p2[i], p3[i]] for i in range(3)]
        try:
            alpha = solve_linear(rows, list(p4), prec)
        except ZeroDivisionError:
            return None
        amax = max(abs(a) for a in alpha)
        if amax == 0 or min(abs(a) for a in alpha) < loose_tol(prec) * amax:
            return None
        return mat_from_cols(
            tuple(alpha[0] * c for c in p1),
            tuple(alpha[1] * c for c in p2),
            tuple(alpha[2] * c for c in p3),
        )


def _scheme_filter(M, pts1, pts2, sigma, prec):
    """Do the five flexes outside the frame land where sigma says?"""
    with workprec(prec + 32):
        for label in (3, 6, 7, 8, 9):
            img = mat_vec(M, pts1[label - 1])
            try:
                img, _ = normalize_projective(img, prec)
            except ZeroDivisionError:
                return False
            if point_distance(img, pts2[sigma[label - 1] - 1], prec) > loose_tol(prec):
                return False
    return True


def _proportional_numeric(G2, M, G1, prec):
    """Is the pullback of G2 through M proportional to G1, numerically?"""
    with workprec(prec + 32):
        pulled = G2.to_tripoly().subs_linear(M)
        # absent coefficients come back as Fraction(0); keep all entries mpc
        vec = [to_mpc(pulled.coefficient(e), prec) for e in MONOMIALS]
        tgt = [to_mpc(c, prec) for c in G1.coeffs]
        k = max(range(10), key=lambda i: abs(tgt[i]))
        if abs(vec[k]) == 0:
            return False
        lam = vec[k] / tgt[k]
        scale = max(mpf(1), max(abs(v) for v in vec))
        return all(
            abs(v - lam * w) <= loose_tol(prec) * scale for v, w in zip(vec, tgt)
        )


def linear_equivalence(G1, G2, precision=DEFAULT_PRECISION, seed=0,
                       denom_bound=10 ** 20):
    """An exact integer matrix M with act_cubic(G2, M) proportional to G1,
    or None when the curves are not linearly equivalent over the rationals.

    The returned matrix is verified by exact substitution before being
    handed back; None is an answer, not an error.
    """
    from .. import flexconfig

    for G in (G1, G2):
        flag, _ = is_singular(G, precision=DEFAULT_PRECISION, seed=seed)
        if flag:
            raise SingularInput("linear equivalence needs smooth cubics")
    s1 = flexconfig.flex_points(G1, precision, seed=seed)
    s2 = flexconfig.flex_points(G2, precision, seed=seed)
    pts1 = flexconfig.hesse_labeling(s1).arranged(s1)
    pts2 = flexconfig.hesse_labeling(s2).arranged(s2)
    src = _frame_matrix([pts1[l - 1] for l in _FRAME_LABELS], precision)
    if src is None:
        raise InsufficientPrecision("source flex frame is numerically degenerate")
    with workprec(precision + 32):
        try:
            src_inv = inv3(src)
        except ZeroDivisionError:
            raise InsufficientPrecision("source flex frame is not invertible")
    near_miss = False
    for sigma in _collineations():
        tgt = _frame_matrix([pts2[sigma[l - 1] - 1] for l in _FRAME_LABELS], precision)
        if tgt is None:
            continue
        with workprec(precision + 32):
            M = mat_mul(tgt, src_inv)
        if not _scheme_filter(M, pts1, pts2, sigma, precision):
            continue
        if not _proportional_numeric(G2, M, G1, precision):
            continue
        flat = [M[i][j] for i in range(3) for j in range(3)]
        ints = reconstruct_projective(flat, denom_bound, precision - 64)
        if ints is None:
            near_miss = True
            continue
        Mx = (tuple(ints[0:3]), tuple(ints[3:6]), tuple(ints[6:9]))
        if det3(Mx) == 0:
            near_miss = True
            continue
        lam = act_cubic(G2, Mx).proportionality(G1)
        if lam is None or lam == 0:
            near_miss = True
            continue
        return Mx
    if near_miss:
        raise InsufficientPrecision(
            "a candidate equivalence passed the numeric screen but could not "
            "be certified exactly; raise the working precision"
        )
    return None
