"""Hessian and Caylean of a ternary cubic, and pencils built from them.

Sign conventions are pinned by two classical values and kept consistent
everywhere: for the diagonal cubic x^3+y^3+z^3 the Hessian is -108xyz and
the Caylean is -54xyz.
"""

from fractions import Fraction

from ..errors import InternalError, RankDeficient, SingularInput
from ..core.linalg import det3, rank
from ..core.poly import TernaryCubic, TriPoly
from ..core.linalg import primitive_vector


def hessian(F):
    """-1/2 times the determinant of the matrix of second partials."""
    p = F.to_tripoly()
    rows = [[p.derivative(i).derivative(j) for j in range(3)] for i in range(3)]
    h = det3(rows) * Fraction(-1, 2)
    return TernaryCubic.from_tripoly(h)


# Rows of first partials are evaluated at (0, z, -y), (-z, 0, x), (y, -x, 0).
# Each substitution is a linear map recorded as a matrix acting on (x, y, z).
_CAYLEAN_SUBS = (
    ((0, 0, 0), (0, 0, 1), (0, -1, 0)),
    ((0, 0, -1), (0, 0, 0), (1, 0, 0)),
    ((0, 1, 0), (-1, 0, 0), (0, 0, 0)),
)

_XYZ = TriPoly({(1, 1, 1): Fraction(1)})


def caylean(F):
    """The contravariant cubic: minus det of the substituted first partials
    divided by xyz.  The division is an identity; a nonzero remainder means
    the implementation broke, not the input."""
    p = F.to_tripoly()
    parts = [p.derivative(i) for i in range(3)]
    rows = [[parts[j].subs_linear(_CAYLEAN_SUBS[i]) for j in range(3)] for i in range(3)]
    d = det3(rows)
    if d.is_zero():
        return TernaryCubic([0] * 10)
    q = d.exact_div(_XYZ)
    if q is None:
        raise InternalError("caylean determinant not divisible by xyz")
    return TernaryCubic.from_tripoly(-q)


def canonical_parameter(s, t):
    """Coprime-integer representative of (s : t), first nonzero entry > 0."""
    ints, _ = primitive_vector((Fraction(s), Fraction(t)))
    if ints == (0, 0):
        raise ValueError("(0, 0) is not a pencil parameter")
    return ints


class Pencil:
    """A line of cubics spanned by an ordered pair of independent forms."""

    def __init__(self, a, b):
        if rank([a.coeffs, b.coeffs]) != 2:
            raise RankDeficient("pencil basis is linearly dependent")
        self.a = a
        self.b = b

    def member(self, s, t):
        s, t = Fraction(s), Fraction(t)
        if s == 0 and t == 0:
            raise ValueError("(0, 0) is not a pencil parameter")
        return self.a.scale(s) + self.b.scale(t)

    def parameter_of(self, G):
        """(s, t) with member(s, t) proportional to G, or None."""
        from ..core.linalg import kernel_basis

        rows = [
            [self.a.coeffs[i], self.b.coeffs[i], G.coeffs[i]] for i in range(10)
        ]
        ker = kernel_basis(rows)
        if len(ker) != 1:
            return None
        s, t, r = ker[0]
        if r == 0:
            return None
        return canonical_parameter(-s / r, -t / r)

    def contains(self, G):
        return self.parameter_of(G) is not None

    def __repr__(self):
        return "Pencil(%r, %r)" % (self.a, self.b)


def hesse_pencil(F):
    """The pencil spanned by F and its Hessian."""
    return Pencil(F, hessian(F))


# parameters at which the Hesse pencil is probed for the dual construction;
# the span of the resulting Cayleans is two dimensional for smooth F, and
# which members get probed does not matter (tested against disjoint sets)
DUAL_PARAMETERS = ((1, 0), (0, 1), (1, 1), (1, -1), (2, 1))
_EXTRA_PARAMETERS = ((3, 1), (1, 2), (3, -1), (1, -2), (4, 1))


def dual_pencil(F, parameters=DUAL_PARAMETERS):
    """Span of the Cayleans of Hesse-pencil members of F, as a Pencil.

    The basis is normalized deterministically: reduced row echelon form of
    the stacked coefficient rows, each row scaled to coprime integers.
    """
    from .singular import is_singular

    flag, _ = is_singular(F)
    if flag:
        raise SingularInput("dual pencil needs a smooth cubic")
    h = hessian(F)
    rows = []
    for s, t in parameters:
        member = F.scale(s) + h.scale(t)
        rows.append(caylean(member).coeffs)
    basis = _span_basis(rows)
    if len(basis) < 2:
        for s, t in _EXTRA_PARAMETERS:
            member = F.scale(s) + h.scale(t)
            rows.append(caylean(member).coeffs)
        basis = _span_basis(rows)
    if len(basis) != 2:
        raise RankDeficient(
            "Cayleans of the probed pencil members span dimension %d" % len(basis)
        )
    pencil = Pencil(TernaryCubic(basis[0]), TernaryCubic(basis[1]))
    # remember the cubic the span came from; the twin parameter
    # correspondence rebuilds covariant bases from it
    pencil._source = F
    return pencil


def _span_basis(rows):
    """Echelon basis of the row span, rows scaled to coprime integers."""
    from ..core.linalg import rref

    reduced, pivots = rref([list(r) for r in rows])
    out = []
    for r in reduced:
        if any(x != 0 for x in r):
            ints, _ = primitive_vector(r)
            out.append(tuple(Fraction(n) for n in ints))
    return out


def spans_match(p1, p2):
    """Exact equality of the 2-dim spans of two pencils."""
    stacked = [p1.a.coeffs, p1.b.coeffs, p2.a.coeffs, p2.b.coeffs]
    return rank(stacked) == 2
