"""Univariate polynomials over a commutative ring, resultants, binary forms.

UniPoly stores ascending coefficient lists.  Coefficients are Fractions on
the main paths, but the resultant machinery is written against a tiny ring
protocol (add, mul, neg, zero test, exact division) so that TriPoly or even
UniPoly coefficients work too; that is what turns two ternary cubics into
their degree-9 eliminant without any symbolic dependency.
"""

from fractions import Fraction

from ..errors import InternalError, NonConvergence
from .poly import TriPoly


def _is_zero(c):
    if hasattr(c, "is_zero"):
        return c.is_zero()
    return c == 0


def _zero_like(c):
    if isinstance(c, TriPoly):
        return TriPoly()
    if isinstance(c, UniPoly):
        return UniPoly([])
    return Fraction(0)


def _one_like(c):
    if isinstance(c, TriPoly):
        return TriPoly.constant(Fraction(1))
    if isinstance(c, UniPoly):
        return UniPoly([Fraction(1)])
    return Fraction(1)


def _ring_div(a, b):
    """Exact division in the coefficient ring; raises if not exact."""
    if isinstance(a, TriPoly) or isinstance(b, TriPoly):
        if not isinstance(a, TriPoly):
            a = TriPoly.constant(a)
        if not isinstance(b, TriPoly):
            b = TriPoly.constant(b)
        return a.exact_div(b)
    if isinstance(a, UniPoly) or isinstance(b, UniPoly):
        if not isinstance(a, UniPoly):
            a = UniPoly([a])
        if not isinstance(b, UniPoly):
            b = UniPoly([b])
        q, r = a.divmod_exactable(b)
        if not r.is_zero():
            raise InternalError("inexact division in Bareiss elimination")
        return q
    return a / b


class UniPoly:
    """Dense univariate polynomial, ascending coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = list(coeffs)
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = cs

    @classmethod
    def from_rationals(cls, coeffs):
        return cls([Fraction(c) for c in coeffs])

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1

    def leading(self):
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if other == 0:
            return not self.coeffs
        return self.coeffs == [other]

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __add__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else 0
            b = other.coeffs[i] if i < len(other.coeffs) else 0
            out.append(a + b)
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            if _is_zero(other):
                return UniPoly([])
            return UniPoly([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return UniPoly([])
        zero = _zero_like(self.coeffs[0])
        out = [zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def evaluate(self, x):
        if not self.coeffs:
            return 0
        total = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            total = total * x + c
        return total

    def derivative(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod_exactable(self, other):
        """Polynomial long division; requires divisions by other's leading
        coefficient to stay in the ring (always true over Fraction)."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.degree() < other.degree():
            return UniPoly([]), self
        lead = other.leading()
        rem = list(self.coeffs)
        qdeg = self.degree() - other.degree()
        q = [_zero_like(lead)] * (qdeg + 1)
        for k in range(qdeg, -1, -1):
            top = rem[k + other.degree()]
            if _is_zero(top):
                continue
            factor = _ring_div(top, lead)
            q[k] = factor
            for i, c in enumerate(other.coeffs):
                rem[k + i] = rem[k + i] - factor * c
        return UniPoly(q), UniPoly(rem)

    def __divmod__(self, other):
        return self.divmod_exactable(other)

    def gcd(self, other):
        """Monic gcd over a field (Fraction coefficients)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, divmod(a, b)[1]
        if a.is_zero():
            return a
        lead = a.leading()
        return UniPoly([c / lead for c in a.coeffs])

    def squarefree_part(self):
        d = self.derivative()
        if d.is_zero():
            return self
        g = self.gcd(d)
        if g.degree() <= 0:
            return self
        return divmod(self, g)[0]

    def __repr__(self):
        return f"UniPoly({self.coeffs!r})"


def resultant(p, q):
    """Sylvester resultant of two nonzero polynomials, exact.

    Works over any coefficient ring with exact division (Fraction, TriPoly,
    nested UniPoly); the determinant is computed fraction-free (Bareiss).
    """
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial is undefined here")
    m, n = p.degree(), q.degree()
    some = p.coeffs[0] if p.coeffs else q.coeffs[0]
    one = _one_like(some)
    if m == 0 and n == 0:
        return one
    if m == 0:
        out = one
        for _ in range(n):
            out = out * p.coeffs[0]
        return out
    if n == 0:
        out = one
        for _ in range(m):
            out = out * q.coeffs[0]
        return out
    size = m + n
    zero = _zero_like(some)
    pd = list(reversed(p.coeffs))
    qd = list(reversed(q.coeffs))
    rows = []
    for i in range(n):
        rows.append([zero] * i + pd + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qd + [zero] * (size - n - 1 - i))
    return _bareiss_det(rows)


def _bareiss_det(rows):
    n = len(rows)
    A = [list(r) for r in rows]
    zero = _zero_like(A[0][0])
    sign = 1
    prev = None
    for k in range(n - 1):
        if _is_zero(A[k][k]):
            for i in range(k + 1, n):
                if not _is_zero(A[i][k]):
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = num if prev is None else _ring_div(num, prev)
            A[i][k] = zero
        prev = A[k][k]
    det = A[n - 1][n - 1]
    return det if sign == 1 else -det


def tripoly_as_unipoly(p, var):
    """View a TriPoly as a UniPoly in one variable with TriPoly coefficients."""
    deg = max((e[var] for e in p.terms), default=-1)
    if deg < 0:
        return UniPoly([])
    coeffs = [TriPoly() for _ in range(deg + 1)]
    for e, c in p.terms.items():
        ne = list(e)
        k = ne[var]
        ne[var] = 0
        coeffs[k] = coeffs[k] + TriPoly({tuple(ne): c})
    return UniPoly(coeffs)


def eliminate(pa, pb, var):
    """Resultant of two TriPolys with respect to one variable; a TriPoly
    in the remaining two variables."""
    ua = tripoly_as_unipoly(pa, var)
    ub = tripoly_as_unipoly(pb, var)
    out = resultant(ua, ub)
    if isinstance(out, TriPoly):
        return out
    return TriPoly.constant(out)


# --- binary forms ------------------------------------------------------------
# A binary form of degree d in (s, t) is a list of d+1 Fractions, index i
# holding the coefficient of s^i t^(d-i).

def binary_eval(form, s, t):
    d = len(form) - 1
    return sum(c * s**i * t**(d - i) for i, c in enumerate(form))


def binary_dehomogenize(form):
    """(unipoly in s at t=1, degree of the form)."""
    return UniPoly.from_rationals(form), len(form) - 1


def _binary_mul(f, g):
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x == 0:
            continue
        for j, y in enumerate(g):
            out[i + j] += x * y
    return out


def binary_mul(f, g):
    """Product of two binary forms in the ascending-in-s convention."""
    return _binary_mul([Fraction(c) for c in f], [Fraction(c) for c in g])


def binary_compose(form, M):
    """Substitute (s, t) -> (a s + b t, c s + d t), M = ((a,b),(c,d)).

    Same ascending-in-s coefficient convention as binary_eval."""
    (a, b), (c, d) = M
    deg = len(form) - 1
    lin1 = [Fraction(b), Fraction(a)]
    lin2 = [Fraction(d), Fraction(c)]
    pow1 = [[Fraction(1)]]
    pow2 = [[Fraction(1)]]
    for _ in range(deg):
        pow1.append(_binary_mul(pow1[-1], lin1))
        pow2.append(_binary_mul(pow2[-1], lin2))
    out = [Fraction(0)] * (deg + 1)
    for i, coef in enumerate(form):
        if coef == 0:
            continue
        term = _binary_mul(pow1[i], pow2[deg - i])
        for k, v in enumerate(term):
            out[k] += coef * v
    return out


def binary_gcd(f, g):
    """Gcd of two binary forms, returned as a binary form (primitive ordering
    conventions are the caller's problem; this is monic-in-s up to t powers)."""
    uf, df = binary_dehomogenize(f)
    ug, dg = binary_dehomogenize(g)
    tf = df - uf.degree() if not uf.is_zero() else df
    tg = dg - ug.degree() if not ug.is_zero() else dg
    tcommon = min(tf, tg)
    core = uf.gcd(ug)
    d = core.degree() + tcommon
    out = [Fraction(0)] * (d + 1)
    for i, c in enumerate(core.coeffs):
        out[i] = c
    return out


def binary_exact_div(f, g):
    """Divide binary form f by g exactly; raises InternalError when inexact."""
    uf, df = binary_dehomogenize(f)
    ug, dg = binary_dehomogenize(g)
    if ug.is_zero():
        raise ZeroDivisionError("division by the zero form")
    tf = df - uf.degree() if not uf.is_zero() else df
    tg = dg - ug.degree()
    if tf < tg:
        raise InternalError("binary form division is not exact (t power)")
    q, r = divmod(uf, ug)
    if not r.is_zero():
        raise InternalError("binary form division is not exact")
    d = df - dg
    out = [Fraction(0)] * (d + 1)
    for i, c in enumerate(q.coeffs):
        out[i] = c
    return out


def rational_roots(p, precision=512, seed=0):
    """All rational roots of a Fraction-coefficient UniPoly, with multiplicity.

    Found by high-precision root isolation plus reconstruction, then verified
    and counted by exact division.  Avoids integer factorization entirely, so
    large coefficients are fine.
    """
    from . import numerics, reconstruct

    if p.is_zero():
        raise ValueError("zero polynomial")
    roots = []
    # strip exact zero roots first
    nzero = 0
    while p.coeffs and _is_zero(p.coeffs[0]):
        p = UniPoly(p.coeffs[1:])
        nzero += 1
    if nzero:
        roots.append((Fraction(0), nzero))
    if p.degree() < 1:
        return roots
    # scale to integers to bound numerators and denominators of roots
    denom = 1
    for c in p.coeffs:
        denom = denom * c.denominator // _gcd_int(denom, c.denominator)
    ints = [int(c * denom) for c in p.coeffs]
    bound = max(abs(ints[0]), abs(ints[-1])) + 1
    prec = max(precision, 3 * bound.bit_length() + 128)
    try:
        approx = numerics.complex_roots([Fraction(c) for c in ints], prec, seed=seed)
    except NonConvergence:
        approx = numerics.complex_roots([Fraction(c) for c in ints], 2 * prec, seed=seed + 1)
        prec = 2 * prec
    seen = set()
    for r in approx:
        cand = reconstruct.reconstruct_near_real(r, bound, prec - 32)
        if cand is None or cand in seen:
            continue
        if p.evaluate(cand) == 0:
            seen.add(cand)
            mult = 0
            q = p
            factor = UniPoly([-cand, Fraction(1)])
            while True:
                quo, rem = divmod(q, factor)
                if not rem.is_zero():
                    break
                q = quo
                mult += 1
            roots.append((cand, mult))
    roots.sort(key=lambda rm: rm[0])
    return roots


def binary_rational_roots(form, precision=512, seed=0):
    """Rational projective roots of a binary form, as ((s, t), multiplicity)
    with primitive integer (s, t), first nonzero entry positive."""
    u, d = binary_dehomogenize(form)
    out = []
    if u.is_zero():
        raise ValueError("zero binary form")
    inf_mult = d - u.degree()
    if inf_mult > 0:
        out.append(((1, 0), inf_mult))
    for r, mult in rational_roots(u, precision, seed):
        s, t = r.numerator, r.denominator
        if s < 0:
            s, t = -s, -t
        out.append(((s, t) if s != 0 else (0, 1), mult))
    return out


def _gcd_int(a, b):
    while b:
        a, b = b, a % b
    return abs(a)
