"""Polynomial types: sparse trivariate polynomials, ternary cubics, bilinear forms.

Monomial order for cubics is fixed once and for all as

    x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3

and every piece of I/O in the package uses it.  TriPoly is the workhorse for
expanding determinants and substitutions; coefficients are Fractions on exact
paths but the arithmetic never divides, so mpmath numbers pass through the
same code on numeric paths.
"""

from fractions import Fraction

from ..errors import InternalError, ParseError
from .linalg import primitive_vector

MONOMIALS = (
    (3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1),
    (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3),
)

MONOMIAL_ORDER_TAG = "x3,x2y,x2z,xy2,xyz,xz2,y3,y2z,yz2,z3"

_VAR_NAMES = ("x", "y", "z")


class TriPoly:
    """Sparse polynomial in three variables, dict of exponent triples."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c != 0:
                    self.terms[e] = c

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def constant(cls, c):
        return cls({(0, 0, 0): c})

    @classmethod
    def variable(cls, i):
        e = [0, 0, 0]
        e[i] = 1
        return cls({tuple(e): Fraction(1)})

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, TriPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == {(0, 0, 0): other}

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if not isinstance(other, TriPoly):
            other = TriPoly.constant(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        r = TriPoly.__new__(TriPoly)
        r.terms = out
        return r

    __radd__ = __add__

    def __neg__(self):
        r = TriPoly.__new__(TriPoly)
        r.terms = {e: -c for e, c in self.terms.items()}
        return r

    def __sub__(self, other):
        return self + (-other if isinstance(other, TriPoly) else TriPoly.constant(-other))

    def __mul__(self, other):
        if not isinstance(other, TriPoly):
            if other == 0:
                return TriPoly()
            r = TriPoly.__new__(TriPoly)
            r.terms = {e: c * other for e, c in self.terms.items()}
            return r
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                s = out.get(e, 0) + c1 * c2
                if s == 0:
                    out.pop(e, None)
                else:
                    out[e] = s
        r = TriPoly.__new__(TriPoly)
        r.terms = out
        return r

    __rmul__ = __mul__

    def __pow__(self, n):
        assert n >= 0
        out = TriPoly.constant(Fraction(1))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def derivative(self, var):
        out = {}
        for e, c in self.terms.items():
            if e[var] == 0:
                continue
            ne = list(e)
            ne[var] -= 1
            out[tuple(ne)] = c * e[var]
        r = TriPoly.__new__(TriPoly)
        r.terms = out
        return r

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def homogeneous_degree(self):
        """Common total degree of all terms, or None if mixed."""
        degs = {sum(e) for e in self.terms}
        if len(degs) != 1:
            return None
        return degs.pop()

    def coefficient(self, e):
        return self.terms.get(e, Fraction(0))

    def evaluate(self, x, y, z):
        total = 0
        for (i, j, k), c in self.terms.items():
            total = total + c * x**i * y**j * z**k
        return total

    def subs_linear(self, M):
        """Substitute variables by the linear forms given by matrix rows:
        variable t becomes sum_s M[t][s] * v_s, i.e. this computes p(M v).
        """
        lin = []
        for t in range(3):
            f = TriPoly()
            for s in range(3):
                if M[t][s] != 0:
                    f = f + TriPoly({((1, 0, 0), (0, 1, 0), (0, 0, 1))[s]: M[t][s]})
            lin.append(f)
        # cache powers of each substituted form
        maxdeg = [0, 0, 0]
        for e in self.terms:
            for t in range(3):
                maxdeg[t] = max(maxdeg[t], e[t])
        powers = []
        for t in range(3):
            ps = [TriPoly.constant(Fraction(1))]
            for _ in range(maxdeg[t]):
                ps.append(ps[-1] * lin[t])
            powers.append(ps)
        out = TriPoly()
        for (i, j, k), c in self.terms.items():
            out = out + powers[0][i] * powers[1][j] * powers[2][k] * c
        return out

    def exact_div(self, d):
        """Exact polynomial division; raises InternalError if not divisible."""
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        lead = max(d.terms)  # lex order on exponent triples
        dc = d.terms[lead]
        rem = TriPoly(dict(self.terms))
        q = {}
        while rem.terms:
            e = max(rem.terms)
            if any(e[t] < lead[t] for t in range(3)):
                raise InternalError("polynomial division is not exact")
            qe = (e[0] - lead[0], e[1] - lead[1], e[2] - lead[2])
            qc = rem.terms[e] / dc
            q[qe] = qc
            rem = rem - TriPoly({qe: qc}) * d
        return TriPoly(q)

    def __repr__(self):
        if not self.terms:
            return "TriPoly(0)"
        bits = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "".join(
                f"{_VAR_NAMES[t]}^{e[t]}" if e[t] > 1 else (_VAR_NAMES[t] if e[t] == 1 else "")
                for t in range(3)
            )
            bits.append(f"{c}*{mono}" if mono else f"{c}")
        return "TriPoly(" + " + ".join(bits) + ")"


def _coerce_rational(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {x!r}") from exc
    raise ParseError(f"cannot interpret {x!r} as a rational")


class TernaryCubic:
    """Homogeneous cubic form in x, y, z with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = tuple(_coerce_rational(c) for c in coeffs)
        if len(cs) != 10:
            raise ParseError(f"a ternary cubic needs 10 coefficients, got {len(cs)}")
        self.coeffs = cs

    @classmethod
    def from_tripoly(cls, p):
        for e in p.terms:
            if sum(e) != 3:
                raise InternalError("polynomial is not a homogeneous cubic")
        return cls(tuple(p.terms.get(e, Fraction(0)) for e in MONOMIALS))

    def to_tripoly(self):
        return TriPoly({e: c for e, c in zip(MONOMIALS, self.coeffs) if c != 0})

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, TernaryCubic) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        return TernaryCubic(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return TernaryCubic(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return TernaryCubic(tuple(-a for a in self.coeffs))

    def scale(self, s):
        s = Fraction(s)
        return TernaryCubic(tuple(s * a for a in self.coeffs))

    def evaluate(self, x, y, z):
        total = 0
        for (i, j, k), c in zip(MONOMIALS, self.coeffs):
            if c != 0:
                total = total + c * x**i * y**j * z**k
        return total

    def partials(self):
        p = self.to_tripoly()
        return p.derivative(0), p.derivative(1), p.derivative(2)

    def gradient_at(self, pt):
        x, y, z = pt
        gx, gy, gz = self.partials()
        return (gx.evaluate(x, y, z), gy.evaluate(x, y, z), gz.evaluate(x, y, z))

    def act(self, M):
        """(F o M)(v) = F(M v), exact for rational M."""
        return TernaryCubic.from_tripoly(self.to_tripoly().subs_linear(M))

    def primitive(self):
        """Content-free integer form with positive leading sign.

        Returns (cubic, scalar) with self == scalar * cubic.
        """
        ints, scalar = primitive_vector(self.coeffs)
        return TernaryCubic(ints), scalar

    def proportionality(self, other):
        """The scalar c with self == c * other, or None."""
        c = None
        for a, b in zip(self.coeffs, other.coeffs):
            if b == 0:
                if a != 0:
                    return None
                continue
            r = a / b
            if c is None:
                c = r
            elif c != r:
                return None
        if c is None:
            return None  # other is the zero form
        return c

    def as_strings(self):
        return [str(c) for c in self.coeffs]

    def __repr__(self):
        return f"TernaryCubic({self.pretty()})"

    def pretty(self, names=_VAR_NAMES):
        bits = []
        for (i, j, k), c in zip(MONOMIALS, self.coeffs):
            if c == 0:
                continue
            mono = "".join(
                f"{n}^{e}" if e > 1 else (n if e == 1 else "")
                for n, e in zip(names, (i, j, k))
            )
            if c == 1:
                bits.append(mono)
            elif c == -1:
                bits.append(f"-{mono}")
            else:
                bits.append(f"{c}*{mono}")
        if not bits:
            return "0"
        out = bits[0]
        for b in bits[1:]:
            out += f" - {b[1:]}" if b.startswith("-") else f" + {b}"
        return out


def act_cubic(F, M):
    """Right action of matrices on cubics: act_cubic(F, M) = F o M."""
    return F.act(M)


BILINEAR_MONOMIALS = ("xu", "xv", "xw", "yu", "yv", "yw", "zu", "zv", "zw")


class BilinearForm:
    """Rational bilinear form in (x,y,z) x (u,v,w); value is p^T m q."""

    __slots__ = ("m",)

    def __init__(self, m):
        rows = tuple(tuple(_coerce_rational(x) for x in row) for row in m)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ParseError("a bilinear form needs a 3x3 coefficient matrix")
        self.m = rows

    @classmethod
    def incidence(cls):
        """xu + yv + zw, the standard pairing between the plane and its dual."""
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @classmethod
    def from_row_major(cls, entries):
        es = list(entries)
        if len(es) != 9:
            raise ParseError("row-major bilinear form needs 9 entries")
        return cls((es[0:3], es[3:6], es[6:9]))

    def row_major(self):
        return [c for row in self.m for c in row]

    def evaluate(self, p, q):
        total = 0
        for i in range(3):
            for j in range(3):
                if self.m[i][j] != 0:
                    total = total + self.m[i][j] * p[i] * q[j]
        return total

    def is_zero(self):
        return all(c == 0 for row in self.m for c in row)

    def transform(self, M, N):
        """The form evaluated at (M p, N q); matrix becomes M^T m N."""
        out = [[Fraction(0)] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                s = Fraction(0)
                for a in range(3):
                    for b in range(3):
                        s += M[a][i] * self.m[a][b] * N[b][j]
                out[i][j] = s
        return BilinearForm(out)

    def primitive(self):
        ints, scalar = primitive_vector(self.row_major())
        return BilinearForm.from_row_major(ints), scalar

    def proportionality(self, other):
        c = None
        for a, b in zip(self.row_major(), other.row_major()):
            if b == 0:
                if a != 0:
                    return None
                continue
            r = a / b
            if c is None:
                c = r
            elif c != r:
                return None
        return c

    def __eq__(self, other):
        return isinstance(other, BilinearForm) and self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def pretty(self):
        bits = []
        for name, c in zip(BILINEAR_MONOMIALS, self.row_major()):
            if c == 0:
                continue
            if c == 1:
                bits.append(name)
            elif c == -1:
                bits.append(f"-{name}")
            else:
                bits.append(f"{c}*{name}")
        if not bits:
            return "0"
        out = bits[0]
        for b in bits[1:]:
            out += f" - {b[1:]}" if b.startswith("-") else f" + {b}"
        return out

    def __repr__(self):
        return f"BilinearForm({self.pretty()})"
