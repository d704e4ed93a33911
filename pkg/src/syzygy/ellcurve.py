"""Weierstrass models, the chord-tangent group law, reduction of a pointed
plane cubic to Weierstrass form, isomorphism testing, non-isogeny
certificates, and height-bounded rational point search.

The reduction follows the classical two-case route: a flex origin gives a
purely linear change of coordinates, a non-flex origin goes through the
tangent-line quartic and a completed square.  Both produce exact rational
maps in each direction, and the forward map is corrected by a translation
on the target so the chosen origin really goes to the point at infinity;
group structure is then preserved, not just the curve.
"""

from fractions import Fraction
from math import gcd

import numpy as np
from mpmath import mpc, mpf, workprec

from .core.linalg import cross, det3, inv3, mat_from_cols, mat_vec
from .core.numerics import (
    DEFAULT_PRECISION,
    complex_roots,
    loose_tol,
    normalize_projective,
    point_distance,
    to_mpc,
    tol,
)
from .core.poly import TernaryCubic
from .covariants.jinvariant import weierstrass_invariants
from .covariants.singular import is_singular
from .errors import (
    DegenerateTangent,
    InternalError,
    MathError,
    PrecisionError,
    SingularInput,
    VerificationFailed,
)


def _is_exact(v):
    return isinstance(v, (int, Fraction))


def _all_exact(pt):
    return all(_is_exact(c) for c in pt)


def _int_nth_root(m, n):
    """Exact integer n-th root of a nonnegative integer, or None."""
    if m < 0:
        return None
    if m == 0:
        return 0
    r = 1 << (-(-m.bit_length() // n))
    while True:
        nr = ((n - 1) * r + m // r ** (n - 1)) // n
        if nr >= r:
            break
        r = nr
    while r ** n > m:
        r -= 1
    while (r + 1) ** n <= m:
        r += 1
    return r if r ** n == m else None


def _rational_nth_root(q, n):
    """Exact n-th root of a Fraction, or None; odd n allows negatives."""
    q = Fraction(q)
    if q < 0:
        if n % 2 == 0:
            return None
        r = _rational_nth_root(-q, n)
        return None if r is None else -r
    rn = _int_nth_root(q.numerator, n)
    rd = _int_nth_root(q.denominator, n)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


class WeierstrassModel:
    """Long Weierstrass equation y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
    with exact rational coefficients and nonzero discriminant."""

    def __init__(self, a1, a2, a3, a4, a6):
        self.a1 = Fraction(a1)
        self.a2 = Fraction(a2)
        self.a3 = Fraction(a3)
        self.a4 = Fraction(a4)
        self.a6 = Fraction(a6)
        (self.b2, self.b4, self.b6, self.b8,
         self.c4, self.c6, self.disc) = weierstrass_invariants(
            self.a1, self.a2, self.a3, self.a4, self.a6)
        if self.disc == 0:
            raise SingularInput("Weierstrass equation has zero discriminant")
        self.j = self.c4 ** 3 / self.disc

    def a_invariants(self):
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __eq__(self, other):
        return (isinstance(other, WeierstrassModel)
                and self.a_invariants() == other.a_invariants())

    def __hash__(self):
        return hash(self.a_invariants())

    def __repr__(self):
        return "WeierstrassModel(%s, %s, %s, %s, %s)" % self.a_invariants()

    def equation_rhs_minus_lhs(self, x, y):
        """y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6; zero on the curve."""
        return (y * y + self.a1 * x * y + self.a3 * y
                - x ** 3 - self.a2 * x * x - self.a4 * x - self.a6)

    def to_cubic(self):
        """Homogeneous plane model with the origin at [0:1:0]."""
        return TernaryCubic([
            -1, 0, -self.a2, 0, self.a1, -self.a4, 0, 1, self.a3, -self.a6,
        ])

    @classmethod
    def from_cubic(cls, G):
        """Recognize a cubic proportional to a long Weierstrass equation.

        Returns (model, scalar) with G == scalar * model.to_cubic(), or None
        when the cubic is not literally in that shape."""
        c = G.coeffs
        # order: x3 x2y x2z xy2 xyz xz2 y3 y2z yz2 z3
        if c[1] != 0 or c[3] != 0 or c[6] != 0:
            return None
        if c[7] == 0 or c[0] == 0:
            return None
        s = c[7]
        if c[0] / s != -1:
            return None
        model = cls(c[4] / s, -c[2] / s, c[8] / s, -c[5] / s, -c[9] / s)
        return model, s

    def involution_matrix(self):
        """The (-1) map [x:y:z] -> [x : -y - a1 x - a3 z : z] as a matrix."""
        return (
            (Fraction(1), Fraction(0), Fraction(0)),
            (-self.a1, Fraction(-1), -self.a3),
            (Fraction(0), Fraction(0), Fraction(1)),
        )

    def negate(self, P, precision=DEFAULT_PRECISION):
        if P.infinity:
            return P
        with workprec(precision + 32):
            return ECPoint.affine(self, P.x, -P.y - self.a1 * P.x - self.a3)


class ECPoint:
    """A point of a Weierstrass model: affine (x, y) or the infinity point.

    Coordinates are exact rationals or mpmath numbers; which one decides
    whether later comparisons are exact or threshold-based."""

    __slots__ = ("model", "x", "y", "infinity")

    def __init__(self, model, x, y, infinity=False):
        self.model = model
        self.infinity = infinity
        self.x = None if infinity else x
        self.y = None if infinity else y

    @classmethod
    def at_infinity(cls, model):
        return cls(model, None, None, infinity=True)

    @classmethod
    def affine(cls, model, x, y):
        return cls(model, x, y)

    def triple(self):
        if self.infinity:
            return (Fraction(0), Fraction(1), Fraction(0))
        return (self.x, self.y, 1 if not _is_exact(self.x) else Fraction(1))

    def is_exact(self):
        return self.infinity or (_is_exact(self.x) and _is_exact(self.y))

    def on_curve(self, precision=DEFAULT_PRECISION):
        if self.infinity:
            return True
        if self.is_exact():
            return self.model.equation_rhs_minus_lhs(self.x, self.y) == 0
        with workprec(precision + 32):
            r = self.model.equation_rhs_minus_lhs(self.x, self.y)
            scale = max(mpf(1), abs(to_mpc(self.x, precision)),
                        abs(to_mpc(self.y, precision))) ** 3
            coeff = max(mpf(1), *(abs(to_mpc(a, precision))
                                  for a in self.model.a_invariants()))
            return abs(to_mpc(r, precision)) <= tol(precision) * scale * coeff

    def __eq__(self, other):
        if not isinstance(other, ECPoint):
            return NotImplemented
        if self.infinity or other.infinity:
            return self.infinity and other.infinity
        return self.x == other.x and self.y == other.y

    def __repr__(self):
        if self.infinity:
            return "ECPoint(infinity)"
        return f"ECPoint({self.x!r}, {self.y!r})"


def _same_value(a, b, precision):
    if _is_exact(a) and _is_exact(b):
        return a == b
    with workprec(precision + 32):
        da = to_mpc(a, precision)
        db = to_mpc(b, precision)
        return abs(da - db) <= loose_tol(precision) * max(mpf(1), abs(da), abs(db))


def group_law(P, Q, precision=DEFAULT_PRECISION):
    """Chord-tangent addition on a long Weierstrass model; exact over the
    rationals, threshold-based over the complexes."""
    m = P.model
    if P.infinity:
        return Q
    if Q.infinity:
        return P
    a1, a2, a3, a4, a6 = m.a_invariants()
    x1, y1, x2, y2 = P.x, P.y, Q.x, Q.y
    with workprec(precision + 32):
        if _same_value(x1, x2, precision):
            if _same_value(y2, -y1 - a1 * x1 - a3, precision):
                return ECPoint.at_infinity(m)
            lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / (2 * y1 + a1 * x1 + a3)
            nu = y1 - lam * x1
            x3 = lam * lam + a1 * lam - a2 - x1 - x1
        else:
            lam = (y2 - y1) / (x2 - x1)
            nu = y1 - lam * x1
            x3 = lam * lam + a1 * lam - a2 - x1 - x2
        y3 = -(lam + a1) * x3 - nu - a3
        return ECPoint.affine(m, x3, y3)


def scalar_mul(n, P, precision=DEFAULT_PRECISION):
    """n*P by double-and-add; negative n through the (-1) map."""
    n = int(n)
    if n < 0:
        return scalar_mul(-n, P.model.negate(P, precision), precision)
    acc = ECPoint.at_infinity(P.model)
    add = P
    while n:
        if n & 1:
            acc = group_law(acc, add, precision)
        n >>= 1
        if n:
            add = group_law(add, add, precision)
    return acc


# --- plane cubics with a marked rational point ------------------------------


def _line_coeffs(G, parts, P, W):
    """Coefficients [c0, c1, c2, c3] of t -> G(P + t W), by polarization;
    works for exact and numeric coordinates alike."""
    c0 = G.evaluate(*P)
    c3 = G.evaluate(*W)
    c1 = sum(parts[i].evaluate(*P) * W[i] for i in range(3))
    c2 = sum(parts[i].evaluate(*W) * P[i] for i in range(3))
    return c0, c1, c2, c3


def _combine(a, P, b, W):
    return tuple(a * P[i] + b * W[i] for i in range(3))


def chord_third(G, parts, P, Q):
    """Third intersection of the line through two distinct curve points."""
    _, c1, c2, _ = _line_coeffs(G, parts, P, Q)
    if _is_exact(c2) and c2 == 0:
        return Q
    return _combine(c2, P, -c1, Q)


def tangent_third(G, parts, P):
    """Third intersection of the tangent line at a curve point.  Returns P
    itself exactly when P is a flex."""
    grad = tuple(parts[i].evaluate(*P) for i in range(3))
    W = None
    basis = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for ek in basis:
        cand = cross(grad, ek)
        if all(_is_exact(c) and c == 0 for c in cand):
            continue
        if all(_is_exact(c) and c == 0 for c in cross(cand, P)):
            continue  # proportional to P, no good as a second line point
        W = cand
        break
    if W is None:
        raise DegenerateTangent("no usable tangent direction at the point")
    _, _, c2, c3 = _line_coeffs(G, parts, P, W)
    if (_is_exact(c2) and c2 == 0) and (_is_exact(c3) and c3 == 0):
        raise DegenerateTangent("tangent line lies on the cubic")
    return _combine(c3, P, -c2, W)


def _primitive_point(pt):
    from .core.linalg import primitive_vector

    ints, _ = primitive_vector(tuple(Fraction(c) for c in pt))
    return ints


class PointedCubic:
    """A smooth plane cubic with a marked exact rational point as origin.

    The group law is the classical one: P + Q is the third intersection of
    the line through the origin and the third intersection of PQ."""

    def __init__(self, cubic, origin, check_smooth=True):
        self.cubic = cubic
        self.origin = _primitive_point(origin)
        if cubic.evaluate(*self.origin) != 0:
            raise MathError("origin does not lie on the cubic")
        if check_smooth:
            flag, _ = is_singular(cubic)
            if flag:
                raise SingularInput("pointed cubic must be smooth")
        self._parts = cubic.partials()

    def _third(self, P, Q, precision):
        with workprec(precision + 32):
            if self._same(P, Q, precision):
                return tangent_third(self.cubic, self._parts, P)
            return chord_third(self.cubic, self._parts, P, Q)

    def _same(self, P, Q, precision):
        if _all_exact(P) and _all_exact(Q):
            return all(c == 0 for c in cross(P, Q))
        with workprec(precision + 32):
            a, _ = normalize_projective(tuple(to_mpc(c, precision) for c in P), precision)
            b, _ = normalize_projective(tuple(to_mpc(c, precision) for c in Q), precision)
            return point_distance(a, b, precision) < loose_tol(precision)

    def add(self, P, Q, precision=DEFAULT_PRECISION):
        s = self._third(P, Q, precision)
        return self._third(self.origin, s, precision)

    def negate(self, P, precision=DEFAULT_PRECISION):
        t = self._third(self.origin, self.origin, precision)
        return self._third(P, t, precision)

    def multiply(self, n, P, precision=DEFAULT_PRECISION):
        n = int(n)
        if n < 0:
            return self.multiply(-n, self.negate(P, precision), precision)
        acc = self.origin
        add = P
        while n:
            if n & 1:
                acc = self.add(acc, add, precision)
            n >>= 1
            if n:
                add = self.add(add, add, precision)
        return acc

    def is_flex(self, P=None):
        """Is the (exact) point a flex?  Defaults to the origin."""
        P = self.origin if P is None else P
        t = tangent_third(self.cubic, self._parts, P)
        return all(c == 0 for c in cross(t, P))


# --- reduction to Weierstrass form ------------------------------------------


def _origin_frame(G, parts, O):
    """Exact change of coordinates sending [0:1:0] to O and z = 0 onto the
    tangent line at O."""
    grad = tuple(parts[i].evaluate(*O) for i in range(3))
    if all(c == 0 for c in grad):
        raise SingularInput("origin is a singular point")
    basis = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    col1 = None
    for ek in basis:
        cand = cross(grad, ek)
        if all(c == 0 for c in cand):
            continue
        if all(c == 0 for c in cross(cand, O)):
            continue
        col1 = _primitive_point(cand)
        break
    if col1 is None:
        raise DegenerateTangent("tangent direction at the origin is degenerate")
    for ek in basis:
        M = mat_from_cols(col1, O, ek)
        if det3(M) != 0:
            return tuple(tuple(Fraction(x) for x in row) for row in M)
    raise InternalError("two independent columns failed to extend to a basis")


class _LinearMaps:
    """Forward/inverse pair for a flex origin: both maps are linear."""

    def __init__(self, model, fwd_rows, inv_rows):
        self.model = model
        self.fwd_rows = fwd_rows
        self.inv_rows = inv_rows

    def forward(self, pt, precision=DEFAULT_PRECISION):
        with workprec(precision + 32):
            img = mat_vec(self.fwd_rows, tuple(pt))
        return _triple_to_point(self.model, img, precision)

    def inverse(self, P, precision=DEFAULT_PRECISION):
        with workprec(precision + 32):
            return mat_vec(self.inv_rows, P.triple())


def _triple_to_point(model, trip, precision):
    x, y, z = trip
    if _all_exact(trip):
        if z == 0:
            if x != 0 or y == 0:
                raise InternalError("image triple is not on the model")
            return ECPoint.at_infinity(model)
        return ECPoint.affine(model, Fraction(x) / Fraction(z), Fraction(y) / Fraction(z))
    with workprec(precision + 32):
        nx, ny, nz = (to_mpc(c, precision) for c in trip)
        scale = max(abs(nx), abs(ny), abs(nz))
        if abs(nz) <= tol(precision) * scale:
            return ECPoint.at_infinity(model)
        return ECPoint.affine(model, nx / nz, ny / nz)


class _QuarticMaps:
    """Forward/inverse pair for a non-flex origin, via the tangent quartic.

    Stores the exact frame and the completed-square data; the forward map
    composes the raw reduction with a translation on the model so that the
    marked origin goes exactly to infinity."""

    def __init__(self, model, frame, frame_inv, data, shift):
        self.model = model
        self.frame = frame
        self.frame_inv = frame_inv
        self.data = data  # (q2, q1, q0, r3, alpha, beta, gamma, delta)
        self.shift = shift  # ECPoint, the raw image of the origin

    def _mu(self, pt, precision):
        """The raw reduction map, before the origin-fixing translation."""
        q2, q1, q0, r3, alpha, beta, gamma, delta = self.data
        m = self.model
        with workprec(precision + 32):
            x2, y2, z2 = mat_vec(self.frame_inv, tuple(pt))
            exact = _all_exact((x2, y2, z2))
            if exact:
                if z2 == 0:
                    if y2 != 0 and all(
                        c == 0 for c in cross((x2, y2, z2), (0, 1, 0))
                    ):
                        return ECPoint.affine(m, Fraction(0), 8 * q2 * gamma)
                    return ECPoint.at_infinity(m)
                xa = Fraction(x2) / Fraction(z2)
                ya = Fraction(y2) / Fraction(z2)
            else:
                nx, ny, nz = (to_mpc(c, precision) for c in (x2, y2, z2))
                scale = max(abs(nx), abs(ny), abs(nz))
                if abs(nz) <= tol(precision) * scale:
                    # on the tangent line: either the origin or its residual
                    # intersection [q2 : r3 : 0]
                    here, _ = normalize_projective((nx, ny, nz), precision)
                    o_img, _ = normalize_projective(
                        (mpc(0), mpc(1), mpc(0)), precision)
                    if point_distance(here, o_img, precision) < loose_tol(precision):
                        return ECPoint.affine(
                            m, mpc(0), to_mpc(8 * q2 * gamma, precision))
                    return ECPoint.at_infinity(m)
                xa, ya = nx / nz, ny / nz
            v = 2 * ya + (q2 * xa * xa + q1 * xa + q0)
            u = v + (q2 * xa * xa + alpha * xa + beta)
            U = 8 * q2 * u
            W = -4 * q2 * u * xa - (2 * alpha * u + gamma)
            return ECPoint.affine(m, U, 8 * q2 * W)

    def _mu_inverse(self, P, precision):
        q2, q1, q0, r3, alpha, beta, gamma, delta = self.data
        if P.infinity:
            return mat_vec(self.frame, (q2, r3, Fraction(0)))
        U, Y = P.x, P.y
        exact = _is_exact(U) and _is_exact(Y)
        with workprec(precision + 32):
            u = U / (8 * q2)
            w = Y / (8 * q2)
            if exact and u == 0:
                if gamma == 0 or Y == 8 * q2 * gamma:
                    return tuple(self.frame[i][1] for i in range(3))  # origin
                xa = -delta / gamma
            elif not exact and abs(to_mpc(u, precision)) <= tol(precision):
                if abs(to_mpc(Y - 8 * q2 * gamma, precision)) <= abs(
                    to_mpc(Y + 8 * q2 * gamma, precision)
                ):
                    return tuple(self.frame[i][1] for i in range(3))
                xa = to_mpc(-delta / gamma, precision)
            else:
                xa = -(w + 2 * alpha * u + gamma) / (4 * q2 * u)
            v = u - (q2 * xa * xa + alpha * xa + beta)
            ya = (v - (q2 * xa * xa + q1 * xa + q0)) / 2
            one = Fraction(1) if exact else mpc(1)
            return mat_vec(self.frame, (xa, ya, one))

    def forward(self, pt, precision=DEFAULT_PRECISION):
        raw = self._mu(pt, precision)
        return group_law(raw, self.model.negate(self.shift), precision)

    def inverse(self, P, precision=DEFAULT_PRECISION):
        moved = group_law(P, self.shift, precision)
        return self._mu_inverse(moved, precision)


def _curve_samples(G, count, precision, seed=0):
    """Numeric points on a plane cubic, found by slicing with x = k z."""
    out = []
    p = G.to_tripoly()
    k = 1
    with workprec(precision + 32):
        while len(out) < count and k < 8 * count:
            coeffs = [
                to_mpc(p.evaluate(Fraction(k), Fraction(0), Fraction(1)), precision),
                to_mpc(
                    sum(
                        c * Fraction(k) ** e[0]
                        for e, c in p.terms.items()
                        if e[1] == 1
                    ),
                    precision,
                ),
                to_mpc(
                    sum(
                        c * Fraction(k) ** e[0]
                        for e, c in p.terms.items()
                        if e[1] == 2
                    ),
                    precision,
                ),
                to_mpc(p.coefficient((0, 3, 0)), precision),
            ]
            k += 1
            stripped = list(coeffs)
            while stripped and abs(stripped[-1]) == 0:
                stripped.pop()
            if len(stripped) <= 1:
                continue
            try:
                roots = complex_roots(stripped, precision, seed=seed)
            except (MathError, PrecisionError, ZeroDivisionError):
                continue
            for y in roots:
                out.append((to_mpc(k - 1, precision), y, mpc(1)))
                if len(out) >= count:
                    break
    return out


def nagell(C, precision=DEFAULT_PRECISION, verify_samples=5):
    """Reduce a pointed plane cubic to a Weierstrass model.

    Returns (model, forward, inverse): forward takes a plane point (exact
    rational or numeric triple) to an ECPoint with forward(origin) the point
    at infinity; inverse goes back.  Both maps are exact rational maps, and
    they are verified on numeric samples before being returned."""
    G = C.cubic
    O = C.origin
    rec = WeierstrassModel.from_cubic(G)
    if rec is not None and all(c == 0 for c in cross(O, (0, 1, 0))):
        model, _ = rec
        ident = tuple(tuple(Fraction(int(i == j)) for j in range(3)) for i in range(3))
        maps = _LinearMaps(model, ident, ident)
        return model, maps.forward, maps.inverse

    parts = C._parts
    frame = _origin_frame(G, parts, O)
    frame_inv = inv3(frame)
    moved = G.act(frame)
    c = moved.coeffs  # x3 x2y x2z xy2 xyz xz2 y3 y2z yz2 z3
    if c[6] != 0 or c[3] != 0:
        raise InternalError("origin frame failed to normalize the tangent")
    theta = c[7]
    if theta == 0:
        raise SingularInput("cubic is singular at the chosen origin")

    if c[1] == 0:
        # flex origin: y^2 + A xy + B y = Cx^3 + D x^2 + E x + F exactly
        A = c[4] / theta
        B = c[8] / theta
        Cc = -c[0] / theta
        D = -c[2] / theta
        E = -c[5] / theta
        Fc = -c[9] / theta
        if Cc == 0:
            raise InternalError("flex reduction lost its cubic term")
        model = WeierstrassModel(A, D, B * Cc, Cc * E, Cc * Cc * Fc)
        scale_rows = ((Cc, 0, 0), (0, Cc, 0), (0, 0, 1))
        fwd_rows = tuple(
            tuple(sum(Fraction(scale_rows[i][k]) * frame_inv[k][j] for k in range(3))
                  for j in range(3))
            for i in range(3)
        )
        inv_scale = ((Fraction(1), 0, 0), (0, Fraction(1), 0), (0, 0, Cc))
        inv_rows = tuple(
            tuple(sum(frame[i][k] * Fraction(inv_scale[k][j]) for k in range(3))
                  for j in range(3))
            for i in range(3)
        )
        maps = _LinearMaps(model, fwd_rows, inv_rows)
    else:
        q2 = c[1] / theta
        q1 = c[4] / theta
        q0 = c[8] / theta
        r3 = -c[0] / theta
        r2 = -c[2] / theta
        r1 = -c[5] / theta
        r0 = -c[9] / theta
        s3 = 2 * q2 * q1 + 4 * r3
        s2 = q1 * q1 + 2 * q2 * q0 + 4 * r2
        s1 = 2 * q1 * q0 + 4 * r1
        s0 = q0 * q0 + 4 * r0
        alpha = s3 / (2 * q2)
        beta = (s2 - alpha * alpha) / (2 * q2)
        gamma = s1 - 2 * alpha * beta
        delta = s0 - beta * beta
        if gamma == 0 and delta == 0:
            raise SingularInput("tangent quartic is a perfect square")
        A2 = 4 * alpha * alpha - 16 * q2 * beta
        A4 = 8 * q2 * (4 * alpha * gamma - 8 * q2 * delta)
        A6 = 64 * q2 * q2 * gamma * gamma
        model = WeierstrassModel(0, A2, 0, A4, A6)
        shift = ECPoint.affine(model, Fraction(0), 8 * q2 * gamma)
        maps = _QuarticMaps(
            model, frame, frame_inv,
            (q2, q1, q0, r3, alpha, beta, gamma, delta), shift,
        )

    fwd, inv = maps.forward, maps.inverse
    origin_image = fwd(O)
    if not origin_image.infinity:
        raise VerificationFailed("origin did not map to the point at infinity")
    back = inv(origin_image)
    if not _all_exact(back) or any(x != 0 for x in cross(back, O)):
        raise VerificationFailed("inverse map does not return the origin")
    for pt in _curve_samples(G, verify_samples, precision):
        P = fwd(pt, precision)
        if not P.on_curve(precision):
            raise VerificationFailed("forward image leaves the model")
        with workprec(precision + 32):
            q = inv(P, precision)
            a, _ = normalize_projective(tuple(to_mpc(x, precision) for x in q), precision)
            b, _ = normalize_projective(tuple(to_mpc(x, precision) for x in pt), precision)
            if point_distance(a, b, precision) > loose_tol(precision):
                raise VerificationFailed("round trip through the model drifted")
    return model, fwd, inv


# --- isomorphism over the rationals -----------------------------------------


def isomorphic_over_Q(w1, w2):
    """Search for (u, r, s, t) carrying w2 to w1 under the standard
    substitution x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.

    Returns (True, (u, r, s, t)) or (False, None)."""
    if w1.j != w2.j:
        return False, None
    cands = []
    if w1.c4 != 0 and w1.c6 != 0:
        u2 = (w1.c6 / w2.c6) * (w2.c4 / w1.c4)
        u = _rational_nth_root(u2, 2)
        if u is None or u == 0:
            return False, None
        cands = [u, -u]
    elif w1.c4 == 0:
        if w2.c4 != 0:
            return False, None
        u6 = w1.c6 / w2.c6
        u = _rational_nth_root(u6, 6)
        if u is None:
            return False, None
        cands = [u, -u]
    else:
        if w2.c6 != 0:
            return False, None
        u4 = w1.c4 / w2.c4
        u = _rational_nth_root(u4, 4)
        if u is None:
            return False, None
        cands = [u, -u]
    a1, a2, a3, a4, a6 = w1.a_invariants()
    b1, b2_, b3, b4_, b6_ = w2.a_invariants()
    for u in cands:
        s = (u * b1 - a1) / 2
        r = (u * u * b2_ - a2 + s * a1 + s * s) / 3
        t = (u ** 3 * b3 - a3 - r * a1) / 2
        ok4 = u ** 4 * b4_ == a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
        ok6 = u ** 6 * b6_ == (a6 + r * a4 + r * r * a2 + r ** 3
                               - t * a3 - t * t - r * t * a1)
        if ok4 and ok6:
            return True, (u, r, s, t)
    return False, None


def reduced_model(model):
    """Shrink a model's coefficients by the u-scaling isomorphism alone:
    clear denominators, then strip every prime power the weights allow.

    Nagell reduction at a large point tends to hand back models whose
    coefficients are hundred-digit fractions; those are correct but poison
    any later numeric work through the chart.  Returns (model2, urst) with
    urst in the isomorphic_over_Q sense, mapping points of the input onto
    model2, or (model, None) when nothing improves.
    """
    wts = (1, 2, 3, 4, 6)
    a = model.a_invariants()
    n = 1
    for c in a:
        n = n * c.denominator // gcd(n, c.denominator)
    ints = [int(c * n ** w) for c, w in zip(a, wts)]
    # divisor candidates: whatever small primes show up in the common
    # denominator, plus the first few primes for integral non-minimality
    cands = {2, 3, 5, 7, 11, 13}
    left = n
    p = 2
    while p * p <= left and p < 100000:
        if left % p == 0:
            cands.add(p)
            while left % p == 0:
                left //= p
        p += 1 if p == 2 else 2
    if left > 1:
        cands.add(left)
    m = 1
    for q in sorted(cands):
        if q < 2:
            continue
        while all(c % q ** w == 0 for c, w in zip(ints, wts)):
            ints = [c // q ** w for c, w in zip(ints, wts)]
            m *= q
    u = Fraction(m, n)
    if u == 1:
        return model, None
    out = WeierstrassModel(*ints)

    def bulk(mod):
        return sum(c.numerator.bit_length() + c.denominator.bit_length()
                   for c in mod.a_invariants())

    # clearing a denominator with a large prime cofactor can inflate the
    # integers past any stripping; keep the original in that case
    if bulk(out) >= bulk(model):
        return model, None
    return out, (u, Fraction(0), Fraction(0), Fraction(0))


# --- non-isogeny by point counts --------------------------------------------


def _good_prime(model, p):
    for a in model.a_invariants():
        if a.denominator % p == 0:
            return False
    num = model.disc.numerator
    return num % p != 0


def _count_points(model, p):
    """Number of points of the reduction mod a good prime, infinity included."""
    a1 = model.a1.numerator * pow(model.a1.denominator, -1, p) % p
    a2 = model.a2.numerator * pow(model.a2.denominator, -1, p) % p
    a3 = model.a3.numerator * pow(model.a3.denominator, -1, p) % p
    a4 = model.a4.numerator * pow(model.a4.denominator, -1, p) % p
    a6 = model.a6.numerator * pow(model.a6.denominator, -1, p) % p
    if p == 2:
        count = 1
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y
                        - x ** 3 - a2 * x * x - a4 * x - a6) % 2 == 0:
                    count += 1
        return count
    # complete the square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (2 * a4 + a1 * a3) % p
    b6 = (a3 * a3 + 4 * a6) % p
    count = 1
    for x in range(p):
        rhs = (4 * x ** 3 + b2 * x * x + 2 * b4 * x + b6) % p
        if rhs == 0:
            count += 1
        elif pow(rhs, (p - 1) // 2, p) == 1:
            count += 2
    return count


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def non_isogeny_certificate(w1, w2, prime_bound=100):
    """The first good prime up to the bound where the two reductions have
    different point counts; None when every tested prime agrees.

    A mismatch certifies the curves are not isogenous; agreement proves
    nothing."""
    for p in range(2, int(prime_bound) + 1):
        if not _is_prime(p):
            continue
        if _good_prime(w1, p) and _good_prime(w2, p):
            if _count_points(w1, p) != _count_points(w2, p):
                return p
    return None


# --- height-bounded search for rational points ------------------------------


def point_search(G, height_bound):
    """All primitive integer projective zeros of the cubic with max-norm up
    to the bound, in lexicographic order.

    Enumeration is vectorized with 64-bit wraparound arithmetic (a sound
    necessary condition: an exact zero is zero mod 2^64), survivors are
    confirmed with exact integer arithmetic."""
    prim, _ = G.primitive()
    cs = [int(c) for c in prim.coeffs]
    B = int(height_bound)
    if B < 1:
        return []
    mask = (1 << 64) - 1

    def to_signed(v):
        v &= mask
        return v - (1 << 64) if v >= (1 << 63) else v

    rng = np.arange(-B, B + 1, dtype=np.int64)
    Y, Z = np.meshgrid(rng, rng, indexing="ij")
    ypow = [np.ones_like(Y)]
    zpow = [np.ones_like(Z)]
    for _ in range(3):
        ypow.append(ypow[-1] * Y)
        zpow.append(zpow[-1] * Z)
    from .core.poly import MONOMIALS

    found = []
    for x in range(0, B + 1):
        acc = np.zeros_like(Y)
        for (i, j, k), cval in zip(MONOMIALS, cs):
            if cval == 0:
                continue
            factor = to_signed(cval * x ** i)
            if factor == 0:
                continue
            acc = acc + np.int64(factor) * ypow[j] * zpow[k]
        for iy, iz in np.argwhere(acc == 0):
            y = int(rng[iy])
            z = int(rng[iz])
            if x == 0 and (y < 0 or (y == 0 and z <= 0)):
                continue
            if x == 0 and y == 0 and z != 1:
                continue
            g = gcd(gcd(abs(x), abs(y)), abs(z))
            if g != 1:
                continue
            total = sum(
                c * x ** i * y ** j * z ** k
                for (i, j, k), c in zip(MONOMIALS, cs)
            )
            if total == 0:
                found.append((x, y, z))
    found.sort()
    return found
