"""Singularity detection for plane cubics and singular members of pencils.

A cubic is singular exactly when its three partial derivatives share a
projective zero.  Two conics always meet, so the common zeros of the first
two partials exist and are usually four isolated points; the cubic is
singular iff the third partial vanishes at one of them.  The test below is
numeric with an exact short-circuit for small rational witnesses, and an
Inconclusive escape when residuals land between the accept and reject bands.
"""

from math import gcd

import mpmath
from mpmath import workprec, mpf, mpc

from ..errors import (
    DegenerateIntersection,
    Inconclusive,
    MathError,
    ReconstructionFailed,
    WrongCount,
)
from ..core.intersect import common_zeros, residual_at
from ..core.numerics import (
    DEFAULT_PRECISION,
    loose_tol,
    normalize_projective,
    point_distance,
    tol,
)
from ..core.reconstruct import reconstruct_projective
from ..core.unipoly import binary_rational_roots


_SMALL_WITNESS_HEIGHT = 6


def _small_rational_witness(parts):
    """Exhaustive search for a small projective integer point killing all
    three partials; cheap insurance that also yields tidy witnesses."""
    b = _SMALL_WITNESS_HEIGHT
    for x in range(0, b + 1):
        for y in range(-b, b + 1):
            for z in range(-b, b + 1):
                if (x, y, z) == (0, 0, 0):
                    continue
                if x == 0 and (y < 0 or (y == 0 and z < 0)):
                    continue
                g = gcd(gcd(abs(x), abs(y)), abs(z))
                if g != 1:
                    continue
                if all(p.evaluate(x, y, z) == 0 for p in parts):
                    return (x, y, z)
    return None


def is_singular(G, precision=DEFAULT_PRECISION, seed=0):
    """(flag, witness): does the cubic have a singular point?

    The witness is a tuple of integers when a rational singular point was
    confirmed exactly, else None.  Smooth verdicts require every candidate
    common zero of the first two partials to fail the third one by a wide
    margin; anything in between raises Inconclusive.
    """
    if G.is_zero():
        raise MathError("the zero form has no singularity verdict")
    parts = [G.to_tripoly().derivative(i) for i in range(3)]

    witness = _small_rational_witness(parts)
    if witness is not None:
        return True, witness

    # a vanishing partial leaves two conics, and two conics always meet
    if any(p.is_zero() for p in parts):
        return True, None

    try:
        pts = common_zeros(parts[0], parts[1], precision, seed=seed)
    except DegenerateIntersection:
        # the first two partials share a whole component; the third conic
        # meets that component somewhere, so the cubic is singular
        return True, None

    accept = tol(precision)
    reject = loose_tol(precision)
    best = None
    best_pt = None
    for pt in pts:
        r = residual_at(parts[2], pt, precision)
        if best is None or r < best:
            best, best_pt = r, pt
    if best is None:
        # no isolated common zeros survived the residual filter; treat as
        # a degenerate frame problem rather than guessing
        raise Inconclusive("no usable common zeros of the first two partials")
    if best < accept:
        wit = _exact_witness(parts, best_pt, precision)
        return True, wit
    if best > reject:
        return False, None
    raise Inconclusive(
        "singularity residual %s sits between the decision bands" % mpmath.nstr(best, 5)
    )


def _exact_witness(parts, pt, precision):
    """Try to pin the numeric singular point down as exact integers."""
    vec = reconstruct_projective(pt, 10**6, precision)
    if vec is None:
        return None
    if all(p.evaluate(*vec) == 0 for p in parts):
        return tuple(vec)
    return None


def _minors(a, b):
    """The three 2x2 minors of the 3x2 matrix of partials of the two forms.

    A pencil member s*a + t*b has a singular point at v exactly when the
    matrix [grad_a(v) | grad_b(v)] has rank <= 1, i.e. all minors vanish.
    """
    pa = [a.to_tripoly().derivative(i) for i in range(3)]
    pb = [b.to_tripoly().derivative(i) for i in range(3)]
    m1 = pa[1] * pb[2] - pa[2] * pb[1]
    m2 = pa[2] * pb[0] - pa[0] * pb[2]
    m3 = pa[0] * pb[1] - pa[1] * pb[0]
    return (m1, m2, m3), pa, pb


def _vertex_parameters(pencil, precision, seed):
    """Numeric parameters (s : t) at which some member is singular, one per
    singular point, collected from the common zeros of the minors."""
    (m1, m2, m3), pa, pb = _minors(pencil.a, pencil.b)
    if m1.is_zero() and m2.is_zero() and m3.is_zero():
        raise WrongCount("every member of the pencil is singular")
    pairs = [(m1, m2, m3), (m1, m3, m2), (m2, m3, m1)]
    last = None
    for f, g, h in pairs:
        if f.is_zero() or g.is_zero():
            continue
        try:
            pts = common_zeros(f, g, precision, seed=seed)
        except DegenerateIntersection as e:
            last = e
            continue
        params = []
        with workprec(precision + 32):
            for v in pts:
                if residual_at(h, v, precision) > tol(precision):
                    continue
                ga = [p.evaluate(*v) for p in pa]
                gb = [p.evaluate(*v) for p in pb]
                row = max(range(3), key=lambda i: max(abs(ga[i]), abs(gb[i])))
                norm = max(abs(ga[row]), abs(gb[row]))
                if norm < mpf(2) ** (-precision // 2):
                    continue
                st = (gb[row], -ga[row])
                params.append(normalize_projective(st, precision)[0])
        if params:
            return params
    raise (last or WrongCount("no singular members located"))


def singular_members(pencil, precision=DEFAULT_PRECISION, seed=0):
    """Exact rational singular parameters of a pencil, plus the count over
    the complex numbers (with multiplicity).

    The numeric singular points come three to a parameter for an honest
    Hesse-type pencil (each singular member is a triangle with three
    vertices); those parameters are the roots of a quartic binary form which
    is reconstructed exactly and then solved for rational roots.
    """
    params = _vertex_parameters(pencil, precision, seed)
    with workprec(precision + 32):
        sep = mpf(2) ** (-precision // 8)
        clusters = []
        for p in params:
            for c in clusters:
                if point_distance(p, c[0], precision) < sep:
                    c.append(p)
                    break
            else:
                clusters.append([p])
        weighted = []
        total = 0
        for c in clusters:
            if len(c) % 3 != 0:
                raise WrongCount(
                    "singular points cluster into groups of %d, not 3" % len(c)
                )
            weighted.append((c[0], len(c) // 3))
            total += len(c) // 3
        if total != 4:
            raise WrongCount("pencil has %d singular members, expected 4" % total)

        # expand the exact quartic from its numeric roots, then reconstruct
        quartic = [mpc(1)]
        for (s, t), mult in weighted:
            for _ in range(mult):
                quartic = _mul_linear(quartic, t, -s)
        vec = reconstruct_projective(quartic, 10**30, precision)
    if vec is None:
        raise ReconstructionFailed("singularity quartic did not reconstruct")

    out = []
    for (s, t), mult in binary_rational_roots(list(vec)):
        member = pencil.member(s, t)
        flag, _ = is_singular(member, precision, seed=seed)
        if not flag:
            raise ReconstructionFailed(
                "reconstructed parameter (%s : %s) is not singular" % (s, t)
            )
        out.append(((s, t), mult))
    return out, total


def _mul_linear(coeffs, c0, c1):
    """Multiply a binary form (ascending in s, coeff list) by c0*s + c1*t.

    coeffs[i] is the coefficient of s^i t^(d-i); multiplying by c0*s raises
    the s-power, by c1*t raises the t-power.
    """
    d = len(coeffs)
    out = [mpc(0)] * (d + 1)
    for i, c in enumerate(coeffs):
        out[i + 1] += c * c0
        out[i] += c * c1
    return out
