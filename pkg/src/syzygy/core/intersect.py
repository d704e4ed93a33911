"""Numeric intersection of two plane curves given by exact ternary forms.

Everything downstream that needs actual points (flex schemes, singularity
tests, j-invariants) funnels through common_zeros.  The strategy is the
classical one: eliminate z by an exact resultant, root-find the resulting
binary form, lift each root back through the specializations, then polish on
the original two-equation system.  Degenerate coordinate frames are escaped
by retrying under a deterministic list of integer coordinate changes.
"""

import mpmath
from mpmath import workprec, mpf, mpc

from ..errors import DegenerateIntersection
from .linalg import mat_vec
from .numerics import (
    complex_roots,
    fallback_transforms,
    newton_system2,
    normalize_projective,
    point_distance,
    to_mpc,
    tol,
)
from .unipoly import eliminate


def form_l1(p):
    """Sum of |coefficients| of an exact TriPoly, as a float-ish Fraction."""
    total = 0
    for c in p.terms.values():
        total += abs(c)
    return total


def residual_at(p, pt, prec):
    """|p(pt)| relative to the coefficient size and the point size.

    pt is assumed normalized so its largest coordinate has modulus 1, which
    makes the max(|coord|)^deg factor trivial; keep it anyway for callers
    that pass unnormalized points.
    """
    with workprec(prec + 32):
        val = abs(p.evaluate(*pt))
        scale = to_mpc(form_l1(p), prec).real
        if scale == 0:
            return mpf(0)
        m = max(abs(c) for c in pt)
        deg = p.homogeneous_degree()
        if deg is None:
            deg = p.degree()
        return val / (scale * max(mpf(1), m) ** deg)


def _binary_coeffs(r):
    """TriPoly in x,y only -> ascending coefficient list in x (at y=1),
    plus the homogeneous degree."""
    d = r.degree()
    cs = [0] * (d + 1)
    for (i, j, k), c in r.terms.items():
        if k != 0:
            raise ValueError("not a binary form in x,y")
        cs[i] = cs[i] + c
    return cs, d


def _directions(r, prec, seed):
    """Projective roots (a : b) of a binary form in x,y, numerically."""
    cs, d = _binary_coeffs(r)
    ncs = [to_mpc(c, prec) for c in cs]
    # roots at (1 : 0) show up as vanishing top coefficients
    top = d
    with workprec(prec + 32):
        scale = max(abs(c) for c in ncs)
        while top >= 0 and abs(ncs[top]) == 0:
            top -= 1
    dirs = [(mpc(1), mpc(0))] * (d - top)
    finite = ncs[: top + 1]
    if top >= 1:
        for z in complex_roots(finite, prec, seed=seed):
            dirs.append((z, mpc(1)))
    return dirs


def _z_poly(p2, a, b, prec):
    """Coefficients (ascending in z) of p2(a, b, z) for numeric a, b."""
    deg = p2.degree()
    with workprec(prec + 32):
        out = [mpc(0)] * (deg + 1)
        for (i, j, k), c in p2.terms.items():
            out[k] += to_mpc(c, prec) * a**i * b**j
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out


def polish_zero(p2, q2, pt, prec):
    """Newton-polish a candidate common zero in the best affine chart."""
    with workprec(prec + 32):
        fixed = max(range(3), key=lambda i: abs(pt[i]))
    free = [i for i in range(3) if i != fixed]
    parts_p = [p2.derivative(i) for i in range(3)]
    parts_q = [q2.derivative(i) for i in range(3)]

    def assemble(u, v):
        w = [None, None, None]
        w[fixed] = mpc(1)
        w[free[0]] = u
        w[free[1]] = v
        return tuple(w)

    def fs(u, v):
        w = assemble(u, v)
        return p2.evaluate(*w), q2.evaluate(*w)

    def jac(u, v):
        w = assemble(u, v)
        return (
            (parts_p[free[0]].evaluate(*w), parts_p[free[1]].evaluate(*w)),
            (parts_q[free[0]].evaluate(*w), parts_q[free[1]].evaluate(*w)),
        )

    with workprec(prec + 32):
        start = (pt[free[0]] / pt[fixed], pt[free[1]] / pt[fixed])
        u, v = newton_system2(fs, jac, start, prec)
        out, _ = normalize_projective(assemble(u, v), prec)
        return out


def common_zeros(p, q, prec, seed=0, polish=True):
    """Isolated common projective zeros of two exact ternary forms.

    Returns a list of normalized numeric points with both residuals below
    tol(prec).  Raises DegenerateIntersection when every coordinate frame in
    the fallback list degenerates (shared component, or forms too special).
    Points sharing a component are out of scope here on purpose: callers
    that can meet one (singularity testing) detect that case themselves.
    """
    if p.is_zero() or q.is_zero():
        raise DegenerateIntersection("zero form handed to common_zeros")
    accept = tol(prec)
    for M in fallback_transforms(10):
        p2 = p.subs_linear(M)
        q2 = q.subs_linear(M)
        r = eliminate(p2, q2, 2)
        if r.is_zero() or r.degree() == 0:
            continue
        frame_ok = True
        candidates = []
        with workprec(prec + 32):
            for a, b in _directions(r, prec, seed):
                zp = _z_poly(p2, a, b, prec)
                zq = _z_poly(q2, a, b, prec)
                sp = max(abs(c) for c in zp)
                sq = max(abs(c) for c in zq)
                near_zero = mpf(2) ** (-prec // 4)
                use, other = zp, q2
                if sp < near_zero:
                    if sq < near_zero:
                        # a whole line of common zeros: not isolated
                        frame_ok = False
                        break
                    use, other = zq, p2
                if len(use) == 1:
                    continue
                for z in complex_roots(use, prec, seed=seed):
                    candidates.append((a, b, z))
            if not frame_ok:
                continue
            candidates.append((mpc(0), mpc(0), mpc(1)))

            found = []
            for a, b, z in candidates:
                pt, _ = normalize_projective((a, b, z), prec)
                if polish:
                    pt = polish_zero(p2, q2, pt, prec)
                if residual_at(p2, pt, prec) > accept:
                    continue
                if residual_at(q2, pt, prec) > accept:
                    continue
                back, _ = normalize_projective(mat_vec(M, pt), prec)
                if residual_at(p, back, prec) > accept or residual_at(q, back, prec) > accept:
                    continue
                found.append(back)

            sep = mpf(2) ** (-prec // 4)
            unique = []
            for pt in found:
                if all(point_distance(pt, u, prec) > sep for u in unique):
                    unique.append(pt)
            unique.sort(key=_sort_key(prec))
            return unique
    raise DegenerateIntersection("no usable coordinate frame for the intersection")


def _sort_key(prec):
    """Deterministic ordering of normalized points, robust to tiny noise."""
    quant = mpf(2) ** (prec // 3)

    def key(pt):
        out = []
        with workprec(prec + 32):
            for c in pt:
                out.append(int(mpmath.nint(c.real * quant)))
                out.append(int(mpmath.nint(c.imag * quant)))
        return tuple(out)

    return key
