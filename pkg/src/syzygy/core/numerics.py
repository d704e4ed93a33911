"""Arbitrary-precision complex numerics on top of mpmath.

Precision is always passed explicitly in bits.  Thresholds follow one rule:
a residual is "zero" below 2^(-prec/2) relative to the natural scale of the
data, and quantities are "distinct" above that.  Everything here is
deterministic given the seed.
"""

import random
from fractions import Fraction

import mpmath
from mpmath import mp, mpc, mpf, workprec

from ..errors import NonConvergence

DEFAULT_PRECISION = 512


def tol(prec):
    """The standard residual threshold 2^(-prec/2)."""
    return mpf(2) ** (-(prec // 2))


def loose_tol(prec):
    """Separation threshold used when deciding that things are distinct."""
    return mpf(2) ** (-(prec // 8))


def to_mpf(x, prec):
    with workprec(prec + 16):
        if isinstance(x, Fraction):
            return mpf(x.numerator) / mpf(x.denominator)
        return mpf(x)


def to_mpc(x, prec):
    with workprec(prec + 16):
        if isinstance(x, Fraction):
            return mpc(mpf(x.numerator) / mpf(x.denominator))
        return mpc(x)


def cubic_coeffs_numeric(F, prec):
    """The 10 coefficients of a TernaryCubic as mpc at the given precision."""
    return [to_mpc(c, prec) for c in F.coeffs]


def poly_eval(coeffs, x):
    """Horner evaluation of an ascending coefficient list."""
    total = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        total = total * x + c
    return total


def poly_derivative(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def poly_l1(coeffs):
    return sum(abs(c) for c in coeffs)


def complex_roots(coeffs, prec, seed=0, maxiter=600):
    """All roots of a univariate polynomial by Aberth simultaneous iteration.

    coeffs is ascending and may hold Fractions, ints, mpf or mpc entries;
    work happens at prec plus guard bits.  Returns roots sorted by (re, im),
    with multiple roots repeated and clustered to a common polished value.
    Residuals are checked against 2^(-prec/2) * l1-norm, as promised.
    """
    wp = prec + 64
    with workprec(wp):
        cs = [to_mpc(c, wp) for c in coeffs]
        while cs and abs(cs[-1]) == 0:
            cs.pop()
        if len(cs) <= 1:
            raise ValueError("root finding needs degree >= 1")
        # exact zero roots split off for stability
        nzero = 0
        while abs(cs[0]) == 0:
            cs.pop(0)
            nzero += 1
        roots = [mpc(0)] * nzero
        n = len(cs) - 1
        if n >= 1:
            roots.extend(_aberth(cs, wp, seed, maxiter))
        norm = poly_l1([to_mpc(c, wp) for c in coeffs])
        thresh = tol(prec) * norm
        full = [to_mpc(c, wp) for c in coeffs]
        for r in roots:
            scale = max(mpf(1), abs(r)) ** (len(full) - 1)
            if abs(poly_eval(full, r)) > thresh * scale:
                raise NonConvergence(
                    f"root residual {mpmath.nstr(abs(poly_eval(full, r)))} "
                    f"exceeds threshold at {prec} bits"
                )
        roots.sort(key=lambda z: (z.real, z.imag))
        return roots


def _aberth(cs, wp, seed, maxiter):
    n = len(cs) - 1
    lead = cs[-1]
    monic = [c / lead for c in cs]
    dcs = poly_derivative(monic)
    rng = random.Random(seed)
    radius = 1 + max(abs(c) for c in monic[:-1]) if n > 0 else mpf(1)
    zs = []
    for k in range(n):
        angle = 2 * mpmath.pi * (k + mpf(1) / 4 + mpf(rng.random()) / 8) / n
        rr = radius * (mpf(1) + mpf(rng.random()) / 16)
        zs.append(rr * mpmath.exp(mpc(0, 1) * angle))
    target = mpf(2) ** (-wp + 8)
    for _ in range(maxiter):
        moved = mpf(0)
        new = list(zs)
        for k in range(n):
            pv = poly_eval(monic, zs[k])
            dv = poly_eval(dcs, zs[k])
            if pv == 0:
                continue
            if dv == 0:
                new[k] = zs[k] * (1 + mpf(1) / 1024) + mpf(1) / 1024
                moved = max(moved, mpf(1))
                continue
            ratio = pv / dv
            acc = mpc(0)
            for j in range(n):
                if j != k:
                    d = zs[k] - zs[j]
                    if d == 0:
                        d = mpf(2) ** (-wp)
                    acc += 1 / d
            denom = 1 - ratio * acc
            if denom == 0:
                step = ratio
            else:
                step = ratio / denom
            new[k] = zs[k] - step
            moved = max(moved, abs(step) / max(mpf(1), abs(zs[k])))
        zs = new
        if moved < target:
            break
    else:
        # multiple roots converge slowly; clustering below may still save us
        pass
    return _cluster_and_polish(monic, dcs, zs, wp)


def _cluster_and_polish(monic, dcs, zs, wp):
    n = len(zs)
    sep = mpf(2) ** (-(wp // 4))
    scale = max([mpf(1)] + [abs(z) for z in zs])
    used = [False] * n
    out = []
    for i in range(n):
        if used[i]:
            continue
        cluster = [i]
        used[i] = True
        for j in range(i + 1, n):
            if not used[j] and abs(zs[i] - zs[j]) < sep * scale:
                cluster.append(j)
                used[j] = True
        center = sum(zs[j] for j in cluster) / len(cluster)
        m = len(cluster)
        # a root of multiplicity m is a simple root of the (m-1)st derivative
        dcoeffs = monic
        for _ in range(m - 1):
            dcoeffs = poly_derivative(dcoeffs)
        center = _newton1(dcoeffs, center, wp)
        out.extend([center] * m)
    return out


def _newton1(coeffs, z, wp, steps=80):
    d = poly_derivative(coeffs)
    target = mpf(2) ** (-wp + 6)
    for _ in range(steps):
        pv = poly_eval(coeffs, z)
        dv = poly_eval(d, z)
        if dv == 0:
            break
        step = pv / dv
        z = z - step
        if abs(step) < target * max(mpf(1), abs(z)):
            break
    return z


def newton_system2(fs, jac, start, prec, steps=120):
    """Newton iteration on a 2-equation, 2-unknown complex system.

    fs(u, v) returns the pair of values, jac(u, v) the 2x2 Jacobian.
    Returns the polished pair; convergence is the caller's residual problem.
    """
    wp = prec + 64
    with workprec(wp):
        u, v = mpc(start[0]), mpc(start[1])
        target = mpf(2) ** (-wp + 10)
        for _ in range(steps):
            f1, f2 = fs(u, v)
            (a, b), (c, d) = jac(u, v)
            det = a * d - b * c
            if det == 0:
                break
            du = (f1 * d - f2 * b) / det
            dv = (f2 * a - f1 * c) / det
            u, v = u - du, v - dv
            if max(abs(du), abs(dv)) < target * max(mpf(1), abs(u), abs(v)):
                break
        return u, v


def solve_linear(rows, rhs, prec):
    """Gaussian elimination with partial pivoting for small complex systems."""
    with workprec(prec + 32):
        n = len(rows)
        A = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
        for k in range(n):
            piv = max(range(k, n), key=lambda i: abs(A[i][k]))
            if abs(A[piv][k]) == 0:
                raise ZeroDivisionError("singular linear system")
            A[k], A[piv] = A[piv], A[k]
            for i in range(k + 1, n):
                f = A[i][k] / A[k][k]
                for j in range(k, n + 1):
                    A[i][j] -= f * A[k][j]
        xs = [mpc(0)] * n
        for k in range(n - 1, -1, -1):
            s = A[k][n] - sum(A[k][j] * xs[j] for j in range(k + 1, n))
            xs[k] = s / A[k][k]
        return xs


def nullspace_vector(rows, prec):
    """Kernel vector of a tall complex matrix expected to have nullity one.

    Returns (vector, smallest_sv, second_smallest_sv); the caller decides
    whether the gap is convincing.  Uses mpmath's SVD.
    """
    with workprec(prec + 32):
        A = mp.matrix(len(rows), len(rows[0]))
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                A[i, j] = x
        U, S, V = mp.svd_c(A)
        svals = [S[i] for i in range(S.rows * S.cols)]
        order = sorted(range(len(svals)), key=lambda i: abs(svals[i]))
        smallest = order[0]
        vec = [mpmath.conj(V[smallest, j]) for j in range(V.cols)]
        s0 = abs(svals[order[0]])
        s1 = abs(svals[order[1]]) if len(order) > 1 else mpf("inf")
        return vec, s0, s1


def normalize_projective(vec, prec):
    """Divide by the entry of largest modulus; that entry becomes exactly 1."""
    with workprec(prec + 32):
        best = max(range(len(vec)), key=lambda i: abs(vec[i]))
        pivot = vec[best]
        if abs(pivot) == 0:
            raise ZeroDivisionError("cannot normalize the zero vector")
        return tuple(x / pivot for x in vec), best


def point_distance(p, q, prec):
    """Projective distance between normalized point tuples: best over the
    phase ambiguity left by largest-entry normalization."""
    with workprec(prec + 32):
        best = None
        for pi, qi in zip(p, q):
            if abs(qi) > mpf(1) / 2 and abs(pi) > mpf(1) / 2:
                phase = pi / qi
                d = max(abs(a - phase * b) for a, b in zip(p, q))
                best = d if best is None else min(best, d)
        if best is None:
            best = max(abs(a - b) for a, b in zip(p, q))
        return best


def fallback_transforms(count=24):
    """A deterministic list of exact integer coordinate changes, used when a
    construction degenerates in the given coordinates.  Starts with gentle
    permutations and shears, then seeded random matrices with det != 0."""
    from .linalg import det3

    mats = [
        ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
        ((0, 0, 1), (1, 0, 0), (0, 1, 0)),
        ((0, 1, 0), (0, 0, 1), (1, 0, 0)),
        ((1, 0, 1), (0, 1, 0), (0, 0, 1)),
        ((1, 0, 0), (0, 1, 1), (0, 0, 1)),
        ((1, 1, 0), (0, 1, 0), (0, 0, 1)),
        ((1, 0, 0), (1, 1, 0), (1, 1, 1)),
        ((1, 1, 1), (0, 1, 0), (0, 0, 1)),
        ((1, 2, 0), (0, 1, 2), (1, 0, 1)),
    ]
    rng = random.Random(987123)
    while len(mats) < count:
        M = tuple(tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(3))
        if det3(M) != 0:
            mats.append(M)
    out = []
    for M in mats[:count]:
        out.append(tuple(tuple(Fraction(x) for x in row) for row in M))
    return out
