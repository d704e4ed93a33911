"""Exact linear algebra over Fraction, plus small 3x3 helpers.

The 3x3 helpers are duck-typed on purpose: they work for Fraction entries
(exact paths) and for mpmath mpc entries (numeric paths) alike.
"""

from fractions import Fraction
from math import gcd


# --- generic 3x3 -------------------------------------------------------------

def identity3():
    one, zero = Fraction(1), Fraction(0)
    return ((one, zero, zero), (zero, one, zero), (zero, zero, one))


def mat_mul(A, B):
    return tuple(
        tuple(sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )


def mat_vec(A, v):
    return tuple(sum(A[i][k] * v[k] for k in range(3)) for i in range(3))


def transpose3(A):
    return tuple(tuple(A[j][i] for j in range(3)) for i in range(3))


def det3(A):
    (a, b, c), (d, e, f), (g, h, i) = A
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def adjugate3(A):
    (a, b, c), (d, e, f), (g, h, i) = A
    return (
        (e * i - f * h, c * h - b * i, b * f - c * e),
        (f * g - d * i, a * i - c * g, c * d - a * f),
        (d * h - e * g, b * g - a * h, a * e - b * d),
    )


def inv3(A):
    d = det3(A)
    if d == 0:
        raise ZeroDivisionError("matrix is singular")
    adj = adjugate3(A)
    return tuple(tuple(x / d for x in row) for row in adj)


def inv_transpose3(A):
    return transpose3(inv3(A))


def mat_from_cols(c0, c1, c2):
    return tuple((c0[i], c1[i], c2[i]) for i in range(3))


def scale_mat(A, s):
    return tuple(tuple(s * x for x in row) for row in A)


def cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


# --- exact echelon form ------------------------------------------------------

def rref(rows):
    """Reduced row echelon form over Fraction.

    Returns (new_rows, pivot_columns). Input is not modified. Pivoting is
    deterministic: first nonzero entry scanning columns left to right.
    """
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [tuple(row) for row in m], pivots


def rank(rows):
    if not rows:
        return 0
    return len(rref(rows)[1])


def kernel_basis(rows):
    """Basis of the right null space of a rational matrix, exact.

    Vectors come out of the reduced echelon form with one free variable set
    to 1 at a time, so the result is canonical for a given input.
    """
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(tuple(v))
    return basis


def solve_unique(rows, rhs):
    """Solve A x = b when the solution is unique; None if inconsistent or underdetermined."""
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    ncols = len(rows[0])
    red, pivots = rref(aug)
    # inconsistent if a pivot lands in the rhs column
    if ncols in pivots:
        return None
    if len(pivots) < ncols:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return tuple(x)


# --- integer normalization ---------------------------------------------------

def primitive_vector(vec):
    """Scale a rational vector to coprime integers, first nonzero entry positive.

    Returns (ints, scalar) with vec == scalar * ints entrywise. The zero
    vector maps to itself with scalar 1.
    """
    fr = [Fraction(x) for x in vec]
    if all(x == 0 for x in fr):
        return tuple(0 for _ in fr), Fraction(1)
    denom = 1
    for x in fr:
        d = int(x.denominator)
        denom = denom * d // gcd(denom, d)
    ints = [int(x * denom) for x in fr]
    g = 0
    for n in ints:
        g = gcd(g, abs(n))
    ints = [n // g for n in ints]
    first = next(n for n in ints if n != 0)
    sign = -1 if first < 0 else 1
    ints = [sign * n for n in ints]
    # vec = scalar * ints with scalar = sign / denom * g
    return tuple(ints), Fraction(sign * g, denom)
