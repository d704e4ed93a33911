"""Certified rational reconstruction from high-precision values.

The contract: the caller guarantees |value - true| <= 2^-(precision-guard) *
max(1, |value|).  Inside that ball there is at most one rational with
denominator <= denom_bound provided 2^(precision-guard) > 2 * bound^2 * scale,
and limit_denominator finds the nearest one; we then certify it against the
ball.  Returns None (not an error) when nothing certifies: that is the
honest answer for a value that simply is not a small rational.
"""

from fractions import Fraction

import mpmath
from mpmath import mpf

from ..errors import AmbiguousReconstruction, InsufficientPrecision


def mpf_to_fraction(x):
    """Exact dyadic value of an mpf.  Never re-rounds: the ambient mpmath
    precision is deliberately not consulted."""
    if isinstance(x, float):
        return Fraction(x)
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    sign, man, exp, _ = x._mpf_
    # with the gmpy backend man/exp are gmpy2.mpz; keep plain ints out of
    # Fraction internals or later arithmetic trips over mixed C types
    man, exp = int(man), int(exp)
    if man == 0:
        if x == 0:
            return Fraction(0)
        raise ValueError("cannot convert a non-finite value")
    v = Fraction(man, 1)
    if exp >= 0:
        v *= 1 << exp
    else:
        v /= 1 << (-exp)
    return -v if sign else v


def _farey_neighbors(cand, bound):
    """The closest fractions to cand with denominator <= bound, one on each
    side, via the classical mediant construction.  cand must be in lowest
    terms with denominator <= bound."""
    p, q = cand.numerator, cand.denominator
    out = []
    if q == 1:
        return [cand - Fraction(1, bound), cand + Fraction(1, bound)]
    b = pow(p, -1, q)
    a = (p * b - 1) // q
    k = (bound - b) // q
    out.append(Fraction(a + k * p, b + k * q))
    b2 = q - b
    a2 = (p * b2 + 1) // q
    k2 = (bound - b2) // q
    out.append(Fraction(a2 + k2 * p, b2 + k2 * q))
    return out


def rational_reconstruct(value, denom_bound, precision, guard=32):
    """Reconstruct the unique rational p/q, q <= denom_bound, from value.

    value may be an mpf, float, int or Fraction.  Returns the Fraction, or
    None when no candidate lies in the certified error ball.  Raises
    InsufficientPrecision when the ball is too wide to separate candidates.
    """
    denom_bound = int(denom_bound)
    if denom_bound < 1:
        raise ValueError("denominator bound must be positive")
    if isinstance(value, (Fraction, int)):
        v = Fraction(value)
    else:
        v = mpf_to_fraction(value)
    scale = max(Fraction(1), abs(v))
    # uniqueness: distinct rationals with denominator <= B are >= 1/B^2 apart
    if (Fraction(2) ** (precision - guard)) <= 2 * denom_bound * denom_bound * scale:
        raise InsufficientPrecision(
            f"{precision} bits (guard {guard}) cannot certify denominators up to {denom_bound}"
        )
    eps = scale / (Fraction(2) ** (precision - guard))
    cand = v.limit_denominator(denom_bound)
    if abs(v - cand) > eps:
        return None
    for other in _farey_neighbors(cand, denom_bound):
        if other != cand and abs(v - other) <= eps:
            raise AmbiguousReconstruction(
                f"both {cand} and {other} lie in the error ball"
            )
    return cand


def reconstruct_near_real(z, denom_bound, precision, guard=32):
    """Reconstruct from a complex value whose imaginary part must be noise."""
    re = getattr(z, "real", z)
    im = getattr(z, "imag", 0)
    re_f = mpf_to_fraction(re)
    im_f = mpf_to_fraction(im)
    scale = max(Fraction(1), abs(re_f), abs(im_f))
    if abs(im_f) > scale / Fraction(2) ** (precision - guard):
        return None
    return rational_reconstruct(re_f, denom_bound, precision, guard)


def reconstruct_vector(values, denom_bound, precision, guard=32):
    """Reconstruct every entry or give up: None unless all certify."""
    out = []
    for v in values:
        r = reconstruct_near_real(v, denom_bound, precision, guard)
        if r is None:
            return None
        out.append(r)
    return out


def reconstruct_projective(values, denom_bound, precision, guard=32):
    """Reconstruct a projective vector of complex values as primitive integers.

    Normalizes by the entry of largest modulus, reconstructs the ratios, and
    clears denominators; first nonzero entry made positive.  None on failure.
    """
    from .linalg import primitive_vector

    with mpmath.workprec(precision + 32):
        vals = list(values)
        pivot = max(range(len(vals)), key=lambda i: abs(vals[i]))
        if abs(vals[pivot]) == 0:
            return None
        ratios = [v / vals[pivot] for v in vals]
    fracs = reconstruct_vector(ratios, denom_bound, precision, guard)
    if fracs is None:
        return None
    ints, _ = primitive_vector(fracs)
    return ints
