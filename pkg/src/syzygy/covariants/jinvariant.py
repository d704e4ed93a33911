"""j-invariants of smooth plane cubics, and the j map along a pencil.

For a single curve: pick one inflection point numerically, move it to
[0:1:0] with its tangent onto the line z = 0, read off a generalized
Weierstrass equation and evaluate the classical c4/c6 formulas.  The value
comes back exact whenever rational reconstruction certifies it.

For a pencil: j(s,t) is a ratio of two binary forms of degree at most 12 in
the parameters.  No closed formula is expanded; instead j is sampled at
enough parameters, the coefficients are fitted as a nullspace of one linear
system, reconstructed exactly, verified on held-out parameters, and only
then is j(s,t) = j0 solved by rational root finding.
"""

from fractions import Fraction

import mpmath
from mpmath import mpc, mpf, workprec

from ..core.intersect import common_zeros, polish_zero
from ..core.linalg import cross, det3, kernel_basis, mat_from_cols, primitive_vector
from ..core.numerics import (
    DEFAULT_PRECISION,
    loose_tol,
    normalize_projective,
    nullspace_vector,
    to_mpc,
    tol,
)
from ..core.reconstruct import reconstruct_near_real, reconstruct_projective
from ..core.unipoly import (
    binary_eval,
    binary_exact_div,
    binary_gcd,
    binary_rational_roots,
)
from ..errors import (
    DegenerateJ,
    InsufficientPrecision,
    MathError,
    PrecisionError,
    ReconstructionFailed,
    SingularInput,
)
from .forms import canonical_parameter, caylean, hessian
from .singular import is_singular


def weierstrass_invariants(a1, a2, a3, a4, a6):
    """b2, b4, b6, b8, c4, c6 and the discriminant of a long Weierstrass
    equation.  Plain ring arithmetic, so Fractions stay exact and mpc values
    run at the ambient precision."""
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2 ** 3) + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return b2, b4, b6, b8, c4, c6, disc


def _maxnorm(v):
    return max(abs(c) for c in v)


def _flex_frame(G, flex, prec):
    """Coordinate change whose columns are (tangent point, flex, filler):
    it sends [0:1:0] to the flex and the line z = 0 onto the tangent."""
    with workprec(prec + 32):
        grad = tuple(to_mpc(g, prec) for g in G.gradient_at(flex))
        basis = (
            (mpc(1), mpc(0), mpc(0)),
            (mpc(0), mpc(1), mpc(0)),
            (mpc(0), mpc(0), mpc(1)),
        )
        # the tangent line is grad . v = 0; candidate second points on it
        tangent_pt, best = None, mpf(-1)
        for ek in basis:
            t = cross(grad, ek)
            n = _maxnorm(t)
            if n == 0:
                continue
            t = tuple(c / n for c in t)
            sep = _maxnorm(cross(t, flex))
            if sep > best:
                tangent_pt, best = t, sep
        if tangent_pt is None or best <= tol(prec):
            raise InsufficientPrecision("tangent direction at the flex is degenerate")
        filler, fbest = None, mpf(-1)
        for ek in basis:
            d = abs(det3(mat_from_cols(tangent_pt, flex, ek)))
            if d > fbest:
                filler, fbest = ek, d
        return mat_from_cols(tangent_pt, flex, filler)


def _weierstrass_at_flex(G, flex, prec):
    """Numeric (a1, a2, a3, a4, a6) of G viewed from the given flex."""
    M = _flex_frame(G, flex, prec)
    with workprec(prec + 32):
        moved = G.to_tripoly().subs_linear(M)

        def co(e):
            # absent terms come back as Fraction(0), which mpf refuses to
            # compare against; funnel everything through mpc
            return to_mpc(moved.coefficient(e), prec)

        scale = _maxnorm([to_mpc(c, prec) for c in moved.terms.values()])
        if scale == 0:
            raise MathError("the zero form has no Weierstrass model")
        thresh = tol(prec) * scale
        for dead in ((0, 3, 0), (1, 2, 0), (2, 1, 0)):
            if abs(co(dead)) > thresh:
                raise InsufficientPrecision(
                    "inflection normalization left y-cubic terms; "
                    "the chosen point is not a flex to working accuracy"
                )
        p = co((0, 2, 1))
        lead = co((3, 0, 0))
        if abs(p) <= thresh or abs(lead) <= thresh:
            raise InsufficientPrecision("degenerate frame at the chosen flex")
        a1 = co((1, 1, 1)) / p
        a3_pre = co((0, 1, 2)) / p
        # y^2 + a1 xy + (b)y = C x^3 + D x^2 + E x + F; absorb C by x -> x/C
        C = -lead / p
        D = -co((2, 0, 1)) / p
        E = -co((1, 0, 2)) / p
        Fc = -co((0, 0, 3)) / p
        return a1, D, a3_pre * C, C * E, C * C * Fc


def j_numeric(G, precision=DEFAULT_PRECISION, seed=0, denom_bound=10 ** 30,
              reconstruct=True, check_smooth=True):
    """j-invariant of a smooth plane cubic.

    Returns a Fraction when reconstruction certifies one with denominator up
    to denom_bound, otherwise the high-precision complex value.  Set
    check_smooth=False only when the caller has already vouched for
    smoothness.
    """
    if G.is_zero():
        raise MathError("the zero form has no j-invariant")
    if check_smooth:
        flag, _ = is_singular(G, precision=DEFAULT_PRECISION, seed=seed)
        if flag:
            raise SingularInput("j-invariant requested for a singular cubic")
    locate = min(precision, DEFAULT_PRECISION)
    gt = G.to_tripoly()
    ht = hessian(G).to_tripoly()
    pts = common_zeros(gt, ht, locate, seed=seed)
    if not pts:
        raise InsufficientPrecision("found no inflection points")
    flex = pts[0]
    if precision > locate:
        flex = polish_zero(gt, ht, flex, precision)
        flex, _ = normalize_projective(flex, precision)
    with workprec(precision + 32):
        a = _weierstrass_at_flex(G, flex, precision)
        _, _, _, _, c4, c6, disc = weierstrass_invariants(*a)
        dscale = max(mpf(1), abs(c4) ** 3, abs(c6) ** 2)
        if abs(disc) <= tol(precision) * dscale:
            raise InsufficientPrecision("discriminant vanishes to working accuracy")
        j = mpc(c4) ** 3 / disc
    if reconstruct:
        claimed = precision - 64
        with workprec(precision + 32):
            mag = int(mpmath.mag(abs(j))) if j != 0 else 0
        # certification needs 2^(claimed-32) > 2 B^2 max(1,|j|); cap the
        # denominator bound so low working precision degrades to the numeric
        # value instead of tripping the reconstruction precondition
        room = claimed - 34 - max(mag, 0)
        if room > 6:
            bound = min(int(denom_bound), 1 << (room // 2))
            cand = reconstruct_near_real(j, bound, claimed)
            if cand is not None:
                return cand
    return j


def _parameter_stream():
    """Deterministic coprime (s, t) pairs, small height first."""
    yield (1, 0)
    yield (0, 1)
    k = 1
    while True:
        yield (1, k)
        yield (1, -k)
        if k % 2:
            yield (2, k)
            yield (2, -k)
        k += 1


def j_map_on_pencil(pencil, precision=DEFAULT_PRECISION, seed=0,
                    samples=30, sample_precision=None):
    """The j-invariant along the pencil as an exact ratio num(s,t)/den(s,t)
    of integer binary forms of common degree at most 12.

    Fitted by high-precision sampling, reconstructed, then certified on
    held-out parameters.  The result is cached on the pencil object, since
    the fit is by far the expensive step and every j query reuses it."""
    cached = getattr(pencil, "_j_map_cache", None)
    if cached is not None:
        return cached
    sp = sample_precision or max(4 * precision, 2048)
    want = samples + 2  # pad by two held-out verification parameters
    data = []
    stream = _parameter_stream()
    attempts = 0
    while len(data) < want and attempts < 4 * want:
        s, t = next(stream)
        attempts += 1
        member = pencil.member(s, t)
        try:
            # no smoothness pre-check: the discriminant gate inside
            # j_numeric runs at full sample precision and is the more
            # reliable filter for ill-conditioned members
            jv = j_numeric(member, sp, seed=seed, reconstruct=False,
                           check_smooth=False)
        except (MathError, PrecisionError):
            continue
        data.append((s, t, jv))
    if len(data) < want:
        raise ReconstructionFailed(
            f"only {len(data)} of {want} parameters produced a j value"
        )
    fit, holdout = data[:samples], data[samples:]
    with workprec(sp + 32):
        jscale = max([mpf(1)] + [abs(jv) for _, _, jv in fit])
        spread = max(abs(jv - fit[0][2]) for _, _, jv in fit)
        if spread < loose_tol(sp) * jscale:
            raise DegenerateJ("the j-invariant is constant along this pencil")

    result = _exact_map_from_samples(fit, holdout, sp)
    if result is None:
        result = _float_map_from_samples(fit, holdout, sp)
    if result is None:
        raise ReconstructionFailed(
            "sampled j data produced no certifiable map; raise sample precision"
        )
    num, den = result
    pencil._j_map_cache = (num, den)
    return num, den


def _reduce_map_pair(num, den):
    """Strip a common polynomial factor and the integer content from a
    fitted (numerator, denominator) pair.  Fraction lists in, Fraction
    lists out."""
    g = binary_gcd(num, den)
    if len(g) > 1:
        num = binary_exact_div(num, g)
        den = binary_exact_div(den, g)
    joint, _ = primitive_vector(list(num) + list(den))
    num = [Fraction(c) for c in joint[: len(num)]]
    den = [Fraction(c) for c in joint[len(num):]]
    return num, den


def _exact_map_from_samples(fit, holdout, sp):
    """Interpolate the j map exactly when every sampled value reconstructs
    to a rational number.

    Members at rational parameters are rational cubics, so their j is a
    rational number and this is the expected case.  Doing the linear
    algebra over Fraction sidesteps a nasty failure of the floating fit:
    pencils with lopsided coefficients admit lower-degree near-solutions
    whose residuals sit hundreds of digits below any fixed tolerance, and
    no singular-value threshold can tell those shadows from a genuine
    kernel.  Exact elimination reports the kernel dimension outright."""
    exact = []
    for s, t, jv in fit + holdout:
        q = reconstruct_near_real(jv, 10 ** (sp // 10), sp - sp // 8)
        if q is None:
            return None
        exact.append((s, t, q))
    deg = 12
    rows = []
    for s, t, q in exact[: len(fit)]:
        pows = [Fraction(s ** a * t ** (deg - a)) for a in range(deg + 1)]
        rows.append(pows + [-q * w for w in pows])
    basis = kernel_basis(rows)
    if not basis:
        return None
    vec = basis[0]
    num = [Fraction(c) for c in vec[: deg + 1]]
    den = [Fraction(c) for c in vec[deg + 1:]]
    if all(c == 0 for c in den) or all(c == 0 for c in num):
        return None
    # a kernel of dimension k+1 just means num and den share a factor of
    # degree k; any single kernel vector is a multiple of the reduced pair
    num, den = _reduce_map_pair(num, den)
    for s, t, q in exact:
        if Fraction(binary_eval(num, s, t)) != q * Fraction(binary_eval(den, s, t)):
            return None
    return num, den


def _float_map_from_samples(fit, holdout, sp):
    """Floating-point fallback fit for sampled j values that resist
    rational reconstruction (denominators beyond the per-value bound).

    Walks the candidate degrees from the bottom; the first vector that
    survives rational reconstruction of its coefficients and the held-out
    comparison is the reduced map.  Smallness of the least singular value
    alone proves nothing here (see _exact_map_from_samples), so acceptance
    leans on the certification, with a spectral-gap screen in front."""
    with workprec(sp + 32):
        accept = mpf(2) ** -(sp // 4)
        gap = mpf(2) ** (sp // 32)
        for deg in range(1, 13):
            raw = []
            for s, t, jv in fit:
                pows = [to_mpc(s ** a * t ** (deg - a), sp) for a in range(deg + 1)]
                raw.append(pows + [-jv * w for w in pows])
            # sampled j values can dwarf the parameter powers by hundreds
            # of digits, which flattens the small singular values;
            # equilibrate columns before judging anything
            ncol = 2 * (deg + 1)
            colmax = []
            for c in range(ncol):
                m = max(abs(r[c]) for r in raw)
                colmax.append(m if m > 0 else mpf(1))
            rows = []
            for r in raw:
                row = [x / colmax[c] for c, x in enumerate(r)]
                big = _maxnorm(row)
                rows.append([x / big for x in row])
            vec, s0, s1 = nullspace_vector(rows, sp)
            if s0 > accept or s0 * gap > s1:
                continue
            vec = [v / colmax[c] for c, v in enumerate(vec)]
            got = _certify_float_map(deg, vec, sp, holdout)
            if got is not None:
                return got
    return None


def _certify_float_map(deg, vec, sp, holdout):
    """Reconstruct one floating kernel vector and vet it against held-out
    samples; None rejects the candidate."""
    # the vector's accuracy is data accuracy divided by the spectral gap;
    # claim progressively less precision until reconstruction bites (a
    # wrong reconstruction loses at the held-out comparison, so this
    # ladder stays sound)
    ints = None
    for shift in (64, sp // 8, sp // 4, 3 * sp // 8):
        claimed = sp - shift
        ints = reconstruct_projective(vec, 10 ** (claimed // 10), claimed)
        if ints is not None:
            break
    if ints is None:
        return None
    num = [Fraction(c) for c in ints[: deg + 1]]
    den = [Fraction(c) for c in ints[deg + 1:]]
    if all(c == 0 for c in den) or all(c == 0 for c in num):
        return None
    num, den = _reduce_map_pair(num, den)
    with workprec(sp + 32):
        for s, t, jv in holdout:
            dv = binary_eval(den, s, t)
            if dv == 0:
                return None
            fitv = to_mpc(binary_eval(num, s, t) / dv, sp)
            if abs(jv - fitv) > mpf(2) ** (-(sp // 4)) * max(mpf(1), abs(jv)):
                return None
    return num, den


def j_on_pencil(pencil, s, t, precision=DEFAULT_PRECISION, seed=0):
    """Exact j-invariant of the member at (s, t), through the fitted map.

    Returns None at parameters where the denominator vanishes (singular
    members have no j)."""
    num, den = j_map_on_pencil(pencil, precision=precision, seed=seed)
    dv = binary_eval(den, s, t)
    if dv == 0:
        return None
    return Fraction(binary_eval(num, s, t)) / Fraction(dv)


def _transition_to(pencil, A, B):
    """Exact 2x2 matrix sending coordinates in the pencil's own basis to
    coordinates in the basis (A, B); None when (A, B) fails to span the
    pencil."""
    cols = []
    for g in (pencil.a, pencil.b):
        rows = [[A.coeffs[i], B.coeffs[i], -g.coeffs[i]] for i in range(10)]
        ker = kernel_basis(rows)
        if len(ker) != 1 or ker[0][2] == 0:
            return None
        x, y, z = ker[0]
        cols.append((x / z, y / z))
    T = ((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1]))
    if T[0][0] * T[1][1] - T[0][1] * T[1][0] == 0:
        return None
    return T


def parameter_correspondence(p1, p2, precision=DEFAULT_PRECISION, seed=0):
    """Rational 2x2 matrix carrying parameters of pencil p1 to parameters
    of pencil p2 so that member j-invariants agree, or None.

    Dual pencils of two cubics with a shared Jacobian are twins, and the
    matching members sit at literally the same parameter once each pencil
    is written in the basis of Cayleans of its own source's Hesse-pencil
    members at two fixed parameters.  Those bases come out of one covariant
    recipe, so the whole correspondence is a change of basis, computed
    exactly; nothing is fitted.  A j comparison at a few parameters guards
    against inputs that are not twins at all."""
    src1 = getattr(p1, "_source", None)
    src2 = getattr(p2, "_source", None)
    if src1 is None or src2 is None:
        return None
    h1, h2 = hessian(src1), hessian(src2)
    M = None
    for (sa, ta), (sb, tb) in (((1, 0), (0, 1)), ((1, 0), (1, 1)),
                               ((0, 1), (1, -1)), ((1, 1), (1, -1))):
        T1 = _transition_to(p1, caylean(src1.scale(sa) + h1.scale(ta)),
                            caylean(src1.scale(sb) + h1.scale(tb)))
        T2 = _transition_to(p2, caylean(src2.scale(sa) + h2.scale(ta)),
                            caylean(src2.scale(sb) + h2.scale(tb)))
        if T1 is None or T2 is None:
            continue
        (a, b), (c, d) = T2
        det = a * d - b * c
        inv2 = ((d / det, -b / det), (-c / det, a / det))
        M = tuple(
            tuple(sum(inv2[i][k] * T1[k][j] for k in range(2)) for j in range(2))
            for i in range(2)
        )
        break
    if M is None:
        return None
    sp = max(4 * precision, 2048)
    checked = 0
    k = 1
    while checked < 3 and k < 40:
        s, t = 1, k
        k += 1
        u = M[0][0] * s + M[0][1] * t
        v = M[1][0] * s + M[1][1] * t
        try:
            j1 = j_numeric(p1.member(s, t), sp, seed=seed, reconstruct=False,
                           check_smooth=False)
            j2 = j_numeric(p2.member(u, v), sp, seed=seed, reconstruct=False,
                           check_smooth=False)
        except (MathError, PrecisionError):
            continue
        with workprec(sp + 32):
            if abs(j1 - j2) > mpf(2) ** (-(sp // 4)) * max(mpf(1), abs(j1)):
                return None
        checked += 1
    if checked < 3:
        return None
    return M


def j_solve_on_pencil(pencil, j0, precision=DEFAULT_PRECISION, seed=0,
                      samples=30, sample_precision=None):
    """All rational projective parameters where the pencil member has
    j-invariant j0, each paired with its member cubic.

    The j map is recovered as an exact ratio of integer binary forms by
    high-precision sampling; members at singular parameters are excluded
    from the answer.
    """
    j0 = Fraction(j0)
    num, den = j_map_on_pencil(pencil, precision=precision, seed=seed,
                               samples=samples,
                               sample_precision=sample_precision)
    resid = [n - j0 * d for n, d in zip(num, den)]
    if all(c == 0 for c in resid):
        raise DegenerateJ("j - j0 vanishes identically on the pencil")
    out = []
    for (s, t), _mult in binary_rational_roots(resid, precision=max(precision, 512), seed=seed):
        # num and den are coprime, so a root of num - j0*den cannot kill
        # den; the guard only protects against a degenerate fit
        if binary_eval(den, s, t) == 0:
            continue
        out.append((canonical_parameter(s, t), pencil.member(s, t)))
    return out
