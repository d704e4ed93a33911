"""Exception hierarchy for syzygy.

Three coarse classes matter to callers (and map to CLI exit codes):
input problems (ParseError), genuine mathematical failures (MathError),
and numeric trouble that higher precision may cure (PrecisionError).
"""


class SyzygyError(Exception):
    pass


class ParseError(SyzygyError):
    """Malformed input document or coefficient string."""


class MathError(SyzygyError):
    """The requested object does not exist or the input is geometrically bad."""


class PrecisionError(SyzygyError):
    """Numeric evidence is inconclusive at the current working precision."""


# --- math failures -----------------------------------------------------------

class SingularInput(MathError):
    """A smooth cubic was required."""


class RankDeficient(MathError):
    """A span expected to have rank 2 collapsed."""


class WrongCount(MathError):
    """An object count differs from what the geometry forces (9 flexes, 4 singular members...)."""


class DegenerateJ(MathError):
    """The j-invariant is constant along the pencil; no equation to solve."""


class BadConfiguration(MathError):
    """A point set does not carry the expected incidence structure."""


class NonScalarCommutator(MathError):
    """A commutator of stabilizer lifts is not scalar; the input is not a torsor of the expected kind."""


class DegenerateTangent(MathError):
    """A tangent construction degenerated and no fallback coordinate change fixed it."""


class NoRationalPoint(MathError):
    """Point search exhausted its height bound."""


class NoJMatch(MathError):
    """No pencil member has the requested j-invariant over the rationals."""


class IsogenousPair(MathError):
    """The construction requires non-isogenous curves."""


class NoLinearEquivalence(MathError):
    """No rational linear change of coordinates links the two cubics."""


class NullSpaceDimension(MathError):
    """Interpolation null space has the wrong dimension after resampling."""


class VerificationFailed(MathError):
    """A certification residual exceeded its threshold."""


class InternalError(MathError):
    """An identity that holds by theory failed; indicates an implementation bug."""


# --- precision failures ------------------------------------------------------

class InsufficientPrecision(PrecisionError):
    """The certified error ball is too wide for the requested reconstruction."""


class AmbiguousReconstruction(PrecisionError):
    """Two rational candidates fit inside the error ball."""


class NonConvergence(PrecisionError):
    """Iteration cap reached without meeting the residual target."""


class ReconstructionFailed(PrecisionError):
    """No certified rational candidate; retry at higher precision."""


class Inconclusive(PrecisionError):
    """A verdict would require margins the current precision cannot support."""


class DegenerateIntersection(PrecisionError):
    """Fewer distinct intersection points than the geometry demands at this precision."""
