"""Error hierarchy"""

from typing import Any, Dict, Optional


class TwistorForgeError(Exception):
    """Base class for every error raised by the package"""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.details: Dict[str, Any] = details

    def __getattr__(self, name: str) -> Any:
        details = self.__dict__.get("details", {})
        if name in details:
            return details[name]
        raise AttributeError(name)

    @property
    def witness(self) -> Optional[Dict[str, Any]]:
        """Diagnostic payload suitable for a report `witness` field"""
        if not self.details:
            return None
        return {key: _jsonable(value) for key, value in sorted(self.details.items())}


def _jsonable(value: Any) -> Any:
    if hasattr(value, "to_json"):
        return value.to_json()
    if hasattr(value, "tolist"):
        value = value.tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, dict):
        return {str(key): _jsonable(item) for key, item in value.items()}
    return value


# exterior
class DimensionError(TwistorForgeError):
    """Operands live on tori of different dimension"""


class DegreeError(TwistorForgeError):
    """Operation undefined for the degree of the form"""


class StructureError(TwistorForgeError):
    """A field fails J^2 = -Id, or cannot be evaluated as requested"""


# acs
class RankError(TwistorForgeError):
    """A basis is not of the expected rank"""


class RealKernelError(TwistorForgeError):
    """A sub-bundle meets the real tangent bundle"""


class NotNonDegenerate(TwistorForgeError):
    """A 2-form has a real kernel vector"""


class PowerConditionViolated(TwistorForgeError):
    """Omega^{n+1} (or one of its t-coefficients) is not zero"""


class SphereError(TwistorForgeError):
    """Coefficients (a, b, c) are off the unit sphere"""


# twistor
class RangeError(TwistorForgeError):
    """Model parameter outside the supported range"""


class FiberDriftError(TwistorForgeError):
    """The complex structure on the fibers moves with t"""


class LiftError(TwistorForgeError):
    """A stage of the lifted-form certificate failed"""


# positivity
class BidegreeError(TwistorForgeError):
    """A form does not have the bidegree the operation needs"""


class NotSemipositive(TwistorForgeError):
    """A (1,1)-form takes a negative value"""


class LemmaViolation(TwistorForgeError):
    """A randomized campaign found a counterexample"""


# bbf
class ArityError(TwistorForgeError):
    """Wrong number of classes for a top intersection"""


class NotIsotropic(TwistorForgeError):
    """Classes are not pairwise q-orthogonal and isotropic"""


class ConeError(TwistorForgeError):
    """The reference class is not q-positive"""


class NotFujikiType(TwistorForgeError):
    """An oracle is not of the form lambda * q^n"""


# perdom
class ZeroVectorError(TwistorForgeError):
    """A projective representative is zero"""


class SignatureError(TwistorForgeError):
    """A subspace has the wrong q-signature"""


# ambient
class ConfigError(TwistorForgeError):
    """Invalid run configuration"""


class SerializationError(TwistorForgeError):
    """Malformed JSON payload"""
