"""Exception hierarchy. Every error carries a stable ``code`` string."""

from __future__ import annotations


class HoloError(Exception):
    code = "ERROR"

    def __init__(self, message: str = "", **context):
        super().__init__(message)
        self.context = context


class InvalidCircuit(HoloError):
    code = "INVALID_CIRCUIT"


class BadDims(HoloError):
    code = "BAD_DIMS"


class BadPlane(HoloError):
    code = "BAD_PLANE"


class Unroutable(HoloError):
    code = "UNROUTABLE"


class ParseError(HoloError):
    code = "PARSE_ERROR"

    def __init__(self, message: str, line: int = 0, token: str = ""):
        super().__init__(f"line {line}: {message} (token {token!r})", line=line, token=token)
        self.line = line
        self.token = token


class BadSites(HoloError):
    code = "BAD_SITES"


class DetControlRequired(HoloError):
    code = "DET_CONTROL_REQUIRED"


class NonPauliPropagation(HoloError):
    code = "NONPAULI_PROPAGATION"


class CapExceeded(HoloError):
    code = "CAP_EXCEEDED"


class DimMismatch(HoloError):
    code = "DIM_MISMATCH"


class BadLevel(HoloError):
    code = "BAD_LEVEL"


class LengthMismatch(HoloError):
    code = "LENGTH_MISMATCH"


class MissingAncilla(HoloError):
    code = "MISSING_ANCILLA"


class BadRoles(HoloError):
    code = "BAD_ROLES"


class InsufficientData(HoloError):
    code = "INSUFFICIENT_DATA"


class NoCrossing(HoloError):
    code = "NO_CROSSING"


class ConcatHarmful(HoloError):
    code = "CONCAT_HARMFUL"


class DomainError(HoloError):
    code = "DOMAIN_ERROR"


class EngineFallback(HoloError):
    code = "ENGINE_FALLBACK"
