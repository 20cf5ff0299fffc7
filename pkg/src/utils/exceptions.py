class OrbiweightError(Exception):
    """Base class for every error raised by the library."""


class PreconditionViolated(OrbiweightError):
    """An input falls outside the hypotheses under which an operation is defined."""


class ExcludedTriple(PreconditionViolated):
    pass


class InvalidTorusParameters(PreconditionViolated):
    pass


class OddParameter(PreconditionViolated):
    pass


class MalformedInstance(PreconditionViolated):
    pass


class ParseError(PreconditionViolated):
    """Text input does not follow the documented grammar."""

    def __init__(self, message: str, text: str = ""):
        super().__init__(f"{message}: {text!r}" if text else message)
        self.text = text


class InternalInconsistency(OrbiweightError):
    """A constructed object failed its own validation; this is a bug, never an input problem."""


class ModelValidationFailed(InternalInconsistency):
    pass


class NormalFormIncomplete(InternalInconsistency):
    pass


class NoRstWitness(PreconditionViolated):
    """No (r, s, t) exists for these residues; the exhaustive search confirmed it."""
