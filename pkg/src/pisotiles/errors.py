"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI:
  ValidationError  -> 2
  ResourceCapError -> 3
  PrecisionError   -> 4
"""


class PisotilesError(Exception):
    pass


class ValidationError(PisotilesError):
    """Bad input: malformed substitution, reducible or non-Pisot data, etc."""


class ResourceCapError(PisotilesError):
    """An enumeration exceeded a configured cap (point counts, word length)."""


class PrecisionError(PisotilesError):
    """Working precision was exhausted after the allowed escalations."""


class UnsupportedDigitModel(PisotilesError):
    """Digit extraction is only available when every relevant local factor
    has residue degree 1 and alpha is a uniformiser."""
