"""Exception types shared across the package."""


class ParseError(ValueError):
    """A data file is malformed."""


class CycleError(ParseError):
    """The topic hierarchy contains a cycle."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("hierarchy cycle: " + " -> ".join(self.cycle))


class DanglingRefError(ParseError):
    """A relation references a topic that does not exist."""


class UnknownTopicError(KeyError):
    """A topic id is not present in the ontology."""


class ZipError(ValueError):
    """The uploaded archive is not a readable ZIP file."""


class XmlError(ValueError):
    """A book XML document cannot be parsed."""


class SchemaError(ValueError):
    """A book XML document violates the book schema."""


class FormatError(ValueError):
    """An embedding model file is malformed."""


class DuplicateTokenError(FormatError):
    """An embedding model file declares the same token twice."""


class DimensionError(ValueError):
    """A query vector does not match the model dimension."""


class ZeroVectorError(ValueError):
    """A query vector has zero norm."""


class TaggerError(RuntimeError):
    """A part-of-speech tagger failed or returned malformed output."""


class HierarchyError(ParseError):
    """A market-code scheme violates the three-level mono-hierarchy."""


class StoreError(RuntimeError):
    """The annotation store cannot be read or written."""


class ValidationError(ValueError):
    """An annotation record violates its invariants."""
