"""Exception hierarchy shared across the pipeline."""


class VforgeError(Exception):
    """Base class for all pipeline errors."""


class MalformedRecord(VforgeError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class UnknownLabel(VforgeError):
    def __init__(self, line: int, label: str):
        super().__init__(f"line {line}: unknown label {label!r}")
        self.line = line
        self.label = label


class NonTreeParse(VforgeError):
    def __init__(self, line: int | None = None, detail: str = "head links do not form a tree"):
        msg = detail if line is None else f"line {line}: {detail}"
        super().__init__(msg)
        self.line = line


class EmptyPool(VforgeError):
    def __init__(self, label: str):
        super().__init__(f"no candidates of the required length for label {label!r}")
        self.label = label


class EmptyRelationPool(VforgeError):
    def __init__(self, label: str):
        super().__init__(f"relation {label!r} has no examples to sample from")
        self.label = label


class DimensionMismatch(VforgeError):
    def __init__(self, expected: int, got: int):
        super().__init__(f"vector dimension mismatch: expected {expected}, got {got}")
        self.expected = expected
        self.got = got


class IdMismatch(VforgeError):
    pass


class ProviderUnavailable(VforgeError):
    pass


class MissingArtifact(VforgeError):
    def __init__(self, path: str, stage: str):
        super().__init__(f"stage {stage!r} requires missing artifact: {path}")
        self.path = path
        self.stage = stage
