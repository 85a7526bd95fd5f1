"""Exception hierarchy shared across the package."""


class BivimapError(Exception):
    """Base class; carries a short machine-readable code."""

    code = "error"


class PairingNotAvailableError(BivimapError):
    code = "not-available"


class GeometryParseError(BivimapError):
    code = "geometry-parse"


class MixedGeometryKindsError(BivimapError):
    code = "mixed-geometry-kinds"


class JoinKeyMissingError(BivimapError):
    code = "join-key-missing"

    def __init__(self, missing_ids):
        self.missing_ids = list(missing_ids)
        super().__init__(f"attribute table is missing rows for ids: {self.missing_ids}")


class MissingAttributeError(BivimapError):
    code = "missing-attribute"


class ZeroMeanError(BivimapError):
    code = "zero-mean"


class NonMonotonicEdgesError(BivimapError):
    code = "non-monotonic-edges"


class BadKError(BivimapError):
    code = "bad-k"


class UnavailableVariableError(BivimapError):
    code = "unavailable-variable"


class EmptyTaskListError(BivimapError):
    code = "empty-task-list"


class InvalidTaskTargetError(BivimapError):
    code = "invalid-task-target"


class InvalidWeightsError(BivimapError):
    code = "invalid-weights"


class NoCandidatesError(BivimapError):
    code = "no-candidates"


class UnsupportedImplantationError(BivimapError):
    code = "unsupported-implantation"


class UnsupportedVariableError(BivimapError):
    code = "unsupported-variable"


class LadderEndpointInvalidError(BivimapError):
    code = "ladder-endpoint-invalid"


class FeatureMissingBinError(BivimapError):
    code = "feature-missing-bin"


class StyleDatasetMismatchError(BivimapError):
    code = "style-dataset-mismatch"
