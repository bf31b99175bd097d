"""Exception hierarchy shared by every layer of the toolkit.

Each error carries a short machine-readable ``code`` so tool envelopes and
evaluator reports can classify failures without parsing messages.
"""

from __future__ import annotations

from typing import Any


class CutsceneError(Exception):
    code = "error"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        return {"error": self.code, **self.details}


class SequenceError(CutsceneError):
    code = "sequence-error"


class DuplicateNameError(SequenceError):
    code = "duplicate-name"


class UnknownBindingError(SequenceError):
    code = "unknown-binding"


class BindingKindError(SequenceError):
    code = "binding-is-camera"


class InvalidRangeError(SequenceError):
    code = "invalid-range"


class UnknownCameraError(SequenceError):
    code = "unknown-camera"


class GeometryError(CutsceneError):
    code = "geometry-error"


class CoincidentPointsError(GeometryError):
    code = "coincident-points"


class CoincidentActorsError(GeometryError):
    code = "coincident-actors"


class UnknownBoneError(GeometryError):
    code = "unknown-bone"


class AssetError(CutsceneError):
    code = "asset-error"


class MalformedHeaderError(AssetError):
    code = "malformed-header"


class TypeConversionError(AssetError):
    code = "type-conversion-failure"


class DuplicateIdentifierError(AssetError):
    code = "duplicate-identifier"


class UnknownAssetTypeError(AssetError):
    code = "unknown-asset-type"


class UnknownFilterFieldError(AssetError):
    code = "unknown-filter-field"


class FilterParseError(AssetError):
    code = "filter-parse-error"


class InvalidRegexError(FilterParseError):
    code = "invalid-regex"


class UnparseableNumberError(FilterParseError):
    code = "unparseable-number"


class UnknownAssetError(AssetError):
    code = "unknown-asset"


class UnknownDataTypeError(AssetError):
    code = "unknown-data-type"


class DecodeError(AssetError):
    code = "decode-failure"


class ReceiverError(AssetError):
    code = "receiver-failure"


class FetchError(AssetError):
    code = "url-fetch-failure"


class DuplicateRegistrationError(AssetError):
    code = "duplicate-registration"


class LoaderDispatchError(AssetError):
    code = "loader-dispatch-error"


class ToolError(CutsceneError):
    """Domain failure raised by a tool body; becomes an error envelope."""

    code = "tool-error"

    def __init__(self, code: str, message: str, **details: Any) -> None:
        super().__init__(message, **details)
        self.code = code


class ScenarioError(CutsceneError):
    code = "scenario-error"


class L3ParseError(CutsceneError):
    code = "unparseable"
