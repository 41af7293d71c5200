"""Shared domain types: asset references, warnings, violations, and the
bundle report that every pipeline stage appends to."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class AssetKind(str, Enum):
    SCRIPT = "script"
    STYLESHEET = "stylesheet"
    IMAGE = "image"
    FONT = "font"
    ICON = "icon"
    MEDIA = "media"
    CSS_IMPORT = "css-import"
    CSS_URL = "css-url"
    ASSET_MAP_ENTRY = "asset-map-entry"


class UrlClass(str, Enum):
    RELATIVE = "relative"
    ABSOLUTE_REMOTE = "absolute-remote"
    DATA_URI = "data-uri"
    FRAGMENT_ONLY = "fragment-only"
    PROTOCOL_RELATIVE = "protocol-relative"


class SourceKind(str, Enum):
    HTML = "html"
    CSS = "css"


class ExternalReason(str, Enum):
    ALLOWLISTED = "allowlisted"
    REMOTE_NOT_ALLOWLISTED = "remote-not-allowlisted"


class ViolationRule(str, Enum):
    EXTERNAL_SCRIPT = "external-script"
    EXTERNAL_STYLESHEET = "external-stylesheet"
    EXTERNAL_IMAGE = "external-image"
    EXTERNAL_FONT = "external-font"
    EXTERNAL_OTHER = "external-other"


@dataclass(frozen=True)
class AssetRef:
    """One reference from HTML or CSS to an asset.

    ``byte_span`` is the half-open offset range of the URL text within the
    decoded source document; the slice at that range equals ``url`` exactly,
    which is what lets the inliner rewrite by splicing.
    """

    kind: AssetKind
    url: str
    url_class: UrlClass
    source: SourceKind
    source_path: str
    byte_span: tuple[int, int]


@dataclass(frozen=True)
class BuildWarning:
    code: str
    message: str
    location: int | None = None

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "location": self.location}


@dataclass(frozen=True)
class InlinedAsset:
    path: str
    kind: AssetKind
    bytes_before: int
    bytes_after_encoding: int

    def as_dict(self) -> dict:
        return {
            "path": self.path,
            "kind": self.kind.value,
            "bytes_before": self.bytes_before,
            "bytes_after_encoding": self.bytes_after_encoding,
        }


@dataclass(frozen=True)
class KeptExternal:
    url: str
    reason: ExternalReason

    def as_dict(self) -> dict:
        return {"url": self.url, "reason": self.reason.value}


@dataclass(frozen=True)
class Violation:
    url: str
    location: int
    rule: ViolationRule

    def as_dict(self) -> dict:
        return {"url": self.url, "location": self.location, "rule": self.rule.value}


@dataclass
class BundleReport:
    """Accounting of one bundle run: what was inlined, what stayed external,
    and anything worth flagging."""

    inlined: list[InlinedAsset] = field(default_factory=list)
    kept_external: list[KeptExternal] = field(default_factory=list)
    warnings: list[BuildWarning] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)
    total_output_bytes: int = 0

    def warn(self, code: str, message: str, location: int | None = None) -> None:
        self.warnings.append(BuildWarning(code, message, location))

    def as_dict(self) -> dict:
        return {
            "inlined": [entry.as_dict() for entry in self.inlined],
            "kept_external": [entry.as_dict() for entry in self.kept_external],
            "warnings": [entry.as_dict() for entry in self.warnings],
            "violations": [entry.as_dict() for entry in self.violations],
            "total_output_bytes": self.total_output_bytes,
        }
