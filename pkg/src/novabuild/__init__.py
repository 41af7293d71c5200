"""novabuild: turn a pre-built, serverless web app into a single-file HTML
bundle, a pip-installable notebook widget package, and a static demo page."""

from .codegen import PackageTree, ScaffoldError, materialize, render_project_metadata, scaffold
from .config import (
    BundleConfig,
    ConfigError,
    PackageSpec,
    ParamSpec,
    parse_config,
    serialize_config,
    validate_paths,
)
from .demo import DemoError, generate_demo
from .inliner import BundleError, bundle, check, infer_mime, to_data_uri
from .model import AssetKind, AssetRef, BundleReport, UrlClass, Violation
from .protocol import (
    BOOTSTRAP_MARKER,
    DEFAULT_EVENT_NAME,
    IframeOptions,
    PayloadEnvelope,
    PayloadError,
    encode_payload,
    escape_srcdoc,
    inject_bootstrap,
    new_widget_id,
    render_iframe,
    unescape_srcdoc,
)
from .providers import DirectoryFileProvider, FileProvider, InMemoryFileProvider
from .scanner import ScanResult, classify_url, scan_css, scan_html

__version__ = "0.1.0"

__all__ = [
    "AssetKind",
    "AssetRef",
    "BOOTSTRAP_MARKER",
    "BundleConfig",
    "BundleError",
    "BundleReport",
    "ConfigError",
    "DEFAULT_EVENT_NAME",
    "DemoError",
    "DirectoryFileProvider",
    "FileProvider",
    "IframeOptions",
    "InMemoryFileProvider",
    "PackageSpec",
    "PackageTree",
    "ParamSpec",
    "PayloadEnvelope",
    "PayloadError",
    "ScaffoldError",
    "ScanResult",
    "UrlClass",
    "Violation",
    "bundle",
    "check",
    "classify_url",
    "encode_payload",
    "escape_srcdoc",
    "generate_demo",
    "infer_mime",
    "inject_bootstrap",
    "materialize",
    "new_widget_id",
    "parse_config",
    "render_iframe",
    "render_project_metadata",
    "scaffold",
    "scan_css",
    "scan_html",
    "serialize_config",
    "to_data_uri",
    "unescape_srcdoc",
    "validate_paths",
]
