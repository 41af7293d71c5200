"""Project configuration: the ``nova.config.json`` schema, its validation
rules, and the canonical serialization used for round-tripping."""

from __future__ import annotations

import json
import keyword
import posixpath
import re
from dataclasses import dataclass

from .model import BuildWarning
from .providers import FileProvider

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")
EVENT_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")
PACKAGE_NAME_RE = re.compile(r"[a-z][a-z0-9_]*")
PARAM_NAME_RE = re.compile(r"[a-z][a-z0-9_]*")
VERSION_RE = re.compile(r"[0-9]+\.[0-9]+\.[0-9]+(?:[-+][0-9A-Za-z.-]+)?")

RESERVED_PARAM_NAMES = frozenset({"width", "height", "widget_id"})

DEFAULT_CONFIG_FILENAME = "nova.config.json"


class ConfigError(Exception):
    """Raised for malformed or invariant-violating configuration."""


@dataclass(frozen=True)
class ParamSpec:
    name: str
    required: bool = True
    doc: str = ""


@dataclass(frozen=True)
class PackageSpec:
    package_name: str
    function_name: str = "visualize"
    version: str = "0.1.0"
    description: str = ""
    params: tuple[ParamSpec, ...] = ()
    default_width: int = 800
    default_height: int = 600


@dataclass(frozen=True)
class BundleConfig:
    name: str
    entry: str
    root: str
    package: PackageSpec
    event_name: str = "novaData"
    allow_external: tuple[str, ...] = ()
    asset_map: tuple[str, ...] = ()
    inject_fetch_shim: bool = False
    max_size_mb: float = 20
    sample_payload: str | None = None


def _fail(key: str, value: object, rule: str) -> ConfigError:
    return ConfigError(f"{key}: {value!r} {rule}")


def _expect_str(obj: dict, key: str, qualified: str) -> str:
    value = obj[key]
    if not isinstance(value, str):
        raise _fail(qualified, value, "must be a string")
    return value


def _check_relative_path(qualified: str, value: str) -> str:
    """Reject absolute paths and anything that still points above the root
    after normalization."""
    if not isinstance(value, str) or not value:
        raise _fail(qualified, value, "must be a non-empty relative path")
    if value.startswith("/") or value.startswith("\\") or re.match(r"[A-Za-z]:", value):
        raise _fail(qualified, value, "must be relative, not absolute")
    normalized = posixpath.normpath(value)
    if normalized == ".." or normalized.startswith("../"):
        raise _fail(qualified, value, "escapes the root directory")
    return value


def _parse_param(raw: object, index: int, warnings: list[BuildWarning]) -> ParamSpec:
    qualified = f"package.params[{index}]"
    if isinstance(raw, str):
        raw = {"name": raw}
    if not isinstance(raw, dict):
        raise _fail(qualified, raw, "must be a name or an object")
    if "name" not in raw:
        raise ConfigError(f"{qualified}: missing required key 'name'")
    name = raw["name"]
    if not isinstance(name, str) or not PARAM_NAME_RE.fullmatch(name):
        raise _fail(f"{qualified}.name", name, f"must match {PARAM_NAME_RE.pattern}")
    if name in RESERVED_PARAM_NAMES:
        raise _fail(f"{qualified}.name", name, "collides with a reserved parameter name")
    required = raw.get("required", True)
    if not isinstance(required, bool):
        raise _fail(f"{qualified}.required", required, "must be a boolean")
    doc = raw.get("doc", "")
    if not isinstance(doc, str):
        raise _fail(f"{qualified}.doc", doc, "must be a string")
    for key in raw:
        if key not in ("name", "required", "doc"):
            warnings.append(BuildWarning("unknown-key", f"unknown config key {qualified}.{key}"))
    return ParamSpec(name=name, required=required, doc=doc)


def _parse_package(raw: object, warnings: list[BuildWarning]) -> PackageSpec:
    if not isinstance(raw, dict):
        raise _fail("package", raw, "must be an object")
    if "package_name" not in raw:
        raise ConfigError("package.package_name: missing required key")
    package_name = _expect_str(raw, "package_name", "package.package_name")
    if not PACKAGE_NAME_RE.fullmatch(package_name):
        raise _fail(
            "package.package_name", package_name, f"must match {PACKAGE_NAME_RE.pattern}"
        )

    function_name = raw.get("function_name", "visualize")
    if (
        not isinstance(function_name, str)
        or not function_name.isidentifier()
        or keyword.iskeyword(function_name)
    ):
        raise _fail("package.function_name", function_name, "must be a valid identifier")

    version = raw.get("version", "0.1.0")
    if not isinstance(version, str) or not VERSION_RE.fullmatch(version):
        raise _fail("package.version", version, f"must match {VERSION_RE.pattern}")

    description = raw.get("description", "")
    if not isinstance(description, str):
        raise _fail("package.description", description, "must be a string")

    raw_params = raw.get("params", [])
    if not isinstance(raw_params, list):
        raise _fail("package.params", raw_params, "must be a list")
    params = tuple(_parse_param(item, i, warnings) for i, item in enumerate(raw_params))
    seen: set[str] = set()
    for param in params:
        if param.name in seen:
            raise _fail("package.params", param.name, "duplicates a parameter name")
        seen.add(param.name)

    sizes = {}
    for key, default in (("default_width", 800), ("default_height", 600)):
        value = raw.get(key, default)
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise _fail(f"package.{key}", value, "must be a positive integer")
        sizes[key] = value

    for key in raw:
        if key not in (
            "package_name",
            "function_name",
            "version",
            "description",
            "params",
            "default_width",
            "default_height",
        ):
            warnings.append(BuildWarning("unknown-key", f"unknown config key package.{key}"))

    return PackageSpec(
        package_name=package_name,
        function_name=function_name,
        version=version,
        description=description,
        params=params,
        default_width=sizes["default_width"],
        default_height=sizes["default_height"],
    )


_TOP_LEVEL_KEYS = (
    "name",
    "entry",
    "root",
    "event_name",
    "allow_external",
    "asset_map",
    "inject_fetch_shim",
    "max_size_mb",
    "package",
    "sample_payload",
)


def parse_config(text: str) -> tuple[BundleConfig, list[BuildWarning]]:
    """Parse and validate configuration JSON.

    Returns the validated config with all defaults filled, plus warnings for
    unknown keys (kept non-fatal so configs stay forward-compatible).
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")

    warnings: list[BuildWarning] = []
    for key in ("name", "entry", "root", "package"):
        if key not in raw:
            raise ConfigError(f"{key}: missing required key")

    name = _expect_str(raw, "name", "name")
    if not NAME_RE.fullmatch(name):
        raise _fail("name", name, f"must match {NAME_RE.pattern}")

    entry = _check_relative_path("entry", _expect_str(raw, "entry", "entry"))

    root = _expect_str(raw, "root", "root")
    if not root:
        raise _fail("root", root, "must be a non-empty path")

    event_name = raw.get("event_name", "novaData")
    if not isinstance(event_name, str) or not EVENT_NAME_RE.fullmatch(event_name):
        raise _fail("event_name", event_name, f"must match {EVENT_NAME_RE.pattern}")

    allow_external = raw.get("allow_external", [])
    if not isinstance(allow_external, list) or not all(
        isinstance(item, str) and item for item in allow_external
    ):
        raise _fail("allow_external", allow_external, "must be a list of non-empty prefixes")

    asset_map_raw = raw.get("asset_map", [])
    if not isinstance(asset_map_raw, list):
        raise _fail("asset_map", asset_map_raw, "must be a list of relative paths")
    asset_map = tuple(
        _check_relative_path(f"asset_map[{i}]", item) for i, item in enumerate(asset_map_raw)
    )

    inject_fetch_shim = raw.get("inject_fetch_shim", False)
    if not isinstance(inject_fetch_shim, bool):
        raise _fail("inject_fetch_shim", inject_fetch_shim, "must be a boolean")

    max_size_mb = raw.get("max_size_mb", 20)
    if isinstance(max_size_mb, bool) or not isinstance(max_size_mb, (int, float)):
        raise _fail("max_size_mb", max_size_mb, "must be a positive number")
    if max_size_mb <= 0:
        raise _fail("max_size_mb", max_size_mb, "must be a positive number")

    sample_payload = raw.get("sample_payload")
    if sample_payload is not None:
        sample_payload = _check_relative_path(
            "sample_payload", _expect_str(raw, "sample_payload", "sample_payload")
        )

    package = _parse_package(raw["package"], warnings)

    for key in raw:
        if key not in _TOP_LEVEL_KEYS:
            warnings.append(BuildWarning("unknown-key", f"unknown config key {key}"))

    config = BundleConfig(
        name=name,
        entry=entry,
        root=root,
        package=package,
        event_name=event_name,
        allow_external=tuple(allow_external),
        asset_map=asset_map,
        inject_fetch_shim=inject_fetch_shim,
        max_size_mb=max_size_mb,
        sample_payload=sample_payload,
    )
    return config, warnings


def serialize_config(config: BundleConfig) -> str:
    """Emit the canonical form: two-space-indented JSON, keys in schema order.

    ``parse_config(serialize_config(c))`` reproduces ``c`` exactly.
    """
    doc = {
        "name": config.name,
        "entry": config.entry,
        "root": config.root,
        "event_name": config.event_name,
        "allow_external": list(config.allow_external),
        "asset_map": list(config.asset_map),
        "inject_fetch_shim": config.inject_fetch_shim,
        "max_size_mb": config.max_size_mb,
        "package": {
            "package_name": config.package.package_name,
            "function_name": config.package.function_name,
            "version": config.package.version,
            "description": config.package.description,
            "params": [
                {"name": p.name, "required": p.required, "doc": p.doc}
                for p in config.package.params
            ],
            "default_width": config.package.default_width,
            "default_height": config.package.default_height,
        },
        "sample_payload": config.sample_payload,
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def validate_paths(config: BundleConfig, provider: FileProvider) -> list[BuildWarning]:
    """Confirm the files the config points at actually exist.

    Missing entry or asset-map files are hard errors (they were explicitly
    requested); a missing sample payload only warns.
    """
    if not provider.exists(config.entry):
        raise ConfigError(f"entry: file not found: {config.entry}")
    for rel_path in config.asset_map:
        if not provider.exists(rel_path):
            raise ConfigError(f"asset_map: file not found: {rel_path}")
    warnings: list[BuildWarning] = []
    if config.sample_payload is not None and not provider.exists(config.sample_payload):
        warnings.append(
            BuildWarning(
                "missing-sample-payload",
                f"sample_payload file not found: {config.sample_payload}",
            )
        )
    return warnings
