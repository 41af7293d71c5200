"""Produce a single self-contained HTML file from an entry document and its
assets, plus the checker that verifies no external references remain.

Rewrites are byte-span splices against the scanner's output, so everything
outside a rewritten span passes through bit-exact. No network access ever
happens here: remote references are left alone and reported.
"""

from __future__ import annotations

import base64
import json
import posixpath
from urllib.parse import unquote

from .config import BundleConfig
from .model import (
    AssetKind,
    BundleReport,
    ExternalReason,
    InlinedAsset,
    KeptExternal,
    UrlClass,
    Violation,
    ViolationRule,
)
from .protocol import ASSET_MAP_GLOBAL, BOOTSTRAP_MARKER
from .providers import FileProvider, ProviderError
from .scanner import (
    DetailedRef,
    ElementInfo,
    find_open_tag,
    has_relative_module_import,
    scan_css,
    scan_html,
    scan_html_detailed,
)

_WS = " \t\n\r\f"

ASSET_MAP_SCRIPT_ID = "nova-asset-map"
FETCH_SHIM_SCRIPT_ID = "nova-fetch-shim"

# bit-exact extension table; anything else falls back to octet-stream
MIME_TYPES = {
    "html": "text/html",
    "js": "text/javascript",
    "mjs": "text/javascript",
    "css": "text/css",
    "png": "image/png",
    "jpg": "image/jpeg",
    "jpeg": "image/jpeg",
    "gif": "image/gif",
    "svg": "image/svg+xml",
    "webp": "image/webp",
    "ico": "image/x-icon",
    "woff": "font/woff",
    "woff2": "font/woff2",
    "ttf": "font/ttf",
    "otf": "font/otf",
    "wasm": "application/wasm",
    "json": "application/json",
    "txt": "text/plain",
    "bin": "application/octet-stream",
}

FALLBACK_MIME = "application/octet-stream"

_SCRIPT_DROP_ATTRS = frozenset({"src", "integrity", "crossorigin"})
_DATA_URI_SCRIPT_DROP_ATTRS = frozenset({"integrity", "crossorigin"})
_LINK_DROP_ATTRS = frozenset({"rel", "href", "type", "integrity", "crossorigin"})

_RULE_FOR_KIND = {
    AssetKind.SCRIPT: ViolationRule.EXTERNAL_SCRIPT,
    AssetKind.STYLESHEET: ViolationRule.EXTERNAL_STYLESHEET,
    AssetKind.CSS_IMPORT: ViolationRule.EXTERNAL_STYLESHEET,
    AssetKind.IMAGE: ViolationRule.EXTERNAL_IMAGE,
    AssetKind.ICON: ViolationRule.EXTERNAL_IMAGE,
    AssetKind.FONT: ViolationRule.EXTERNAL_FONT,
}

_FETCH_SHIM_SCRIPT = (
    '<script id="nova-fetch-shim">(function () {\n'
    '  "use strict";\n'
    "  // Serve exactly-matching relative paths from the embedded asset map\n"
    "  // (a leading ./ is tolerated), fall through to the native fetch.\n"
    "  var assets = window.__NOVA_ASSETS__ || {};\n"
    '  var nativeFetch = typeof window.fetch === "function" ? window.fetch.bind(window) : null;\n'
    "  function lookup(key) {\n"
    '    if (typeof key !== "string") { return null; }\n'
    "    if (Object.prototype.hasOwnProperty.call(assets, key)) { return assets[key]; }\n"
    '    var trimmed = key.slice(0, 2) === "./" ? key.slice(2) : key;\n'
    "    return Object.prototype.hasOwnProperty.call(assets, trimmed) ? assets[trimmed] : null;\n"
    "  }\n"
    "  window.fetch = function (resource, options) {\n"
    '    var key = typeof resource === "string" ? resource : resource && resource.url;\n'
    "    var hit = lookup(key);\n"
    "    if (hit !== null && nativeFetch) { return nativeFetch(hit, options); }\n"
    "    if (nativeFetch) { return nativeFetch(resource, options); }\n"
    '    return Promise.reject(new TypeError("fetch is not available"));\n'
    "  };\n"
    "})();</script>"
)


class BundleError(Exception):
    """Raised when an asset cannot be read or resolves outside the root."""


def _extension(path: str) -> str:
    basename = path.rpartition("/")[2]
    return basename.rpartition(".")[2].lower() if "." in basename else ""


def infer_mime(path: str) -> str:
    """Look up the MIME type for a path by extension."""
    return MIME_TYPES.get(_extension(path), FALLBACK_MIME)


def to_data_uri(data: bytes, mime: str) -> str:
    """Encode bytes as ``data:<mime>;base64,<payload>`` (no line breaks)."""
    if not mime:
        raise ValueError("mime must be non-empty")
    return f"data:{mime};base64,{base64.b64encode(data).decode('ascii')}"


def check(html: str, allow_external: tuple[str, ...] | list[str] = ()) -> list[Violation]:
    """Report every reference that keeps the document from being single-file.

    Data URIs and fragment-only references never violate; anything else does
    unless an allowlist prefix covers it.
    """
    violations: list[Violation] = []
    for ref in scan_html(html, "<check>").refs:
        if any(ref.url.startswith(prefix) for prefix in allow_external):
            continue
        rule = _RULE_FOR_KIND.get(ref.kind, ViolationRule.EXTERNAL_OTHER)
        violations.append(Violation(ref.url, ref.byte_span[0], rule))
    return violations


def bundle(config: BundleConfig, provider: FileProvider) -> tuple[str, BundleReport]:
    """Inline every relative asset of the entry document into one HTML text.

    Returns the bundled document and the accounting report. Remote references
    stay untouched (allowlisted or warned); missing files are hard errors.
    """
    report = BundleReport()
    entry_dir = posixpath.dirname(config.entry)
    html = _read_text(provider, config.entry, config.entry, report)

    refs, parse_warnings = scan_html_detailed(html, config.entry)
    for offset, message in parse_warnings:
        report.warn("parse", f"{config.entry}: {message}", offset)

    edits: list[tuple[int, int, str]] = []
    handled_elements: set[tuple[int, int]] = set()
    for dref in refs:
        ref = dref.ref
        if ref.url_class in (UrlClass.ABSOLUTE_REMOTE, UrlClass.PROTOCOL_RELATIVE):
            _record_external(ref.url, ref.byte_span[0], config, report)
            continue
        if ref.kind == AssetKind.SCRIPT and dref.element is not None:
            span = dref.element.element_span
            if span in handled_elements:
                continue
            handled_elements.add(span)
            edits.append((*span, _rewrite_script(html, dref, config, provider, report)))
        elif ref.kind == AssetKind.STYLESHEET and dref.element is not None:
            span = dref.element.element_span
            if span in handled_elements:
                continue
            handled_elements.add(span)
            edits.append((*span, _rewrite_stylesheet(html, dref, config, provider, report)))
        elif ref.kind == AssetKind.CSS_IMPORT:
            # @import inside an inline <style>: splice on document coordinates
            edit = _import_edit(html, ref.byte_span, ref.url, entry_dir, (), config, provider, report)
            if edit is not None:
                edits.append(edit)
        else:
            # images, icons, media, and url() inside inline <style>
            rel_path = _resolve(entry_dir, ref.url, config.entry, ref.byte_span[0])
            uri = _file_data_uri(rel_path, config.entry, ref.byte_span[0], provider, report, ref.kind)
            edits.append((*ref.byte_span, uri))

    out = _apply_edits(html, edits)
    out = _inject_head_fragment(out, config, provider, report)

    report.total_output_bytes = len(out.encode("utf-8"))
    limit = int(config.max_size_mb * 1024 * 1024)
    if report.total_output_bytes > limit:
        report.warn(
            "size-limit",
            f"output is {report.total_output_bytes} bytes, above max_size_mb={config.max_size_mb}",
        )
    return out, report


def _record_external(url: str, offset: int, config: BundleConfig, report: BundleReport) -> None:
    if any(url.startswith(prefix) for prefix in config.allow_external):
        report.kept_external.append(KeptExternal(url, ExternalReason.ALLOWLISTED))
    else:
        report.kept_external.append(KeptExternal(url, ExternalReason.REMOTE_NOT_ALLOWLISTED))
        report.warn("external-ref", f"external reference kept: {url}", offset)


def _read_text(provider: FileProvider, rel_path: str, source: str, report: BundleReport) -> str:
    data = _read_bytes(provider, rel_path, source, None)
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        report.warn("invalid-utf8", f"{rel_path}: invalid UTF-8 bytes were replaced")
        return data.decode("utf-8", errors="replace")


def _read_bytes(
    provider: FileProvider, rel_path: str, source: str, offset: int | None
) -> bytes:
    try:
        return provider.read_bytes(rel_path)
    except (ProviderError, FileNotFoundError, KeyError) as exc:
        where = f"{source}@{offset}" if offset is not None else source
        raise BundleError(f"{rel_path}: cannot read asset referenced from {where}: {exc}") from exc


def _resolve(base_dir: str, url: str, source: str, offset: int) -> str:
    """Map a relative URL to a root-relative file path.

    Queries and fragments are stripped for the file lookup; a leading slash
    means root-relative. Escaping the root is an error, never a fallthrough.
    """
    path = unquote(url.split("#", 1)[0].split("?", 1)[0])
    if not path:
        raise BundleError(f"{url!r}: empty asset path referenced from {source}@{offset}")
    if path.startswith("/"):
        rel = posixpath.normpath(path.lstrip("/"))
    elif base_dir:
        rel = posixpath.normpath(posixpath.join(base_dir, path))
    else:
        rel = posixpath.normpath(path)
    if rel == ".." or rel.startswith("../") or posixpath.isabs(rel):
        raise BundleError(f"{url!r}: asset resolves outside the root (from {source}@{offset})")
    return rel


def _file_data_uri(
    rel_path: str,
    source: str,
    offset: int,
    provider: FileProvider,
    report: BundleReport,
    kind: AssetKind,
) -> str:
    data = _read_bytes(provider, rel_path, source, offset)
    if _extension(rel_path) not in MIME_TYPES:
        report.warn("unknown-mime", f"{rel_path}: unknown extension, using {FALLBACK_MIME}")
    uri = to_data_uri(data, infer_mime(rel_path))
    report.inlined.append(InlinedAsset(rel_path, kind, len(data), len(uri)))
    return uri


def _ws_run_start(html: str, pos: int, floor: int) -> int:
    while pos > floor and html[pos - 1] in _WS:
        pos -= 1
    return pos


def _rebuild_start_tag(
    html: str, element: ElementInfo, drop: frozenset[str], replace_value: dict[str, str]
) -> str:
    tag_start, tag_end = element.start_tag_span
    parts: list[str] = []
    cursor = tag_start
    for attr in element.attrs:
        if attr.name in drop:
            parts.append(html[cursor : _ws_run_start(html, attr.span[0], tag_start)])
            cursor = attr.span[1]
        elif attr.name in replace_value and attr.value_span is not None:
            parts.append(html[cursor : attr.value_span[0]])
            parts.append(replace_value[attr.name])
            cursor = attr.value_span[1]
    parts.append(html[cursor:tag_end])
    return "".join(parts)


def _rewrite_script(
    html: str,
    dref: DetailedRef,
    config: BundleConfig,
    provider: FileProvider,
    report: BundleReport,
) -> str:
    element = dref.element
    assert element is not None
    rel_path = _resolve(
        posixpath.dirname(config.entry), dref.ref.url, config.entry, dref.ref.byte_span[0]
    )
    raw = _read_bytes(provider, rel_path, config.entry, dref.ref.byte_span[0])
    text = raw.decode("utf-8", errors="replace")
    if has_relative_module_import(text):
        report.warn(
            "module-import",
            f"{rel_path}: script starts with a relative ES-module import; "
            "run a module bundler before inlining",
            dref.ref.byte_span[0],
        )
    if "</script" in text.lower():
        # inlining would terminate the element early; carry the file as a data URI
        uri = to_data_uri(raw, "text/javascript")
        report.warn(
            "script-encoded",
            f"{rel_path}: contains '</script', embedded as a base64 data URI",
            dref.ref.byte_span[0],
        )
        report.inlined.append(InlinedAsset(rel_path, AssetKind.SCRIPT, len(raw), len(uri)))
        start_tag = _rebuild_start_tag(html, element, _DATA_URI_SCRIPT_DROP_ATTRS, {"src": uri})
        return f"{start_tag}</script>"
    report.inlined.append(InlinedAsset(rel_path, AssetKind.SCRIPT, len(raw), len(text)))
    start_tag = _rebuild_start_tag(html, element, _SCRIPT_DROP_ATTRS, {})
    return f"{start_tag}{text}</script>"


def _rewrite_stylesheet(
    html: str,
    dref: DetailedRef,
    config: BundleConfig,
    provider: FileProvider,
    report: BundleReport,
) -> str:
    element = dref.element
    assert element is not None
    rel_path = _resolve(
        posixpath.dirname(config.entry), dref.ref.url, config.entry, dref.ref.byte_span[0]
    )
    raw = _read_bytes(provider, rel_path, config.entry, dref.ref.byte_span[0])
    css_text = raw.decode("utf-8", errors="replace")
    processed = _process_css(css_text, rel_path, (rel_path,), config, provider, report)
    report.inlined.append(
        InlinedAsset(rel_path, AssetKind.STYLESHEET, len(raw), len(processed))
    )
    kept = [
        html[attr.span[0] : attr.span[1]]
        for attr in element.attrs
        if attr.name not in _LINK_DROP_ATTRS
    ]
    open_tag = "<style" + ("".join(" " + attr for attr in kept)) + ">"
    return f"{open_tag}{processed}</style>"


def _process_css(
    css_text: str,
    css_path: str,
    chain: tuple[str, ...],
    config: BundleConfig,
    provider: FileProvider,
    report: BundleReport,
) -> str:
    """Inline a stylesheet's url() targets and @import tree as data URIs.

    ``chain`` is the import path from the root sheet down to this one; a
    target already on the chain is a cycle and collapses to a comment.
    """
    base_dir = posixpath.dirname(css_path)
    result = scan_css(css_text, css_path)
    for offset, message in result.parse_warnings:
        report.warn("parse", f"{css_path}: {message}", offset)
    edits: list[tuple[int, int, str]] = []
    for ref in result.refs:
        if ref.url_class in (UrlClass.ABSOLUTE_REMOTE, UrlClass.PROTOCOL_RELATIVE):
            _record_external(ref.url, ref.byte_span[0], config, report)
            continue
        if ref.kind == AssetKind.CSS_IMPORT:
            edit = _import_edit(
                css_text, ref.byte_span, ref.url, base_dir, chain, config, provider, report,
                source=css_path,
            )
            if edit is not None:
                edits.append(edit)
        else:
            rel_path = _resolve(base_dir, ref.url, css_path, ref.byte_span[0])
            uri = _file_data_uri(
                rel_path, css_path, ref.byte_span[0], provider, report, AssetKind.CSS_URL
            )
            edits.append((*ref.byte_span, uri))
    return _apply_edits(css_text, edits)


def _import_edit(
    text: str,
    url_span: tuple[int, int],
    url: str,
    base_dir: str,
    chain: tuple[str, ...],
    config: BundleConfig,
    provider: FileProvider,
    report: BundleReport,
    source: str = "",
) -> tuple[int, int, str] | None:
    source = source or config.entry
    rel_path = _resolve(base_dir, url, source, url_span[0])
    if rel_path in chain:
        rule_span = _import_rule_span(text, url_span)
        report.warn(
            "css-import-cycle",
            f"{source}: import cycle broken at {rel_path}",
            url_span[0],
        )
        return (*rule_span, "/*nova:cycle*/")
    raw = _read_bytes(provider, rel_path, source, url_span[0])
    css_text = raw.decode("utf-8", errors="replace")
    processed = _process_css(css_text, rel_path, chain + (rel_path,), config, provider, report)
    uri = to_data_uri(processed.encode("utf-8"), "text/css")
    report.inlined.append(InlinedAsset(rel_path, AssetKind.CSS_IMPORT, len(raw), len(uri)))
    return (*url_span, uri)


def _import_rule_span(text: str, url_span: tuple[int, int]) -> tuple[int, int]:
    # widen from the URL to the whole @import rule, through the semicolon
    start = text.rfind("@", 0, url_span[0])
    if start == -1:
        start = url_span[0]
    end = text.find(";", url_span[1])
    end = end + 1 if end != -1 else url_span[1]
    return start, end


def _apply_edits(text: str, edits: list[tuple[int, int, str]]) -> str:
    if not edits:
        return text
    parts: list[str] = []
    cursor = 0
    for start, end, replacement in sorted(edits, key=lambda e: e[0]):
        parts.append(text[cursor:start])
        parts.append(replacement)
        cursor = end
    parts.append(text[cursor:])
    return "".join(parts)


def _asset_map_script(
    config: BundleConfig, provider: FileProvider, report: BundleReport
) -> str:
    entries: dict[str, str] = {}
    for rel_path in config.asset_map:
        data = _read_bytes(provider, rel_path, "asset_map", None)
        if _extension(rel_path) not in MIME_TYPES:
            report.warn("unknown-mime", f"{rel_path}: unknown extension, using {FALLBACK_MIME}")
        uri = to_data_uri(data, infer_mime(rel_path))
        entries[rel_path] = uri
        report.inlined.append(
            InlinedAsset(rel_path, AssetKind.ASSET_MAP_ENTRY, len(data), len(uri))
        )
    body = json.dumps(entries, ensure_ascii=False, separators=(",", ":"))
    body = body.replace("&", "\\u0026").replace("<", "\\u003c").replace(">", "\\u003e")
    return f'<script id="{ASSET_MAP_SCRIPT_ID}">window.{ASSET_MAP_GLOBAL} = {body};</script>'


def _inject_head_fragment(
    html: str, config: BundleConfig, provider: FileProvider, report: BundleReport
) -> str:
    pieces: list[str] = []
    if BOOTSTRAP_MARKER not in html:
        pieces.append(BOOTSTRAP_MARKER)
    if config.asset_map and f'id="{ASSET_MAP_SCRIPT_ID}"' not in html:
        pieces.append(_asset_map_script(config, provider, report))
    if config.inject_fetch_shim:
        if not config.asset_map:
            report.warn(
                "fetch-shim-unused", "inject_fetch_shim is set but asset_map is empty; shim skipped"
            )
        elif f'id="{FETCH_SHIM_SCRIPT_ID}"' not in html:
            pieces.append(_FETCH_SHIM_SCRIPT)
    if not pieces:
        return html
    fragment = "".join(pieces)
    head = find_open_tag(html, "head")
    if head is not None:
        return html[: head[1]] + fragment + html[head[1] :]
    wrapped = f"<head>{fragment}</head>"
    html_tag = find_open_tag(html, "html")
    if html_tag is not None:
        return html[: html_tag[1]] + wrapped + html[html_tag[1] :]
    return wrapped + html
