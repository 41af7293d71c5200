"""Lenient, span-preserving extraction of asset references from HTML and CSS.

The scanners never build a DOM and never reserialize: every reference comes
back with the exact offset range of its URL text so the inliner can rewrite
by splicing and leave every other byte untouched. Malformed markup produces
warnings, not errors, because real-world build output is the input.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import AssetKind, AssetRef, SourceKind, UrlClass

_WS = " \t\n\r\f"
_TAG_NAME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9-]*")
_SCHEME_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.-]*://")
_IDENT_CHARS = frozenset(
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-"
)

# script/style are raw text in HTML5; title/textarea cannot contain markup
_RAW_TEXT_TAGS = ("script", "style", "textarea", "title")
_RAW_TEXT_CLOSE = {
    tag: re.compile(rf"</{tag}(?=[\s/>])|</{tag}$", re.IGNORECASE) for tag in _RAW_TEXT_TAGS
}

_CSS_TOKEN_RE = re.compile(r"""/\*|["']|@import\b|url\(""", re.IGNORECASE)

_MODULE_IMPORT_RE = re.compile(
    r"""(?m)^\s*import\s+(?:[^;'"]*?\bfrom\s+)?['"](?:\./|\.\./)"""
)


def classify_url(url: str) -> UrlClass:
    """Bucket a URL by how the bundler must treat it."""
    if url[:5].lower() == "data:":
        return UrlClass.DATA_URI
    if url.startswith("#"):
        return UrlClass.FRAGMENT_ONLY
    if url.startswith("//"):
        return UrlClass.PROTOCOL_RELATIVE
    if _SCHEME_RE.match(url):
        return UrlClass.ABSOLUTE_REMOTE
    return UrlClass.RELATIVE


@dataclass(frozen=True)
class ScanResult:
    refs: tuple[AssetRef, ...]
    parse_warnings: tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class Attr:
    name: str
    span: tuple[int, int]
    value: str | None
    value_span: tuple[int, int] | None


@dataclass(frozen=True)
class ElementInfo:
    tag: str
    start_tag_span: tuple[int, int]
    element_span: tuple[int, int]
    attrs: tuple[Attr, ...]


@dataclass(frozen=True)
class DetailedRef:
    """An asset reference plus the element context the inliner rewrites."""

    ref: AssetRef
    element: ElementInfo | None  # None for refs found inside inline <style> text
    attr_name: str | None


def scan_html(html: str, source_path: str = "<html>") -> ScanResult:
    """Extract asset references from an HTML document in document order."""
    refs, warnings = scan_html_detailed(html, source_path)
    return ScanResult(tuple(d.ref for d in refs), tuple(warnings))


def scan_css(css: str, source_path: str = "<css>") -> ScanResult:
    """Extract ``@import`` targets and ``url(...)`` tokens from CSS text."""
    refs, warnings = _scan_css(css, source_path, 0, SourceKind.CSS)
    return ScanResult(tuple(refs), tuple(warnings))


def scan_html_detailed(
    html: str, source_path: str
) -> tuple[list[DetailedRef], list[tuple[int, str]]]:
    """Span-rich variant of :func:`scan_html` used by the inliner."""
    refs: list[DetailedRef] = []
    warnings: list[tuple[int, str]] = []
    pos = 0
    n = len(html)
    while pos < n:
        lt = html.find("<", pos)
        if lt == -1:
            break
        if html.startswith("<!--", lt):
            end = html.find("-->", lt + 4)
            if end == -1:
                warnings.append((lt, "unterminated comment"))
                break
            pos = end + 3
            continue
        nxt = html[lt + 1 : lt + 2]
        if nxt in ("!", "?") or nxt == "/":
            gt = html.find(">", lt + 1)
            if gt == -1:
                break
            pos = gt + 1
            continue
        name_match = _TAG_NAME_RE.match(html, lt + 1)
        if not name_match:
            pos = lt + 1
            continue
        tag = name_match.group(0).lower()
        attrs, tag_end, _ = _parse_attrs(html, name_match.end())
        if tag_end == -1:
            warnings.append((lt, f"unterminated <{tag}> tag"))
            break
        element_end = tag_end
        content_span: tuple[int, int] | None = None
        if tag in _RAW_TEXT_TAGS:
            close = _RAW_TEXT_CLOSE[tag].search(html, tag_end)
            if close is None:
                warnings.append((lt, f"unterminated <{tag}> content"))
                content_span = (tag_end, n)
                element_end = n
            else:
                content_span = (tag_end, close.start())
                gt = html.find(">", close.start())
                element_end = gt + 1 if gt != -1 else n
        element = ElementInfo(tag, (lt, tag_end), (lt, element_end), tuple(attrs))
        _extract_element_refs(html, element, source_path, refs, warnings)
        if tag == "style" and content_span is not None:
            css_refs, css_warnings = _scan_css(
                html[content_span[0] : content_span[1]],
                source_path,
                content_span[0],
                SourceKind.CSS,
            )
            refs.extend(DetailedRef(ref, None, None) for ref in css_refs)
            warnings.extend(css_warnings)
        pos = element_end
    return refs, warnings


def find_open_tag(html: str, name: str) -> tuple[int, int] | None:
    """Locate the first ``<name ...>`` open tag outside comments.

    Returns the span of the open tag, or None when the tag is absent.
    """
    pos = 0
    n = len(html)
    while pos < n:
        lt = html.find("<", pos)
        if lt == -1:
            return None
        if html.startswith("<!--", lt):
            end = html.find("-->", lt + 4)
            if end == -1:
                return None
            pos = end + 3
            continue
        nxt = html[lt + 1 : lt + 2]
        if nxt in ("!", "?", "/"):
            gt = html.find(">", lt + 1)
            if gt == -1:
                return None
            pos = gt + 1
            continue
        name_match = _TAG_NAME_RE.match(html, lt + 1)
        if not name_match:
            pos = lt + 1
            continue
        tag = name_match.group(0).lower()
        attrs, tag_end, _ = _parse_attrs(html, name_match.end())
        if tag_end == -1:
            return None
        if tag == name:
            return lt, tag_end
        if tag in _RAW_TEXT_TAGS:
            close = _RAW_TEXT_CLOSE[tag].search(html, tag_end)
            if close is None:
                return None
            gt = html.find(">", close.start())
            tag_end = gt + 1 if gt != -1 else n
        pos = tag_end
    return None


def parse_srcset(value: str) -> list[tuple[str, int, int]]:
    """Split a ``srcset`` attribute into candidate URLs with their spans.

    Offsets are relative to the attribute value. Commas inside a URL (data
    URIs) are tolerated; descriptors may contain parenthesized expressions.
    """
    out: list[tuple[str, int, int]] = []
    pos = 0
    n = len(value)
    while pos < n:
        while pos < n and (value[pos] in _WS or value[pos] == ","):
            pos += 1
        if pos >= n:
            break
        start = pos
        while pos < n and value[pos] not in _WS:
            pos += 1
        url = value[start:pos]
        end = pos
        stripped = len(url) - len(url.rstrip(","))
        if stripped:
            url = url[:-stripped]
            end -= stripped
        if url:
            out.append((url, start, end))
        if stripped:
            continue
        depth = 0
        while pos < n:
            ch = value[pos]
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth = max(0, depth - 1)
            elif ch == "," and depth == 0:
                break
            pos += 1
    return out


def has_relative_module_import(script_text: str) -> bool:
    """Heuristic: does the script start with a relative ES-module import?

    Only the first 4 KB are inspected; pre-bundled app scripts should not
    contain bare relative imports at all.
    """
    return _MODULE_IMPORT_RE.search(script_text[:4096]) is not None


def _parse_attrs(html: str, pos: int) -> tuple[list[Attr], int, bool]:
    attrs: list[Attr] = []
    n = len(html)
    slash_pending = False
    while pos < n:
        while pos < n and html[pos] in _WS:
            pos += 1
        if pos >= n:
            break
        ch = html[pos]
        if ch == ">":
            return attrs, pos + 1, slash_pending
        if ch == "/":
            slash_pending = True
            pos += 1
            continue
        slash_pending = False
        name_start = pos
        while pos < n and html[pos] not in _WS and html[pos] not in "=>/":
            pos += 1
        name = html[name_start:pos].lower()
        if not name:
            pos += 1
            continue
        probe = pos
        while probe < n and html[probe] in _WS:
            probe += 1
        value: str | None = None
        value_span: tuple[int, int] | None = None
        end = pos
        if probe < n and html[probe] == "=":
            probe += 1
            while probe < n and html[probe] in _WS:
                probe += 1
            if probe < n and html[probe] in "\"'":
                quote = html[probe]
                v_start = probe + 1
                v_end = html.find(quote, v_start)
                if v_end == -1:
                    v_end = html.find(">", v_start)
                    if v_end == -1:
                        v_end = n
                    end = v_end
                else:
                    end = v_end + 1
                value = html[v_start:v_end]
                value_span = (v_start, v_end)
            else:
                v_start = probe
                while probe < n and html[probe] not in _WS and html[probe] != ">":
                    probe += 1
                v_end = probe
                value = html[v_start:v_end]
                value_span = (v_start, v_end)
                end = v_end
            pos = end
        attrs.append(Attr(name, (name_start, end), value, value_span))
    return attrs, -1, False


def _first_attrs(element: ElementInfo) -> dict[str, Attr]:
    by_name: dict[str, Attr] = {}
    for attr in element.attrs:
        by_name.setdefault(attr.name, attr)
    return by_name


def _extract_element_refs(
    html: str,
    element: ElementInfo,
    source_path: str,
    refs: list[DetailedRef],
    warnings: list[tuple[int, str]],
) -> None:
    tag = element.tag
    if tag == "script":
        attr = _first_attrs(element).get("src")
        _add_ref(AssetKind.SCRIPT, attr, element, source_path, refs, warnings)
    elif tag == "link":
        by_name = _first_attrs(element)
        rel = by_name.get("rel")
        tokens = rel.value.lower().split() if rel and rel.value else []
        if "stylesheet" in tokens:
            _add_ref(AssetKind.STYLESHEET, by_name.get("href"), element, source_path, refs, warnings)
        elif "icon" in tokens:
            _add_ref(AssetKind.ICON, by_name.get("href"), element, source_path, refs, warnings)
    elif tag == "img":
        for attr in element.attrs:
            if attr.name == "src":
                _add_ref(AssetKind.IMAGE, attr, element, source_path, refs, warnings)
            elif attr.name == "srcset":
                _add_srcset_refs(AssetKind.IMAGE, attr, element, source_path, refs)
    elif tag == "source":
        for attr in element.attrs:
            if attr.name == "src":
                _add_ref(AssetKind.MEDIA, attr, element, source_path, refs, warnings)
            elif attr.name == "srcset":
                _add_srcset_refs(AssetKind.MEDIA, attr, element, source_path, refs)
    elif tag == "video":
        attr = _first_attrs(element).get("poster")
        _add_ref(AssetKind.IMAGE, attr, element, source_path, refs, warnings)
    elif tag == "use":
        by_name = _first_attrs(element)
        attr = by_name.get("href") or by_name.get("xlink:href")
        if attr and attr.value:
            url_class = classify_url(attr.value)
            if url_class not in (UrlClass.FRAGMENT_ONLY, UrlClass.DATA_URI):
                warnings.append(
                    (
                        attr.value_span[0] if attr.value_span else element.start_tag_span[0],
                        f"svg <use> references an external file ({attr.value}); not inlined",
                    )
                )


def _add_ref(
    kind: AssetKind,
    attr: Attr | None,
    element: ElementInfo,
    source_path: str,
    refs: list[DetailedRef],
    warnings: list[tuple[int, str]],
) -> None:
    if attr is None or attr.value_span is None:
        return
    if attr.value == "":
        warnings.append((attr.value_span[0], f"empty URL in <{element.tag} {attr.name}>"))
        return
    url_class = classify_url(attr.value)
    if url_class in (UrlClass.DATA_URI, UrlClass.FRAGMENT_ONLY):
        return
    refs.append(
        DetailedRef(
            AssetRef(kind, attr.value, url_class, SourceKind.HTML, source_path, attr.value_span),
            element,
            attr.name,
        )
    )


def _add_srcset_refs(
    kind: AssetKind,
    attr: Attr,
    element: ElementInfo,
    source_path: str,
    refs: list[DetailedRef],
) -> None:
    if attr.value is None or attr.value_span is None:
        return
    base = attr.value_span[0]
    for url, start, end in parse_srcset(attr.value):
        url_class = classify_url(url)
        if url_class in (UrlClass.DATA_URI, UrlClass.FRAGMENT_ONLY):
            continue
        refs.append(
            DetailedRef(
                AssetRef(kind, url, url_class, SourceKind.HTML, source_path, (base + start, base + end)),
                element,
                attr.name,
            )
        )


def _scan_css(
    css: str, source_path: str, base: int, source: SourceKind
) -> tuple[list[AssetRef], list[tuple[int, str]]]:
    refs: list[AssetRef] = []
    warnings: list[tuple[int, str]] = []
    pos = 0
    n = len(css)
    while pos < n:
        match = _CSS_TOKEN_RE.search(css, pos)
        if match is None:
            break
        token = match.group(0)
        start = match.start()
        if token == "/*":
            end = css.find("*/", start + 2)
            if end == -1:
                warnings.append((base + start, "unterminated CSS comment"))
                break
            pos = end + 2
        elif token in ('"', "'"):
            _, _, pos = _read_css_string(css, start)
        elif token.lower() == "@import":
            probe = match.end()
            while probe < n and css[probe] in _WS:
                probe += 1
            if probe < n and css[probe] in "\"'":
                value, span, pos = _read_css_string(css, probe)
                _add_css_ref(AssetKind.CSS_IMPORT, value, span, base, source, source_path, refs)
            elif css[probe : probe + 4].lower() == "url(":
                value, span, pos, ok = _read_url_token(css, probe, warnings, base)
                if ok:
                    _add_css_ref(AssetKind.CSS_IMPORT, value, span, base, source, source_path, refs)
            else:
                pos = probe
        else:  # url(
            if start > 0 and css[start - 1] in _IDENT_CHARS:
                pos = match.end()
                continue
            value, span, pos, ok = _read_url_token(css, start, warnings, base)
            if ok and value:
                _add_css_ref(AssetKind.CSS_URL, value, span, base, source, source_path, refs)
    return refs, warnings


def _add_css_ref(
    kind: AssetKind,
    url: str,
    span: tuple[int, int],
    base: int,
    source: SourceKind,
    source_path: str,
    refs: list[AssetRef],
) -> None:
    if not url:
        return
    url_class = classify_url(url)
    if url_class in (UrlClass.DATA_URI, UrlClass.FRAGMENT_ONLY):
        return
    refs.append(
        AssetRef(kind, url, url_class, source, source_path, (base + span[0], base + span[1]))
    )


def _read_css_string(css: str, quote_pos: int) -> tuple[str, tuple[int, int], int]:
    quote = css[quote_pos]
    pos = quote_pos + 1
    n = len(css)
    while pos < n:
        ch = css[pos]
        if ch == "\\":
            pos += 2
            continue
        if ch == quote:
            return css[quote_pos + 1 : pos], (quote_pos + 1, pos), pos + 1
        pos += 1
    return css[quote_pos + 1 :], (quote_pos + 1, n), n


def _read_url_token(
    css: str, url_start: int, warnings: list[tuple[int, str]], base: int
) -> tuple[str, tuple[int, int], int, bool]:
    """Read ``url( ... )`` starting at ``url_start``; returns (url, span, next_pos, ok)."""
    n = len(css)
    pos = url_start + 4
    while pos < n and css[pos] in _WS:
        pos += 1
    if pos < n and css[pos] in "\"'":
        value, span, after = _read_css_string(css, pos)
        close = css.find(")", after)
        return value, span, close + 1 if close != -1 else after, True
    close = css.find(")", pos)
    if close == -1:
        warnings.append((base + url_start, "unterminated url()"))
        return "", (pos, pos), n, False
    raw = css[pos:close].rstrip(_WS)
    return raw, (pos, pos + len(raw)), close + 1, True
