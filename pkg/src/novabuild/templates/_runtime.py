"""Notebook display runtime for a bundled web-app widget.

This module is vendored into generated widget packages and depends only on
the standard library. It injects a bootstrap script into the bundled HTML
document and wraps the result in an iframe delivered through ``srcdoc``;
the payload reaches the app synchronously on ``window.__NOVA_PAYLOAD__``
and again as a CustomEvent dispatched at window "load". Communication is
strictly one-way, host to widget.
"""

from __future__ import annotations

import json
import math
import re
import secrets
import threading
from typing import Any

BOOTSTRAP_MARKER = "<!--NOVA:BOOTSTRAP-->"

_WIDGET_ID_RE = re.compile(r"[0-9a-f]{8}")
_EVENT_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")
_HEAD_OPEN_RE = re.compile(r"<head(?=[\s/>])[^>]*>", re.IGNORECASE)
_IDENT_KEY_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_seen_ids: set[str] = set()
_seen_ids_lock = threading.Lock()


class PayloadError(ValueError):
    """Raised when a payload cannot be serialized to JSON."""


def _check_json_value(value: Any, path: str) -> None:
    if value is None or isinstance(value, (bool, int, str)):
        return
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            raise PayloadError(f"non-finite number at {path}")
        return
    if isinstance(value, (list, tuple)):
        for index, item in enumerate(value):
            _check_json_value(item, f"{path}[{index}]")
        return
    if isinstance(value, dict):
        for key, item in value.items():
            if not isinstance(key, str):
                raise PayloadError(f"non-string map key {key!r} at {path}")
            child = f"{path}.{key}" if _IDENT_KEY_RE.fullmatch(key) else f"{path}[{key!r}]"
            _check_json_value(item, child)
        return
    raise PayloadError(f"value of type {type(value).__name__} at {path} is not JSON-serializable")


def payload_json(data: Any) -> str:
    """Serialize a payload compactly, escaping ``<``, ``>`` and ``&`` so the
    text is safe inside a script element no matter what it contains."""
    _check_json_value(data, "$")
    text = json.dumps(data, ensure_ascii=False, separators=(",", ":"), allow_nan=False)
    return text.replace("&", "\\u0026").replace("<", "\\u003c").replace(">", "\\u003e")


def bootstrap_script(data: Any, event_name: str, widget_id: str) -> str:
    """Build the script that publishes the payload inside the widget."""
    if not _EVENT_NAME_RE.fullmatch(event_name):
        raise PayloadError(
            f"event name {event_name!r} must match {_EVENT_NAME_RE.pattern}"
        )
    if not _WIDGET_ID_RE.fullmatch(widget_id):
        raise PayloadError(f"widget id {widget_id!r} must match [0-9a-f]{{8}}")
    body = payload_json(data)
    return (
        f'<script id="nova-bootstrap-{widget_id}">'
        f"window.__NOVA_PAYLOAD__ = {body}; "
        f'window.__NOVA_EVENT__ = "{event_name}"; '
        'window.addEventListener("load", function () { '
        f'window.dispatchEvent(new CustomEvent("{event_name}", '
        "{ detail: window.__NOVA_PAYLOAD__ })); });</script>"
    )


def escape_srcdoc(html: str) -> str:
    """Escape a document for a double-quoted srcdoc attribute: every ``&``
    first, then every ``"``; nothing else changes."""
    return html.replace("&", "&amp;").replace('"', "&quot;")


def inject_bootstrap(html: str, bootstrap: str) -> str:
    """Splice the bootstrap at the marker, else after the first ``<head ...>``
    open tag, else at the very start of a headless fragment."""
    index = html.find(BOOTSTRAP_MARKER)
    if index != -1:
        return html[:index] + bootstrap + html[index + len(BOOTSTRAP_MARKER) :]
    head = _HEAD_OPEN_RE.search(html)
    if head is not None:
        return html[: head.end()] + bootstrap + html[head.end() :]
    return bootstrap + html


def new_widget_id(explicit: str | None = None, rng: Any = None) -> str:
    """Return an explicit id unchanged, or draw a fresh 8-char lowercase hex
    id; ids drawn in this process never repeat (collisions re-draw)."""
    if explicit is not None:
        if not _WIDGET_ID_RE.fullmatch(explicit):
            raise PayloadError(f"widget id {explicit!r} must match [0-9a-f]{{8}}")
        with _seen_ids_lock:
            _seen_ids.add(explicit)
        return explicit
    while True:
        candidate = f"{rng.getrandbits(32):08x}" if rng is not None else secrets.token_hex(4)
        with _seen_ids_lock:
            if candidate not in _seen_ids:
                _seen_ids.add(candidate)
                return candidate


def render(
    html: str,
    payload: Any,
    event_name: str,
    width: int,
    height: int,
    widget_id: str | None = None,
) -> str:
    """Produce the widget iframe fragment for a document and payload."""
    for label, value in (("width", width), ("height", height)):
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise PayloadError(f"{label} must be a positive integer, got {value!r}")
    wid = new_widget_id(widget_id)
    doc = inject_bootstrap(html, bootstrap_script(payload, event_name, wid))
    return (
        f'<iframe id="nova-widget-{wid}" '
        f'srcdoc="{escape_srcdoc(doc)}" '
        f'width="{width}" height="{height}" '
        f'frameborder="0" style="border:none;"></iframe>'
    )


class Widget:
    """Cell-output wrapper: notebooks render the HTML form, plain consoles
    get a short textual description instead of a page of markup."""

    def __init__(self, fragment: str, widget_id: str, width: int, height: int):
        self.fragment = fragment
        self.widget_id = widget_id
        self.width = width
        self.height = height

    def _repr_html_(self) -> str:
        return self.fragment

    def __repr__(self) -> str:
        return f"<nova widget nova-widget-{self.widget_id} {self.width}x{self.height}>"


def show(
    html: str,
    payload: Any,
    event_name: str,
    width: int,
    height: int,
    widget_id: str | None = None,
) -> Widget:
    """Render the widget and return an object notebook front-ends display."""
    wid = new_widget_id(widget_id)
    fragment = render(html, payload, event_name, width, height, wid)
    return Widget(fragment, wid, width, height)
