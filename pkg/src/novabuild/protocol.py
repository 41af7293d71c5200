"""One-directional host-to-widget data protocol.

The host serializes a JSON payload into a bootstrap script, splices that
script into the bundled HTML at the bootstrap marker, and wraps the result
in an iframe ``srcdoc``. Inside the widget the payload is available two
ways: synchronously via ``window.__NOVA_PAYLOAD__`` (set before any app
script runs) and as a CustomEvent dispatched at window "load" for apps that
registered a listener during evaluation. There is no return channel.

The string constants below are the wire contract; generated widget packages
reproduce them byte-for-byte (see the conformance vectors).
"""

from __future__ import annotations

import json
import math
import re
import secrets
import threading
from dataclasses import dataclass
from typing import Any

BOOTSTRAP_MARKER = "<!--NOVA:BOOTSTRAP-->"
PAYLOAD_GLOBAL = "__NOVA_PAYLOAD__"
EVENT_GLOBAL = "__NOVA_EVENT__"
ASSET_MAP_GLOBAL = "__NOVA_ASSETS__"
BOOTSTRAP_ID_PREFIX = "nova-bootstrap-"
WIDGET_ID_PREFIX = "nova-widget-"
DEFAULT_EVENT_NAME = "novaData"

WIDGET_ID_RE = re.compile(r"[0-9a-f]{8}")
EVENT_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_-]*")
_HEAD_OPEN_RE = re.compile(r"<head(?=[\s/>])[^>]*>", re.IGNORECASE)
_IDENT_KEY_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_seen_ids: set[str] = set()
_seen_ids_lock = threading.Lock()


class PayloadError(ValueError):
    """Raised for unserializable payloads and malformed protocol fields."""


@dataclass(frozen=True)
class PayloadEnvelope:
    """A JSON payload plus the event name and widget id that deliver it."""

    data: Any
    event_name: str = DEFAULT_EVENT_NAME
    widget_id: str = ""

    def __post_init__(self) -> None:
        if not EVENT_NAME_RE.fullmatch(self.event_name):
            raise PayloadError(
                f"event name {self.event_name!r} must match {EVENT_NAME_RE.pattern}"
            )
        if not WIDGET_ID_RE.fullmatch(self.widget_id):
            raise PayloadError(f"widget id {self.widget_id!r} must match [0-9a-f]{{8}}")


@dataclass(frozen=True)
class IframeOptions:
    width: int = 800
    height: int = 600
    widget_id: str | None = None

    def __post_init__(self) -> None:
        for label, value in (("width", self.width), ("height", self.height)):
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise PayloadError(f"{label} must be a positive integer, got {value!r}")


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
    """Serialize a payload compactly, with ``<``, ``>`` and ``&`` escaped so
    the text can sit inside a script element no matter what it contains."""
    _check_json_value(data, "$")
    text = json.dumps(data, ensure_ascii=False, separators=(",", ":"), allow_nan=False)
    return text.replace("&", "\\u0026").replace("<", "\\u003c").replace(">", "\\u003e")


def encode_payload(envelope: PayloadEnvelope) -> str:
    """Build the bootstrap script that delivers the payload inside the widget."""
    body = payload_json(envelope.data)
    event = envelope.event_name
    return (
        f'<script id="{BOOTSTRAP_ID_PREFIX}{envelope.widget_id}">'
        f"window.{PAYLOAD_GLOBAL} = {body}; "
        f'window.{EVENT_GLOBAL} = "{event}"; '
        'window.addEventListener("load", function () { '
        f'window.dispatchEvent(new CustomEvent("{event}", '
        "{ detail: window." + PAYLOAD_GLOBAL + " })); });</script>"
    )


def escape_srcdoc(html: str) -> str:
    """Escape a document for use as a double-quoted ``srcdoc`` attribute value:
    every ``&`` first, then every ``"``; nothing else changes."""
    return html.replace("&", "&amp;").replace('"', "&quot;")


def unescape_srcdoc(text: str) -> str:
    """Exact inverse of :func:`escape_srcdoc` on its image."""
    return text.replace("&quot;", '"').replace("&amp;", "&")


def inject_bootstrap(html: str, bootstrap: str) -> str:
    """Splice the bootstrap script at the marker, or after the first
    ``<head ...>`` open tag, or at the very start of a headless fragment."""
    index = html.find(BOOTSTRAP_MARKER)
    if index != -1:
        return html[:index] + bootstrap + html[index + len(BOOTSTRAP_MARKER) :]
    head = _HEAD_OPEN_RE.search(html)
    if head is not None:
        return html[: head.end()] + bootstrap + html[head.end() :]
    return bootstrap + html


def render_iframe(html: str, envelope: PayloadEnvelope, options: IframeOptions) -> str:
    """Produce the widget iframe fragment for a document and payload."""
    if options.widget_id is not None and options.widget_id != envelope.widget_id:
        raise PayloadError(
            f"options widget id {options.widget_id!r} disagrees with "
            f"envelope widget id {envelope.widget_id!r}"
        )
    doc = inject_bootstrap(html, encode_payload(envelope))
    return (
        f'<iframe id="{WIDGET_ID_PREFIX}{envelope.widget_id}" '
        f'srcdoc="{escape_srcdoc(doc)}" '
        f'width="{options.width}" height="{options.height}" '
        f'frameborder="0" style="border:none;"></iframe>'
    )


def new_widget_id(explicit: str | None = None, rng: Any = None) -> str:
    """Return an explicit id unchanged, or draw a fresh 8-char lowercase hex
    id; ids drawn in this process never repeat (collisions re-draw)."""
    if explicit is not None:
        if not WIDGET_ID_RE.fullmatch(explicit):
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


def _reset_id_registry() -> None:
    # test hook: forget which ids this process has handed out
    with _seen_ids_lock:
        _seen_ids.clear()
