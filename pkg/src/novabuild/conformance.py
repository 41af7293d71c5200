"""Conformance vectors: recorded (inputs, exact output bytes) pairs for the
widget-rendering protocol.

The vectors are generated here, checked into the repository, and replayed
against the vendored display runtime so the two implementations can never
drift apart. Regenerate with ``python -m novabuild.conformance``.
"""

from __future__ import annotations

import json
from typing import Any

from .protocol import IframeOptions, PayloadEnvelope, render_iframe

VECTORS_REPO_PATH = "conformance/vectors.json"

DOC_WITH_MARKER = (
    "<!DOCTYPE html>\n"
    '<html lang="en">\n'
    "<head>\n"
    '<meta charset="utf-8">\n'
    "<!--NOVA:BOOTSTRAP-->\n"
    "<title>vector host</title>\n"
    "</head>\n"
    "<body>\n"
    '<div id="app">marker host</div>\n'
    '<script>window.addEventListener(window.__NOVA_EVENT__ || "novaData", '
    "function (event) { window.__received = event.detail; });</script>\n"
    "</body>\n"
    "</html>\n"
)

DOC_WITHOUT_MARKER = (
    "<!DOCTYPE html>\n"
    "<html>\n"
    '<head><meta charset="utf-8"><title>no marker</title></head>\n'
    "<body><p>head fallback &amp; \"quotes\"</p></body>\n"
    "</html>\n"
)

DOC_BARE_FRAGMENT = '<div id="app">bare fragment</div>'


def _cases() -> list[tuple[str, str, Any, str, int, int, str]]:
    deep: Any = {"leaf": True}
    for depth in range(8):
        deep = {"level": depth, "child": deep, "items": [depth, [depth]]}
    return [
        # name, html, data, event_name, width, height, widget_id
        ("basic-object", DOC_WITH_MARKER, {"a": 1}, "novaData", 800, 600, "deadbeef"),
        (
            "graph-sample",
            DOC_WITH_MARKER,
            {"nodes": [{"id": "a"}, {"id": "b"}], "links": [{"source": "a", "target": "b"}]},
            "novaData",
            800,
            600,
            "0badc0de",
        ),
        (
            # the shape a generated wrapper sends: {param name: argument}
            "wrapper-param-map",
            DOC_WITH_MARKER,
            {
                "data": {
                    "nodes": [{"id": "a"}, {"id": "b"}],
                    "links": [{"source": "a", "target": "b"}],
                }
            },
            "novaData",
            800,
            600,
            "0badc0df",
        ),
        ("script-close-tag", DOC_WITH_MARKER, {"x": "</script>"}, "novaData", 800, 600, "a1b2c3d4"),
        (
            "script-close-tag-mixed-case",
            DOC_WITH_MARKER,
            {"x": "a</ScRiPt >b"},
            "novaData",
            800,
            600,
            "a1b2c3d5",
        ),
        ("comment-open", DOC_WITH_MARKER, {"x": "<!--"}, "novaData", 800, 600, "a1b2c3d6"),
        ("comment-close", DOC_WITH_MARKER, {"x": "-->"}, "novaData", 800, 600, "a1b2c3d7"),
        (
            "marker-in-string",
            DOC_WITH_MARKER,
            {"m": "<!--NOVA:BOOTSTRAP-->"},
            "novaData",
            800,
            600,
            "a1b2c3d8",
        ),
        (
            "quotes-and-apostrophes",
            DOC_WITH_MARKER,
            {"q": 'she said "hi" & \'bye\''},
            "novaData",
            800,
            600,
            "a1b2c3d9",
        ),
        (
            "backslashes",
            DOC_WITH_MARKER,
            {"p": "C:\\temp\\x", "n": "line\\nnot-newline", "u": "\\u0041"},
            "novaData",
            800,
            600,
            "a1b2c3da",
        ),
        (
            "control-characters",
            DOC_WITH_MARKER,
            {"c": "\x00\x01\t\n\r\x1f"},
            "novaData",
            800,
            600,
            "a1b2c3db",
        ),
        (
            "astral-plane",
            DOC_WITH_MARKER,
            {"s": "\U0001d11e \U0001f3bb \U0001f469\u200d\U0001f52c"},
            "novaData",
            800,
            600,
            "a1b2c3dc",
        ),
        (
            "unicode-keys",
            DOC_WITH_MARKER,
            {"ключ": "значение", "键": "值"},
            "novaData",
            800,
            600,
            "a1b2c3dd",
        ),
        (
            "js-line-separators",
            DOC_WITH_MARKER,
            {"sep": "a\u2028b\u2029c"},
            "novaData",
            800,
            600,
            "a1b2c3de",
        ),
        (
            "entity-lookalikes",
            DOC_WITH_MARKER,
            {"e": "&amp; &quot; &lt; &#39;"},
            "novaData",
            800,
            600,
            "a1b2c3df",
        ),
        ("empty-object", DOC_WITH_MARKER, {}, "novaData", 800, 600, "a1b2c3e0"),
        ("empty-array", DOC_WITH_MARKER, [], "novaData", 800, 600, "a1b2c3e1"),
        ("null-payload", DOC_WITH_MARKER, None, "novaData", 800, 600, "a1b2c3e2"),
        ("boolean-payload", DOC_WITH_MARKER, True, "novaData", 800, 600, "a1b2c3e3"),
        ("string-payload", DOC_WITH_MARKER, "plain <string> & co", "novaData", 800, 600, "a1b2c3e4"),
        (
            "numbers",
            DOC_WITH_MARKER,
            {"int": 9007199254740991, "neg": -42, "float": 3.141592653589793, "tiny": 5e-324},
            "novaData",
            800,
            600,
            "a1b2c3e5",
        ),
        (
            "key-order-preserved",
            DOC_WITH_MARKER,
            {"zebra": 1, "apple": 2, "mango": 3},
            "novaData",
            800,
            600,
            "a1b2c3e6",
        ),
        ("deeply-nested", DOC_WITH_MARKER, deep, "novaData", 800, 600, "a1b2c3e7"),
        (
            "mixed-array",
            DOC_WITH_MARKER,
            [1, "two", None, True, {"k": ["</script>", "<!--", '"']}],
            "novaData",
            800,
            600,
            "a1b2c3e8",
        ),
        (
            "custom-event-name",
            DOC_WITH_MARKER,
            {"a": 1},
            "update-data_2",
            800,
            600,
            "a1b2c3e9",
        ),
        ("small-iframe", DOC_WITH_MARKER, {"a": 1}, "novaData", 1, 1, "a1b2c3ea"),
        ("wide-iframe", DOC_WITH_MARKER, {"a": 1}, "novaData", 1920, 1080, "a1b2c3eb"),
        ("no-marker-doc", DOC_WITHOUT_MARKER, {"a": 1}, "novaData", 800, 600, "a1b2c3ec"),
        ("bare-fragment-doc", DOC_BARE_FRAGMENT, {"a": 1}, "novaData", 800, 600, "a1b2c3ed"),
        (
            "long-string",
            DOC_WITH_MARKER,
            {"long": "<tag>&" * 400},
            "novaData",
            800,
            600,
            "a1b2c3ee",
        ),
        (
            "whitespace-strings",
            DOC_WITH_MARKER,
            {"w": "  padded  ", "t": "\ttabbed\t", "nl": "multi\nline"},
            "novaData",
            800,
            600,
            "a1b2c3ef",
        ),
    ]


def conformance_vectors() -> list[dict[str, Any]]:
    """Generate the full vector list; deterministic for identical inputs."""
    vectors = []
    for name, html, data, event_name, width, height, widget_id in _cases():
        envelope = PayloadEnvelope(data, event_name, widget_id)
        options = IframeOptions(width, height, widget_id)
        vectors.append(
            {
                "name": name,
                "html": html,
                "data": data,
                "event_name": event_name,
                "width": width,
                "height": height,
                "widget_id": widget_id,
                "expected": render_iframe(html, envelope, options),
            }
        )
    return vectors


def vectors_json() -> str:
    """Canonical serialization of the vector set."""
    return json.dumps(conformance_vectors(), indent=2, ensure_ascii=False) + "\n"


if __name__ == "__main__":
    import sys

    sys.stdout.write(vectors_json())
