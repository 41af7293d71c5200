"""Generate the static demo page that shows the tool as a plain web app and
as a notebook widget side by side, from the same bundled document."""

from __future__ import annotations

import hashlib
import html as html_escape
import re
from typing import Any

from .codegen import PackageTree, usage_call
from .config import BundleConfig
from .protocol import BOOTSTRAP_MARKER, IframeOptions, PayloadEnvelope, render_iframe

DEMO_PAGE_PATH = "demo/index.html"


class DemoError(Exception):
    """Raised when the demo cannot be generated from the given bundle."""


_PAGE_TEMPLATE = """\
<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<meta name="viewport" content="width=device-width, initial-scale=1">
<title>__TITLE__ demo</title>
<style>
body { margin: 0; font-family: system-ui, sans-serif; background: #f4f4f6; color: #1c1c28; }
header { padding: 1.2rem 1.6rem; background: #1c1c28; color: #fff; }
header h1 { margin: 0; font-size: 1.3rem; }
header p { margin: 0.3rem 0 0; color: #b8b8c8; font-size: 0.9rem; }
main { display: flex; flex-wrap: wrap; gap: 1.2rem; padding: 1.2rem 1.6rem; align-items: flex-start; }
section.panel { background: #fff; border: 1px solid #d8d8e0; border-radius: 8px; padding: 1rem; flex: 1 1 420px; }
section.panel h2 { margin: 0 0 0.8rem; font-size: 1.05rem; }
.cell { border: 1px solid #d8d8e0; border-radius: 6px; overflow: hidden; }
.cell-input { margin: 0; padding: 0.7rem 0.9rem; background: #f7f7fa; font-family: ui-monospace, monospace; font-size: 0.82rem; white-space: pre; border-bottom: 1px solid #d8d8e0; }
.cell-output { padding: 0.6rem; }
.demo-note { margin: 0 1.6rem 1.2rem; padding: 0.6rem 0.9rem; background: #fff4d6; border: 1px solid #e3c96e; border-radius: 6px; font-size: 0.9rem; }
iframe { max-width: 100%; }
</style>
</head>
<body>
<header>
<h1>__TITLE__</h1>
<p>The same build, served as a standalone page and embedded as notebook cell output.</p>
</header>
__NOTE__
<main>
<section class="panel">
<h2>Web app</h2>
__WEB_IFRAME__
</section>
<section class="panel">
<h2>Notebook widget</h2>
<div class="cell">
<pre class="cell-input">__CELL_INPUT__</pre>
<div class="cell-output">
__WIDGET_IFRAME__
</div>
</div>
</section>
</main>
</body>
</html>
"""

_MISSING_PAYLOAD_NOTE = (
    '<p class="demo-note">There is no sample payload configured for this project; '
    "both widgets below received a null payload.</p>\n"
)


def demo_widget_id(config: BundleConfig) -> str:
    # derived, not random: the demo must be byte-reproducible across runs
    return hashlib.sha256(f"demo:{config.name}".encode("utf-8")).hexdigest()[:8]


def generate_demo(
    config: BundleConfig, bundled_html: str, sample_payload: Any = None
) -> PackageTree:
    """Build ``demo/index.html``: two panels around one widget fragment.

    Both panels carry the identical iframe (same widget id, byte-identical
    srcdoc), which is what makes the "same tool, both forms" claim testable.
    """
    if BOOTSTRAP_MARKER not in bundled_html:
        raise DemoError(
            f"bundled HTML does not contain the bootstrap marker {BOOTSTRAP_MARKER}"
        )
    widget_id = demo_widget_id(config)
    envelope = PayloadEnvelope(sample_payload, config.event_name, widget_id)
    options = IframeOptions(
        config.package.default_width, config.package.default_height, widget_id
    )
    fragment = render_iframe(bundled_html, envelope, options)

    spec = config.package
    cell_lines = [
        f"$ pip install {spec.package_name}",
        "",
        f">>> import {spec.package_name}",
        f">>> {spec.package_name}.{usage_call(spec)}",
    ]
    cell_input = html_escape.escape("\n".join(cell_lines), quote=False)

    # single-pass substitution so inserted content can never spoof a marker
    slots = {
        "__TITLE__": html_escape.escape(config.name, quote=False),
        "__NOTE__": "" if sample_payload is not None else _MISSING_PAYLOAD_NOTE,
        "__CELL_INPUT__": cell_input,
        "__WEB_IFRAME__": fragment,
        "__WIDGET_IFRAME__": fragment,
    }
    page = re.sub(r"__[A-Z_]+?__", lambda m: slots[m.group(0)], _PAGE_TEMPLATE)
    return PackageTree({DEMO_PAGE_PATH: page.encode("utf-8")})
