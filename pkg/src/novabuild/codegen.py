"""Generate the installable widget package tree around a bundled document.

Templates are plain ``{{name}}`` placeholder substitution with a per-format
escaping function; the display runtime is vendored verbatim from the single
canonical template file so generated packages never drift from it.
"""

from __future__ import annotations

import posixpath
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .config import BundleConfig, PackageSpec
from .protocol import BOOTSTRAP_MARKER

RUNTIME_TEMPLATE_RESOURCE = "templates/_runtime.py"

_PLACEHOLDER_RE = re.compile(r"\{\{([a-z_]+)\}\}")


class ScaffoldError(Exception):
    """Raised for invalid scaffold input or unsafe materialization."""


@dataclass(frozen=True)
class PackageTree:
    """An ordered map of relative file paths to file bytes."""

    files: dict[str, bytes]

    def __post_init__(self) -> None:
        ordered: dict[str, bytes] = {}
        for path, data in sorted(self.files.items()):
            if posixpath.isabs(path) or posixpath.normpath(path) != path or path.startswith(".."):
                raise ScaffoldError(f"tree path must be relative and normalized: {path!r}")
            ordered[path] = bytes(data)
        object.__setattr__(self, "files", ordered)

    def paths(self) -> list[str]:
        return list(self.files)


def render_template(template: str, values: dict[str, str]) -> str:
    """Substitute ``{{key}}`` placeholders; unknown keys are a hard error."""

    def replace(match: re.Match[str]) -> str:
        key = match.group(1)
        if key not in values:
            raise ScaffoldError(f"template references unknown placeholder {key!r}")
        return values[key]

    return _PLACEHOLDER_RE.sub(replace, template)


def toml_string(value: str) -> str:
    """Render a TOML basic string, escaping per the format's rules."""
    out = ['"']
    for ch in value:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or ch == "\x7f":
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


_PYPROJECT_TEMPLATE = """\
[build-system]
requires = ["setuptools>=68"]
build-backend = "setuptools.build_meta"

[project]
name = {{name_toml}}
version = {{version_toml}}
description = {{description_toml}}
requires-python = ">=3.9"
dependencies = []

[tool.setuptools]
packages = [{{name_toml}}]

[tool.setuptools.package-data]
{{package_name}} = ["widget.html"]
"""


def render_project_metadata(spec: PackageSpec) -> str:
    """Deterministic project metadata for the generated package; the widget
    document ships as package data in source and built distributions."""
    return render_template(
        _PYPROJECT_TEMPLATE,
        {
            "package_name": spec.package_name,
            "name_toml": toml_string(spec.package_name),
            "version_toml": toml_string(spec.version),
            "description_toml": toml_string(spec.description),
        },
    )


_README_TEMPLATE = """\
# {{package_name}}

{{description}}

## Install

```
pip install {{package_name}}
```

## Usage

```python
import {{package_name}}

{{package_name}}.{{usage_call}}
```

Run the call in a notebook cell; the widget renders as the cell output in
any front-end that displays HTML output (Jupyter Notebook/Lab, Google Colab,
VSCode), receiving the arguments as a one-way data payload.

## Publish

The tree is publish-ready: build with `python -m build` and upload the
artifacts in `dist/` with `twine upload dist/*`.
"""


def usage_call(spec: PackageSpec) -> str:
    args = ", ".join(f"{param.name}=..." for param in spec.params if param.required)
    return f"{spec.function_name}({args})"


def _readme(config: BundleConfig) -> str:
    spec = config.package
    description = spec.description or f"Notebook widget for {config.name}."
    return render_template(
        _README_TEMPLATE,
        {
            "package_name": spec.package_name,
            "description": description,
            "usage_call": usage_call(spec),
        },
    )


_LICENSE_TEMPLATE = """\
{{package_name}} license

TODO: choose a license for this package before publishing it to an index.
"""


_INIT_TEMPLATE = '''\
"""{{description}}"""

from importlib import resources

from . import _runtime

__version__ = "{{version}}"
__all__ = ["{{function_name}}"]

_EVENT_NAME = "{{event_name}}"
_WIDGET_FILE = "widget.html"


def _widget_html():
    return resources.files(__package__).joinpath(_WIDGET_FILE).read_text(encoding="utf-8")


def {{function_name}}({{signature}}):
    """Display the {{display_name}} widget in a notebook cell.
{{param_docs}}
    width and height set the iframe size in pixels. widget_id forces an
    explicit 8-character lowercase hex id instead of a generated one.
    """
    payload = {{payload_expr}}
    return _runtime.show(_widget_html(), payload, _EVENT_NAME, width, height, widget_id)
'''


def _wrapper_module(config: BundleConfig) -> str:
    spec = config.package
    parts: list[str] = ["*"]
    for param in spec.params:
        parts.append(param.name if param.required else f"{param.name}=None")
    parts.append(f"width={spec.default_width}")
    parts.append(f"height={spec.default_height}")
    parts.append("widget_id=None")
    signature = ", ".join(parts)

    payload_expr = "{" + ", ".join(f'"{p.name}": {p.name}' for p in spec.params) + "}"

    doc_lines = []
    for param in spec.params:
        requirement = "required" if param.required else "optional"
        doc = param.doc or "forwarded in the data payload"
        doc_lines.append(f"    {param.name} ({requirement}): {doc}")
    param_docs = "\n" + "\n".join(doc_lines) + "\n" if doc_lines else ""

    return render_template(
        _INIT_TEMPLATE,
        {
            "description": spec.description or f"Notebook widget for {config.name}.",
            "version": spec.version,
            "function_name": spec.function_name,
            "event_name": config.event_name,
            "display_name": config.name,
            "signature": signature,
            "param_docs": param_docs,
            "payload_expr": payload_expr,
        },
    )


def runtime_template_bytes() -> bytes:
    """The canonical display-runtime template, byte-exact."""
    return (
        resources.files("novabuild").joinpath(RUNTIME_TEMPLATE_RESOURCE).read_bytes()
    )


def scaffold(config: BundleConfig, bundled_html: str) -> PackageTree:
    """Produce the publishable widget package tree for a bundled document.

    The tree is exactly six files: project metadata, README, LICENSE
    placeholder, the wrapper module, the vendored runtime, and the widget
    document itself (verbatim).
    """
    if BOOTSTRAP_MARKER not in bundled_html:
        raise ScaffoldError(
            f"bundled HTML does not contain the bootstrap marker {BOOTSTRAP_MARKER}"
        )
    pkg = config.package.package_name
    return PackageTree(
        {
            "pyproject.toml": render_project_metadata(config.package).encode("utf-8"),
            "README.md": _readme(config).encode("utf-8"),
            "LICENSE": render_template(
                _LICENSE_TEMPLATE, {"package_name": pkg}
            ).encode("utf-8"),
            f"{pkg}/__init__.py": _wrapper_module(config).encode("utf-8"),
            f"{pkg}/_runtime.py": runtime_template_bytes(),
            f"{pkg}/widget.html": bundled_html.encode("utf-8"),
        }
    )


def materialize(tree: PackageTree, out_dir: str | Path, overwrite: bool = False) -> list[str]:
    """Write a tree to disk in order; refuse a non-empty target unless told."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if not overwrite and any(out.iterdir()):
        raise ScaffoldError(
            f"output directory is not empty: {out} (use overwrite to replace files)"
        )
    written: list[str] = []
    for rel_path, data in tree.files.items():
        target = out / rel_path
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(data)
        written.append(rel_path)
    return written
