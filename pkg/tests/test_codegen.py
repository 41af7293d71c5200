from __future__ import annotations

import ast
import json

import pytest

from conftest import RUNTIME_TEMPLATE_PATH
from novabuild.codegen import (
    PackageTree,
    ScaffoldError,
    materialize,
    render_project_metadata,
    render_template,
    scaffold,
    toml_string,
)
from novabuild.config import parse_config

BUNDLED = "<html><head><!--NOVA:BOOTSTRAP--></head><body>app</body></html>"


def toy_config(**package_overrides):
    package = {
        "package_name": "toygraph",
        "function_name": "visualize",
        "description": "Toy graph viewer notebook widget",
        "params": [{"name": "data", "required": True, "doc": "graph payload"}],
    }
    package.update(package_overrides)
    doc = {"name": "toygraph", "entry": "index.html", "root": ".", "package": package}
    config, _ = parse_config(json.dumps(doc))
    return config


EXPECTED_PATHS = [
    "LICENSE",
    "README.md",
    "pyproject.toml",
    "toygraph/__init__.py",
    "toygraph/_runtime.py",
    "toygraph/widget.html",
]


def test_scaffold_tree_paths_exact():
    tree = scaffold(toy_config(), BUNDLED)
    assert tree.paths() == EXPECTED_PATHS


def test_scaffold_requires_marker():
    with pytest.raises(ScaffoldError, match="NOVA:BOOTSTRAP"):
        scaffold(toy_config(), "<html><head></head></html>")


def test_widget_html_is_verbatim():
    tree = scaffold(toy_config(), BUNDLED)
    assert tree.files["toygraph/widget.html"] == BUNDLED.encode("utf-8")


def test_runtime_is_byte_identical_to_template():
    tree = scaffold(toy_config(), BUNDLED)
    assert tree.files["toygraph/_runtime.py"] == RUNTIME_TEMPLATE_PATH.read_bytes()


def test_scaffold_is_deterministic():
    first = scaffold(toy_config(), BUNDLED)
    second = scaffold(toy_config(), BUNDLED)
    assert first.files == second.files


def test_wrapper_module_shape():
    tree = scaffold(toy_config(), BUNDLED)
    source = tree.files["toygraph/__init__.py"].decode("utf-8")
    module = ast.parse(source)  # must be valid Python
    assert "def visualize(*, data, width=800, height=600, widget_id=None):" in source
    assert 'payload = {"data": data}' in source
    assert '__all__ = ["visualize"]' in source
    assert '_EVENT_NAME = "novaData"' in source
    assert "_runtime.show(" in source
    functions = [n.name for n in module.body if isinstance(n, ast.FunctionDef)]
    assert "visualize" in functions


def test_wrapper_module_optional_params_default_none():
    config = toy_config(
        params=[
            {"name": "data", "required": True, "doc": "payload"},
            {"name": "labels", "required": False, "doc": "optional labels"},
        ]
    )
    source = scaffold(config, BUNDLED).files["toygraph/__init__.py"].decode("utf-8")
    assert "def visualize(*, data, labels=None, width=800, height=600, widget_id=None):" in source
    assert 'payload = {"data": data, "labels": labels}' in source


def test_wrapper_module_zero_params():
    config = toy_config(params=[])
    source = scaffold(config, BUNDLED).files["toygraph/__init__.py"].decode("utf-8")
    assert "def visualize(*, width=800, height=600, widget_id=None):" in source
    assert "payload = {}" in source
    ast.parse(source)


def test_project_metadata_interpolation():
    spec = toy_config().package
    text = render_project_metadata(spec)
    assert 'name = "toygraph"' in text
    assert 'version = "0.1.0"' in text
    assert 'description = "Toy graph viewer notebook widget"' in text
    assert 'toygraph = ["widget.html"]' in text
    assert "dependencies = []" in text


def test_project_metadata_escapes_quotes():
    spec = toy_config(description='say "hi" \\ now').package
    text = render_project_metadata(spec)
    assert 'description = "say \\"hi\\" \\\\ now"' in text


def test_project_metadata_deterministic():
    spec = toy_config().package
    assert render_project_metadata(spec) == render_project_metadata(spec)


def test_generated_package_declares_no_dependencies():
    tree = scaffold(toy_config(), BUNDLED)
    metadata = tree.files["pyproject.toml"].decode("utf-8")
    assert "dependencies = []" in metadata


def test_readme_has_install_and_three_line_usage():
    tree = scaffold(toy_config(), BUNDLED)
    readme = tree.files["README.md"].decode("utf-8")
    assert "pip install toygraph" in readme
    snippet_start = readme.index("```python") + len("```python\n")
    snippet = readme[snippet_start : readme.index("```", snippet_start)].strip("\n")
    assert snippet.splitlines() == ["import toygraph", "", "toygraph.visualize(data=...)"]


def test_license_is_todo_placeholder():
    tree = scaffold(toy_config(), BUNDLED)
    assert "TODO" in tree.files["LICENSE"].decode("utf-8")


def test_toml_string_control_chars():
    assert toml_string("a\nb\tc\x01") == '"a\\nb\\tc\\u0001"'


def test_render_template_unknown_placeholder():
    with pytest.raises(ScaffoldError, match="unknown placeholder"):
        render_template("{{nope}}", {})


def test_package_tree_rejects_bad_paths():
    with pytest.raises(ScaffoldError):
        PackageTree({"/abs": b""})
    with pytest.raises(ScaffoldError):
        PackageTree({"a/../b": b""})
    with pytest.raises(ScaffoldError):
        PackageTree({"../up": b""})


def test_package_tree_orders_lexicographically():
    tree = PackageTree({"b.txt": b"", "a/x.txt": b"", "a.txt": b""})
    assert tree.paths() == ["a.txt", "a/x.txt", "b.txt"]


# --- materialize ---


def test_materialize_fresh_dir(tmp_path):
    tree = scaffold(toy_config(), BUNDLED)
    written = materialize(tree, tmp_path / "out")
    assert written == EXPECTED_PATHS
    for rel in written:
        assert (tmp_path / "out" / rel).is_file()


def test_materialize_refuses_non_empty(tmp_path):
    target = tmp_path / "out"
    target.mkdir()
    (target / "existing.txt").write_text("keep me")
    with pytest.raises(ScaffoldError, match="not empty"):
        materialize(scaffold(toy_config(), BUNDLED), target)
    # nothing was written
    assert [p.name for p in target.iterdir()] == ["existing.txt"]


def test_materialize_overwrite(tmp_path):
    target = tmp_path / "out"
    materialize(scaffold(toy_config(), BUNDLED), target)
    (target / "README.md").write_text("stale")
    written = materialize(scaffold(toy_config(), BUNDLED), target, overwrite=True)
    assert written == EXPECTED_PATHS
    assert "pip install toygraph" in (target / "README.md").read_text()
