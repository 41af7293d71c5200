"""Acceptance gate: one test per criterion, each printing a PASS line and
enforcing its stated runtime bound.

Primary criteria consume the fixture app's files as static bytes only; the
conformance vectors they pin are produced by this package itself.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import random
import re
import shutil
import subprocess
import sys
import time
from pathlib import Path

import pytest

from _helpers import bootstrap_body, extract_payload, extract_srcdoc, fuzz_payloads
from conftest import FIXTURE_APP, VECTORS_PATH
from novabuild.cli import main
from novabuild.codegen import materialize, scaffold
from novabuild.config import parse_config
from novabuild.conformance import conformance_vectors, vectors_json
from novabuild.inliner import bundle, check
from novabuild.protocol import (
    IframeOptions,
    PayloadEnvelope,
    encode_payload,
    escape_srcdoc,
    inject_bootstrap,
    new_widget_id,
    render_iframe,
    unescape_srcdoc,
)
from novabuild.providers import DirectoryFileProvider, InMemoryFileProvider

FUZZ_HTML = "<html><head><!--NOVA:BOOTSTRAP--></head><body><div id=\"app\"></div></body></html>"


class Clock:
    def __init__(self, budget_seconds: float):
        self.budget = budget_seconds
        self.start = time.perf_counter()

    def check(self) -> float:
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.budget, f"criterion exceeded its {self.budget}s budget: {elapsed:.2f}s"
        return elapsed


def _pass(name: str, elapsed: float | None = None) -> None:
    suffix = f" ({elapsed:.2f}s)" if elapsed is not None else ""
    print(f"[acceptance] {name}: PASS{suffix}")


def test_primary_single_file_property(fixture_config, fixture_provider):
    clock = Clock(1.0)
    html, _ = bundle(fixture_config, fixture_provider)
    assert check(html) == []
    raw = fixture_provider.read_bytes(fixture_config.entry).decode("utf-8")
    assert len(check(raw)) == 4
    _pass("single-file property", clock.check())


def test_primary_idempotence(fixture_config, tmp_path):
    clock = Clock(1.0)
    work = tmp_path / "app"
    shutil.copytree(FIXTURE_APP, work)
    provider = DirectoryFileProvider(work)
    first, _ = bundle(fixture_config, provider)
    (work / "rebundle.html").write_bytes(first.encode("utf-8"))
    second, _ = bundle(
        dataclasses.replace(fixture_config, entry="rebundle.html"), provider
    )
    assert second == first
    _pass("idempotence", clock.check())


def _run_pipeline(config_path: Path, out_dir: Path) -> None:
    out_dir.mkdir(parents=True)
    assert main(["bundle", "-c", str(config_path), "-o", str(out_dir / "bundle.html")]) == 0
    assert main(["scaffold", "-c", str(config_path), "-o", str(out_dir / "pkg")]) == 0
    assert main(["demo", "-c", str(config_path), "-o", str(out_dir / "demo")]) == 0


def _tree_hashes(root: Path) -> dict[str, str]:
    return {
        str(path.relative_to(root)): hashlib.sha256(path.read_bytes()).hexdigest()
        for path in sorted(root.rglob("*"))
        if path.is_file()
    }


def test_primary_determinism(tmp_path, capsys):
    clock = Clock(5.0)
    config_path = FIXTURE_APP / "nova.config.json"
    _run_pipeline(config_path, tmp_path / "run1")
    _run_pipeline(config_path, tmp_path / "run2")
    first = _tree_hashes(tmp_path / "run1")
    second = _tree_hashes(tmp_path / "run2")
    assert first and first == second
    _pass("determinism", clock.check())


def test_primary_payload_fuzz():
    clock = Clock(30.0)
    corpus = fuzz_payloads(1000)
    assert len(corpus) >= 1000
    blob = json.dumps(corpus)
    for needle in ("</script>", "<!--", '\\"', "\\\\", "\\u0000", "\\ud83c"):
        assert needle in blob, f"adversarial coverage lost: {needle!r}"
    for index, value in enumerate(corpus):
        envelope = PayloadEnvelope(value, "novaData", f"{index:08x}")
        fragment = render_iframe(FUZZ_HTML, envelope, IframeOptions(800, 600))
        recovered, _ = extract_payload(fragment)
        assert recovered == value
    _pass("payload fuzz", clock.check())


def test_primary_escaping_safety():
    clock = Clock(30.0)
    for index, value in enumerate(fuzz_payloads(1000)):
        envelope = PayloadEnvelope(value, "novaData", f"{index:08x}")
        bootstrap = encode_payload(envelope)
        body = bootstrap[bootstrap.index(">") + 1 : bootstrap.rindex("</script>")]
        assert "</script" not in body.lower()
        doc = inject_bootstrap(FUZZ_HTML, bootstrap)
        fragment = render_iframe(FUZZ_HTML, envelope, IframeOptions(800, 600))
        attr = extract_srcdoc(fragment)
        assert attr == escape_srcdoc(doc)
        assert unescape_srcdoc(attr) == doc
        assert "</script" not in bootstrap_body(unescape_srcdoc(attr)).lower()
    _pass("escaping safety", clock.check())


def _synthetic_project(rng: random.Random, budget: int) -> tuple[dict[str, bytes], int]:
    files: dict[str, bytes] = {}
    image_count = rng.randint(1, 4)
    refs = []
    for i in range(image_count):
        size = rng.randint(1024, min(80_000, max(2048, budget // 4)))
        files[f"assets/img{i}.png"] = rng.randbytes(size)
        refs.append(f'<img src="assets/img{i}.png">')
    files["app.js"] = (f"console.log({rng.random()});" * rng.randint(1, 40)).encode()
    binary = rng.randbytes(rng.randint(1024, 60_000))
    files["assets/tex.bin"] = binary
    files["style.css"] = (
        f"body{{margin:{rng.randint(0, 20)}px;background:url(assets/tex.bin)}}".encode()
    )
    files["index.html"] = (
        "<html><head>"
        '<link rel="stylesheet" href="style.css">'
        "</head><body>"
        + "".join(refs)
        + '<script src="app.js"></script>'
        "</body></html>"
    ).encode()
    return files, sum(len(data) for data in files.values())


def test_primary_size_bound(fixture_config, fixture_provider):
    clock = Clock(30.0)

    def assert_bound(html: str, input_bytes: int, label: str) -> None:
        output_bytes = len(html.encode("utf-8"))
        limit = input_bytes * 1.37 + 4096
        assert output_bytes <= limit, f"{label}: {output_bytes} > {limit:.0f}"

    fixture_inputs = sum(
        (FIXTURE_APP / name).stat().st_size
        for name in ("index.html", "app.js", "style.css", "logo.png", "favicon.ico", "model.wasm")
    )
    html, _ = bundle(fixture_config, fixture_provider)
    assert_bound(html, fixture_inputs, "fixture")

    rng = random.Random(42)
    total = 0
    config, _ = parse_config(
        json.dumps(
            {"name": "synth", "entry": "index.html", "root": ".", "package": {"package_name": "synth"}}
        )
    )
    for project_index in range(10):
        files, input_bytes = _synthetic_project(rng, budget=480_000)
        total += input_bytes
        html, _ = bundle(config, InMemoryFileProvider(files))
        assert_bound(html, input_bytes, f"synthetic project {project_index}")
    assert total <= 5 * 1024 * 1024
    _pass("size bound", clock.check())


def test_primary_multi_instance():
    clock = Clock(5.0)
    ids = [new_widget_id() for _ in range(100)]
    assert len(set(ids)) == 100
    assert all(re.fullmatch(r"[0-9a-f]{8}", wid) for wid in ids)
    _pass("multi-instance widget ids", clock.check())


def test_primary_scaffold_shape(fixture_config, fixture_bundle):
    clock = Clock(5.0)
    html, _ = fixture_bundle
    tree = scaffold(fixture_config, html)
    assert tree.paths() == [
        "LICENSE",
        "README.md",
        "pyproject.toml",
        "toygraph/__init__.py",
        "toygraph/_runtime.py",
        "toygraph/widget.html",
    ]
    assert tree.files["toygraph/widget.html"] == html.encode("utf-8")
    vectors = conformance_vectors()
    assert len(vectors) >= 20
    assert vectors_json() == vectors_json()  # emission is deterministic
    assert vectors_json() == VECTORS_PATH.read_text(encoding="utf-8"), (
        "checked-in conformance vectors are stale; regenerate with "
        "`python -m novabuild.conformance > conformance/vectors.json`"
    )
    _pass("scaffold shape", clock.check())


def test_secondary_runtime_conformance(
    fixture_config, fixture_bundle, runtime_module, checked_in_vectors, tmp_path
):
    clock = Clock(60.0)
    for vector in checked_in_vectors:
        got = runtime_module.render(
            vector["html"],
            vector["data"],
            vector["event_name"],
            vector["width"],
            vector["height"],
            vector["widget_id"],
        )
        assert got == vector["expected"], f"vector {vector['name']} drifted"

    html, _ = fixture_bundle
    pkg_dir = tmp_path / "srcpkg"
    materialize(scaffold(fixture_config, html), pkg_dir)
    site = tmp_path / "site"
    subprocess.run(
        [
            sys.executable,
            "-m",
            "pip",
            "install",
            "--quiet",
            "--no-build-isolation",
            "--target",
            str(site),
            str(pkg_dir),
        ],
        check=True,
        capture_output=True,
    )
    probe = (
        "import sys, json\n"
        f"sys.path.insert(0, {str(site)!r})\n"
        "import toygraph\n"
        "widget = toygraph.visualize(data={'nodes': [{'id': 'a'}], 'links': []},"
        " widget_id='feedc0de')\n"
        "html = widget._repr_html_()\n"
        "assert html.startswith('<iframe id=\"nova-widget-feedc0de\"'), html[:60]\n"
        "assert 'novaData' in html\n"
        "print('installed-widget-ok')\n"
    )
    result = subprocess.run(
        [sys.executable, "-c", probe], capture_output=True, text=True, check=True
    )
    assert "installed-widget-ok" in result.stdout
    _pass("runtime conformance + clean install", clock.check())


_DOM_DRIVER = """
const { readFileSync } = require("node:fs");
const { Window } = require(process.argv[2]);

function drive(doc, delayAppPastLoad) {
  const win = new Window({ url: "http://localhost/" });
  win.fetch = () => Promise.reject(new Error("offline"));
  win.document.body.innerHTML = doc.slice(doc.indexOf("<body>") + 6, doc.indexOf("</body>"));
  const scripts = [...doc.matchAll(/<script[^>]*>([\\s\\S]*?)<\\/script>/g)]
    .map((m) => m[1]).filter((s) => s.trim());
  const appIndex = scripts.length - 1; // the inlined viewer is the last script
  const run = (code) =>
    new Function("window", "document", "CustomEvent", code)(win, win.document, win.CustomEvent);
  if (delayAppPastLoad) {
    scripts.slice(0, appIndex).forEach(run);
    win.dispatchEvent(new win.Event("load")); // data event fires with nobody listening
    run(scripts[appIndex]); // the late viewer must pull the payload global
    win.dispatchEvent(new win.Event("load"));
  } else {
    scripts.forEach(run);
    win.dispatchEvent(new win.Event("load"));
  }
  const text = (id) => win.document.getElementById(id).textContent;
  return [text("node-count"), text("edge-count")];
}

const fragment = readFileSync(process.argv[3], "utf-8");
const start = fragment.indexOf('srcdoc="') + 'srcdoc="'.length;
const doc = fragment
  .slice(start, fragment.indexOf('"', start))
  .replaceAll("&quot;", '"')
  .replaceAll("&amp;", "&");

console.log("event path: " + drive(doc, false).join(" | "));
console.log("pull path: " + drive(doc, true).join(" | "));
"""


def test_secondary_end_to_end_widget_behavior(fixture_config, fixture_bundle, tmp_path):
    """Optional criterion: no headless browser ships in this environment, so
    the widget document runs in a DOM simulation (happy-dom) instead."""
    node = shutil.which("node")
    happy_dom = Path(__file__).resolve().parents[1] / "frontend" / "node_modules" / "happy-dom"
    if node is None or not happy_dom.exists():
        pytest.skip("requires node and happy-dom (run `npm install` in frontend/)")
    clock = Clock(30.0)
    html, _ = fixture_bundle
    sample = json.loads((FIXTURE_APP / "sample-payload.json").read_text(encoding="utf-8"))
    envelope = PayloadEnvelope({"data": sample}, fixture_config.event_name, "feedc0de")
    fragment = render_iframe(html, envelope, IframeOptions(800, 600))
    fragment_path = tmp_path / "fragment.html"
    fragment_path.write_text(fragment, encoding="utf-8")
    driver_path = tmp_path / "drive.cjs"
    driver_path.write_text(_DOM_DRIVER, encoding="utf-8")
    result = subprocess.run(
        [node, str(driver_path), str(happy_dom), str(fragment_path)],
        capture_output=True,
        text=True,
        check=True,
    )
    assert "event path: 2 | 1" in result.stdout
    assert "pull path: 2 | 1" in result.stdout
    _pass("end-to-end widget behavior (DOM simulation)", clock.check())
