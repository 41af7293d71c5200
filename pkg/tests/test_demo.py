from __future__ import annotations

import json
import re

import pytest

from _helpers import extract_payload, unescape_attr
from novabuild.demo import DemoError, demo_widget_id, generate_demo
from novabuild.inliner import check

SAMPLE = {"nodes": [{"id": "a"}, {"id": "b"}], "links": [{"source": "a", "target": "b"}]}


def demo_page(fixture_config, fixture_bundle, payload=SAMPLE) -> str:
    html, _ = fixture_bundle
    tree = generate_demo(fixture_config, html, payload)
    assert tree.paths() == ["demo/index.html"]
    return tree.files["demo/index.html"].decode("utf-8")


def _srcdocs(page: str) -> list[str]:
    return re.findall(r'srcdoc="([^"]*)"', page)


def test_two_panels_with_identical_widgets(fixture_config, fixture_bundle):
    page = demo_page(fixture_config, fixture_bundle)
    assert "<h2>Web app</h2>" in page
    assert "<h2>Notebook widget</h2>" in page
    srcdocs = _srcdocs(page)
    assert len(srcdocs) == 2
    assert srcdocs[0] == srcdocs[1]
    assert unescape_attr(srcdocs[0]) == unescape_attr(srcdocs[1])


def test_srcdoc_decodes_to_bundle_with_payload(fixture_config, fixture_bundle):
    bundled, _ = fixture_bundle
    page = demo_page(fixture_config, fixture_bundle)
    fragment_start = page.index("<iframe")
    fragment = page[fragment_start : page.index("</iframe>") + len("</iframe>")]
    value, doc = extract_payload(fragment)
    assert value == SAMPLE
    # outside the spliced bootstrap, the document is the bundle
    assert doc.endswith(bundled.split("<!--NOVA:BOOTSTRAP-->", 1)[1])
    assert doc.startswith(bundled.split("<!--NOVA:BOOTSTRAP-->", 1)[0])


def test_demo_outer_page_is_single_file(fixture_config, fixture_bundle):
    page = demo_page(fixture_config, fixture_bundle)
    assert check(page) == []


def test_demo_without_payload_shows_note(fixture_config, fixture_bundle):
    page = demo_page(fixture_config, fixture_bundle, payload=None)
    assert "no sample payload configured" in page
    # null payload still reaches the widgets
    value, _ = extract_payload(page[page.index("<iframe") :])
    assert value is None


def test_demo_with_payload_has_no_note(fixture_config, fixture_bundle):
    page = demo_page(fixture_config, fixture_bundle)
    assert "no sample payload configured" not in page


def test_demo_cell_shows_install_and_usage(fixture_config, fixture_bundle):
    page = demo_page(fixture_config, fixture_bundle)
    assert "pip install toygraph" in page
    assert "import toygraph" in page
    assert "toygraph.visualize(data=...)" in page
    assert 'class="cell-input"' in page


def test_demo_is_deterministic(fixture_config, fixture_bundle):
    assert demo_page(fixture_config, fixture_bundle) == demo_page(fixture_config, fixture_bundle)
    assert re.fullmatch(r"[0-9a-f]{8}", demo_widget_id(fixture_config))


def test_demo_requires_marker(fixture_config):
    with pytest.raises(DemoError, match="NOVA:BOOTSTRAP"):
        generate_demo(fixture_config, "<html><head></head></html>", SAMPLE)


def test_demo_widget_ids_match_bootstrap(fixture_config, fixture_bundle):
    page = demo_page(fixture_config, fixture_bundle)
    wid = demo_widget_id(fixture_config)
    assert page.count(f'id="nova-widget-{wid}"') == 2
    doc = unescape_attr(_srcdocs(page)[0])
    assert f'<script id="nova-bootstrap-{wid}">' in doc


def test_demo_payload_rides_event_name(fixture_config, fixture_bundle):
    page = demo_page(fixture_config, fixture_bundle)
    doc = unescape_attr(_srcdocs(page)[0])
    assert 'window.__NOVA_EVENT__ = "novaData";' in doc
    assert json.dumps(SAMPLE, separators=(",", ":")) in doc
