from __future__ import annotations

import importlib.util
import json
from pathlib import Path

import pytest

from novabuild.config import BundleConfig, parse_config
from novabuild.inliner import bundle
from novabuild.model import BundleReport
from novabuild.providers import DirectoryFileProvider

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURE_APP = REPO_ROOT / "frontend" / "fixture-app"
VECTORS_PATH = REPO_ROOT / "conformance" / "vectors.json"
RUNTIME_TEMPLATE_PATH = REPO_ROOT / "src" / "novabuild" / "templates" / "_runtime.py"


@pytest.fixture(scope="session")
def fixture_config() -> BundleConfig:
    config, warnings = parse_config((FIXTURE_APP / "nova.config.json").read_text(encoding="utf-8"))
    assert warnings == []
    return config


@pytest.fixture(scope="session")
def fixture_provider() -> DirectoryFileProvider:
    return DirectoryFileProvider(FIXTURE_APP)


@pytest.fixture(scope="session")
def fixture_bundle(
    fixture_config: BundleConfig, fixture_provider: DirectoryFileProvider
) -> tuple[str, BundleReport]:
    return bundle(fixture_config, fixture_provider)


@pytest.fixture(scope="session")
def runtime_module():
    spec = importlib.util.spec_from_file_location("nova_runtime_template", RUNTIME_TEMPLATE_PATH)
    module = importlib.util.module_from_spec(spec)
    assert spec.loader is not None
    spec.loader.exec_module(module)
    return module


@pytest.fixture(scope="session")
def checked_in_vectors() -> list[dict]:
    return json.loads(VECTORS_PATH.read_text(encoding="utf-8"))
