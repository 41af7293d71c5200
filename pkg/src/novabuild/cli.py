"""Command-line entry point: ``nova bundle|scaffold|demo|check``.

Diagnostics go to stderr; machine-consumable output (check lines, report
JSON) goes to stdout or the requested file. Exit codes: 0 success, 1 for
usage/config/bundle errors, 2 when ``check`` finds violations.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .codegen import ScaffoldError, materialize, scaffold
from .config import (
    DEFAULT_CONFIG_FILENAME,
    BundleConfig,
    ConfigError,
    parse_config,
    validate_paths,
)
from .demo import DemoError, generate_demo
from .inliner import BundleError, bundle, check
from .model import BundleReport, BuildWarning
from .protocol import PayloadError
from .providers import DirectoryFileProvider, ProviderError


def _warn(message: str) -> None:
    print(f"nova: warning: {message}", file=sys.stderr)


def _print_warnings(warnings: list[BuildWarning]) -> None:
    for warning in warnings:
        where = f" @{warning.location}" if warning.location is not None else ""
        _warn(f"[{warning.code}]{where} {warning.message}")


def _load_project(config_path: str) -> tuple[BundleConfig, DirectoryFileProvider]:
    path = Path(config_path)
    text = path.read_text(encoding="utf-8")
    config, warnings = parse_config(text)
    provider = DirectoryFileProvider(path.parent / config.root)
    warnings += validate_paths(config, provider)
    _print_warnings(warnings)
    return config, provider


def _build_html(
    args: argparse.Namespace, config: BundleConfig, provider: DirectoryFileProvider
) -> tuple[str, BundleReport]:
    if getattr(args, "from_bundle", None):
        data = Path(args.from_bundle).read_bytes()
        html = data.decode("utf-8")
        return html, BundleReport(total_output_bytes=len(data))
    html, report = bundle(config, provider)
    _print_warnings(report.warnings)
    return html, report


def _write_report(args: argparse.Namespace, report: BundleReport) -> None:
    if getattr(args, "report_json", None):
        Path(args.report_json).write_text(
            json.dumps(report.as_dict(), indent=2, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )


def _cmd_bundle(args: argparse.Namespace) -> int:
    config, provider = _load_project(args.config)
    html, report = _build_html(args, config, provider)
    out_path = Path(args.output or f"{config.name}.bundle.html")
    out_path.write_bytes(html.encode("utf-8"))
    _write_report(args, report)
    print(f"wrote {out_path} ({report.total_output_bytes} bytes, {len(report.inlined)} assets inlined)")
    return 0


def _cmd_scaffold(args: argparse.Namespace) -> int:
    config, provider = _load_project(args.config)
    html, report = _build_html(args, config, provider)
    tree = scaffold(config, html)
    out_dir = args.output or config.package.package_name
    written = materialize(tree, out_dir, overwrite=args.overwrite)
    _write_report(args, report)
    print(f"wrote {out_dir} ({len(written)} files)")
    return 0


def _cmd_demo(args: argparse.Namespace) -> int:
    config, provider = _load_project(args.config)
    html, report = _build_html(args, config, provider)
    sample_payload = None
    if config.sample_payload is not None and provider.exists(config.sample_payload):
        try:
            sample_payload = json.loads(provider.read_bytes(config.sample_payload))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"sample_payload: malformed JSON in {config.sample_payload}: {exc}")
    tree = generate_demo(config, html, sample_payload)
    out_dir = args.output or "demo-site"
    written = materialize(tree, out_dir, overwrite=args.overwrite)
    _write_report(args, report)
    print(f"wrote {out_dir} ({len(written)} files)")
    return 0


def _cmd_check(args: argparse.Namespace) -> int:
    html = Path(args.file).read_bytes().decode("utf-8", errors="replace")
    violations = check(html, tuple(args.allow or ()))
    for violation in violations:
        print(f"{violation.rule.value}\t{violation.url}\t{violation.location}")
    return 2 if violations else 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nova",
        description="Bundle a static web app into one HTML file and wrap it as a notebook widget.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("-c", "--config", default=DEFAULT_CONFIG_FILENAME, help="project config file")
        p.add_argument("--report-json", help="write the bundle report as JSON to this path")

    p_bundle = sub.add_parser("bundle", help="produce the single self-contained HTML file")
    add_common(p_bundle)
    p_bundle.add_argument("-o", "--output", help="output file (default <name>.bundle.html)")
    p_bundle.add_argument("--from-bundle", help="reuse a prebuilt bundle instead of bundling")
    p_bundle.set_defaults(func=_cmd_bundle)

    p_scaffold = sub.add_parser("scaffold", help="generate the installable widget package tree")
    add_common(p_scaffold)
    p_scaffold.add_argument("-o", "--output", help="output directory (default <package_name>/)")
    p_scaffold.add_argument("--overwrite", action="store_true", help="replace existing files")
    p_scaffold.add_argument("--from-bundle", help="reuse a prebuilt bundle instead of bundling")
    p_scaffold.set_defaults(func=_cmd_scaffold)

    p_demo = sub.add_parser("demo", help="generate the two-panel static demo page")
    add_common(p_demo)
    p_demo.add_argument("-o", "--output", help="output directory (default demo-site/)")
    p_demo.add_argument("--overwrite", action="store_true", help="replace existing files")
    p_demo.add_argument("--from-bundle", help="reuse a prebuilt bundle instead of bundling")
    p_demo.set_defaults(func=_cmd_demo)

    p_check = sub.add_parser("check", help="list external references left in an HTML file")
    p_check.add_argument("file", help="HTML file to check")
    p_check.add_argument(
        "--allow", action="append", metavar="PREFIX", help="URL prefix allowed to stay external"
    )
    p_check.set_defaults(func=_cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; the contract here is 1
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (
        ConfigError,
        BundleError,
        ScaffoldError,
        DemoError,
        PayloadError,
        ProviderError,
        OSError,
    ) as exc:
        print(f"nova: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
