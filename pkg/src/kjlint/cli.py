"""Command line entry point: ``kjlint [OPTIONS] lang srcPath``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

from kjlint.detectors.config import DetectorConfig
from kjlint.detectors.findings import Severity, Smell
from kjlint.pipeline import NoSourcesFound, run_analysis
from kjlint.report import FORMATS, ReportError, exit_status, render_report
from kjlint.source import Language

EXIT_USAGE = 2
EXIT_RUNTIME = 3
LANGUAGES = tuple(lang.value for lang in Language)


class UsageError(Exception):
    def __init__(self, message: str, usage: str = "") -> None:
        super().__init__(message)
        self.usage = usage


class ConfigError(Exception):
    """The --config profile is unreadable or holds an invalid value."""


@dataclass(frozen=True)
class CliConfig:
    lang: str
    src_path: Path
    with_languages: tuple[str, ...] = ()
    prefix: str | None = None
    out_dir: Path | None = None
    format: str = "text"
    config_path: Path | None = None
    languages: frozenset[Language] = field(init=False)

    def __post_init__(self) -> None:
        langs = {Language.parse(self.lang), *(Language.parse(w) for w in self.with_languages)}
        object.__setattr__(self, "languages", frozenset(langs))


class _HelpFormatter(argparse.HelpFormatter):
    """Prints ``-w, --with TEXT`` rather than argparse's ``-w TEXT, --with TEXT``."""

    def _format_action_invocation(self, action: argparse.Action) -> str:
        if not action.option_strings or action.nargs == 0:
            return super()._format_action_invocation(action)
        metavar = self._format_args(action, action.dest.upper())
        return f"{', '.join(action.option_strings)} {metavar}"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would print and exit; the caller decides instead
        raise UsageError(message, self.format_usage())


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="kjlint",
        description="Detect code smells in Kotlin and Java sources, including Kotlin/Java interop smells.",
        formatter_class=_HelpFormatter,
        add_help=False,
        epilog="Exit status: 0 no error-severity findings, 1 error-severity findings, "
               "2 usage error, 3 configuration or runtime error.",
    )
    args = parser.add_argument_group("Arguments")
    args.add_argument("lang", help="The language of project files")
    args.add_argument("srcPath", help="The source path")
    opts = parser.add_argument_group("Options")
    opts.add_argument("-w", "--with", dest="with_languages", action="append", default=[],
                      metavar="TEXT", help="The Languages of cross-analysis")
    opts.add_argument("-p", "--prefix", metavar="TEXT", help="The result file name prefix")
    opts.add_argument("-d", "--outDir", dest="out_dir", metavar="PATH", help="The result output path")
    opts.add_argument("-f", "--format", default="text", metavar="FORMAT",
                      help="The Presentation of results (text or json)")
    opts.add_argument("-c", "--config", metavar="PATH", help="The User-specified profiles")
    opts.add_argument("-h", "--help", action="help", help="Show this message and exit")
    return parser


def parse_args(argv: Sequence[str]) -> CliConfig:
    """Parse the command line; raises UsageError, or SystemExit(0) for ``--help``."""
    parser = build_parser()
    ns = parser.parse_args(list(argv))
    usage = parser.format_usage()
    lang = ns.lang.lower()
    if lang not in LANGUAGES:
        raise UsageError(f"unsupported lang {ns.lang!r} (choose from {', '.join(LANGUAGES)})", usage)
    extra: list[str] = []
    for value in ns.with_languages:
        for item in value.split(","):
            item = item.strip().lower()
            if item not in LANGUAGES:
                raise UsageError(f"unsupported --with language {item!r}", usage)
            if item == lang:
                raise UsageError(f"--with {item} repeats the primary language", usage)
            if item not in extra:
                extra.append(item)
    if ns.format not in FORMATS:
        raise UsageError(f"invalid --format {ns.format!r} (choose from {', '.join(FORMATS)})", usage)
    src = Path(ns.srcPath)
    if not src.exists():
        raise UsageError(f"srcPath {ns.srcPath!r} does not exist", usage)
    return CliConfig(
        lang=lang,
        src_path=src,
        with_languages=tuple(extra),
        prefix=ns.prefix,
        out_dir=Path(ns.out_dir) if ns.out_dir else None,
        format=ns.format,
        config_path=Path(ns.config) if ns.config else None,
    )


_SET_KEYS = {
    "nullableAnnotations": "nullable_annotations",
    "notnullAnnotations": "notnull_annotations",
    "readonlyCollectionTypes": "readonly_collection_types",
    "mutatorMethods": "mutator_methods",
    "kotlinJvmAnnotations": "kotlin_jvm_annotations",
}
_KNOWN_KEYS = {"maxParams", "enabled", "severityOverrides", *_SET_KEYS}


def _smell(name: str, key: str) -> Smell:
    try:
        return Smell(name)
    except ValueError:
        raise ConfigError(f"{key}: unknown smell {name!r}") from None


def config_from_dict(obj: object) -> DetectorConfig:
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(obj) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    kwargs: dict = {}
    if "maxParams" in obj:
        kwargs["max_params"] = obj["maxParams"]
    for key, attr in _SET_KEYS.items():
        if key in obj:
            value = obj[key]
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                raise ConfigError(f"{key} must be a list of strings")
            kwargs[attr] = frozenset(value)
    if "enabled" in obj:
        if not isinstance(obj["enabled"], dict) or not all(isinstance(v, bool) for v in obj["enabled"].values()):
            raise ConfigError("enabled must map smell names to true/false")
        kwargs["enabled"] = {_smell(k, "enabled"): v for k, v in obj["enabled"].items()}
    if "severityOverrides" in obj:
        overrides = obj["severityOverrides"]
        if not isinstance(overrides, dict):
            raise ConfigError("severityOverrides must map smell names to severities")
        try:
            kwargs["severity_overrides"] = {_smell(k, "severityOverrides"): Severity(v)
                                            for k, v in overrides.items()}
        except ValueError as exc:
            raise ConfigError(f"severityOverrides: {exc}") from None
    try:
        return DetectorConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path | None) -> DetectorConfig:
    """Detector settings from a JSON profile; all defaults when ``path`` is None."""
    if path is None:
        return DetectorConfig()
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from None
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: malformed JSON: {exc}") from None
    return config_from_dict(obj)


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    argv = sys.argv[1:] if argv is None else argv
    try:
        cli = parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc.usage}kjlint: error: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        cfg = load_config(cli.config_path)
        result = run_analysis(cli.src_path, cli.languages, cfg)
        written = render_report(result, cli.format, cli.prefix or "", cli.out_dir)
    except (ConfigError, NoSourcesFound, ReportError, OSError) as exc:
        sys.stderr.write(f"kjlint: error: {exc}\n")
        return EXIT_RUNTIME
    for path in written:
        sys.stderr.write(f"wrote {path}\n")
    return exit_status(result)


if __name__ == "__main__":
    sys.exit(main())
