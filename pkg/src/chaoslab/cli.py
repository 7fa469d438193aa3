"""Command line entry point.

    chaoslab run --experiment <name> --config <path> --out <dir> [--format <fmt>]

The config file is flat ``key = value`` text.  Exit codes: 0 all checks pass,
1 some check fails, 2 usage or config error, 3 only inconclusive checks besides passes.
"""
from __future__ import annotations

import argparse
import configparser
import sys

from .experiments import (EXPERIMENTS, FORMATS, ConfigError, ExperimentConfig, budget_from_env, emit,
                          run)

EXIT_USAGE = 2


def load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    cp.optionxform = str
    try:
        cp.read_string("[run]\n" + text)
    except configparser.Error as e:
        raise ConfigError(f"config parse error: {e}") from e
    data = dict(cp["run"])
    if not data:
        raise ConfigError("config is empty")
    return data


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chaoslab")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run an experiment and write its report")
    r.add_argument("--experiment", required=True, choices=EXPERIMENTS + ("all",))
    r.add_argument("--config", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--format", choices=tuple(FORMATS) + ("both",), default="both")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        data = load_config(args.config)
        data["experiment"] = args.experiment
        env_budget = budget_from_env()
        if env_budget is not None:
            data["budget"] = env_budget
        cfg = ExperimentConfig.from_mapping(data)
    except ConfigError as e:
        print(f"chaoslab: {e}", file=sys.stderr)
        return EXIT_USAGE
    rep = run(cfg)
    fmts = tuple(FORMATS) if args.format == "both" else (args.format,)
    for path in emit(rep, args.out, fmts):
        print(path)
    s = rep.summary
    print(f"pass={s['pass']} fail={s['fail']} inconclusive={s['inconclusive']}")
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
