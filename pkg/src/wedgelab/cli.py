"""Command-line front end: ``wedgelab catalog | verify | sample``.

Exit codes: 0 when every check passes, 1 on an invariant failure, 2 on a
configuration or usage error.
"""
from __future__ import annotations

import argparse
import configparser
import json
import re
import sys
from dataclasses import fields
from pathlib import Path

from . import catalog, cloud, models, suites

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

CONFIG_HELP = """\
configuration file (INI):

  [run]
  n = 200          # samples per sampled section; 0 skips them
  seed = 0         # 64-bit seed of the low-discrepancy sampler
  output = PATH    # write the JSON report here instead of stdout

  [tolerances]
  residual = 1e-9  # identities, geodesic law, closure, Cayley relation
  angle = 1e-7     # principal angles between kernels
  limit = 1e-8     # limit formula for the grading projections
  location = 1e-3  # position of singular parameters on the test ray
"""


class ConfigError(ValueError):
    """A configuration problem, reported with file, line and field where known."""


def _line_of(text: str, section: str, key: str) -> int | None:
    current = None
    for i, line in enumerate(text.splitlines(), start=1):
        m = re.match(r"\s*\[([^\]]+)\]", line)
        if m:
            current = m.group(1).strip()
        elif current == section and re.match(rf"\s*{re.escape(key)}\s*[=:]", line):
            return i
    return None


def load_config(path: str | None) -> suites.RunConfig:
    """Parse an INI run configuration; every problem raises :class:`ConfigError`."""
    if path is None:
        return suites.RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from exc
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=path)
    except configparser.Error as exc:
        raise ConfigError(str(exc).replace("\n", " ")) from exc
    known = {"run": {"n", "seed", "output"}, "tolerances": {f.name for f in fields(suites.Tolerances)}}
    for section in parser.sections():
        if section not in known:
            raise ConfigError(f"{path}: unknown section [{section}]")
        for key in parser[section]:
            if key not in known[section]:
                raise ConfigError(f"{path}, line {_line_of(text, section, key)}: unknown field "
                                  f"'{key}' in [{section}]")

    def get(section, key, conv, default):
        if not parser.has_option(section, key):
            return default
        raw = parser.get(section, key)
        try:
            return conv(raw)
        except ValueError as exc:
            raise ConfigError(f"{path}, line {_line_of(text, section, key)}: [{section}] {key} = "
                              f"{raw!r} is not a valid {conv.__name__}") from exc

    tol = suites.Tolerances(**{f.name: get("tolerances", f.name, float, getattr(suites.Tolerances(), f.name))
                               for f in fields(suites.Tolerances)})
    for f in fields(tol):
        if not getattr(tol, f.name) > 0:
            raise ConfigError(f"{path}, line {_line_of(text, 'tolerances', f.name)}: "
                              f"[tolerances] {f.name} must be positive")
    n, seed, output = get("run", "n", int, 200), get("run", "seed", int, 0), get("run", "output", str, None)
    try:
        return suites.RunConfig(n=n, seed=seed, tolerances=tol, output=output)
    except ValueError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ---------------------------------------------------------------------------

def cmd_catalog(args) -> int:
    try:
        selected = catalog.rows(args.family)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    entries, ok = [], True
    for row in selected:
        entry = row.to_dict()
        entry["realized"] = row.build is not None
        checks = []
        for param in row.params:
            c = catalog.check_row(row, param)
            ok &= c.ok
            checks.append({
                "param": param, "dim_g": c.dim_g, "g1_dim": c.g1_dim, "g1_expected": c.g1_expected,
                "rank": c.rank, "rank_expected": c.rank_expected, "h_fixed": c.h_fixed, "ok": c.ok,
            })
        entry["checks"] = checks
        entries.append(entry)
    if args.json:
        _write(_dump({"rows": entries, "passed": ok}), None)
    else:
        for e in entries:
            flag = "realized" if e["realized"] else "data only"
            print(f"{e['family']:9} {e['g']:26} h = {e['h']:24} {e['roots']:10} {e['euler']:13} "
                  f"g1 = {e['g1']:16} [{flag}]")
            for c in e["checks"]:
                print(f"{'':12}{e['g']} at {c['param']}: dim g1 = {c['g1_dim']} (table {c['g1_expected']}), "
                      f"rank a = {c['rank']} (table {c['rank_expected']}) {'ok' if c['ok'] else 'MISMATCH'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    reports = suites.run(args.suite, cfg)
    passed = all(r.passed for r in reports)
    data = {"suite": args.suite, "passed": passed, "reports": [r.to_dict() for r in reports]}
    _write(_dump(data), cfg.output)
    for r in reports:
        for c in r.failures:
            print(f"FAIL {c.name}: value {c.value}, tolerance {c.tol}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


def cmd_sample(args) -> int:
    if args.spec not in models.SPECS:
        print(f"error: unknown spec {args.spec!r}; choose from {', '.join(models.SPECS)}", file=sys.stderr)
        return EXIT_CONFIG
    if args.n < 0 or not 0 <= args.seed < 2**64:
        print("error: n must be non-negative and seed must fit in 64 bits", file=sys.stderr)
        return EXIT_CONFIG
    try:
        header, rows = cloud.point_cloud(args.spec, args.domain, args.n, args.seed)
    except cloud.UnsupportedPair as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    _write(cloud.to_csv(header, rows), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wedgelab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the classification table and recheck realized rows")
    p.add_argument("--family", choices=catalog.FAMILIES, help="only rows of this family")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify", help="run invariant suites and emit a JSON report",
                       epilog=CONFIG_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--suite", choices=(*suites.SUITES, "all"), default="all")
    p.add_argument("--config", metavar="PATH", help="INI run configuration (see below)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="write a CSV point cloud with membership verdicts")
    p.add_argument("--spec", required=True, help=f"one of {', '.join(models.SPECS)}")
    p.add_argument("--domain", required=True, choices=cloud.DOMAINS)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="PATH", help="output file (default stdout)")
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
