"""Command-line front end.

Exit codes: 0 success / pass, 1 experiment verdict fail, 2 usage, parse or
config error, 3 output I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field, replace

from . import battery
from .bergman import analytic_decompose, project_basis
from .domains import Domain, build_quadrature
from .lab import (DEFAULT_RADIAL_PARTNERS, TOL_CLOSED_FORM, TOL_QUADRATURE, run_annulus_counterexample, run_commute_check,
                  run_moment_scan)
from .reports import ReportIOError, to_jsonable, write_report
from .symbols import SymbolParseError, parse_symbol
from .toeplitz import toeplitz_matrix

__all__ = ["RunConfig", "ConfigError", "load_config", "main"]

SUBCOMMANDS = ("matrix", "commutator", "project", "decompose", "moments", "verify", "annulus-demo")
CONFIG_KEYS = ("domain", "symbol", "phi", "psi", "trunc", "quad", "n-max", "tol", "format", "out")


class ConfigError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class RunConfig:
    domain: Domain = field(default_factory=Domain.disk)
    symbol: str | None = None
    phi: str | None = None
    psi: str | None = None
    trunc: int = 32
    quad: tuple = (64, 256)
    n_max: int = 4
    tol: float | None = None
    format: str = "json"
    out: str | None = None

    def __post_init__(self):
        if self.trunc < 1:
            raise ConfigError(f"trunc must be positive, got {self.trunc}")
        if len(self.quad) != 2 or min(self.quad) < 1:
            raise ConfigError(f"quad orders must be positive, got {self.quad}")
        if self.n_max < 1:
            raise ConfigError(f"n-max must be at least 1, got {self.n_max}")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}")


def _parse_value(key, text):
    try:
        if key == "domain":
            return Domain.parse(text)
        if key == "trunc":
            return int(text)
        if key == "n-max":
            return int(text)
        if key == "tol":
            return float(text)
        if key == "quad":
            nr, nt = text.lower().split("x")
            return (int(nr), int(nt))
        if key in ("symbol", "phi", "psi"):
            parse_symbol(text)
        return text
    except SymbolParseError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"malformed value for {key}: {text!r} ({exc})") from None


def _field(key):
    return key.replace("-", "_")


def load_config(path) -> RunConfig:
    """Read a ``key = value`` file; ``#`` starts a comment."""
    values = _read_config(path)
    return RunConfig(**values)


def _read_config(path) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
            key, _, text = (s.strip() for s in line.partition("="))
            key = key.replace("_", "-")
            if key not in CONFIG_KEYS:
                raise ConfigError(f"unknown key {key!r}", lineno)
            try:
                values[_field(key)] = _parse_value(key, text)
            except ConfigError as exc:
                raise ConfigError(str(exc), lineno) from None
            except SymbolParseError as exc:
                raise ConfigError(f"{key}: {exc}", lineno) from None
    try:
        RunConfig(**values)
    except ConfigError as exc:
        raise ConfigError(str(exc), None) from None
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", help="disk | annulus:<rho>")
    common.add_argument("--symbol", help="symbol in the term grammar")
    common.add_argument("--phi")
    common.add_argument("--psi")
    common.add_argument("--trunc", help="truncation order N")
    common.add_argument("--quad", help="quadrature orders <n_r>x<n_theta>")
    common.add_argument("--n-max", dest="n_max", help="largest power of phi")
    common.add_argument("--tol")
    common.add_argument("--format", choices=("json", "csv"))
    common.add_argument("--out")
    common.add_argument("--config", help="key = value file; flags override it")
    parser = _Parser(prog="bergtoep",
                     description="Truncated Toeplitz operators on Bergman spaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in SUBCOMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _config_from_args(args) -> RunConfig:
    values = _read_config(args.config) if args.config else {}
    for key in CONFIG_KEYS:
        raw = getattr(args, _field(key))
        if raw is not None:
            values[_field(key)] = _parse_value(key, raw)
    return RunConfig(**values)


def _need(cfg, *names):
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise ConfigError("missing required option(s): " + ", ".join("--" + n for n in missing))


def _emit(obj, cfg, stdout):
    text = write_report(obj, cfg.format, cfg.out)
    if cfg.out is None:
        stdout.write(text)


def _run(command, cfg, stdout, stderr) -> int:
    rule = build_quadrature(cfg.domain, *cfg.quad)
    if command == "matrix":
        _need(cfg, "symbol")
        op = toeplitz_matrix(cfg.domain, parse_symbol(cfg.symbol), cfg.trunc)
        _emit(op, cfg, stdout)
        return 0
    if command == "project":
        _need(cfg, "symbol")
        _emit(project_basis(cfg.domain, parse_symbol(cfg.symbol), cfg.trunc), cfg, stdout)
        return 0
    if command == "decompose":
        _need(cfg, "symbol")
        dec = analytic_decompose(cfg.domain, parse_symbol(cfg.symbol), cfg.trunc, rule)
        if cfg.format == "csv":
            _emit(dec.f, cfg, stdout)
        else:
            data = {"domain": cfg.domain.to_dict(), "symbol": cfg.symbol, "N": cfg.trunc,
                    "residual_norm": dec.residual_norm, "u": str(dec.u_symbol),
                    "f": [{"index": int(n), **to_jsonable(complex(c))}
                          for n, c in zip(dec.f.index_set.indices, dec.f.coeffs)]}
            _emit(data, cfg, stdout)
        return 0
    if command == "commutator":
        _need(cfg, "phi", "psi")
        rep = run_commute_check(cfg.domain, parse_symbol(cfg.phi), parse_symbol(cfg.psi),
                                cfg.trunc, tol_zero=cfg.tol or TOL_CLOSED_FORM)
        if cfg.format == "csv":
            raise ConfigError("commutator reports are JSON only")
        _emit(rep, cfg, stdout)
        stderr.write(f"{rep.name}: {rep.verdict} - {rep.summary}\n")
        return 0 if rep.verdict != "fail" else 1
    if command == "moments":
        _need(cfg, "phi", "psi")
        table, rep = run_moment_scan(cfg.domain, parse_symbol(cfg.phi), parse_symbol(cfg.psi),
                                     cfg.n_max, cfg.trunc - 1, rule, tol=cfg.tol or TOL_QUADRATURE)
        _emit(table if cfg.format == "csv" else rep, cfg, stdout)
        stderr.write(f"{rep.name}: {rep.verdict} - {rep.summary}\n")
        return 0 if rep.verdict != "fail" else 1
    if command == "annulus-demo":
        if cfg.domain.is_disk:
            cfg = replace(cfg, domain=Domain.annulus(0.5))
            rule = build_quadrature(cfg.domain, *cfg.quad)
        partners = (cfg.symbol,) if cfg.symbol else DEFAULT_RADIAL_PARTNERS
        rep = run_annulus_counterexample(cfg.domain.rho, partners, cfg.trunc, rule,
                                         tol=cfg.tol or 1e-10)
        if cfg.format == "csv":
            raise ConfigError("annulus reports are JSON only")
        _emit(rep, cfg, stdout)
        stderr.write(f"{rep.name}: {rep.verdict} - {rep.summary}\n")
        return 0 if rep.verdict != "fail" else 1
    if command == "verify":
        reports = battery.run_battery()
        width = max(len(r.name) for r in reports)
        for r in reports:
            stdout.write(f"{r.name:<{width}}  {r.verdict.upper():<5}  "
                         f"{r.metrics.get('seconds', 0.0):7.3f}s\n")
        if cfg.out is not None:
            write_report(reports, "json", cfg.out)
        failed = sum(not r.passed for r in reports)
        stdout.write(f"{len(reports) - failed}/{len(reports)} checks passed\n")
        return 1 if failed else 0
    raise ConfigError(f"unknown command {command!r}")


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(args)
        return _run(args.command, cfg, stdout, stderr)
    except SymbolParseError as exc:
        stderr.write(f"bergtoep: symbol parse error: {exc}\n")
        return 2
    except ConfigError as exc:
        stderr.write(f"bergtoep: {exc}\n")
        return 2
    except ReportIOError as exc:
        stderr.write(f"bergtoep: {exc}\n")
        return 3
    except OSError as exc:
        stderr.write(f"bergtoep: {exc}\n")
        return 2
    except ValueError as exc:
        stderr.write(f"bergtoep: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
