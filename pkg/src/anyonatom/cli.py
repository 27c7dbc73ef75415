"""Command-line front end: level sweeps, reference-table comparisons, exports.

The zero-argument run computes the six levels n' in {0,1,2}, l in {1,2} for
S = 1/2, xi = alpha, Z = 1 at the electron mass with the closed-form and
oracle solvers and prints them side by side.  Output formats: a fixed-width
table (eV at 4 decimals, round-half-even), CSV, and JSON (full precision;
identical configuration produces byte-identical output).  A plain-text
key=value config file can supply any flag; command-line values win.

Exit codes: 0 success, 2 configuration error, 3 at least one solver cell
failed (failed cells render as error markers, the rest are computed).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import closedform, oracle, wkb
from .errors import (
    BracketFailure,
    DomainError,
    EigenvalueNotFound,
    IntegrationOverflow,
    NoClassicalRegion,
    QuadratureFailure,
)
from .model import CODATA_ALPHA, ELECTRON_MASS_EV, AnyonParams, QuantumNumbers

__all__ = ["RunConfig", "SpectrumRow", "run", "render", "main", "ConfigError"]

METHOD_ORDER = ("closed", "wkb-full", "wkb-split", "oracle", "nonrel")

_SOLVER_ERRORS = (
    DomainError,
    NoClassicalRegion,
    QuadratureFailure,
    BracketFailure,
    IntegrationOverflow,
    EigenvalueNotFound,
)


class ConfigError(Exception):
    """Bad flag/config-file input, reported before any computation."""


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs of one CLI invocation."""

    params: AnyonParams
    n_max: int = 2
    l_max: int = 2
    methods: tuple[str, ...] = ("closed", "oracle")
    output_format: str = "table"
    alpha: float = CODATA_ALPHA
    tol_quad: float = 1e-11
    tol_root: float = 1e-14
    tol_oracle_ev: float = 1e-3
    oracle_points: int = 4000
    dump_potential: str | None = None
    dump_phase: str | None = None
    out: str | None = None

    def __post_init__(self) -> None:
        if not self.methods:
            raise ConfigError("at least one method must be selected")
        for m in self.methods:
            if m not in METHOD_ORDER:
                raise ConfigError(f"unknown method {m!r}; choose from {', '.join(METHOD_ORDER)}")
        if self.output_format not in ("table", "csv", "json"):
            raise ConfigError(f"unknown format {self.output_format!r}")
        if self.n_max < 0 or self.l_max < 1:
            raise ConfigError("bounds must satisfy n_max >= 0 and l_max >= 1")
        if min(self.tol_quad, self.tol_root, self.tol_oracle_ev) <= 0.0:
            raise ConfigError("tolerances must be positive")
        if self.oracle_points < 1000:
            raise ConfigError("oracle grid needs at least 1000 points")


@dataclass
class SpectrumRow:
    """One (n', l) level: per-method kinetic energies in eV.

    Missing methods are absent from energies_ev; failed cells carry None
    plus a message in errors.  deltas_ev holds method - oracle differences
    when the oracle column is present.
    """

    n_r: int
    l: int
    energies_ev: dict[str, float | None] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)
    deltas_ev: dict[str, float | None] = field(default_factory=dict)


def _solve_cell(config: RunConfig, method: str, qn: QuantumNumbers) -> float:
    params = config.params
    if method == "closed":
        return closedform.energy_closed_form(params, qn).kinetic_ev
    if method == "nonrel":
        return closedform.energy_nonrel(params, qn).kinetic_ev
    if method == "wkb-full":
        return wkb.energy_wkb_full(
            params, qn, tol_quad=config.tol_quad, tol_root=config.tol_root
        ).kinetic_ev
    if method == "wkb-split":
        return wkb.energy_wkb_split(params, qn, tol_root=config.tol_root).kinetic_ev
    if method == "oracle":
        return oracle.energy_oracle(
            params, qn, n_points=config.oracle_points, tol_ev=config.tol_oracle_ev
        ).kinetic_ev
    raise ConfigError(f"unknown method {method!r}")


def compute_rows(config: RunConfig) -> tuple[list[SpectrumRow], bool]:
    """All requested (method x level) cells; never aborts on a cell failure."""
    rows: list[SpectrumRow] = []
    failed = False
    for l in range(1, config.l_max + 1):
        for n_r in range(0, config.n_max + 1):
            qn = QuantumNumbers(n_r, l)
            row = SpectrumRow(n_r=n_r, l=l)
            for method in config.methods:
                try:
                    row.energies_ev[method] = _solve_cell(config, method, qn)
                except _SOLVER_ERRORS as exc:
                    row.energies_ev[method] = None
                    row.errors[method] = f"{type(exc).__name__}: {exc}"
                    failed = True
            if "oracle" in config.methods:
                ref = row.energies_ev.get("oracle")
                for method in config.methods:
                    if method == "oracle":
                        continue
                    val = row.energies_ev.get(method)
                    row.deltas_ev[method] = (
                        val - ref if (val is not None and ref is not None) else None
                    )
            rows.append(row)
    return rows, failed


def _fmt_cell(value: float | None) -> str:
    return "ERROR" if value is None else f"{value:.4f}"


def _render_table(rows: list[SpectrumRow], methods: tuple[str, ...]) -> str:
    headers = ["n'", "l"] + [f"E'_{m}, eV" for m in methods]
    delta_methods = [m for m in methods if m != "oracle"] if "oracle" in methods else []
    headers += [f"d({m}-oracle), eV" for m in delta_methods]
    table: list[list[str]] = [headers]
    for row in rows:
        cells = [str(row.n_r), str(row.l)]
        cells += [_fmt_cell(row.energies_ev.get(m)) for m in methods]
        cells += [_fmt_cell(row.deltas_ev.get(m)) for m in delta_methods]
        table.append(cells)
    widths = [max(len(line[i]) for line in table) for i in range(len(headers))]
    lines = ["  ".join(cell.rjust(w) for cell, w in zip(line, widths)) for line in table]
    return "\n".join(lines) + "\n"


def _csv_number(value: float | None) -> str:
    return "" if value is None else repr(value)


def _render_csv(rows: list[SpectrumRow], methods: tuple[str, ...]) -> str:
    delta_methods = [m for m in methods if m != "oracle"] if "oracle" in methods else []
    header = ["n_r", "l"] + list(methods) + [f"delta_{m}" for m in delta_methods]
    lines = [",".join(header)]
    for row in rows:
        cells = [str(row.n_r), str(row.l)]
        cells += [_csv_number(row.energies_ev.get(m)) for m in methods]
        cells += [_csv_number(row.deltas_ev.get(m)) for m in delta_methods]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _render_json(rows: list[SpectrumRow], config: RunConfig) -> str:
    params = config.params
    payload = {
        "meta": {
            "alpha": config.alpha,
            "params": {
                "S": params.S,
                "xi": params.xi,
                "Z": params.Z,
                "m": params.m,
                "mass_ev": params.mass_ev,
            },
            "n_max": config.n_max,
            "l_max": config.l_max,
            "methods": list(config.methods),
            "format": config.output_format,
            "tolerances": {
                "quad": config.tol_quad,
                "root": config.tol_root,
                "oracle_ev": config.tol_oracle_ev,
            },
            "oracle_points": config.oracle_points,
        },
        "rows": [
            {
                "n_r": row.n_r,
                "l": row.l,
                "energies_ev": row.energies_ev,
                "errors": row.errors,
                "deltas_ev": row.deltas_ev,
            }
            for row in rows
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def render(rows: list[SpectrumRow], output_format: str, config: RunConfig) -> str:
    """Rows as text; eV columns show 4 decimals in table mode (Python's
    round-half-even float formatting), full shortest round-trip precision
    in CSV and JSON."""
    if output_format == "table":
        return _render_table(rows, config.methods)
    if output_format == "csv":
        return _render_csv(rows, config.methods)
    if output_format == "json":
        return _render_json(rows, config)
    raise ConfigError(f"unknown format {output_format!r}")


def _first_level(config: RunConfig) -> QuantumNumbers:
    return QuantumNumbers(0, 1)


def _write_potential_dump(config: RunConfig, path: str) -> None:
    """CSV series (r, effective_term) for the first sweep level at its
    closed-form energy, on the oracle's own domain."""
    qn = _first_level(config)
    problem = oracle.build_problem(config.params, qn, n_points=max(1000, config.oracle_points))
    e_seed = closedform.energy_closed_form(config.params, qn).e_total
    r = np.geomspace(problem.r_min, problem.r_max, 512)
    w = oracle.effective_term(problem, e_seed * config.params.m, r)
    lines = ["r,effective_term"]
    lines += [f"{repr(float(ri))},{repr(float(wi))}" for ri, wi in zip(r, w)]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_phase_dump(config: RunConfig, path: str) -> None:
    """CSV series (E/m, phase, residual) for the first sweep level across
    its bound window."""
    qn = _first_level(config)
    params = config.params
    terms = closedform.closed_form_terms(params, qn)
    w_seed = qn.n_r + 0.5 + terms.lam + terms.sigma_l
    target = math.pi * (qn.n_r + 0.5)
    xi_z = params.xi * params.Z
    lines = ["e_over_m,phase,residual"]
    for w in np.linspace(w_seed - 0.45, w_seed + 0.6, 106):
        e = wkb._e_of_w(xi_z, float(w))
        try:
            phase = wkb.phase_integral(params, qn.l, e * params.m, tol=config.tol_quad)
        except (NoClassicalRegion, QuadratureFailure, DomainError):
            continue
        lines.append(f"{repr(e)},{repr(phase)},{repr(phase - target)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def run(config: RunConfig) -> tuple[int, str]:
    """Compute every requested cell and render; (exit_status, output text)."""
    rows, failed = compute_rows(config)
    text = render(rows, config.output_format, config)
    if config.dump_potential:
        _write_potential_dump(config, config.dump_potential)
    if config.dump_phase:
        _write_phase_dump(config, config.dump_phase)
    return (3 if failed else 0), text


_CONFIG_KEYS = {
    "spin",
    "xi",
    "charge",
    "mass-ev",
    "n-max",
    "l-max",
    "methods",
    "format",
    "alpha-override",
    "tolerance-quad",
    "tolerance-root",
    "tolerance-oracle",
    "oracle-points",
    "out",
    "dump-potential",
    "dump-phase",
}


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
                key, value = line.split("=", 1)
                key = key.strip().replace("_", "-")
                if key not in _CONFIG_KEYS:
                    raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = value.strip()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return values


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="anyonatom",
        description=(
            "Bound-state spectrum of a fractional-spin particle in an attractive "
            "2+1D Coulomb field. With no arguments, prints the six-level "
            "reference comparison (closed form vs numerical oracle)."
        ),
    )
    p.add_argument("--spin", help="fractional spin S (default 0.5)")
    p.add_argument("--xi", help="coupling constant, a number or the token 'alpha' (default alpha)")
    p.add_argument("--charge", help="nuclear charge Z (default 1)")
    p.add_argument("--mass-ev", help="display rest energy in eV (default electron)")
    p.add_argument("--n-max", help="largest radial quantum number (default 2)")
    p.add_argument("--l-max", help="largest orbital quantum number (default 2)")
    p.add_argument(
        "--methods",
        help="comma list from closed,wkb-full,wkb-split,oracle,nonrel (default closed,oracle)",
    )
    p.add_argument("--format", help="output format: table, csv, or json (default table)")
    p.add_argument("--alpha-override", help="value substituted for the 'alpha' token")
    p.add_argument("--tolerance-quad", help="phase quadrature tolerance (default 1e-11)")
    p.add_argument("--tolerance-root", help="root-finder tolerance (default 1e-14)")
    p.add_argument("--tolerance-oracle", help="oracle convergence target in eV (default 1e-3)")
    p.add_argument("--oracle-points", help="oracle grid points (default 4000)")
    p.add_argument("--config", help="key=value config file; command line wins")
    p.add_argument("--out", help="write the rendered output to this file instead of stdout")
    p.add_argument("--dump-potential", metavar="PATH", help="CSV of (r, effective_term)")
    p.add_argument("--dump-phase", metavar="PATH", help="CSV of (E/m, phase, residual)")
    return p


def _coerce(kind: str, key: str, text: str):
    try:
        if kind == "float":
            return float(text)
        if kind == "int":
            return int(text)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r} as {kind}") from None
    return text


def build_config(argv: list[str] | None = None) -> RunConfig:
    """Flags + optional config file -> a validated RunConfig."""
    args = _build_parser().parse_args(argv)
    merged: dict[str, str] = {}
    if args.config:
        merged.update(_load_config_file(args.config))
    cli_values = {
        "spin": args.spin,
        "xi": args.xi,
        "charge": args.charge,
        "mass-ev": args.mass_ev,
        "n-max": args.n_max,
        "l-max": args.l_max,
        "methods": args.methods,
        "format": args.format,
        "alpha-override": args.alpha_override,
        "tolerance-quad": args.tolerance_quad,
        "tolerance-root": args.tolerance_root,
        "tolerance-oracle": args.tolerance_oracle,
        "oracle-points": args.oracle_points,
        "out": args.out,
        "dump-potential": args.dump_potential,
        "dump-phase": args.dump_phase,
    }
    merged.update({k: v for k, v in cli_values.items() if v is not None})

    alpha = (
        _coerce("float", "alpha-override", merged["alpha-override"])
        if "alpha-override" in merged
        else CODATA_ALPHA
    )
    xi_text = merged.get("xi", "alpha")
    if str(xi_text).strip().lower() == "alpha":
        xi = alpha
    else:
        xi = _coerce("float", "xi", str(xi_text))
    try:
        params = AnyonParams(
            S=_coerce("float", "spin", merged.get("spin", "0.5")),
            xi=xi,
            Z=_coerce("float", "charge", merged.get("charge", "1.0")),
            m=1.0,
            mass_ev=_coerce("float", "mass-ev", merged.get("mass-ev", str(ELECTRON_MASS_EV))),
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    methods_text = merged.get("methods", "closed,oracle")
    requested = [tok.strip() for tok in str(methods_text).split(",") if tok.strip()]
    for tok in requested:
        if tok not in METHOD_ORDER:
            raise ConfigError(f"unknown method {tok!r}; choose from {', '.join(METHOD_ORDER)}")
    methods = tuple(m for m in METHOD_ORDER if m in requested)
    return RunConfig(
        params=params,
        n_max=_coerce("int", "n-max", merged.get("n-max", "2")),
        l_max=_coerce("int", "l-max", merged.get("l-max", "2")),
        methods=methods,
        output_format=str(merged.get("format", "table")),
        alpha=alpha,
        tol_quad=_coerce("float", "tolerance-quad", merged.get("tolerance-quad", "1e-11")),
        tol_root=_coerce("float", "tolerance-root", merged.get("tolerance-root", "1e-14")),
        tol_oracle_ev=_coerce("float", "tolerance-oracle", merged.get("tolerance-oracle", "1e-3")),
        oracle_points=_coerce("int", "oracle-points", merged.get("oracle-points", "4000")),
        dump_potential=merged.get("dump-potential"),
        dump_phase=merged.get("dump-phase"),
        out=merged.get("out"),
    )


def main(argv: list[str] | None = None) -> None:
    try:
        config = build_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)
    code, text = run(config)
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    raise SystemExit(code)


if __name__ == "__main__":
    main()
