"""Command-line front end: reference tables, spectrum comparison, plot data.

Subcommands
-----------
tables    write shannon.csv / fisher.csv for the (levels x widths) matrix
spectrum  write spectrum.csv comparing closed-form energies with the
          finite-difference oracle, plus box and free-case calibrations
plotdata  write per-(n, a) density grids and the mass profile

Configuration comes from defaults, then a flat key=value config file
(--config), then flags; the defaults reproduce the preset V1 = V2 = 1 with
kappa = 1 at every width.  Exit codes: 0 success, 1 usage/IO/convergence
failure (with a JSON error record on stderr), 2 any uncertainty-inequality
margin negative.  PDMQI_THREADS caps cell parallelism (0 = auto).

Unless --no-figures is given, each delimited output is rendered to a PNG
next to it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .analytic import energy_level, make_bound_state
from .errors import ConvergenceFailure, PdmqiError
from .info import (
    build_report,
    entropy_density_p,
    entropy_density_x,
    fisher_density_p,
    fisher_density_x,
    inequality_report,
)
from .model import ModelParams, mass_momentum, mass_position
from .numerics import GridSpec, fd_eigensolve

_HALF_PI = math.pi / 2.0
# Margins below this are treated as genuine inequality violations; above it
# they are quadrature noise on a zero margin.
MARGIN_FLOOR = -1e-9
# Dirichlet wall offsets: the outer walls may sit this close to +-pi/2, the
# inner wall this close to the z = 0 singularity of the split domain.
EDGE_OFFSET = 1e-6
SPLIT_OFFSET = 1e-4
PLOT_POINTS = 2001

_DEFAULTS = dict(levels=(0, 1, 2), widths=(2.0, 4.0, 6.0), v1=1.0, v2=1.0,
                 hbar=1.0, tol=1e-11, grid_points=4001, format="csv",
                 out=".", figures=True, general=False)


@dataclass(frozen=True)
class RunConfig:
    """Resolved configuration of one CLI run."""

    params: ModelParams                 # template at the first width
    levels: tuple
    widths: tuple
    tolerances: tuple                   # (quad_tol, fourier_tol, eig_tol)
    grid: GridSpec
    output_format: str
    output_path: Path
    figures: bool = True
    general: bool = False

    def params_for(self, a: float) -> ModelParams:
        return ModelParams.with_unit_kappa(a, self.params.v1, self.params.v2,
                                           self.params.hbar)


class UsageError(PdmqiError, ValueError):
    """Invalid CLI arguments or config file."""


def _parse_number_list(text: str, cast):
    items = [s for s in text.replace(";", ",").split(",") if s.strip()]
    return tuple(cast(s.strip()) for s in items)


def _parse_bool(text: str) -> bool:
    val = text.strip().lower()
    if val in ("1", "true", "yes", "on"):
        return True
    if val in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"not a boolean: {text!r}")


def load_config_file(path: Path) -> dict:
    """Read a flat `key = value` config file (# starts a comment)."""
    values = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, _, text = line.partition("=")
        key = key.strip().replace("-", "_")
        text = text.strip()
        try:
            if key == "levels":
                values[key] = _parse_number_list(text, int)
            elif key == "widths":
                values[key] = _parse_number_list(text, float)
            elif key in ("v1", "v2", "hbar", "tol"):
                values[key] = float(text)
            elif key == "grid_points":
                values[key] = int(text)
            elif key in ("format", "out"):
                values[key] = text
            elif key in ("figures", "general"):
                values[key] = _parse_bool(text)
            else:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from exc
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, config file and flags into a validated RunConfig."""
    merged = dict(_DEFAULTS)
    if args.config is not None:
        merged.update(load_config_file(Path(args.config)))
    for key in _DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag

    levels = tuple(int(n) for n in merged["levels"])
    widths = tuple(float(a) for a in merged["widths"])
    if not widths:
        raise UsageError("widths must not be empty")
    if any(a <= 0 for a in widths):
        raise UsageError("widths must all be positive")
    if not levels:
        raise UsageError("levels must not be empty")
    if any(n < 0 for n in levels):
        raise UsageError("levels must be non-negative")
    if not merged["general"] and any(n > 2 for n in levels):
        raise UsageError(
            "levels above 2 need the general-solution mode (--general)")
    if merged["format"] not in ("csv", "json"):
        raise UsageError("format must be csv or json")
    tol = float(merged["tol"])
    if not tol > 0:
        raise UsageError("tol must be positive")
    points = int(merged["grid_points"])
    if points < 64:
        raise UsageError("grid-points must be at least 64")

    v1, v2, hbar = merged["v1"], merged["v2"], merged["hbar"]
    params = ModelParams.with_unit_kappa(widths[0], v1, v2, hbar)
    if v1 + v2 != 0.0:
        grid = GridSpec(SPLIT_OFFSET, _HALF_PI - SPLIT_OFFSET, points)
    else:
        grid = GridSpec(-_HALF_PI + EDGE_OFFSET, _HALF_PI - EDGE_OFFSET,
                        points)
    return RunConfig(params=params, levels=levels, widths=widths,
                     tolerances=(tol, 10.0 * tol, 1e-3), grid=grid,
                     output_format=merged["format"],
                     output_path=Path(merged["out"]),
                     figures=bool(merged["figures"]),
                     general=bool(merged["general"]))


def _thread_count(n_tasks: int) -> int:
    raw = os.environ.get("PDMQI_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"PDMQI_THREADS must be an integer, got {raw!r}")
    if cap < 0:
        raise UsageError("PDMQI_THREADS must be >= 0")
    if cap == 0:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_tasks))


def _map_cells(fn, cells):
    """Evaluate fn over cells, possibly in parallel, preserving order."""
    workers = _thread_count(len(cells))
    if workers == 1 or len(cells) <= 1:
        return [fn(c) for c in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, cells))


def _fmt(value) -> str:
    """Serialize one CSV field: ints verbatim, floats to 6 significant digits."""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.6g}"


def _with_ext(path: Path, ext: str) -> Path:
    # not Path.with_suffix: width values like a2.5 put dots in the stem
    return path.parent / (path.name + ext)


def _write_rows(path: Path, header: Sequence[str], rows, fmt: str):
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(row[key]) for key in header) for row in rows]
        _with_ext(path, ".csv").write_text("\n".join(lines) + "\n")
    else:
        payload = [{key: row[key] for key in row} for row in rows]
        _with_ext(path, ".json").write_text(
            json.dumps(payload, indent=2) + "\n")


def _check_finite(rows, context: str):
    for row in rows:
        for key, value in row.items():
            if isinstance(value, (int, float, np.floating, np.integer)) \
                    and not np.isfinite(value):
                raise PdmqiError(f"non-finite {key}={value!r} in {context}")


def cmd_tables(config: RunConfig) -> int:
    """Write the Shannon and Fisher tables over the (levels x widths) matrix."""
    quad_tol, fourier_tol, _ = config.tolerances
    cells = [(n, a) for n in config.levels for a in config.widths]

    def one_cell(cell):
        n, a = cell
        state = make_bound_state(config.params_for(a), n, quad_tol=quad_tol)
        report = build_report(state, quad_tol=quad_tol,
                              fourier_tol=fourier_tol)
        return report, inequality_report(report)

    results = _map_cells(one_cell, cells)

    shannon_rows = []
    fisher_rows = []
    worst_margin = math.inf
    for report, margins in results:
        shannon_rows.append(dict(
            n=report.n, a=report.a, S_x=report.s_x, S_p=report.s_p,
            S_sum=report.s_sum, bbm_bound=report.bbm_bound))
        fisher_rows.append(dict(
            n=report.n, a=report.a, x2_mean=report.x2_mean,
            p2_mean=report.p2_mean, dx=report.sigma_x, dp=report.sigma_p,
            dxdp=report.uncertainty_product, F_x=report.f_x, F_p=report.f_p))
        worst_margin = min(worst_margin, margins.smallest())

    _check_finite(shannon_rows, "shannon table")
    _check_finite(fisher_rows, "fisher table")
    out = config.output_path
    out.mkdir(parents=True, exist_ok=True)
    _write_rows(out / "shannon", ["n", "a", "S_x", "S_p", "S_sum",
                                  "bbm_bound"], shannon_rows,
                config.output_format)
    _write_rows(out / "fisher", ["n", "a", "x2_mean", "p2_mean", "dx", "dp",
                                 "dxdp", "F_x", "F_p"], fisher_rows,
                config.output_format)
    if config.figures:
        from . import figures
        figures.render_entropy_summary(out / "shannon.png", shannon_rows)
        figures.render_fisher_summary(out / "fisher.png", fisher_rows)
    return 2 if worst_margin < MARGIN_FLOOR else 0


def cmd_spectrum(config: RunConfig) -> int:
    """Compare closed-form energies with the finite-difference oracle.

    Three blocks share one file: a flat-box calibration (exact (n+1)^2), the
    free case V1 = V2 = 0 (exact (n+1)(n+2)), then the configured model,
    whose closed-form levels are archived beside the oracle values with no
    agreement assertion.
    """
    _, _, eig_tol = config.tolerances
    params = config.params
    points = config.grid.points
    full_grid = GridSpec(-_HALF_PI + EDGE_OFFSET, _HALF_PI - EDGE_OFFSET,
                         points)
    k_cal = 5
    k_model = max(config.levels) + 1
    kappa_sq = params.kappa_sq

    rows = []

    def add_block(case, spectrum, refs):
        for n, (eps_r, eps_raw, ref) in enumerate(
                zip(spectrum.eigenvalues_richardson, spectrum.eigenvalues,
                    refs)):
            resid = abs(eps_r - eps_raw) / 3.0
            if resid > eig_tol:
                raise ConvergenceFailure(
                    f"{case} level {n}: Richardson residual {resid:.2e} "
                    f"exceeds eig_tol={eig_tol:.2e}")
            e_fd = eps_r / kappa_sq
            rows.append(dict(case=case, n=n, E_closed_form=ref,
                             eps_fd=eps_r, E_fd=e_fd,
                             abs_diff=abs(e_fd - ref)))

    box = fd_eigensolve(params, full_grid, k_cal,
                        potential=lambda z: np.zeros_like(z))
    add_block("box", box, [(n + 1) ** 2 / kappa_sq for n in range(k_cal)])

    free_params = ModelParams.with_unit_kappa(params.a, 0.0, 0.0, params.hbar)
    free = fd_eigensolve(free_params, full_grid, k_cal)
    add_block("free", free,
              [(n + 1) * (n + 2) / free_params.kappa_sq for n in range(k_cal)])

    model = fd_eigensolve(params, config.grid, k_model)
    add_block("model", model,
              [energy_level(params, n) for n in range(k_model)])

    _check_finite(rows, "spectrum table")
    out = config.output_path
    out.mkdir(parents=True, exist_ok=True)
    header = ["n", "E_closed_form", "eps_fd", "E_fd", "abs_diff"]
    if config.output_format == "csv":
        _write_rows(out / "spectrum", header, rows, "csv")
    else:
        _write_rows(out / "spectrum", ["case"] + header, rows, "json")
    if config.figures:
        from . import figures
        figures.render_spectrum(out / "spectrum.png", rows)
    return 0


def cmd_plotdata(config: RunConfig) -> int:
    """Write density grids per (n, a) plus the mass-profile data."""
    quad_tol, _, _ = config.tolerances
    out = config.output_path
    out.mkdir(parents=True, exist_ok=True)
    cells = [(n, a) for n in config.levels for a in config.widths]

    def one_cell(cell):
        n, a = cell
        state = make_bound_state(config.params_for(a), n, quad_tol=quad_tol)
        x = np.linspace(-6.0 / a, 6.0 / a, PLOT_POINTS)
        p = np.linspace(-8.0 * a, 8.0 * a, PLOT_POINTS)
        psi = np.asarray(state.psi(x))
        phi = np.asarray(state.phi(p))
        pos = dict(x=x, psi=psi, rho=psi ** 2,
                   rho_s=entropy_density_x(state, x),
                   rho_F=fisher_density_x(state, x))
        mom = dict(p=p, phi=phi, rho_p=phi ** 2,
                   rho_s_p=entropy_density_p(state, p),
                   rho_F_p=fisher_density_p(state, p))
        return pos, mom

    results = _map_cells(one_cell, cells)

    for (n, a), (pos, mom) in zip(cells, results):
        for label, table in (("position", pos), ("momentum", mom)):
            for key, col in table.items():
                if not np.all(np.isfinite(col)):
                    raise PdmqiError(
                        f"non-finite {key} in {label} grid n={n}, a={a:g}")
        stem = f"n{n}_a{a:g}"
        header_pos = ["x", "psi", "rho", "rho_s", "rho_F"]
        header_mom = ["p", "phi", "rho_p", "rho_s_p", "rho_F_p"]
        _write_grid(out / f"position_{stem}", header_pos, pos,
                    config.output_format)
        _write_grid(out / f"momentum_{stem}", header_mom, mom,
                    config.output_format)
        if config.figures:
            from . import figures
            figures.render_position_density(
                out / f"position_{stem}.png", pos["x"], pos["psi"],
                pos["rho"], pos["rho_s"], pos["rho_F"], n, a)
            figures.render_momentum_density(
                out / f"momentum_{stem}.png", mom["p"], mom["phi"],
                mom["rho_p"], mom["rho_s_p"], mom["rho_F_p"], n, a)

    a0 = config.widths[0]
    params0 = config.params_for(a0)
    x0 = np.linspace(-6.0 / a0, 6.0 / a0, PLOT_POINTS)
    k0 = np.linspace(-8.0 * a0, 8.0 * a0, PLOT_POINTS)
    mass = dict(x=x0, m_x=np.asarray(mass_position(x0, params0)),
                k=k0, m_k=np.asarray(mass_momentum(k0, params0)))
    for key, col in mass.items():
        if not np.all(np.isfinite(col)):
            raise PdmqiError(f"non-finite {key} in mass grid")
    _write_grid(out / "mass", ["x", "m_x", "k", "m_k"], mass,
                config.output_format)
    if config.figures:
        from . import figures
        curves_x, curves_k = [], []
        for a in config.widths:
            pa = config.params_for(a)
            xa = np.linspace(-6.0 / a, 6.0 / a, PLOT_POINTS)
            ka = np.linspace(-8.0 * a, 8.0 * a, PLOT_POINTS)
            curves_x.append((a, xa, np.asarray(mass_position(xa, pa))))
            curves_k.append((a, ka, np.asarray(mass_momentum(ka, pa))))
        figures.render_mass(out / "mass.png", curves_x, curves_k)
    return 0


def _write_grid(path: Path, header: Sequence[str], columns: dict, fmt: str):
    if fmt == "csv":
        arrays = [np.asarray(columns[key]) for key in header]
        lines = [",".join(header)]
        for i in range(arrays[0].size):
            lines.append(",".join(_fmt(col[i]) for col in arrays))
        _with_ext(path, ".csv").write_text("\n".join(lines) + "\n")
    else:
        payload = {key: np.asarray(columns[key]).tolist() for key in header}
        _with_ext(path, ".json").write_text(
            json.dumps(payload, indent=2) + "\n")


def _emit_error(exc: Exception):
    record = {"error": type(exc).__name__, "message": str(exc)}
    print(json.dumps(record), file=sys.stderr)


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage failures exit 1 with a JSON record."""

    def error(self, message):
        _emit_error(UsageError(message))
        raise SystemExit(1)


def _add_common_options(sub: argparse.ArgumentParser):
    sub.add_argument("--config", help="flat key = value configuration file")
    sub.add_argument("--levels", type=lambda s: _parse_number_list(s, int),
                     help="comma-separated level indices (default 0,1,2)")
    sub.add_argument("--widths", type=lambda s: _parse_number_list(s, float),
                     help="comma-separated mass widths a (default 2,4,6)")
    sub.add_argument("--v1", type=float, help="coth^2 barrier strength")
    sub.add_argument("--v2", type=float, help="csch^2 barrier strength")
    sub.add_argument("--hbar", type=float, help="reduced Planck constant")
    sub.add_argument("--tol", type=float,
                     help="base absolute quadrature tolerance")
    sub.add_argument("--grid-points", dest="grid_points", type=int,
                     help="interior points of the eigensolver grid")
    sub.add_argument("--format", choices=("csv", "json"),
                     help="output format (default csv)")
    sub.add_argument("--out", help="output directory (default .)")
    sub.add_argument("--figures", action=argparse.BooleanOptionalAction,
                     help="render PNG figures beside the data files")
    sub.add_argument("--general", action="store_const", const=True,
                     help="allow levels above 2 (numerically normalized)")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _Parser(prog="pdmqi", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subparsers = parser.add_subparsers(dest="command", required=True)
    handlers = {"tables": cmd_tables, "spectrum": cmd_spectrum,
                "plotdata": cmd_plotdata}
    for name, help_text in (
            ("tables", "Shannon and Fisher information tables"),
            ("spectrum", "closed-form vs finite-difference spectrum"),
            ("plotdata", "density grids and mass profile")):
        _add_common_options(subparsers.add_parser(name, help=help_text))

    args = parser.parse_args(argv)
    try:
        config = build_config(args)
        return handlers[args.command](config)
    except (PdmqiError, OSError) as exc:
        _emit_error(exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
