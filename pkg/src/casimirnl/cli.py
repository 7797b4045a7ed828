"""Command-line front end.

Subcommands: dispersion, invert-coupling, delta, force, validate.
One JSON config document drives everything (sweeps must be archivable);
the only environment influence is the output directory override --out.

Units at this boundary and nowhere else: separations in micrometers,
temperatures in kelvin, forces in pascal, energies in J/m^2.  Frequencies
inside the config (oscillator parameters, kernel grids) are natural
inverse micrometers (hbar = c = 1).

Exit codes: 0 success, 2 configuration error, 3 numerical failure.

Config schema (all blocks optional unless marked):

    {
      "medium": {"background": 1.0,
                 "oscillators": [{"plasma_weight": w_p^2 [um^-2],
                                  "resonance": w_0 [um^-1],
                                  "damping": gamma [um^-1]}]},
      "nonlinear": {
          "kernels": [<kernel dict, see coupling.NonlinearKernel>],
          "delta_table_path": "precomputed.csv",   # alternative to kernels
          "xi_grid": [explicit nodes] | {"points": 48},
          "method": "deterministic" | "montecarlo",
          "im_chi_n": {"order": 2, "axes": [[...],[...]],
                       "samples": [row-major]}     # invert-coupling input
      },
      "geometry": {"separations_um": [1.0]},       # required for force
      "temperatures_K": [0.0],
      "polarizations": 2,
      "numerics": {"rel_tol": 1e-8, "max_matsubara": 100000,
                   "quadrature_budget": 200000, "seed": 1234,
                   "grid": {"n_backbone": 400, "n_resonance": 2049}},
      "outputs": {"directory": ".", "json": false}
    }
"""

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from ._units import (constants_metadata, energy_area_to_si,
                     pressure_to_pascal, temperature_to_natural)
from .coupling import NonlinearKernel, SusceptibilityKernel, coupling_n_from_im_chi
from .dispersion import (LorentzMedium, default_grid, kk_residual,
                         linear_coupling, permittivity, permittivity_imag_axis)
from .errors import (CasimirError, ConfigError, DivisionBySpectrum,
                     NegativeDelta, NegativeSpectrum, SumNotConverged)
from .force import (PlateSystem, casimir_energy_per_area, casimir_force,
                    casimir_force_T0, casimir_force_finite_T)
from .nonlinear import DeltaTable, build_delta_table
from .spectral import SpectralFunction

FMT = "%.16e"  # 17 significant digits


@dataclass(frozen=True)
class SweepRecord:
    """One force-sweep row."""

    h_um: float
    T_K: float
    force_Pa: float
    energy_J_per_m2: float
    error_estimate: float
    matsubara_terms: int
    wall_time_ms: float
    converged: bool = True


@dataclass
class RunConfig:
    medium: LorentzMedium
    kernels: list
    delta_table_path: str | None
    xi_grid: np.ndarray | None
    method: str
    im_chi_n: dict | None
    separations_um: list
    temperatures_K: list
    polarizations: int
    rel_tol: float
    max_matsubara: int
    quadrature_budget: int
    seed: int
    grid_options: dict
    out_dir: Path
    write_json: bool

    @classmethod
    def load(cls, path, out_override=None, seed_override=None):
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON in {path}: line {exc.lineno}, "
                              f"column {exc.colno}: {exc.msg}")
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")

        def bad(field, msg):
            raise ConfigError(f"config field {field!r}: {msg}")

        try:
            medium = LorentzMedium.from_dict(raw.get("medium", {}))
        except (ValueError, KeyError, TypeError) as exc:
            bad("medium", str(exc))

        nl = raw.get("nonlinear", {})
        kernels = []
        for i, kd in enumerate(nl.get("kernels", [])):
            try:
                kernels.append(NonlinearKernel.from_dict(kd))
            except (ValueError, KeyError, TypeError) as exc:
                bad(f"nonlinear.kernels[{i}]", str(exc))
        delta_path = nl.get("delta_table_path")
        if delta_path is not None and not Path(delta_path).exists():
            bad("nonlinear.delta_table_path", f"file does not exist: {delta_path}")
        xi_grid = nl.get("xi_grid")
        if isinstance(xi_grid, dict):
            pts = int(xi_grid.get("points", 48))
            xi_grid = None if pts <= 0 else pts
        if isinstance(xi_grid, list):
            xi_grid = np.asarray(xi_grid, dtype=np.float64)
        method = nl.get("method", "deterministic")
        if method not in ("deterministic", "montecarlo"):
            bad("nonlinear.method", f"unknown method {method!r}")

        geometry = raw.get("geometry", {})
        seps = geometry.get("separations_um", [])
        if raw.get("geometry") is not None and not isinstance(seps, list):
            bad("geometry.separations_um", "must be a list")
        if any(not isinstance(h, (int, float)) or h <= 0 for h in seps):
            bad("geometry.separations_um", "separations must be positive numbers")

        temps = raw.get("temperatures_K", [0.0])
        if any(not isinstance(t, (int, float)) or t < 0 for t in temps):
            bad("temperatures_K", "temperatures must be >= 0")

        pol = raw.get("polarizations", 2)
        if pol not in (1, 2):
            bad("polarizations", "must be 1 or 2")

        num = raw.get("numerics", {})
        rel_tol = float(num.get("rel_tol", 1e-8))
        if rel_tol <= 0:
            bad("numerics.rel_tol", "must be positive")
        seed = int(num.get("seed", 1234))
        if seed_override is not None:
            seed = int(seed_override)

        outputs = raw.get("outputs", {})
        out_dir = Path(out_override or outputs.get("directory", "."))

        return cls(
            medium=medium, kernels=kernels, delta_table_path=delta_path,
            xi_grid=xi_grid if isinstance(xi_grid, np.ndarray) else None,
            method=method, im_chi_n=nl.get("im_chi_n"),
            separations_um=list(seps), temperatures_K=list(temps),
            polarizations=pol, rel_tol=rel_tol,
            max_matsubara=int(num.get("max_matsubara", 100_000)),
            quadrature_budget=int(num.get("quadrature_budget", 200_000)),
            seed=seed, grid_options=num.get("grid", {}),
            out_dir=out_dir, write_json=bool(outputs.get("json", False)))

    def spectral_grid(self):
        return default_grid(self.medium,
                            n_backbone=int(self.grid_options.get("n_backbone", 400)),
                            n_resonance=int(self.grid_options.get("n_resonance", 2049)))

    def delta_table(self, paper_literal=False):
        """Resolve the correction table: precomputed file, inline kernels,
        or None for a purely linear run."""
        if self.delta_table_path is not None:
            return DeltaTable.from_csv(self.delta_table_path).validate()
        if self.kernels:
            xi = self.xi_grid
            return build_delta_table(
                self.kernels, xi_grid=xi, rel_tol=max(self.rel_tol, 1e-7),
                method=self.method, seed=self.seed,
                max_evaluations=self.quadrature_budget,
                paper_literal=paper_literal)
        return None


class _Writer:
    """CSV writer with '#' metadata lines and a suppressible timestamp.

    With the timestamp suppressed the output is bitwise reproducible, so
    the per-row wall-time diagnostic is suppressed along with it.
    """

    def __init__(self, out_dir, stamp=True, config_digest=None):
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.stamp = stamp
        self.digest = config_digest

    def metadata(self, extra=()):
        lines = [f"casimirnl {__version__}"]
        lines += [f"{k} = {v!r}" for k, v in constants_metadata().items()]
        if self.digest:
            lines.append(f"config sha256 = {self.digest}")
        if self.stamp:
            lines.append("generated " +
                         datetime.now(timezone.utc).isoformat(timespec="seconds"))
        lines += list(extra)
        return lines

    def write(self, name, header, rows, extra_meta=()):
        path = self.out_dir / name
        with open(path, "w") as fh:
            for line in self.metadata(extra_meta):
                fh.write(f"# {line}\n")
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(
                    (FMT % v) if isinstance(v, float) else str(v)
                    for v in row) + "\n")
        return path


def _digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


def cmd_dispersion(config, writer):
    grid = config.spectral_grid()
    eps_re = np.empty_like(grid)
    eps_im = np.empty_like(grid)
    vals = permittivity(config.medium, grid)
    vals = np.atleast_1d(vals)
    eps_re, eps_im = vals.real, vals.imag
    writer.write("dispersion_real.csv", ("omega", "re_eps", "im_eps"),
                 zip(grid.tolist(), eps_re.tolist(), eps_im.tolist()))
    eps_ix = np.atleast_1d(permittivity_imag_axis(config.medium, grid))
    writer.write("dispersion_imag.csv", ("xi", "eps_i_xi"),
                 zip(grid.tolist(), eps_ix.tolist()))
    return 0


def cmd_invert_coupling(config, writer):
    grid = config.spectral_grid()
    nu = linear_coupling(config.medium, grid)
    writer.write("coupling1.csv", ("omega", "nu1"),
                 zip(nu.grid.tolist(), nu.values.tolist()))
    if config.im_chi_n:
        block = config.im_chi_n
        axes = tuple(np.asarray(a, dtype=np.float64) for a in block["axes"])
        samples = np.asarray(block["samples"], dtype=np.float64).reshape(
            tuple(a.size for a in axes))
        kern = SusceptibilityKernel.from_table(axes, samples, kind="im_chi")
        im1 = SpectralFunction(grid, config.medium.im_chi(grid))
        rows = []
        for idx in np.ndindex(*(a.size for a in axes)):
            omegas = tuple(axes[d][idx[d]] for d in range(len(axes)))
            try:
                val = coupling_n_from_im_chi(kern, im1, omegas)
            except DivisionBySpectrum as exc:
                print(f"error: {exc} (at frequencies {omegas})", file=sys.stderr)
                return 3
            rows.append(list(omegas) + [val])
        header = tuple(f"omega{d+1}" for d in range(len(axes))) + (f"nu{len(axes)}",)
        writer.write(f"coupling{len(axes)}.csv", header, rows)
    return 0


def cmd_delta(config, writer, paper_literal=False):
    table = config.delta_table(paper_literal=paper_literal)
    if table is None:
        xi = np.concatenate([[0.0], np.geomspace(1e-2, 1e2, 47)])
        table = DeltaTable.zero(xi)
    meta = [f"method = {config.method}", f"paper_literal = {paper_literal}"]
    table.to_csv(writer.out_dir / "delta_table.csv",
                 metadata=writer.metadata(meta))
    return 0


def _sweep_point(config, table, h_um, t_kelvin):
    start = time.perf_counter()
    tables = (table,) if table is not None else ()
    system = PlateSystem(separation=h_um,
                         temperature=temperature_to_natural(t_kelvin),
                         medium=config.medium, delta_tables=tables,
                         polarizations=config.polarizations)
    converged = True
    try:
        res = casimir_force(system, rel_tol=config.rel_tol,
                            max_terms=config.max_matsubara,
                            max_evaluations=config.quadrature_budget)
        force = res.force_per_area
        err = res.error_estimate
        terms = res.matsubara_terms_used
    except SumNotConverged as exc:
        converged = False
        force = float("nan")
        err = float("nan")
        terms = exc.terms_used or -1
    energy = casimir_energy_per_area(system, rel_tol=config.rel_tol,
                                     max_evaluations=config.quadrature_budget,
                                     max_terms=config.max_matsubara)
    ms = (time.perf_counter() - start) * 1e3
    return SweepRecord(
        h_um=h_um, T_K=t_kelvin,
        force_Pa=pressure_to_pascal(force),
        energy_J_per_m2=energy_area_to_si(energy),
        error_estimate=pressure_to_pascal(err),
        matsubara_terms=terms, wall_time_ms=ms, converged=converged)


def cmd_force(config, writer, jobs=1):
    if not config.separations_um:
        raise ConfigError("geometry.separations_um must list at least one "
                          "separation for the force command")
    table = config.delta_table()
    points = [(h, t) for h in config.separations_um
              for t in config.temperatures_K]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_sweep_point, config, table, h, t)
                       for h, t in points]
            records = [f.result() for f in futures]
    else:
        records = [_sweep_point(config, table, h, t) for h, t in points]

    header = ["h_um", "T_K", "force_Pa", "energy_J_per_m2",
              "error_estimate_Pa", "matsubara_terms", "converged"]
    rows = [[r.h_um, r.T_K, r.force_Pa, r.energy_J_per_m2, r.error_estimate,
             r.matsubara_terms, int(r.converged)] for r in records]
    if writer.stamp:
        header.append("wall_time_ms")
        for row, rec in zip(rows, records):
            row.append(rec.wall_time_ms)
    writer.write("force_sweep.csv", header, rows)
    if config.write_json:
        payload = [dict(zip(header, row)) for row in rows]
        with open(writer.out_dir / "force_sweep.json", "w") as fh:
            json.dump(payload, fh, indent=1)
    if any(not r.converged for r in records):
        print("warning: some sweep points did not converge "
              "(flagged in the converged column)", file=sys.stderr)
    return 0


def cmd_validate(config, writer):
    """Run the cross-consistency diagnostics; nonzero exit on any failure."""
    checks = []

    def check(name, passed, detail):
        checks.append((name, bool(passed), detail))
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")

    # vacuum anchor against the exact coefficient
    anchor = casimir_force_T0(PlateSystem(separation=1.0, polarizations=1),
                              rel_tol=1e-9)
    exact = -np.pi ** 2 / 480.0
    rel = abs(anchor.force_per_area - exact) / abs(exact)
    check("vacuum-anchor", rel < 1e-6, f"relative deviation {rel:.2e}")

    if config.medium.oscillators:
        wdom = config.medium.dominant_resonance()
        tests = np.geomspace(0.05 * wdom, 20.0 * wdom, 25)
        res = kk_residual(config.medium, tests, grid=config.spectral_grid())
        check("kramers-kronig", res <= 1e-4, f"residual {res:.2e}")
    else:
        check("kramers-kronig", True, "vacuum medium, residual 0")

    table = None
    table_ok = True
    try:
        table = config.delta_table()
    except NegativeDelta as exc:
        table_ok = False
        check("delta-positivity", False, str(exc))
    if table_ok:
        check("delta-positivity", True,
              "no table" if table is None else "all values nonnegative")

    h = config.separations_um[0] if config.separations_um else 1.0
    tables = (table,) if (table is not None and table_ok) else ()
    system = PlateSystem(separation=h, medium=config.medium,
                         delta_tables=tables,
                         polarizations=config.polarizations)
    f0 = casimir_force_T0(system, rel_tol=1e-10)
    dh = 1e-4 * h
    ep = casimir_energy_per_area(
        PlateSystem(separation=h + dh, medium=config.medium,
                    delta_tables=tables,
                    polarizations=config.polarizations), rel_tol=1e-11)
    em = casimir_energy_per_area(
        PlateSystem(separation=h - dh, medium=config.medium,
                    delta_tables=tables,
                    polarizations=config.polarizations), rel_tol=1e-11)
    grad = -(ep - em) / (2.0 * dh)
    rel = abs(grad - f0.force_per_area) / abs(f0.force_per_area)
    check("gradient-consistency", rel < 1e-5, f"relative deviation {rel:.2e}")

    t_nat = 0.05 / (2.0 * np.pi * h)
    fT = casimir_force_finite_T(
        PlateSystem(separation=h, temperature=t_nat, medium=config.medium,
                    delta_tables=tables,
                    polarizations=config.polarizations), rel_tol=1e-10)
    rel = abs(fT.force_per_area - f0.force_per_area) / abs(f0.force_per_area)
    check("matsubara-duality", rel < 1e-3, f"relative deviation {rel:.2e}")

    rows = [[name, int(ok), detail] for name, ok, detail in checks]
    writer.write("validate.csv", ("check", "passed", "detail"), rows)
    return 0 if all(ok for _, ok, _ in checks) else 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="casimirnl",
        description="Casimir force between conducting plates in dispersive, "
                    "absorbing, nonlinear dielectric media")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="JSON config path")
    common.add_argument("--out", default=None, help="output directory override")
    common.add_argument("--seed", type=int, default=None,
                        help="override numerics.seed")
    common.add_argument("--no-header-timestamp", action="store_true",
                        help="suppress the timestamp metadata line "
                             "(makes outputs bitwise reproducible)")
    sub.add_parser("dispersion", parents=[common],
                   help="tabulate the permittivity on both axes")
    sub.add_parser("invert-coupling", parents=[common],
                   help="coupling spectra from absorption data")
    p_delta = sub.add_parser("delta", parents=[common],
                             help="nonlinear correction tables")
    p_delta.add_argument("--paper-literal", action="store_true",
                         help="use the literal uncorrected third-order "
                              "denominators for comparison")
    p_force = sub.add_parser("force", parents=[common],
                             help="force/energy sweep over (h, T)")
    p_force.add_argument("--jobs", type=int, default=1,
                         help="worker threads for sweep points")
    sub.add_parser("validate", parents=[common],
                   help="cross-consistency diagnostics")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig.load(args.config, out_override=args.out,
                                seed_override=args.seed)
        writer = _Writer(config.out_dir, stamp=not args.no_header_timestamp,
                         config_digest=_digest(args.config))
        if args.command == "dispersion":
            return cmd_dispersion(config, writer)
        if args.command == "invert-coupling":
            return cmd_invert_coupling(config, writer)
        if args.command == "delta":
            return cmd_delta(config, writer,
                             paper_literal=args.paper_literal)
        if args.command == "force":
            return cmd_force(config, writer, jobs=args.jobs)
        if args.command == "validate":
            return cmd_validate(config, writer)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (NegativeSpectrum, DivisionBySpectrum, NegativeDelta,
            SumNotConverged, CasimirError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
