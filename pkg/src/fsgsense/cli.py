"""Command-line interface: single-state reports, parameter sweeps,
figure-reproduction CSVs, and Monte-Carlo Cramér-Rao checks.

Exit codes: 0 ok, 1 config/validation error, 2 infeasible photon budget,
3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import click
import numpy as np

from .errors import (
    ConvergenceError,
    DegenerateError,
    DomainError,
    InfeasibleError,
    NumericalError,
    OutOfRangeError,
    PhysicalityError,
    SingularError,
    UndefinedError,
)
from .homodyne import McConfig, mc_estimate, optimize_homodyne_angle
from .optimize import OptResult, maximize_precision, maximize_privacy

# spec'd exit-code contract: config errors exit 1
click.UsageError.exit_code = 1

_NUMERICAL = (
    NumericalError,
    ConvergenceError,
    SingularError,
    OutOfRangeError,
    UndefinedError,
    DegenerateError,
    PhysicalityError,
    DomainError,
)

DEFAULT_M_LIST = [2, 3, 4, 5, 6]
DEFAULT_NTH_LIST = [0.0, 1.0, 5.0]
DEFAULT_N_GRID = {"min": 1.0, "max": 1000.0, "points": 25, "spacing": "log"}


@dataclass(frozen=True)
class SweepRecord:
    """One row of a figure-reproduction sweep; schema is frozen."""

    M: int
    n_th: float
    N_tot: float
    objective: str
    t_star: float | None
    s_star: float | None
    eps1: float | None
    eps2: float | None
    gam1: float | None
    gam2: float | None
    F11: float | None
    F12: float | None
    xi: float | None
    xi_ratio_to_opt: float | None
    privacy: float | None
    one_minus_privacy: float | None
    theta_hd_star: float | None
    xi_hd: float | None
    r_hd: float | None
    feasible: bool


CSV_FIELDS = [f.name for f in dataclasses.fields(SweepRecord)]


def _infeasible_record(M, n_th, N_tot, objective) -> SweepRecord:
    none = {
        name: None
        for name in CSV_FIELDS
        if name not in ("M", "n_th", "N_tot", "objective", "feasible")
    }
    return SweepRecord(
        M=M, n_th=n_th, N_tot=N_tot, objective=objective, feasible=False, **none
    )


def compute_record(
    M: int, n_th: float, N_tot: float, objective: str, homodyne: bool
) -> SweepRecord:
    """Optimize one configuration and flatten the result into a record."""
    try:
        if objective == "precision":
            result: OptResult = maximize_precision(M, n_th, N_tot)
        elif objective == "privacy":
            result = maximize_privacy(M, n_th, N_tot)
        else:
            raise DomainError(f"unknown objective {objective!r}")
    except InfeasibleError:
        return _infeasible_record(M, n_th, N_tot, objective)

    theta_hd_star = xi_hd = r_hd = None
    if homodyne and result.xi > 0.0:
        try:
            hd = optimize_homodyne_angle(result.blocks)
        except DegenerateError:
            pass  # no information at any angle (e.g. budget at the floor)
        else:
            theta_hd_star = hd.theta_star
            xi_hd = hd.xi_hd
            r_hd = hd.xi_hd / result.xi

    blocks = result.blocks
    from .metrology import qfim_fsg

    fim = qfim_fsg(blocks)
    return SweepRecord(
        M=M,
        n_th=n_th,
        N_tot=N_tot,
        objective=objective,
        t_star=result.t_star,
        s_star=result.s_star,
        eps1=blocks.eps1,
        eps2=blocks.eps2,
        gam1=blocks.gam1,
        gam2=blocks.gam2,
        F11=fim.f11,
        F12=fim.f12,
        xi=result.xi,
        xi_ratio_to_opt=result.ratio_to_best_xi,
        privacy=result.privacy,
        one_minus_privacy=1.0 - result.privacy,
        theta_hd_star=theta_hd_star,
        xi_hd=xi_hd,
        r_hd=r_hd,
        feasible=True,
    )


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if value != value:  # NaN
            return ""
        return format(value, ".17g")
    return str(value)


def _write_csv(path: str, records) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_FIELDS)
        for rec in records:
            writer.writerow([_fmt(getattr(rec, name)) for name in CSV_FIELDS])


def _n_grid(spec: dict) -> list[float]:
    lo, hi = float(spec["min"]), float(spec["max"])
    points = int(spec["points"])
    spacing = spec.get("spacing", "linear")
    if points < 1 or lo <= 0.0 and spacing == "log" or hi < lo:
        raise click.ClickException(f"invalid N grid: {spec}")
    if spacing == "log":
        return [float(x) for x in np.geomspace(lo, hi, points)]
    if spacing == "linear":
        return [float(x) for x in np.linspace(lo, hi, points)]
    raise click.ClickException(f"N_grid.spacing must be 'linear' or 'log': {spacing!r}")


def _run_sweep(m_list, nth_list, n_list, objectives, homodyne) -> list[SweepRecord]:
    grid = [
        (m, nth, n, obj)
        for m in m_list
        for nth in nth_list
        for n in n_list
        for obj in objectives
    ]
    with ThreadPoolExecutor() as pool:
        return list(
            pool.map(lambda g: compute_record(g[0], g[1], g[2], g[3], homodyne), grid)
        )


@click.group()
def main():
    """Gaussian-network sensing: precision, privacy and homodyne tools."""


@main.command()
@click.option("--M", "modes", type=int, required=True, help="Number of nodes (>= 2).")
@click.option("--nth", type=float, required=True, help="Thermal occupation n_th.")
@click.option("--N", "n_tot", type=float, required=True, help="Total photon budget.")
@click.option(
    "--objective",
    type=click.Choice(["precision", "privacy"]),
    default="precision",
    show_default=True,
)
@click.option("--json", "json_out", is_flag=True, help="Machine output on stdout.")
def state(modes, nth, n_tot, objective, json_out):
    """Optimize a single configuration and report it as JSON."""
    if modes < 2 or nth < 0.0 or n_tot < 0.0:
        raise click.UsageError("need --M >= 2, --nth >= 0 and --N >= 0")
    try:
        if n_tot < modes * nth:
            raise InfeasibleError(
                f"N_tot={n_tot} below thermal floor M*n_th={modes * nth}"
            )
        record = compute_record(modes, nth, n_tot, objective, homodyne=True)
    except InfeasibleError as exc:
        click.echo(f"infeasible: {exc}", err=True)
        sys.exit(2)
    except _NUMERICAL as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(3)
    click.echo(json.dumps(dataclasses.asdict(record)))


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), default=None, help="Override output path.")
def sweep(config_path, out):
    """Run the sweep described by a JSON config file and write a CSV."""
    try:
        with open(config_path) as handle:
            cfg = json.load(handle)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.ClickException(f"cannot read config: {exc}") from exc

    m_list = cfg.get("M_list", DEFAULT_M_LIST)
    nth_list = cfg.get("n_th_list", DEFAULT_NTH_LIST)
    objective = cfg.get("objective", "both")
    homodyne = bool(cfg.get("homodyne", False))
    weights = cfg.get("weights", "mean")
    out_path = out or cfg.get("output")
    if weights != "mean":
        raise click.ClickException(f"only mean weights are supported, got {weights!r}")
    if objective not in ("precision", "privacy", "both"):
        raise click.ClickException(f"invalid objective {objective!r}")
    if not m_list or not nth_list:
        raise click.ClickException("M_list and n_th_list must be non-empty")
    if any(int(m) < 2 for m in m_list) or any(float(x) < 0 for x in nth_list):
        raise click.ClickException("need M >= 2 and n_th >= 0 throughout the grid")
    if out_path is None:
        raise click.ClickException("no output path (config 'output' or --out)")
    n_list = _n_grid(cfg.get("N_grid", DEFAULT_N_GRID))
    objectives = ["precision", "privacy"] if objective == "both" else [objective]

    try:
        records = _run_sweep(
            [int(m) for m in m_list],
            [float(x) for x in nth_list],
            n_list,
            objectives,
            homodyne,
        )
    except _NUMERICAL as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(3)
    try:
        _write_csv(out_path, records)
    except OSError as exc:
        click.echo(f"I/O failure: {exc}", err=True)
        sys.exit(4)
    click.echo(f"wrote {len(records)} rows to {out_path}")


@main.command()
@click.option("--outdir", type=click.Path(), required=True)
@click.option(
    "--which",
    default="2,3,4",
    show_default=True,
    help="Comma-separated subset of figures 2,3,4.",
)
def figures(outdir, which):
    """Emit the default figure-reproduction sweeps as fig<N>.csv files."""
    try:
        wanted = sorted({int(tok) for tok in which.split(",") if tok.strip()})
    except ValueError:
        raise click.UsageError(f"--which must list figure numbers, got {which!r}")
    if not wanted or any(w not in (2, 3, 4) for w in wanted):
        raise click.UsageError("--which entries must be among 2, 3, 4")

    n_list = _n_grid(DEFAULT_N_GRID)
    plans = {
        2: ("precision", False),
        3: ("privacy", False),
        4: ("privacy", True),
    }
    import os

    try:
        os.makedirs(outdir, exist_ok=True)
    except OSError as exc:
        click.echo(f"I/O failure: {exc}", err=True)
        sys.exit(4)
    for fig in wanted:
        objective, homodyne = plans[fig]
        try:
            records = _run_sweep(
                DEFAULT_M_LIST, DEFAULT_NTH_LIST, n_list, [objective], homodyne
            )
        except _NUMERICAL as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(3)
        path = os.path.join(outdir, f"fig{fig}.csv")
        try:
            _write_csv(path, records)
        except OSError as exc:
            click.echo(f"I/O failure: {exc}", err=True)
            sys.exit(4)
        click.echo(f"wrote {path}")


@main.command()
@click.option("--M", "modes", type=int, required=True)
@click.option("--nth", type=float, required=True)
@click.option("--N", "n_tot", type=float, required=True)
@click.option("--samples", type=int, required=True, help="Homodyne shots per trial.")
@click.option("--trials", type=int, required=True, help="Independent estimates.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--json", "json_out", is_flag=True, help="Machine output on stdout.")
def mc(modes, nth, n_tot, samples, trials, seed, json_out):
    """Monte-Carlo Cramér-Rao check on the privacy-optimized state."""
    if samples < 2 or trials < 2:
        raise click.UsageError("--samples and --trials must both be >= 2")
    if modes < 2 or nth < 0.0 or n_tot < 0.0 or not 0 <= seed < 2**64:
        raise click.UsageError("invalid --M/--nth/--N/--seed")
    try:
        result = maximize_privacy(modes, nth, n_tot)
        hd = optimize_homodyne_angle(result.blocks)
        report = mc_estimate(
            result.blocks,
            hd.theta_star,
            McConfig(n_samples=samples, trials=trials, seed=seed),
        )
    except InfeasibleError as exc:
        click.echo(f"infeasible: {exc}", err=True)
        sys.exit(2)
    except _NUMERICAL as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(3)
    payload = {
        "M": modes,
        "n_th": nth,
        "N_tot": n_tot,
        "theta_hd": hd.theta_star,
        "xi_hd": report.xi_hd,
        "empirical_var": report.empirical_var,
        "crb": report.crb,
        "ratio": report.ratio,
        "ci95": list(report.ci95),
        "samples": samples,
        "trials": trials,
        "seed": seed,
    }
    click.echo(json.dumps(payload))


if __name__ == "__main__":
    main()
