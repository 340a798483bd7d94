"""Command-line front end.

Subcommands: ``sweep`` (selection-grid Fisher-information tables),
``check-inequality`` (randomized audit of the no-go bound) and ``mc``
(Monte Carlo strategy comparison). Every command accepts ``--seed`` and is
bit-reproducible for a fixed seed. Options may also come from a key=value
config file (``--config``); explicit flags win. Exit status: 0 success,
1 invariant/audit failure, 2 configuration error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from .errors import ConfigError
from .mc import ComparisonConfig, format_summary, run_comparison
from .postselect import random_instance, check_inequality as _check_one
from .states import Selection
from .sweep import SweepConfig, run_sweep, write_csv


def _fmt(v) -> str:
    return format(v, ".17g") if isinstance(v, float) else str(v)


def _load_config(path) -> dict:
    """Parse a key = value config file; blank lines and # comments ignored."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _apply_config(ctx: click.Context, config_path, kwargs: dict) -> dict:
    """Fill in values from the config file for options left at defaults."""
    if not config_path:
        return kwargs
    file_values = _load_config(config_path)
    params = {p.name: p for p in ctx.command.params}
    for key, raw in file_values.items():
        if key not in params or key == "config":
            raise ConfigError(f"unknown config key {key!r}")
        src = ctx.get_parameter_source(key)
        if src is not None and src.name != "DEFAULT":
            continue  # explicit flag wins
        try:
            kwargs[key] = params[key].type.convert(raw, params[key], ctx)
        except click.UsageError as exc:
            raise ConfigError(f"config key {key!r}: {exc}") from exc
    return kwargs


def _fail_config(exc: Exception):
    click.echo(f"error: {exc}", err=True)
    sys.exit(2)


@click.group()
def main():
    """Fisher-information toolkit for postselected parameter estimation."""


@main.command()
@click.option("--sigma", type=float, default=1.0, show_default=True,
              help="Probe position spread.")
@click.option("--theta-max", type=float, default=5.0, show_default=True,
              help="Sweep upper end in units of theta/sigma.")
@click.option("--theta-points", type=int, default=201, show_default=True,
              help="Number of theta samples.")
@click.option("--grid-t1", type=int, default=16, show_default=True,
              help="Selection-grid points for t1.")
@click.option("--grid-t2", type=int, default=16, show_default=True,
              help="Selection-grid points for t2.")
@click.option("--grid-ds", type=int, default=8, show_default=True,
              help="Selection-grid points for s1 - s2.")
@click.option("--seed", type=int, default=0, show_default=True,
              help="Seed recorded with the output (the sweep is deterministic).")
@click.option("--out", type=click.Path(dir_okay=False, writable=True),
              default="sweep.csv", show_default=True, help="Output CSV path.")
@click.option("--plot/--no-plot", default=True, show_default=True,
              help="Render a figure next to the CSV.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False),
              default=None, help="key = value config file; flags win.")
@click.pass_context
def sweep(ctx, **kwargs):
    """Sweep the selection grid and emit per-(theta, selection) rows."""
    try:
        kwargs = _apply_config(ctx, kwargs.pop("config"), kwargs)
        config = SweepConfig(
            sigma=kwargs["sigma"],
            theta_over_sigma_max=kwargs["theta_max"],
            theta_points=kwargs["theta_points"],
            n_t1=kwargs["grid_t1"], n_t2=kwargs["grid_t2"], n_ds=kwargs["grid_ds"],
            seed=kwargs["seed"]).validate()
    except ConfigError as exc:
        _fail_config(exc)
    result = run_sweep(config)
    out = kwargs["out"]
    rows = write_csv(result, out)
    click.echo(f"wrote {rows} rows to {out} ({result.skipped} low-Pr(f) cells blank)")
    if kwargs["plot"]:
        from .plots import render_sweep_figure
        fig_path = str(Path(out).with_suffix(".png"))
        render_sweep_figure(result, fig_path)
        click.echo(f"wrote figure to {fig_path}")
    if result.violations:
        click.echo(f"no-go bound violated on {len(result.violations)} rows", err=True)
        sys.exit(1)


@main.command("check-inequality")
@click.option("--trials", type=int, default=10000, show_default=True,
              help="Number of random instances.")
@click.option("--min-dim", type=int, default=2, show_default=True,
              help="Smallest system/probe dimension.")
@click.option("--max-dim", type=int, default=6, show_default=True,
              help="Largest system/probe dimension.")
@click.option("--theta-max", type=float, default=5.0, show_default=True,
              help="Upper end of the uniform theta range.")
@click.option("--tolerance", type=float, default=1e-9, show_default=True,
              help="Relative slack in lhs <= rhs (absolute slack 1e-12).")
@click.option("--sigma", type=float, default=1.0, show_default=True,
              help="Accepted for interface uniformity; unused by the audit.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the summary here instead of stdout.")
@click.option("--plot", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Render a margin histogram to this path.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False),
              default=None, help="key = value config file; flags win.")
@click.pass_context
def check_inequality(ctx, **kwargs):
    """Randomized audit of Pr(f) * I_ps <= I_int over GUE/Haar instances."""
    try:
        kwargs = _apply_config(ctx, kwargs.pop("config"), kwargs)
        trials = kwargs["trials"]
        if trials < 1:
            raise ConfigError(f"trials must be >= 1, got {trials}")
        if not (2 <= kwargs["min_dim"] <= kwargs["max_dim"]):
            raise ConfigError("need 2 <= min-dim <= max-dim")
    except ConfigError as exc:
        _fail_config(exc)
    seed = kwargs["seed"]
    tol = kwargs["tolerance"]
    dims_rng = np.random.default_rng(np.random.SeedSequence((seed, 0xD1)))
    margins = np.empty(trials)
    failures = []
    passes = 0
    for trial in range(trials):
        d_sys, d_probe = dims_rng.integers(kwargs["min_dim"], kwargs["max_dim"] + 1, 2)
        spec = random_instance(np.random.SeedSequence((seed, trial)),
                               dims=(int(d_sys), int(d_probe)),
                               theta_range=(0.0, kwargs["theta_max"]))
        res = _check_one(spec)
        margins[trial] = res.margin
        if res.lhs <= res.rhs * (1.0 + tol) + 1e-12:
            passes += 1
        else:
            failures.append((trial, spec, res))
    lines = ["# no-go inequality audit",
             f"trials = {trials}",
             f"passes = {passes}",
             f"failures = {len(failures)}",
             f"worst_margin = {_fmt(float(np.min(margins)))}",
             f"seed = {seed}",
             f"tolerance = {_fmt(tol)}"]
    for trial, spec, res in failures:
        lines.append(f"[failure trial={trial}]")
        lines.append("spec = " + json.dumps({
            "d_sys": spec.d_sys, "d_probe": spec.d_probe, "theta": spec.theta,
            "h_re": spec.h.real.tolist(), "h_im": spec.h.imag.tolist(),
            "i_re": spec.i.real.tolist(), "i_im": spec.i.imag.tolist(),
            "f_re": spec.f.real.tolist(), "f_im": spec.f.imag.tolist(),
            "psi_re": spec.psi.real.tolist(), "psi_im": spec.psi.imag.tolist(),
            "lhs": res.lhs, "rhs": res.rhs}, sort_keys=True))
    report = "\n".join(lines) + "\n"
    if kwargs["out"]:
        Path(kwargs["out"]).write_text(report, encoding="utf-8")
        click.echo(f"wrote audit summary to {kwargs['out']}")
    else:
        click.echo(report, nl=False)
    if kwargs["plot"]:
        from .plots import render_margin_histogram
        render_margin_histogram(margins, kwargs["plot"])
        click.echo(f"wrote figure to {kwargs['plot']}")
    if failures:
        sys.exit(1)


@main.command()
@click.option("--sigma", type=float, default=1.0, show_default=True)
@click.option("--theta-true", type=float, default=2.0, show_default=True,
              help="True parameter value for the simulated experiments.")
@click.option("--t1", type=float, default=np.pi / 4.0, show_default=True,
              help="Preselection angle t1.")
@click.option("--t2", type=float, default=np.pi / 4.0, show_default=True,
              help="Postselection angle t2.")
@click.option("--ds", type=float, default=0.0, show_default=True,
              help="Phase difference s1 - s2 (s2 fixed at 0).")
@click.option("--n", type=int, default=10000, show_default=True,
              help="Prepared copies per repetition.")
@click.option("--reps", type=int, default=500, show_default=True,
              help="Monte Carlo repetitions per strategy.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Write the summary here instead of stdout.")
@click.option("--plot", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Render an MSE-vs-bound figure to this path.")
@click.option("--config", type=click.Path(exists=True, dir_okay=False),
              default=None, help="key = value config file; flags win.")
@click.pass_context
def mc(ctx, **kwargs):
    """Monte Carlo comparison of the postselected and whole-state strategies."""
    try:
        kwargs = _apply_config(ctx, kwargs.pop("config"), kwargs)
        if kwargs["reps"] < 1:
            raise ConfigError(f"reps must be >= 1, got {kwargs['reps']}")
        config = ComparisonConfig(
            sigma=kwargs["sigma"], theta_true=kwargs["theta_true"],
            selection=Selection(t1=kwargs["t1"], s1=kwargs["ds"],
                                t2=kwargs["t2"], s2=0.0),
            n=kwargs["n"])
        summary = run_comparison(config, reps=kwargs["reps"], seed=kwargs["seed"])
    except ConfigError as exc:
        _fail_config(exc)
    report = format_summary(summary)
    if kwargs["out"]:
        Path(kwargs["out"]).write_text(report, encoding="utf-8")
        click.echo(f"wrote comparison summary to {kwargs['out']}")
    else:
        click.echo(report, nl=False)
    if kwargs["plot"]:
        from .plots import render_mc_figure
        render_mc_figure(summary, kwargs["plot"])
        click.echo(f"wrote figure to {kwargs['plot']}")


if __name__ == "__main__":
    main()
