"""Batch command-line interface.

Subcommands: kernel (oscillatory-kernel table), transform (composed
spectrum), compare (against the catalog closed form or the brute-force
oracle), plotdata (CSV plus a self-contained SVG).

Exit codes: 0 success, 1 usage or configuration error, 2 numeric budget
failure (partial output may still be emitted).  Numbers are printed with
repr's shortest round-trip decimal form so identical flags give
byte-identical output.
"""
from __future__ import annotations

import json
import sys
from typing import Dict, Optional, Tuple

import click
import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # pragma: no cover - Python < 3.11
    import tomli as tomllib

from . import catalog as _catalog
from ._svg import render_line_plot
from .funcspace import Spectrum
from .oracle import direct_ft, spectrum_compare
from .oscillatory import QuadratureBudget, QuadratureBudgetError, transfer_kernel
from .transfer import TransferPlan, TransferReport, compose_spectrum

# usage errors exit 1 in this tool's contract; click defaults to 2
click.UsageError.exit_code = 1

_COMPARE_HEADROOM = 10.0


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_values(text: str, name: str) -> np.ndarray:
    """Parse '1', '0,0.5,1', or 'start:stop:steps' (steps+1 points)."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            start, stop = float(parts[0]), float(parts[1])
            steps = int(parts[2])
            if steps <= 0:
                raise ValueError
            return np.linspace(start, stop, steps + 1)
        vals = np.array([float(p) for p in text.split(",") if p.strip() != ""])
        if vals.size == 0:
            raise ValueError
        return vals
    except ValueError:
        raise click.UsageError(
            f"could not parse --{name} {text!r}; expected a number, a comma "
            "list, or start:stop:steps"
        )


def _parse_entity(text: str, name: str) -> Tuple[str, Dict[str, float]]:
    """Parse 'id' or 'id:key=val,key=val'."""
    text = text.strip()
    if ":" not in text:
        return text, {}
    ident, _, rest = text.partition(":")
    params: Dict[str, float] = {}
    for chunk in rest.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        key, eq, val = chunk.partition("=")
        if not eq:
            raise click.UsageError(f"bad parameter {chunk!r} in --{name}")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise click.UsageError(f"bad parameter value {chunk!r} in --{name}")
    return ident.strip(), params


def _load_config(path: Optional[str]) -> Dict:
    if path is None:
        return {}
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise click.UsageError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise click.UsageError(f"config file is not valid TOML: {exc}")


def _pick(flag, config: Dict, key: str, default):
    """Flags override the config file, which overrides defaults."""
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return default


def _build(entity: str, kind: str, name: str):
    ident, params = _parse_entity(entity, name)
    try:
        entry = _catalog.get_entry(ident)
    except KeyError:
        raise click.UsageError(f"unknown {name} id: {ident}")
    if entry.kind != kind:
        raise click.UsageError(f"catalog id {ident!r} is not a {kind}")
    unknown = sorted(set(params) - set(entry.defaults))
    if unknown:
        raise click.UsageError(
            f"unknown parameter(s) for {ident}: {', '.join(unknown)}"
        )
    merged = {**entry.defaults, **params}
    try:
        obj = entry.builder(**merged)
    except (TypeError, ValueError) as exc:
        raise click.UsageError(f"bad --{name}: {exc}")
    return obj, ident, merged


@click.group()
def main() -> None:
    """Fourier transforms of warped compositions via transfer kernels."""


@main.command("kernel")
@click.option("--warp", "warp_spec", default=None, help="catalog warp id, e.g. sinh:b=2")
@click.option("--k", "k_spec", default=None, help="k values: number, list, or start:stop:steps")
@click.option("--l", "l_spec", default=None, help="l values: number, list, or start:stop:steps")
@click.option("--tol", type=float, default=None, help="kernel absolute tolerance")
@click.option("--closed-form", "closed_form", is_flag=True, default=None,
              help="use the analytic kernel instead of quadrature")
@click.option("--config", "config_path", default=None, help="TOML config file")
@click.pass_context
def cmd_kernel(ctx, warp_spec, k_spec, l_spec, tol, closed_form, config_path):
    """Tabulate the transfer kernel H(k, l) as CSV."""
    cfg = _load_config(config_path)
    warp_spec = _pick(warp_spec, cfg, "warp", "sinh")
    k_spec = _pick(k_spec, cfg, "k", None)
    l_spec = _pick(l_spec, cfg, "l", None)
    tol = float(_pick(tol, cfg, "tol", 1e-6))
    closed_form = bool(_pick(closed_form, cfg, "closed_form", False))
    if k_spec is None or l_spec is None:
        raise click.UsageError("--k and --l are required")
    ks = np.sort(_parse_values(str(k_spec), "k"))
    ls = np.sort(_parse_values(str(l_spec), "l"))

    warp, warp_id, wparams = _build(str(warp_spec), "warp", "warp")
    if closed_form and warp.kind != "sinh":
        raise click.UsageError("no closed-form kernel for this warp")

    budget = QuadratureBudget(abs_tol=tol)
    failed = False
    lines = ["k,l,re,im,tail_bound,panels"]
    for k in ks:
        for l in ls:
            try:
                if closed_form:
                    val = _catalog.sinh_kernel_closed(wparams["b"], float(k), float(l))
                    row = (float(k), float(l), val.real, val.imag, 0.0, 0)
                else:
                    s = transfer_kernel(warp, float(k), float(l), budget)
                    row = (float(k), float(l), s.value.real, s.value.imag,
                           s.tail_bound, s.panels_used)
            except QuadratureBudgetError as exc:
                failed = True
                bound = exc.err_bound if exc.err_bound is not None else float("nan")
                row = (float(k), float(l), float("nan"), float("nan"), bound, 0)
            except ValueError as exc:
                raise click.UsageError(str(exc))
            lines.append(
                f"{_fmt(row[0])},{_fmt(row[1])},{_fmt(row[2])},{_fmt(row[3])},"
                f"{_fmt(row[4])},{int(row[5])}"
            )
    click.echo("\n".join(lines))
    ctx.exit(2 if failed else 0)


def _transform_options(fn):
    opts = [
        click.option("--profile", "profile_spec", default=None,
                     help="catalog profile id, e.g. lorentzian:a=0.5"),
        click.option("--warp", "warp_spec", default=None,
                     help="catalog warp id, e.g. sinh:b=1"),
        click.option("--kmin", type=float, default=None),
        click.option("--kmax", type=float, default=None),
        click.option("--ksteps", type=int, default=None,
                     help="number of grid steps; the grid has ksteps+1 points"),
        click.option("--l-exclusion", "l_exclusion", type=float, default=None),
        click.option("--l-max", "l_max", type=float, default=None),
        click.option("--tol", type=float, default=None),
        click.option("--kernel", "kernel", type=click.Choice(["numeric", "closed"]),
                     default=None),
        click.option("--config", "config_path", default=None, help="TOML config file"),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _resolve_transform(cfg, profile_spec, warp_spec, kmin, kmax, ksteps,
                       l_exclusion, l_max, tol, kernel):
    profile_spec = _pick(profile_spec, cfg, "profile", "lorentzian")
    warp_spec = _pick(warp_spec, cfg, "warp", "sinh")
    kmin = _pick(kmin, cfg, "kmin", None)
    kmax = _pick(kmax, cfg, "kmax", None)
    ksteps = _pick(ksteps, cfg, "ksteps", None)
    l_exclusion = float(_pick(l_exclusion, cfg, "l_exclusion", 1e-3))
    l_max = _pick(l_max, cfg, "l_max", None)
    tol = float(_pick(tol, cfg, "tol", 1e-4))
    kernel = _pick(kernel, cfg, "kernel", "numeric")
    if kmin is None or kmax is None or ksteps is None:
        raise click.UsageError("--kmin, --kmax, and --ksteps are required")
    kmin, kmax, ksteps = float(kmin), float(kmax), int(ksteps)
    if ksteps <= 0:
        raise click.UsageError("--ksteps must be a positive integer")
    if not kmax > kmin:
        raise click.UsageError("--kmax must exceed --kmin")
    if kernel not in ("numeric", "closed"):
        raise click.UsageError("--kernel must be numeric or closed")

    profile, profile_id, pparams = _build(str(profile_spec), "profile", "profile")
    warp, warp_id, wparams = _build(str(warp_spec), "warp", "warp")
    kgrid = np.linspace(kmin, kmax, ksteps + 1)
    try:
        plan = TransferPlan(
            profile=profile,
            warp=warp,
            kgrid=kgrid,
            l_exclusion=l_exclusion,
            l_max=None if l_max is None else float(l_max),
            budget=QuadratureBudget(abs_tol=tol),
            kernel_source="closed_form" if kernel == "closed" else "numeric",
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    meta = {
        "profile_id": profile_id, "profile_params": pparams,
        "warp_id": warp_id, "warp_params": wparams, "tol": tol,
    }
    return plan, meta


def _run_compose(ctx, plan: TransferPlan) -> TransferReport:
    try:
        report = compose_spectrum(plan)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    except QuadratureBudgetError as exc:
        click.echo(f"numeric budget failure: {exc}", err=True)
        ctx.exit(2)
    if not bool(np.all(report.converged)):
        worst = float(np.max(report.spectrum.err_estimates))
        click.echo(
            "warning: error estimate exceeds the requested tolerance "
            f"(achieved bound {_fmt(worst)})",
            err=True,
        )
    return report


def _transform_lines(report: TransferReport):
    spec = report.spectrum
    lines = ["k,re,im,err_estimate"]
    for i in range(spec.kgrid.size):
        v = complex(spec.values[i])
        lines.append(
            f"{_fmt(spec.kgrid[i])},{_fmt(v.real)},{_fmt(v.imag)},"
            f"{_fmt(spec.err_estimates[i])}"
        )
    return lines


@main.command("transform")
@_transform_options
@click.pass_context
def cmd_transform(ctx, profile_spec, warp_spec, kmin, kmax, ksteps,
                  l_exclusion, l_max, tol, kernel, config_path):
    """Compute the spectrum of profile composed with warp, as CSV."""
    cfg = _load_config(config_path)
    plan, _meta = _resolve_transform(cfg, profile_spec, warp_spec, kmin, kmax,
                                     ksteps, l_exclusion, l_max, tol, kernel)
    report = _run_compose(ctx, plan)
    click.echo("\n".join(_transform_lines(report)))


@main.command("compare")
@_transform_options
@click.option("--against", "against", type=click.Choice(["oracle", "catalog"]),
              default=None, help="reference: brute-force oracle or catalog closed form")
@click.option("--oracle-tol", type=float, default=None,
              help="absolute tolerance for the oracle reference (default 1e-9)")
@click.pass_context
def cmd_compare(ctx, profile_spec, warp_spec, kmin, kmax, ksteps, l_exclusion,
                l_max, tol, kernel, config_path, against, oracle_tol):
    """Run the transform and report differences against a reference as JSON.

    Exits 0 only when every row's difference is inside its error bound and
    every bound is within 10x the requested tolerance.
    """
    cfg = _load_config(config_path)
    against = _pick(against, cfg, "against", "catalog")
    oracle_tol = float(_pick(oracle_tol, cfg, "oracle_tol", 1e-9))
    plan, meta = _resolve_transform(cfg, profile_spec, warp_spec, kmin, kmax,
                                    ksteps, l_exclusion, l_max, tol, kernel)
    report = _run_compose(ctx, plan)
    spec = report.spectrum

    if against == "catalog":
        if meta["profile_id"] != "lorentzian" or meta["warp_id"] != "sinh":
            raise click.UsageError("no catalog reference for this configuration")
        params = _catalog.SinhLorentzParams(
            meta["profile_params"]["a"], meta["warp_params"]["b"]
        )
        refs = np.array(
            [_catalog.sinh_lorentzian_hat(params, float(k)) for k in spec.kgrid],
            dtype=complex,
        )
        ref_err = np.full(spec.kgrid.size, 1e-12)
    else:
        try:
            refs = np.array(
                [direct_ft(plan.profile, plan.warp, float(k), oracle_tol)
                 for k in spec.kgrid],
                dtype=complex,
            )
        except (ValueError, RuntimeError) as exc:
            raise click.UsageError(f"oracle reference failed: {exc}")
        ref_err = np.full(spec.kgrid.size, oracle_tol)

    ref_spec = Spectrum(kgrid=spec.kgrid, values=refs, err_estimates=ref_err)
    max_abs, max_rel, worst_k = spectrum_compare(spec, ref_spec)
    bounds = spec.err_estimates + ref_err
    diffs = np.abs(np.asarray(spec.values) - refs)
    within = bool(np.all(diffs <= bounds))
    tight = bool(np.all(bounds <= _COMPARE_HEADROOM * meta["tol"] + ref_err))

    rows = []
    for i, k in enumerate(spec.kgrid):
        v = complex(spec.values[i])
        r = complex(refs[i])
        rows.append({
            "k": float(k),
            "re": v.real, "im": v.imag,
            "ref_re": r.real, "ref_im": r.imag,
            "abs_diff": float(diffs[i]),
            "bound": float(bounds[i]),
            "excluded_band_bound": float(report.excluded_band_bound[i]),
            "outer_tail_bound": float(report.outer_tail_bound[i]),
        })
    out = {"max_abs": max_abs, "max_rel": max_rel, "worst_k": worst_k, "rows": rows}
    click.echo(json.dumps(out, indent=2))
    if not within:
        click.echo("comparison failed: difference exceeds the error bound", err=True)
        ctx.exit(2)
    if not tight:
        click.echo(
            "comparison failed: error bound far above the requested tolerance "
            "(see excluded_band_bound / outer_tail_bound in the rows)",
            err=True,
        )
        ctx.exit(2)
    ctx.exit(0)


@main.command("plotdata")
@_transform_options
@click.option("--out", "out_prefix", default=None, required=False,
              help="output path prefix; writes <prefix>.csv and <prefix>.svg")
@click.pass_context
def cmd_plotdata(ctx, profile_spec, warp_spec, kmin, kmax, ksteps, l_exclusion,
                 l_max, tol, kernel, config_path, out_prefix):
    """Run the transform and write <prefix>.csv plus <prefix>.svg."""
    cfg = _load_config(config_path)
    out_prefix = _pick(out_prefix, cfg, "out", None)
    if out_prefix is None:
        raise click.UsageError("--out is required")
    plan, meta = _resolve_transform(cfg, profile_spec, warp_spec, kmin, kmax,
                                    ksteps, l_exclusion, l_max, tol, kernel)
    report = _run_compose(ctx, plan)
    spec = report.spectrum
    csv_text = "\n".join(_transform_lines(report)) + "\n"
    title = f"{meta['profile_id']} via {meta['warp_id']}"
    svg_text = render_line_plot(
        spec.kgrid, np.abs(np.asarray(spec.values)), spec.err_estimates, title
    )
    try:
        with open(f"{out_prefix}.csv", "w") as fh:
            fh.write(csv_text)
        with open(f"{out_prefix}.svg", "w") as fh:
            fh.write(svg_text)
    except OSError as exc:
        click.echo(f"cannot write output: {exc}", err=True)
        ctx.exit(1)
    click.echo(f"wrote {out_prefix}.csv and {out_prefix}.svg")


if __name__ == "__main__":  # pragma: no cover
    main()
