"""Command-line front end: catalog, verification suites, spectra, bounds.

Exit codes: 0 all requested checks pass; 1 at least one check failed or a
model violated a precondition; 2 usage error; 3 unknown model; 4 operation
unsupported on the backend; 5 invalid bound inputs.  JSON output is the
source of truth and is byte-stable for a fixed (configuration, seed).
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass

import click
import numpy as np

from . import analysis, checks, models
from .errors import (BoundNotApplicableError, InvalidModelError,
                     NotApplicableError, UnsupportedBackendError)
from .foliation import ricci_horizontal

DEFAULT_CHECKS = ["axioms", "h-type", "torsion-class", "yang-mills",
                  "parallel-clifford", "lemma-identities", "einstein",
                  "curvature-constancy", "cd"]

EXIT_CHECK_FAILED = 1
EXIT_UNKNOWN_MODEL = 3
EXIT_UNSUPPORTED = 4
EXIT_BAD_BOUNDS = 5


@dataclass
class RunConfig:
    points: int = 64
    seed: int = 42
    tol: float = checks.TOL_CURVATURE
    heavy_points: int = 32   # curvature-pipeline checks sample fewer points


def _load_named_model(name: str, model_file: str | None):
    if model_file is not None:
        with open(model_file) as fh:
            return models.load_model(fh.read())
    try:
        return models.get_model(name)
    except KeyError:
        click.echo(f"error: unknown model {name!r}; see `catalog`", err=True)
        sys.exit(EXIT_UNKNOWN_MODEL)


def _spec_for(name: str):
    try:
        return models.get_spec(name)
    except KeyError:
        return None


def _emit(payload, fmt: str, out: str | None, text_renderer):
    if fmt == "json":
        blob = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        blob = text_renderer(payload)
    if out:
        with open(out, "w") as fh:
            fh.write(blob)
    click.echo(blob, nl=False)


def run_checks(model, selected: list[str], cfg: RunConfig,
               expected_class: str | None = None,
               expected_kappa: float | None = None) -> list[dict]:
    """Run the selected verification suite on one model.

    Rows carry status pass/fail/skipped/error; precondition violations are
    errors (they fail the run), theorem hypotheses not met are skips.
    """
    rows: list[dict] = []
    fitted_kappa: float | None = None

    def record(report, status=None):
        row = report.to_json()
        if status:
            row["status"] = status
        row["model"] = model.name
        rows.append(row)
        return row

    def skip(name, reason):
        rows.append({"check": name, "status": "skipped", "model": model.name,
                     "reason": reason})

    def error(name, exc):
        rows.append({"check": name, "status": "error", "model": model.name,
                     "reason": str(exc)})

    for name in selected:
        try:
            if name == "axioms":
                record(checks.check_foliation_axioms(
                    model, cfg.points, cfg.seed, cfg.tol))
            elif name == "h-type":
                record(checks.check_h_type(model, cfg.points, cfg.seed, cfg.tol))
            elif name == "torsion-class":
                record(checks.check_torsion_class(
                    model, expected_class, cfg.heavy_points, cfg.seed, cfg.tol))
            elif name == "yang-mills":
                record(checks.check_yang_mills(
                    model, cfg.points, cfg.seed, cfg.tol))
            elif name == "parallel-clifford":
                rep = checks.check_parallel_clifford(
                    model, cfg.heavy_points, cfg.seed, cfg.tol)
                fitted_kappa = rep.details.get("kappa")
                record(rep)
            elif name == "lemma-identities":
                kap = fitted_kappa if fitted_kappa is not None else expected_kappa
                for rep in checks.check_lemma_identities(
                        model, cfg.heavy_points, cfg.seed, cfg.tol, kappa=kap):
                    record(rep)
            elif name == "einstein":
                record(checks.check_einstein(
                    model, cfg.heavy_points, cfg.seed, cfg.tol,
                    kappa=fitted_kappa))
            elif name == "curvature-constancy":
                kap = fitted_kappa if fitted_kappa else expected_kappa
                if not kap:
                    skip(name, "no nonzero structure constant kappa")
                    continue
                record(checks.check_curvature_constancy(
                    model, kap, cfg.heavy_points, cfg.seed, cfg.tol))
            elif name == "cd":
                fb = checks.frame_batch_for(model, cfg.heavy_points, cfg.seed)
                K = float(np.linalg.eigvalsh(ricci_horizontal(fb)).min()) - 1e-9
                record(analysis.check_cd_inequality(
                    model, K, fs=10, points=cfg.heavy_points, seed=cfg.seed,
                    tol=cfg.tol))
            else:
                raise click.UsageError(f"unknown check {name!r}")
        except NotApplicableError as exc:
            skip(name, str(exc))
        except (InvalidModelError, UnsupportedBackendError) as exc:
            error(name, exc)
    return rows


def _render_rows(rows) -> str:
    lines = [f"{'model':<26} {'check':<26} {'status':<8} "
             f"{'max_residual':>13} {'tolerance':>10}"]
    for r in rows:
        res = f"{r['max_residual']:.3e}" if "max_residual" in r else "-"
        tol = f"{r['tolerance']:.1e}" if "tolerance" in r else "-"
        lines.append(f"{r['model']:<26} {r['check']:<26} {r['status']:<8} "
                     f"{res:>13} {tol:>10}")
        if r.get("status") in ("skipped", "error"):
            lines.append(f"{'':<26}   reason: {r.get('reason', '')}")
    return "\n".join(lines) + "\n"


@click.group()
def main():
    """Model spaces of foliated sub-Riemannian geometry: build, verify,
    and compute spectra and curvature bounds."""


@main.command("catalog")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text")
def cmd_catalog(fmt):
    """List built-in models with ranks, torsion class, and kappa."""
    specs = models.catalog()
    payload = [s.to_json() for s in specs]

    def render(payload):
        lines = [f"{'name':<26} {'kind':<18} {'n':>3} {'m':>3} {'eps':>5} "
                 f"{'class':<22} {'kappa':>6}"]
        for s in payload:
            kap = "-" if s["expected_kappa"] is None else f"{s['expected_kappa']:g}"
            lines.append(f"{s['name']:<26} {s['kind']:<18} {s['n']:>3} "
                         f"{s['m']:>3} {s['epsilon']:>5g} "
                         f"{s['expected_class']:<22} {kap:>6}")
        return "\n".join(lines) + "\n"

    _emit(payload, fmt, None, render)


@main.command("verify")
@click.argument("model_names", nargs=-1)
@click.option("--all", "run_all", is_flag=True,
              help="verify every catalog model expected to pass as built")
@click.option("--checks", "check_list", default=",".join(DEFAULT_CHECKS),
              show_default=False,
              help="comma-separated subset of: " + ", ".join(DEFAULT_CHECKS))
@click.option("--points", type=int, default=64, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--tol", type=float, default=checks.TOL_CURVATURE,
              show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text")
@click.option("--out", type=click.Path(), default=None,
              help="also write the report to this path")
@click.option("--model-file", type=click.Path(exists=True), default=None,
              help="verify a model loaded from a JSON file instead")
def cmd_verify(model_names, run_all, check_list, points, seed, tol, fmt, out,
               model_file):
    """Run verification suites; exit 0 only if every check passes."""
    # one point batch per model: every check then shares evaluated tables
    cfg = RunConfig(points=points, seed=seed, tol=tol, heavy_points=points)
    selected = [c.strip() for c in check_list.split(",") if c.strip()]
    for c in selected:
        if c not in DEFAULT_CHECKS:
            raise click.UsageError(f"unknown check {c!r}")
    if run_all:
        names = [s.name for s in models.catalog() if s.strict_htype]
    else:
        names = list(model_names)
    if model_file is not None and not names:
        names = ["<file>"]
    if not names:
        raise click.UsageError("name at least one model, or pass --all")
    rows = []
    for name in names:
        model = _load_named_model(name, model_file)
        spec = _spec_for(model.name)
        rows += run_checks(model, selected, cfg,
                           expected_class=spec.expected_class if spec else None,
                           expected_kappa=spec.expected_kappa if spec else None)
    _emit(rows, fmt, out, _render_rows)
    bad = [r for r in rows if r["status"] in ("fail", "error")]
    sys.exit(EXIT_CHECK_FAILED if bad else 0)


@main.command("spectrum")
@click.argument("model_name")
@click.option("--degree", type=int, default=2, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json", "csv"]),
              default="text")
@click.option("--out", type=click.Path(), default=None)
def cmd_spectrum(model_name, degree, fmt, out):
    """Sub-Laplacian spectrum on polynomials of bounded degree, with the
    measured first nonzero eigenvalue against the closed-form bound."""
    model = _load_named_model(model_name, None)
    spec = _spec_for(model.name)
    try:
        result = analysis.rayleigh_ritz(model, degree)
    except UnsupportedBackendError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_UNSUPPORTED)
    lam1 = result.smallest_nonzero()
    bound = None
    if spec and spec.expected_kappa and model.m >= 2:
        quat = checks.detect_quaternionic(model).status == "quaternionic"
        bound = analysis.bounds_clifford(model.n, model.m, spec.expected_kappa,
                                         quaternionic=quat).lambda1_bound
    payload = result.to_json()
    payload["lambda1"] = lam1
    payload["lambda1_bound"] = bound
    payload["gap"] = None if bound is None else lam1 - bound

    def render(payload):
        lines = [f"model {payload['model']}, degree {payload['degree']}",
                 "eigenvalues: " + ", ".join(f"{v:.9g}"
                                             for v in payload["eigenvalues"])]
        if bound is None:
            lines.append(f"measured lambda_1 = {lam1:.9g} (no closed-form bound)")
        else:
            lines.append(f"measured lambda_1 = {lam1:.9g} vs bound {bound:.9g} "
                         f"(gap {lam1 - bound:.3e})")
        return "\n".join(lines) + "\n"

    if fmt == "csv":
        blob = result.to_csv()
        if out:
            with open(out, "w") as fh:
                fh.write(blob)
        click.echo(blob, nl=False)
    else:
        _emit(payload, fmt, out, render)


@main.command("bounds")
@click.option("--n", "n", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@click.option("--K", "K", type=float, default=None,
              help="horizontal Ricci lower bound")
@click.option("--kappa", type=float, default=None,
              help="vertical Clifford structure constant")
@click.option("--quaternionic", is_flag=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text")
def cmd_bounds(n, m, K, kappa, quaternionic, fmt):
    """Evaluate the closed-form diameter and first-eigenvalue bounds."""
    if (K is None) == (kappa is None):
        click.echo("error: pass exactly one of --K or --kappa", err=True)
        sys.exit(EXIT_BAD_BOUNDS)
    try:
        if K is not None:
            result = analysis.bounds_general(n, m, K)
        else:
            result = analysis.bounds_clifford(n, m, kappa, quaternionic)
    except BoundNotApplicableError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_BAD_BOUNDS)

    def render(payload):
        return (f"lambda_1 >= {payload['lambda1_bound']:.9g}\n"
                f"diameter <= {payload['diameter_bound']:.9g}\n"
                f"formula: {payload['formula']}\n")

    _emit(result.to_json(), fmt, None, render)


@main.command("cd")
@click.argument("model_name")
@click.option("--K", "K", type=float, required=True)
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--points", type=int, default=32, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text")
def cmd_cd(model_name, K, trials, points, seed, tol, fmt):
    """Check the curvature-dimension inequality with random polynomials."""
    model = _load_named_model(model_name, None)
    try:
        report = analysis.check_cd_inequality(model, K, fs=trials,
                                              points=points, seed=seed, tol=tol)
    except InvalidModelError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_BAD_BOUNDS)
    row = report.to_json()
    row["model"] = model.name
    _emit([row], fmt, None, _render_rows)
    sys.exit(0 if report.status == "pass" else EXIT_CHECK_FAILED)


@main.command("report")
@click.argument("model_name")
@click.option("--points", type=int, default=64, show_default=True)
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--degree", type=int, default=2, show_default=True)
@click.option("--out", type=click.Path(), default=None)
def cmd_report(model_name, points, seed, degree, out):
    """Full machine-readable report: all checks plus spectrum where defined."""
    model = _load_named_model(model_name, None)
    spec = _spec_for(model.name)
    cfg = RunConfig(points=points, seed=seed, heavy_points=points)
    rows = run_checks(model, DEFAULT_CHECKS, cfg,
                      expected_class=spec.expected_class if spec else None,
                      expected_kappa=spec.expected_kappa if spec else None)
    payload = {"model": model.name, "n": model.n, "m": model.m,
               "epsilon": model.epsilon, "checks": rows}
    if model.backend == "sphere":
        result = analysis.rayleigh_ritz(model, degree)
        payload["spectrum"] = result.to_json()
        payload["spectrum"]["lambda1"] = result.smallest_nonzero()
    blob = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(blob)
    click.echo(blob, nl=False)
    bad = [r for r in rows if r["status"] in ("fail", "error")]
    sys.exit(EXIT_CHECK_FAILED if bad else 0)


if __name__ == "__main__":
    main()
