"""Command-line front end.

Subcommands:

* ``compute`` -- referral trust for a log or evidence matrix; writes the
  R matrix CSV and a convergence report JSON.
* ``compare`` -- method comparison on the seven-node benchmark network.
* ``render``  -- evidence matrix to a grayscale PGM image.
* ``report``  -- convergence/alpha-sweep CSVs with matplotlib figures.

Exit codes: 0 success, 1 error, 2 solver did not converge.

Flags override values from an optional ``key=value`` config file
(keys: c, g, theta, tol, max_iter, clusters, scale).  Setting
EBSL_STRICT_PARSE=1 makes log parsing reject malformed lines instead of
skipping them.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from .comparison import compare_methods
from .engine import (
    EngineConfig,
    OpinionMatrix,
    solve_referral,
    theta_bound,
)
from .errors import EbslError
from .flow import FlowConfig, aggregate_rating, solve_flow
from .ingest import (
    EvidenceMatrix,
    build_evidence_matrix,
    cluster_evidence_matrix,
    cluster_nodes,
    evidence_to_opinion_matrix,
    parse_log,
)
from .matrixio import (
    read_evidence_matrix,
    read_start_vector,
    read_trust_input,
    write_opinion_matrix,
)
from .opinion import AlgebraParams, GFunction
from .render import RenderSpec, render_matrix

G_CHOICES = ("xb", "sqrt-xb", "odot")

CONFIG_KEYS = {
    "c": float,
    "g": str,
    "theta": str,
    "tol": float,
    "max_iter": int,
    "clusters": int,
    "scale": float,
}


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    cfg = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise EbslError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise EbslError(f"{path}:{lineno}: unknown config key {key!r}")
        cfg[key] = CONFIG_KEYS[key](value)
    return cfg


def _setting(flag, config: dict, key: str, default):
    if flag is not None:
        return flag
    return config.get(key, default)


def _strict_parsing() -> bool:
    return os.environ.get("EBSL_STRICT_PARSE", "") == "1"


def _load_evidence(
    log: str | None,
    evidence: str | None,
    scale: float,
    clusters: int | None,
) -> EvidenceMatrix:
    if (log is None) == (evidence is None):
        raise EbslError("exactly one of --log / --evidence is required")
    if log is not None:
        with open(log, encoding="utf-8") as fh:
            result = parse_log(fh, strict=_strict_parsing())
        if result.skipped:
            click.echo(f"skipped {result.skipped} malformed line(s)", err=True)
        E = build_evidence_matrix(result.records, scale=scale)
        if clusters is not None:
            E = cluster_evidence_matrix(E, cluster_nodes(result.records, clusters))
        return E
    if clusters is not None:
        raise EbslError("--clusters applies only to --log input")
    return read_evidence_matrix(evidence)


def _resolve_g(
    g_name: str, theta: str | None, A: OpinionMatrix, params: AlgebraParams
) -> tuple[GFunction, float | None]:
    if g_name == "xb":
        return GFunction.belief(), None
    if g_name == "sqrt-xb":
        return GFunction.sqrt_belief(), None
    bound = theta_bound(A, params)
    if theta is None:
        raise EbslError("--g odot requires --theta (a value, or 'auto')")
    if theta == "auto":
        value = bound if bound > 0 else 1.0
    else:
        value = float(theta)
        if value < bound:
            raise EbslError(
                f"theta={value} is below the safe bound {bound:.6g} "
                f"(p_max * (1+sqrt(5))/2); loop feedback could amplify evidence"
            )
    return GFunction.evidence_over_theta(value, params.c), value


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


@click.group()
def main():
    """Evidence-based trust computation over interaction networks."""


@main.command()
@click.option("--log", type=click.Path(exists=True), help="Interaction log CSV.")
@click.option("--evidence", type=click.Path(exists=True), help="Evidence matrix CSV.")
@click.option("--out-dir", type=click.Path(file_okay=False), default=".", show_default=True)
@click.option("--c", "c_const", type=float, default=None, help="Evidence constant c (default 2).")
@click.option("--g", "g_name", type=click.Choice(G_CHOICES), default=None,
              help="Discount weight function (default xb).")
@click.option("--theta", default=None, help="Threshold for --g odot, or 'auto'.")
@click.option("--tol", type=float, default=None, help="Convergence tolerance (default 1e-10).")
@click.option("--max-iter", type=int, default=None, help="Iteration cap (default 1000).")
@click.option("--clusters", type=int, default=None, help="Cluster count for log input.")
@click.option("--scale", type=float, default=None, help="Evidence unit divisor (default 1).")
@click.option("--config", type=click.Path(exists=True), default=None,
              help="key=value config file; flags take precedence.")
def compute(log, evidence, out_dir, c_const, g_name, theta, tol, max_iter,
            clusters, scale, config):
    """Solve final referral trust and write R + a convergence report."""
    try:
        cfgfile = _load_config(config)
        c_const = _setting(c_const, cfgfile, "c", 2.0)
        g_name = _setting(g_name, cfgfile, "g", "xb")
        theta = _setting(theta, cfgfile, "theta", None)
        tol = _setting(tol, cfgfile, "tol", 1e-10)
        max_iter = _setting(max_iter, cfgfile, "max_iter", 1000)
        clusters = _setting(clusters, cfgfile, "clusters", None)
        scale = _setting(scale, cfgfile, "scale", 1.0)

        params = AlgebraParams(c_const)
        E = _load_evidence(log, evidence, scale, clusters)
        A = evidence_to_opinion_matrix(E, params)
        g, theta_used = _resolve_g(g_name, theta, A, params)
        cfg = EngineConfig(params, g, tol, max_iter)
        R, report = solve_referral(A, cfg)

        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_opinion_matrix(out / "referral_trust.csv", R)
        payload = {
            "nodes": R.n,
            "g": g_name,
            "c": c_const,
            "theta": theta_used,
            "tolerance": tol,
            "converged": report.converged,
            "iterations": report.iterations,
            "residual_history": list(report.residual_history),
        }
        (out / "convergence.json").write_text(json.dumps(payload, indent=2) + "\n",
                                              encoding="utf-8")
        click.echo(f"wrote {out / 'referral_trust.csv'} and {out / 'convergence.json'}")
    except (EbslError, OSError, ValueError) as exc:
        _fail(str(exc))
    if not report.converged:
        click.echo(f"did not converge within {max_iter} iterations", err=True)
        sys.exit(2)


@main.command()
@click.argument("evidence_csv", type=click.Path(exists=True))
@click.argument("trust_csv", type=click.Path(exists=True))
@click.option("--c", "c_const", type=float, default=2.0, show_default=True)
@click.option("--theta", type=float, default=1000.0, show_default=True,
              help="Threshold for the linear discounting row.")
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--max-iter", type=int, default=1000, show_default=True)
@click.option("--observer", type=int, default=0, show_default=True)
@click.option("--alpha", type=float, default=None,
              help="Flow-baseline weight; requires --start.")
@click.option("--start", type=click.Path(exists=True), default=None,
              help="Flow-baseline starting vector CSV (i,s); requires --alpha.")
@click.option("--json-out", type=click.Path(), default=None,
              help="Also write the report as JSON.")
def compare(evidence_csv, trust_csv, c_const, theta, tol, max_iter, observer,
            alpha, start, json_out):
    """Compare all methods on the seven-node benchmark network.

    EVIDENCE_CSV holds the referral evidence (i,j,p,n); TRUST_CSV holds the
    direct functional-trust evidence about the proposition (i,p,n).
    """
    try:
        if (alpha is None) != (start is None):
            raise EbslError(
                "the flow baseline has no canonical alpha/start values; "
                "pass both --alpha and --start to include it"
            )
        E = read_evidence_matrix(evidence_csv, size=7)
        trust = read_trust_input(trust_csv)
        start_vec = read_start_vector(start) if start is not None else None
        report = compare_methods(
            E, trust, theta=theta, params=AlgebraParams(c_const), observer=observer,
            tolerance=tol, max_iterations=max_iter, alpha=alpha, start=start_vec,
        )
        click.echo(report.format_table())
        if json_out is not None:
            Path(json_out).write_text(
                json.dumps(report.to_json_dict(), indent=2) + "\n", encoding="utf-8"
            )
    except (EbslError, OSError, ValueError) as exc:
        _fail(str(exc))


@main.command()
@click.argument("evidence_csv", type=click.Path(exists=True))
@click.argument("output_pgm", type=click.Path())
@click.option("--mode", type=click.Choice(["positive", "total"]), default="total",
              show_default=True)
@click.option("--max-reference", type=float, default=None,
              help="Gray-scale ceiling; defaults to the observed maximum.")
def render(evidence_csv, output_pgm, mode, max_reference):
    """Render an evidence matrix as a logarithmic grayscale PGM image."""
    try:
        E = read_evidence_matrix(evidence_csv)
        render_matrix(E, RenderSpec(mode=mode, max_reference=max_reference), output_pgm)
        click.echo(f"wrote {output_pgm}")
    except (EbslError, OSError, ValueError) as exc:
        _fail(str(exc))


@main.command()
@click.option("--log", type=click.Path(exists=True), help="Interaction log CSV.")
@click.option("--evidence", type=click.Path(exists=True), help="Evidence matrix CSV.")
@click.option("--out-dir", type=click.Path(file_okay=False), default="report",
              show_default=True)
@click.option("--c", "c_const", type=float, default=2.0, show_default=True)
@click.option("--theta", default="auto", show_default=True,
              help="Threshold for the linear discounting run.")
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--max-iter", type=int, default=1000, show_default=True)
@click.option("--clusters", type=int, default=None)
@click.option("--scale", type=float, default=1.0, show_default=True)
def report(log, evidence, out_dir, c_const, theta, tol, max_iter, clusters, scale):
    """Write convergence and alpha-sweep CSVs with matplotlib figures."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    try:
        params = AlgebraParams(c_const)
        E = _load_evidence(log, evidence, scale, clusters)
        A = evidence_to_opinion_matrix(E, params)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)

        histories = {}
        for name in G_CHOICES:
            g, _ = _resolve_g(name, theta, A, params)
            _, rep = solve_referral(A, EngineConfig(params, g, tol, max_iter))
            histories[name] = rep.residual_history

        with open(out / "residuals.csv", "w", encoding="utf-8") as fh:
            fh.write("g,iteration,residual\n")
            for name, hist in histories.items():
                for i, r in enumerate(hist, 1):
                    fh.write(f"{name},{i},{r:.17g}\n")

        fig, ax = plt.subplots(figsize=(6, 4))
        for name, hist in histories.items():
            ax.semilogy(range(1, len(hist) + 1), np.maximum(hist, 1e-300), label=name)
        ax.set_xlabel("iteration")
        ax.set_ylabel("residual")
        ax.axhline(tol, color="gray", linestyle=":", linewidth=1)
        ax.legend()
        fig.tight_layout()
        fig.savefig(out / "residuals.png", dpi=150)
        plt.close(fig)

        # Flow-baseline sweep on the aggregated ratings of the same network.
        n = E.size
        ratings = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                if i != j:
                    ratings[i, j] = aggregate_rating(E.entry(i, j))
        alphas = [round(0.1 * k, 1) for k in range(10)]
        sweep = []
        for a in alphas:
            r, _ = solve_flow(ratings, FlowConfig(alpha=a, start=tuple(np.full(n, 0.5))))
            sweep.append(r)
        with open(out / "alpha_sweep.csv", "w", encoding="utf-8") as fh:
            fh.write("alpha," + ",".join(f"r_{i}" for i in range(n)) + "\n")
            for a, r in zip(alphas, sweep):
                fh.write(f"{a}," + ",".join(f"{v:.17g}" for v in r) + "\n")

        fig, ax = plt.subplots(figsize=(6, 4))
        arr = np.asarray(sweep)
        for i in range(n):
            ax.plot(alphas, arr[:, i], alpha=0.7)
        ax.set_xlabel("alpha")
        ax.set_ylabel("flow reputation")
        fig.tight_layout()
        fig.savefig(out / "alpha_sweep.png", dpi=150)
        plt.close(fig)

        click.echo(f"wrote report files under {out}")
    except (EbslError, OSError, ValueError) as exc:
        _fail(str(exc))


if __name__ == "__main__":
    main()
