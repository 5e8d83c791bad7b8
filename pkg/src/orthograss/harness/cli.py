"""Command line interface: ``orthograss verify|demo|universe|graph|lemmas|fixture|validate``."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .. import dim4
from ..grassmann import FiniteUniverse, GraphKind, UnreachableError, bfs_distance, grassmann_distance, johnson_universe
from ..subspace import Subspace, SubspaceError
from .campaigns import LEMMAS, Campaign, CampaignError, list_lemmas, report_json, report_text, run_campaign
from .fixtures import FIXTURES, FixtureError, emit_fixture, validate_file

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

SEED_ENV = "OGL_DEFAULT_SEED"


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw.strip() == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise click.UsageError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _csv(text: str | None, cast=str) -> tuple | None:
    if text is None:
        return None
    try:
        return tuple(cast(x.strip()) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)


def _load_json(path: str, what: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise click.UsageError(f"cannot read {what} {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="orthograss")
def main():
    """Exact verification harness for Grassmann and ortho-Grassmann graph lemmas."""


@main.command()
@click.argument("lemma_id")
@click.option("--n", "n", type=int, help="Ambient dimension.")
@click.option("--k", "k", type=int, help="Subspace dimension.")
@click.option("--sigma", help="Comma-separated rational eigenvalues, e.g. 0,1,2.")
@click.option("--d", "d", help="Comma-separated multiplicities, e.g. 3,3,2.")
@click.option("--sigma-prime", help="Target spectrum for spectrum-swap.")
@click.option("--trials", type=click.IntRange(min=1), default=20, show_default=True)
@click.option("--seed", type=int, default=None, help=f"Campaign seed (falls back to ${SEED_ENV}, then 0).")
@click.option("--witness-budget", type=click.IntRange(min=2), default=5, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), help="Write the report here instead of stdout.")
@click.option("--figure", type=click.Path(dir_okay=False), help="Also render a summary figure (png/svg/pdf).")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
def verify(lemma_id, n, k, sigma, d, sigma_prime, trials, seed, witness_budget, fmt, out, figure, jobs):
    """Run a seeded verification campaign for LEMMA_ID."""
    lemma = LEMMAS.get(lemma_id)
    if lemma is None:
        raise click.UsageError(f"unknown lemma id {lemma_id!r}; see 'orthograss lemmas'")
    params = dict(lemma.defaults)
    if lemma.param_kind == "nk":
        if sigma or d or sigma_prime:
            raise click.UsageError(f"{lemma_id} takes --n/--k, not --sigma/--d")
        if n is not None:
            params["n"] = n
        if k is not None:
            params["k"] = k
    else:
        if n is not None or k is not None:
            raise click.UsageError(f"{lemma_id} takes --sigma/--d, not --n/--k")
        if sigma:
            params["sigma"] = _csv(sigma)
        if d:
            params["d"] = _csv(d, int)
        if sigma_prime:
            params["sigma_prime"] = _csv(sigma_prime)
    campaign = Campaign(lemma_id, params, trials, _resolve_seed(seed), witness_budget)
    try:
        report = run_campaign(campaign, jobs=jobs)
    except CampaignError as exc:
        raise click.UsageError(str(exc)) from None
    _emit(report_json(report) if fmt == "json" else report_text(report), out)
    if figure:
        from .plotting import render_report_figure

        render_report_figure(report, figure)
    sys.exit(EXIT_OK if report["failed"] == 0 else EXIT_FAILED)


@main.command()
@click.argument("name", type=click.Choice(["dim4-exceptional"]))
@click.option("--seed", type=int, default=None)
@click.option("--pairs", type=click.IntRange(min=1), default=200, show_default=True)
def demo(name, seed, pairs):
    """Show the ⊥-swap automorphism of the dimension-4 ortho-Grassmann graph."""
    seed = _resolve_seed(seed)
    fam = dim4.random_perp_closed_family(seed)
    f = dim4.exceptional_map(fam)
    rep = dim4.check_ortho_automorphism(f, dim4.mixed_pairs(fam.sorted_members(), pairs, seed))
    X, Y = dim4.find_adjacency_breaking_pair(f)
    out = {
        "demo": name,
        "seed": seed,
        "family": fam.to_json(),
        "automorphism_check": rep.to_json(),
        "adjacency_breaking_pair": {"X": X.to_json(), "Y": Y.to_json(), "f(X)": f(X).to_json()},
        "conjecture_experiment": dim4.conjecture_experiment(seed).to_json(),
    }
    click.echo(json.dumps(out, sort_keys=True, indent=2))
    sys.exit(EXIT_OK if rep.ok else EXIT_FAILED)


@main.group()
def universe():
    """Finite vertex sets for BFS checks."""


@universe.command("build")
@click.option("--n", "n", type=int, required=True)
@click.option("--k", "k", type=int, required=True)
@click.option("--edges", type=click.Choice(["grassmann", "ortho"]), default="grassmann", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
def universe_build(n, k, edges, out):
    """All coordinate k-subspaces of C^n (the Johnson universe)."""
    if not 1 <= k < n:
        raise click.UsageError("need 1 <= k < n")
    U = johnson_universe(n, k, edges)
    Path(out).write_text(json.dumps(U.to_json(), sort_keys=True, indent=2) + "\n")
    click.echo(f"wrote {len(U)} vertices to {out}")


@main.group()
def graph():
    """Graph queries on a universe file."""


@graph.command("bfs")
@click.option("--universe", "universe_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--from", "src", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--to", "dst", type=click.Path(exists=True, dir_okay=False), required=True)
def graph_bfs(universe_path, src, dst):
    """Shortest-path length between two vertices."""
    try:
        U = FiniteUniverse.from_json(_load_json(universe_path, "universe"))
        X = Subspace.from_json(_load_json(src, "subspace"))
        Y = Subspace.from_json(_load_json(dst, "subspace"))
        d = bfs_distance(U, X, Y)
    except (SubspaceError, KeyError, ValueError) as exc:
        if isinstance(exc, UnreachableError):
            click.echo(json.dumps({"distance": None, "reachable": False}))
            sys.exit(EXIT_FAILED)
        raise click.UsageError(str(exc.args[0] if exc.args else exc)) from None
    click.echo(json.dumps({
        "distance": d,
        "edges": U.edge_kind.value,
        "grassmann_distance": grassmann_distance(X, Y),
        "reachable": True,
    }, sort_keys=True))


@main.command("lemmas")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text", show_default=True)
def lemmas_cmd(fmt):
    """List the registered lemma ids with their claims and command templates."""
    cat = list_lemmas()
    if fmt == "json":
        click.echo(json.dumps(cat, indent=2))
        return
    for entry in cat:
        defaults = " ".join(f"{k}={','.join(map(str, v)) if isinstance(v, list) else v}"
                            for k, v in entry["defaults"].items())
        click.echo(f"{entry['lemma']}\t{entry['command']}\t{defaults}\t{entry['claim']}")


@main.command("fixture")
@click.argument("name")
@click.option("--out-dir", type=click.Path(file_okay=False), default=".", show_default=True)
def fixture_cmd(name, out_dir):
    """Write a worked-example fixture as JSON files."""
    try:
        paths = emit_fixture(name, out_dir)
    except FixtureError as exc:
        raise click.UsageError(str(exc.args[0])) from None
    for p in paths:
        click.echo(str(p))


@main.command("validate")
@click.argument("paths", nargs=-1, required=True, type=click.Path(dir_okay=False))
def validate_cmd(paths):
    """Check JSON documents against the type invariants."""
    bad = 0
    for p in paths:
        diags = validate_file(p)
        if diags:
            bad += 1
            for dg in diags:
                click.echo(str(dg), err=True)
        else:
            click.echo(f"{p}: ok")
    sys.exit(EXIT_FAILED if bad else EXIT_OK)


if __name__ == "__main__":  # pragma: no cover
    main()
