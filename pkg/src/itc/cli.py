"""Command-line surface: build the tree, cut it, assign clusters, run the
whole pipeline, evaluate, run the permutation experiment, or serve the
interactive session. Report paths write figures next to the delimited
output when --fig-dir is given."""

from __future__ import annotations

import os
from pathlib import Path

import click

from . import pipeline, plots, serialize
from .cutting import cut_k_longest, decision_graph, k_dcc_cut, supervised_cut
from .data_model import Dataset, DistanceMatrix, PotentialField, load_dataset
from .intree import build_intree, validate_intree
from .metrics import distance_matrix_for, load_distance_cache, save_distance_cache
from .potential import auto_sigma, compute_potentials
from .rootfind import CycleError, compute_tree_height, find_roots_doubling, \
    merge_singletons
from .serialize import TreeDocument


class CliError(click.ClickException):
    exit_code = 1


def _fail(msg: str) -> "CliError":
    return CliError(msg)


def _load_dataset(path: str) -> Dataset:
    if not Path(path).exists():
        raise _fail(f"input file not found: {path}")
    try:
        return load_dataset(path)
    except ValueError as exc:
        raise _fail(f"{path}: {exc}")


def _distances(ds: Dataset, cache: str | None) -> DistanceMatrix:
    if cache and Path(cache).exists():
        dm = load_distance_cache(cache)
        if dm.n != ds.n:
            raise _fail(f"distance cache {cache} is for n={dm.n}, dataset has n={ds.n}")
        return dm
    dm = distance_matrix_for(ds)
    if cache:
        save_distance_cache(dm, cache)
    return dm


def _resolve_sigma(dm: DistanceMatrix, sigma: str) -> float:
    if sigma == "auto":
        try:
            return auto_sigma(dm)
        except ValueError as exc:
            raise _fail(str(exc))
    try:
        value = float(sigma)
    except ValueError:
        raise _fail(f"--sigma must be a positive number or 'auto', got {sigma!r}")
    if not value > 0:
        raise _fail(f"--sigma must be positive, got {value}")
    return value


def _load_tree(path: str) -> TreeDocument:
    if not Path(path).exists():
        raise _fail(f"tree file not found: {path}")
    try:
        return serialize.load_tree(path)
    except ValueError as exc:
        raise _fail(str(exc))


def resolve_port(flag_value: int | None, default: int = 8642) -> int:
    """ITC_PORT wins over the flag, which wins over the default."""
    env_port = os.environ.get("ITC_PORT")
    if env_port:
        try:
            return int(env_port)
        except ValueError:
            raise _fail(f"ITC_PORT must be an integer, got {env_port!r}")
    return flag_value if flag_value is not None else default


@click.group()
def main():
    """In-tree clustering toolkit."""


@main.command()
@click.option("--input", "input_path", required=True, help="dataset CSV")
@click.option("--sigma", default="auto", show_default=True,
              help="potential bandwidth, a number or 'auto' (mean off-diagonal distance)")
@click.option("--out", "out_path", required=True, help="tree JSON to write")
@click.option("--cache-dist", default=None, help="binary distance-matrix cache to reuse/create")
def build(input_path, sigma, out_path, cache_dist):
    """Compute distances and potentials, link the in-tree, write tree JSON."""
    ds = _load_dataset(input_path)
    dm = _distances(ds, cache_dist)
    sig = _resolve_sigma(dm, sigma)
    pf = compute_potentials(dm, sig)
    tree = build_intree(dm, pf)
    doc = TreeDocument(tree=tree, sigma=sig, potentials=pf.p, coords=ds.coords_2d())
    serialize.save_tree(doc, out_path)
    click.echo(f"built in-tree over {ds.n} points (sigma={sig!r}, "
               f"root={int(tree.roots()[0]) + 1}) -> {out_path}")


@main.command()
@click.option("--tree", "tree_path", required=True, help="tree JSON from `itc build`")
@click.option("--method", required=True,
              type=click.Choice(["k", "supervised", "kdcc", "interactive"]))
@click.option("--k", "k_clusters", type=int, default=None, help="cluster count for k/kdcc")
@click.option("--labels", "labels_path", default=None, help="supervision CSV (index,label)")
@click.option("--out", "out_path", required=True, help="updated tree JSON")
def cut(tree_path, method, k_clusters, labels_path, out_path):
    """Cut inter-cluster edges by one of the automatic or supervised methods."""
    if method == "interactive":
        raise _fail("interactive cutting runs in the browser: start `itc serve` instead")
    doc = _load_tree(tree_path)
    pf = PotentialField(p=doc.potentials, sigma=doc.sigma)
    try:
        if method == "k":
            if k_clusters is None:
                raise _fail("--method k requires --k")
            cut_k_longest(doc.tree, k_clusters)
        elif method == "kdcc":
            if k_clusters is None:
                raise _fail("--method kdcc requires --k")
            k_dcc_cut(doc.tree, pf, k_clusters)
        else:
            if labels_path is None:
                raise _fail("--method supervised requires --labels")
            if not Path(labels_path).exists():
                raise _fail(f"labels file not found: {labels_path}")
            sup = serialize.load_supervision_csv(labels_path)
            supervised_cut(doc.tree, sup)
    except ValueError as exc:
        raise _fail(str(exc))
    serialize.save_tree(doc, out_path)
    click.echo(f"{len(doc.tree.cut_log)} cut(s) logged, "
               f"{doc.tree.root_count()} root(s) -> {out_path}")


@main.command()
@click.option("--tree", "tree_path", required=True, help="tree JSON")
@click.option("--out", "out_path", required=True, help="assignment CSV")
@click.option("--merge-singletons", "merge", is_flag=True,
              help="reattach singleton clusters through their pre-cut edges")
def cluster(tree_path, out_path, merge):
    """Find every point's root and write the assignment CSV."""
    doc = _load_tree(tree_path)
    problems = validate_intree(doc.tree)
    if problems:
        raise _fail("invalid tree: " + "; ".join(str(p) for p in problems))
    try:
        a = find_roots_doubling(doc.tree)
        if merge:
            _, a = merge_singletons(doc.tree, a)
        height = compute_tree_height(doc.tree)
    except CycleError as exc:
        raise _fail(str(exc))
    serialize.save_assignment_csv(a, out_path)
    click.echo(f"H={height} S={a.rounds_used} clusters={a.cluster_count} -> {out_path}")


@main.command()
@click.option("--input", "input_path", required=True)
@click.option("--sigma", default="auto", show_default=True)
@click.option("--method", default="k", type=click.Choice(["k", "supervised", "kdcc"]))
@click.option("--k", "k_clusters", type=int, default=None)
@click.option("--labels", "labels_path", default=None, help="supervision CSV")
@click.option("--n-supervised", type=int, default=None,
              help="sample this many labeled points from the truth column")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--merge-singletons", "merge_single", is_flag=True)
@click.option("--merge-by-label", "merge_label", is_flag=True)
@click.option("--out-dir", required=True, help="directory for tree/assignments/report")
@click.option("--fig-dir", default=None, help="directory for figures")
@click.option("--cache-dist", default=None)
def run(input_path, sigma, method, k_clusters, labels_path, n_supervised, seed,
        merge_single, merge_label, out_dir, fig_dir, cache_dist):
    """Full pipeline: writes tree.json, assignments.csv, report.json."""
    ds = _load_dataset(input_path)
    dm = _distances(ds, cache_dist)
    sup = serialize.load_supervision_csv(labels_path) if labels_path else None
    cfg = pipeline.RunConfig(
        sigma=_resolve_sigma(dm, sigma), cut_method=method, k_clusters=k_clusters,
        supervision=sup, n_supervised=n_supervised,
        merge_singletons=merge_single, merge_by_label=merge_label, seed=seed)
    try:
        tree, a, report = pipeline.run(ds, cfg, dm=dm)
    except ValueError as exc:
        raise _fail(str(exc))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pf = compute_potentials(dm, cfg.sigma)
    serialize.save_tree(TreeDocument(tree=tree, sigma=cfg.sigma, potentials=pf.p,
                                     coords=ds.coords_2d()), out / "tree.json")
    serialize.save_assignment_csv(a, out / "assignments.csv")
    serialize.save_report_json(report, out / "report.json")
    if fig_dir:
        figs = Path(fig_dir)
        figs.mkdir(parents=True, exist_ok=True)
        plots.save_decision_graph_figure(decision_graph(tree, pf), figs / "decision_graph.png")
        plots.save_cluster_sizes_figure(a, figs / "cluster_sizes.png")
        if ds.coords_2d() is not None:
            plots.save_tree_figure(tree, ds.coords_2d(), figs / "tree.png", assignment=a)
    err = "n/a" if report.error_rate is None else f"{report.error_rate:.4f}"
    click.echo(f"clusters={report.cluster_count} error_rate={err} "
               f"H={report.height} S={report.rounds_used} -> {out_dir}")


@main.command(name="eval")
@click.option("--input", "input_path", required=True, help="dataset CSV with a label column")
@click.option("--assignments", "assign_path", required=True)
@click.option("--labels", "labels_path", default=None, help="supervision CSV")
@click.option("--tree", "tree_path", default=None, help="tree JSON for H and S")
@click.option("--out", "out_path", required=True, help="report JSON")
def eval_cmd(input_path, assign_path, labels_path, tree_path, out_path):
    """Score an assignment against the dataset's truth labels."""
    ds = _load_dataset(input_path)
    if ds.truth_labels is None:
        raise _fail(f"{input_path} has no label column to evaluate against")
    if not Path(assign_path).exists():
        raise _fail(f"assignments file not found: {assign_path}")
    a = serialize.load_assignment_csv(assign_path)
    if a.n != ds.n:
        raise _fail(f"assignment covers {a.n} points, dataset has {ds.n}")
    sup = serialize.load_supervision_csv(labels_path) if labels_path else None
    height = 0
    if tree_path:
        doc = _load_tree(tree_path)
        height = compute_tree_height(doc.tree)
        a.rounds_used = find_roots_doubling(doc.tree).rounds_used
    report = pipeline.evaluate(a, ds.truth_labels, sup, height=height)
    serialize.save_report_json(report, out_path)
    click.echo(f"clusters={report.cluster_count} error_rate={report.error_rate:.4f} "
               f"-> {out_path}")


@main.command()
@click.option("--input", "input_path", required=True)
@click.option("--sigma", default="auto", show_default=True)
@click.option("--k", "k_clusters", type=int, required=True)
@click.option("--trials", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True, help="per-trial statistics CSV")
@click.option("--fig-dir", default=None)
@click.option("--cache-dist", default=None)
def permute(input_path, sigma, k_clusters, trials, seed, out_path, fig_dir, cache_dist):
    """Cluster random row permutations and report partition disagreement."""
    ds = _load_dataset(input_path)
    dm = _distances(ds, cache_dist)
    cfg = pipeline.RunConfig(sigma=_resolve_sigma(dm, sigma), cut_method="k",
                             k_clusters=k_clusters, seed=seed)
    try:
        stats = pipeline.permutation_experiment(ds, cfg, trials)
    except ValueError as exc:
        raise _fail(str(exc))
    serialize.save_permutation_csv(stats, out_path)
    if fig_dir:
        figs = Path(fig_dir)
        figs.mkdir(parents=True, exist_ok=True)
        plots.save_permutation_figure(stats, figs / "permutation.png")
    click.echo(f"disagreement mean={stats.mean:.4f} sd={stats.sd:.4f} "
               f"over {trials} trial(s) -> {out_path}")


@main.command()
@click.option("--input", "input_path", required=True)
@click.option("--sigma", default="auto", show_default=True)
@click.option("--port", type=int, default=None,
              help=f"listen port (default {8642}; env ITC_PORT overrides)")
@click.option("--ui", "ui_dir", default=None, help="static frontend directory to serve at /")
@click.option("--cache-dist", default=None)
def serve(input_path, sigma, port, ui_dir, cache_dist):
    """Serve the interactive cutting session over HTTP."""
    from .server import DEFAULT_PORT, Session, serve as run_server

    ds = _load_dataset(input_path)
    dm = _distances(ds, cache_dist)
    sig = _resolve_sigma(dm, sigma)
    chosen = resolve_port(port, DEFAULT_PORT)
    session = Session.start(ds, dm, sig)
    mode = "tree + decision graph" if ds.coords_2d() is not None else "decision graph only"
    click.echo(f"session over {ds.n} points ({mode}) on http://127.0.0.1:{chosen}")
    try:
        run_server(session, port=chosen, ui_dir=ui_dir)
    except OSError as exc:
        raise _fail(f"cannot listen on port {chosen}: {exc}")


if __name__ == "__main__":
    main()
