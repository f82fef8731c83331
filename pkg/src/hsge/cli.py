"""Command-line entry point.

Three subcommands drive the pipeline: ``embed`` writes embedding matrices
and the vocabulary, ``evaluate`` runs the dataset's evaluation protocol
(cross-validation or the predefined split), and ``inspect`` dumps
hierarchies, hash audits and vocabulary summaries. Every run is
reproducible from its flags: outputs embed the resolved configuration and
identical invocations write byte-identical files (timings go to a
sidecar file).

Exit codes: 0 success, 2 configuration error, 3 data error, 4 runtime
error. Failures print one machine-readable JSON object to stderr.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from pathlib import Path

import click

from . import datasets as io
from .classify import DEFAULT_C_GRID
from .errors import FormatVersionError, HsgeError, ParameterError, ParseError
from .hashing import degree_hash, betweenness_hash
from .graph import Graphlet
from .pipeline import RunConfig, build_hierarchies, evaluate_dataset, embed_dataset, prepare_graphs

MODE_CHOICES = ("baseline", "pyramidal", "generalized-pyramidal",
                "hierarchical", "exhaustive")


def _fail(code: int, exc: BaseException) -> None:
    click.echo(json.dumps({"error": {"type": type(exc).__name__,
                                     "message": str(exc)}}), err=True)
    sys.exit(code)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParseError, FileNotFoundError, FormatVersionError) as exc:
            _fail(3, exc)
        except ParameterError as exc:
            _fail(2, exc)
        except click.ClickException:
            raise
        except Exception as exc:  # noqa: BLE001 - report, do not traceback
            _fail(4, exc)
    return wrapper


def _common_options(fn):
    options = [
        click.option("--dataset", "manifest_path", required=True,
                     type=click.Path(), help="Dataset manifest (.toml/.json)."),
        click.option("--data-dir", default=None, type=click.Path(),
                     help="Dataset root (default: $HSGE_DATA_DIR or ./data)."),
        click.option("--mode", default="baseline",
                     type=click.Choice(MODE_CHOICES), show_default=True),
        click.option("--levels", "-L", default=2, show_default=True,
                     help="Hierarchy levels above the base graph."),
        click.option("--use-levels", "K", default=None, type=int,
                     help="Embedding levels K (default: --levels)."),
        click.option("--k1", default=None, type=int,
                     help="Max slice span (default per mode)."),
        click.option("--k2", default=None, type=int,
                     help="Max union span (default per mode)."),
        click.option("--ratio", "-r", default=None, type=float,
                     help="Reduction ratio r in (0,1]; next level has "
                          "floor(r*n) nodes."),
        click.option("--reduction", "-R", default=None, type=float,
                     help="Reduction factor R (R=2 halves); same knob as "
                          "--ratio, r = 1/R."),
        click.option("--delta", default=0.0, show_default=True,
                     help="Connection-ratio threshold for level edges."),
        click.option("--M", "M", default=10000, show_default=True,
                     help="Sampling restarts per block."),
        click.option("--T", "T", default=5, show_default=True,
                     help="Max graphlet edge count."),
        click.option("--labeled/--unlabeled", default=False, show_default=True,
                     help="Append symbol signatures to graphlet codes."),
        click.option("--discretize-k", default=8, show_default=True,
                     help="k-means clusters for continuous attributes."),
        click.option("--normalization", default="l1",
                     type=click.Choice(["l1", "raw"]), show_default=True),
        click.option("--seed", default=0, show_default=True),
        click.option("--folds", default=10, show_default=True),
        click.option("--repeat", "repetitions", default=1, show_default=True,
                     help="Full-pipeline repetitions with reseeded sampling."),
        click.option("--c-grid", default=",".join(str(c) for c in DEFAULT_C_GRID),
                     show_default=True, help="Comma-separated C grid."),
        click.option("--jobs", default=None, type=int,
                     help="Worker processes (default: available cores)."),
        click.option("--out", default="hsge-out", type=click.Path(),
                     show_default=True, help="Output directory."),
    ]
    for opt in reversed(options):
        fn = opt(fn)
    return fn


def _build_config(mode, levels, K, k1, k2, ratio, reduction, delta, M, T,
                  labeled, discretize_k, normalization, seed, folds,
                  repetitions, c_grid, jobs) -> RunConfig:
    if ratio is not None and reduction is not None:
        raise ParameterError("--ratio and --reduction are the same knob; "
                             "give only one")
    if reduction is not None:
        if reduction < 1.0:
            raise ParameterError("--reduction must be >= 1")
        r = 1.0 / reduction
    else:
        r = 0.5 if ratio is None else ratio
    try:
        grid = tuple(float(tok) for tok in c_grid.split(",") if tok)
    except ValueError as exc:
        raise ParameterError(f"bad --c-grid: {exc}") from exc
    return RunConfig(mode=mode.replace("-", "_"), levels=levels, K=K,
                     k1=k1, k2=k2, r=r, delta=delta, M=M, T=T,
                     labeled=labeled, discretize_k=discretize_k,
                     normalization=normalization, seed=seed, folds=folds,
                     repetitions=repetitions, C_grid=grid,
                     jobs=jobs if jobs is not None else (os.cpu_count() or 1))


def _load(manifest_path, data_dir):
    manifest = io.load_manifest(manifest_path)
    return io.load_dataset(manifest, data_dir)


def _outdir(out) -> Path:
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


@click.group()
def main():
    """Graph embeddings from hierarchical stochastic graphlet statistics."""


@main.command()
@_common_options
@_guarded
def embed(manifest_path, data_dir, out, **cfg_kwargs):
    """Embed a dataset; write embeddings, vocabulary and layout."""
    config = _build_config(**cfg_kwargs)
    ds = _load(manifest_path, data_dir)
    matrix, layout, vocab, _ = embed_dataset(ds, config)
    outdir = _outdir(out)
    echo = {"dataset": ds.name, **config.to_dict()}
    io.save_embeddings_csv(outdir / "embeddings.csv", matrix, layout, echo)
    io.save_embeddings_bin(outdir / "embeddings.bin", matrix, layout, echo)
    io.save_vocabulary(outdir / "vocabulary.txt", vocab, echo)
    click.echo(f"embedded {len(ds.graphs)} graphs -> {matrix.shape[1]} dims "
               f"({outdir})")


def _parse_sweep(spec: str):
    name, _, rng = spec.partition("=")
    name = name.strip()
    if name not in ("levels", "T", "R"):
        raise ParameterError(f"unknown sweep parameter {name!r} "
                             "(use levels, T or R)")
    if ".." in rng:
        lo, _, hi = rng.partition("..")
        try:
            values = list(range(int(lo), int(hi) + 1))
        except ValueError as exc:
            raise ParameterError(f"bad sweep range {rng!r}") from exc
    else:
        try:
            values = [int(tok) for tok in rng.split(",") if tok]
        except ValueError as exc:
            raise ParameterError(f"bad sweep list {rng!r}") from exc
    if not values:
        raise ParameterError("empty sweep")
    return name, values


def _sweep_config(config: RunConfig, name: str, value: int) -> RunConfig:
    base = config.to_dict()
    kwargs = dict(mode=base["mode"], levels=base["levels"], K=None,
                  k1=None, k2=None, r=base["r"], delta=base["delta"],
                  M=base["M"], T=base["T"], labeled=base["labeled"],
                  discretize_k=base["discretize_k"],
                  normalization=base["normalization"], seed=base["seed"],
                  folds=base["folds"], repetitions=base["repetitions"],
                  C_grid=tuple(base["C_grid"]), jobs=base["jobs"])
    if name == "levels":
        kwargs["levels"] = value
    elif name == "T":
        kwargs["T"] = value
    else:
        kwargs["r"] = 1.0 / value
    return RunConfig(**kwargs)


@main.command()
@_common_options
@click.option("--emit-plot-data", default=None,
              help="Sweep one parameter, e.g. levels=1..4, T=3..7, R=1..4; "
                   "writes (value, accuracy) CSV series.")
@_guarded
def evaluate(manifest_path, data_dir, out, emit_plot_data, **cfg_kwargs):
    """Evaluate a dataset with its protocol; write the report."""
    config = _build_config(**cfg_kwargs)
    ds = _load(manifest_path, data_dir)
    outdir = _outdir(out)
    if emit_plot_data:
        name, values = _parse_sweep(emit_plot_data)
        rows = []
        for value in values:
            report = evaluate_dataset(ds, _sweep_config(config, name, value))
            rows.append((value, report.mean_accuracy, report.std_accuracy))
            click.echo(f"{name}={value}: {report.mean_accuracy:.2f} "
                       f"(+-{report.std_accuracy:.2f})")
        lines = [f"{name},accuracy,std"]
        lines += [f"{v},{a!r},{s!r}" for (v, a, s) in rows]
        (outdir / f"plot_{name}.csv").write_text("\n".join(lines) + "\n")
        return
    report = evaluate_dataset(ds, config)
    report.config = {"dataset": ds.name, **config.to_dict()}
    io.save_report(outdir / "report.json", report.to_dict())
    (outdir / "report.txt").write_text(report.table() + "\n")
    (outdir / "timings.json").write_text(
        json.dumps(report.timings, sort_keys=True) + "\n")
    click.echo(f"{ds.name}: mean accuracy {report.mean_accuracy:.2f} "
               f"(std {report.std_accuracy:.2f}) -> {outdir}")


@main.command()
@_common_options
@click.option("--graph-index", default=0, show_default=True,
              help="Graph whose hierarchy to dump.")
@click.option("--audit-max-edges", default=4, show_default=True,
              help="Exhaustive hash audit bound (1..6).")
@click.option("--vocab", "vocab_path", default=None, type=click.Path(),
              help="Summarize an existing vocabulary file.")
@_guarded
def inspect(manifest_path, data_dir, out, graph_index, audit_max_edges,
            vocab_path, **cfg_kwargs):
    """Dump one graph's hierarchy, a hash audit, and vocabulary summary."""
    from .oracle import enumerate_connected

    config = _build_config(**cfg_kwargs)
    ds = _load(manifest_path, data_dir)
    outdir = _outdir(out)
    echo = {"dataset": ds.name, **config.to_dict()}

    if not (0 <= graph_index < len(ds.graphs)):
        raise ParameterError(f"graph index {graph_index} outside dataset "
                             f"of {len(ds.graphs)} graphs")
    graphs = prepare_graphs(ds, config)
    hierarchy = build_hierarchies([graphs[graph_index]], config)[0]
    doc = io.hierarchy_to_json(hierarchy)
    doc["config"] = echo
    (outdir / f"hierarchy_{graph_index}.json").write_text(
        json.dumps(doc, sort_keys=True, indent=2) + "\n")
    sizes = [g.num_nodes for g in hierarchy.levels]
    click.echo(f"hierarchy of graph {graph_index}: level sizes {sizes}")

    universe = enumerate_connected(audit_max_edges)
    audit_lines = ["# hsge hash audit", "# config=" + json.dumps(echo, sort_keys=True),
                   "size\tclasses\tdegree_codes\tbetweenness_codes"]
    for t in range(1, audit_max_edges + 1):
        reps = [c.rep for _, c in universe.classes_with(t)]
        glets = [Graphlet(rep, rep.edges) for rep in reps]
        deg = len({degree_hash(g) for g in glets})
        bet = len({betweenness_hash(g) for g in glets})
        audit_lines.append(f"{t}\t{len(reps)}\t{deg}\t{bet}")
        click.echo(f"t={t}: {len(reps)} classes, degree codes {deg}, "
                   f"betweenness codes {bet}")
    (outdir / "hash_audit.txt").write_text("\n".join(audit_lines) + "\n")

    if vocab_path:
        vocab = io.load_vocabulary(vocab_path)
        lines = ["# hsge vocabulary summary",
                 "# config=" + json.dumps(echo, sort_keys=True),
                 "size\tbins"]
        for t in vocab.sizes():
            lines.append(f"{t}\t{vocab.num_bins(t)}")
            click.echo(f"vocabulary size {t}: {vocab.num_bins(t)} bins")
        (outdir / "vocab_summary.txt").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
