"""Command line interface.

Every subcommand reads the same matrix pipeline: a flow matrix CSV via
``--flows``, optionally transposed on read, scaled by regional purchase
coefficients (``--rpc``), turned into flows by an output vector
(``--output-vector``), and stripped of isolated sectors
(``--drop-isolated``).  Results go to ``--out`` (default stdout) as CSV
or JSON.

Exit codes: 0 success, 1 usage error, 2 bad input data, 3 numerical
failure.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass

import click
import numpy as np

from . import dataio, graph, multipliers, paths, randomwalk
from .exceptions import DataError, NumericalError, OutOfRangeError
from .graph import FlowMatrix
from .oracle import WalkConfig, simulate_mfpt, simulate_visits
from .ranking import RankTable

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


@dataclass
class _Pipeline:
    coeff: FlowMatrix
    flows: FlowMatrix
    employment: np.ndarray | None
    removed: tuple[int, ...]


def _load(
    flows_path,
    transpose: bool,
    rpc_path,
    output_path,
    drop_isolated: bool,
    employment_path=None,
) -> _Pipeline:
    fm = dataio.parse_matrix_csv(flows_path, transpose=transpose)
    if rpc_path:
        fm = multipliers.apply_rpc(fm, dataio.read_rpc(rpc_path))
    employment = (
        dataio.read_sector_vector(employment_path, fm.sectors)
        if employment_path
        else None
    )
    coeff = fm
    if output_path:
        output = dataio.read_sector_vector(output_path, fm.sectors)
        fm = multipliers.regional_inputs(fm, output)
    removed: tuple[int, ...] = ()
    if drop_isolated:
        fm, removed = graph.drop_isolated(fm)
        if removed:
            keep = [i for i in range(coeff.n) if i not in set(removed)]
            coeff = graph.subset(coeff, keep)
            if employment is not None:
                employment = employment[keep]
    return _Pipeline(coeff, fm, employment, removed)


def _input_options(f):
    opts = [
        click.option(
            "--flows",
            "flows_path",
            required=True,
            type=click.Path(dir_okay=False),
            help="Square flow matrix CSV.",
        ),
        click.option(
            "--transpose",
            is_flag=True,
            help="Transpose the matrix on read (rows are supplying sectors).",
        ),
        click.option(
            "--rpc",
            "rpc_path",
            type=click.Path(dir_okay=False),
            help="Regional purchase coefficients (vector or matrix CSV).",
        ),
        click.option(
            "--output-vector",
            "output_path",
            type=click.Path(dir_okay=False),
            help="Per-sector output levels; scales each row into flows.",
        ),
        click.option(
            "--drop-isolated",
            is_flag=True,
            help="Remove sectors with no flow in or out before computing.",
        ),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _output_options(f):
    opts = [
        click.option("--out", default="-", help="Output path, '-' for stdout."),
        click.option(
            "--format",
            "fmt",
            type=click.Choice(["csv", "json"]),
            default="csv",
            help="Output format.",
        ),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _solver_options(f):
    opts = [
        click.option(
            "--tol",
            default=randomwalk.DEFAULT_TOL,
            show_default=True,
            help="Residual bound for linear solves.",
        ),
        click.option(
            "--allow-unreachable",
            is_flag=True,
            help="Score over reachable pairs instead of failing.",
        ),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _alpha_option(f):
    return click.option(
        "--alpha",
        "alphas",
        multiple=True,
        type=float,
        help="Weight exponent; repeatable. Default grid: 0, 0.5, 1, 1.5.",
    )(f)


def _writable(out):
    if out == "-" or out is None:
        return click.get_text_stream("stdout")
    return out


def _emit_scores(sectors, named, out, fmt):
    """Write (name, CentralityVector) columns as a score table."""
    if fmt == "json":
        rows = []
        for i, sector in enumerate(sectors):
            row = {"sector_id": sector.code, "description": sector.label}
            for name, cv in named:
                row[name] = "UNDEF" if cv.undefined[i] else float(cv.scores[i])
            rows.append(row)
        _emit_json(rows, out)
    else:
        columns = [(name, cv.scores, cv.undefined) for name, cv in named]
        dataio.write_score_table(sectors, columns, _writable(out))


def _emit_json(payload, out) -> None:
    dest = _writable(out)
    if hasattr(dest, "write"):
        json.dump(payload, dest, indent=2)
        dest.write("\n")
    else:
        with open(dest, "w", encoding="utf-8", newline="") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")


def _path_column(cv) -> str:
    alpha = cv.meta["alpha"]
    if alpha == 0:
        return cv.measure
    return f"{cv.measure}_a{alpha:g}"


def _sector_index(fm: FlowMatrix, token: str, name: str) -> int:
    for sector in fm.sectors:
        if sector.code == token:
            return sector.id
    raise OutOfRangeError(f"{name} {token!r} is not a sector in the matrix")


@click.group()
def cli():
    """Key-sector analysis of inter-sector flow networks."""


@cli.command("rwc")
@_input_options
@_output_options
@_solver_options
@click.option(
    "--dump-mfpt",
    "dump_mfpt",
    type=click.Path(dir_okay=False, writable=True),
    help="Also write the full first-passage time matrix to this CSV.",
)
def cmd_rwc(flows_path, transpose, rpc_path, output_path, drop_isolated,
            out, fmt, tol, allow_unreachable, dump_mfpt):
    """Random-walk closeness: how quickly walks reach each sector."""
    pipe = _load(flows_path, transpose, rpc_path, output_path, drop_isolated)
    m = graph.build_transition(pipe.flows)
    h = randomwalk.mfpt_matrix(m, tol, allow_unreachable)
    if dump_mfpt:
        dataio.write_matrix_csv(h, pipe.flows.sectors, dump_mfpt)
    cv = randomwalk.random_walk_centrality(h, allow_unreachable)
    _emit_scores(pipe.flows.sectors, [("rwc", cv)], out, fmt)


@cli.command("cbet")
@_input_options
@_output_options
@_solver_options
@click.option(
    "--cbet-exclude-endpoints",
    "exclude_endpoints",
    is_flag=True,
    help="Leave out visits a walk pays to its own source and target.",
)
def cmd_cbet(flows_path, transpose, rpc_path, output_path, drop_isolated,
             out, fmt, tol, allow_unreachable, exclude_endpoints):
    """Counting betweenness: expected walk traffic through each sector."""
    pipe = _load(flows_path, transpose, rpc_path, output_path, drop_isolated)
    m = graph.build_transition(pipe.flows)
    cv = randomwalk.counting_betweenness(
        m,
        tol=tol,
        include_endpoints=not exclude_endpoints,
        allow_unreachable=allow_unreachable,
    )
    _emit_scores(pipe.flows.sectors, [("cbet", cv)], out, fmt)


@cli.command("closeness")
@_input_options
@_output_options
@_solver_options
@_alpha_option
def cmd_closeness(flows_path, transpose, rpc_path, output_path, drop_isolated,
                  out, fmt, tol, allow_unreachable, alphas):
    """Shortest-path closeness at one or more weight exponents."""
    pipe = _load(flows_path, transpose, rpc_path, output_path, drop_isolated)
    grid = alphas or paths.DEFAULT_ALPHAS
    named = []
    for alpha in grid:
        cv = paths.closeness(
            paths.weighted_distance(pipe.flows, alpha),
            allow_unreachable=allow_unreachable,
        )
        named.append((_path_column(cv), cv))
    _emit_scores(pipe.flows.sectors, named, out, fmt)


@cli.command("betweenness")
@_input_options
@_output_options
@_alpha_option
@click.option("--normalize", is_flag=True, help="Divide by (n-1)(n-2).")
def cmd_betweenness(flows_path, transpose, rpc_path, output_path, drop_isolated,
                    out, fmt, alphas, normalize):
    """Shortest-path betweenness at one or more weight exponents."""
    pipe = _load(flows_path, transpose, rpc_path, output_path, drop_isolated)
    grid = alphas or paths.DEFAULT_ALPHAS
    named = []
    for alpha in grid:
        cv = paths.betweenness(pipe.flows, alpha, normalize=normalize)
        named.append((_path_column(cv), cv))
    _emit_scores(pipe.flows.sectors, named, out, fmt)


@cli.command("multipliers")
@_input_options
@_output_options
@click.option(
    "--employment",
    "employment_path",
    type=click.Path(dir_okay=False),
    help="Employment coefficients (sector_id,value CSV).",
)
@click.option("--tol", default=multipliers.DEFAULT_TOL, show_default=True,
              help="Residual bound for the requirement solve.")
def cmd_multipliers(flows_path, transpose, rpc_path, output_path, drop_isolated,
                    out, fmt, employment_path, tol):
    """Total requirement multipliers from an absorption matrix."""
    pipe = _load(flows_path, transpose, rpc_path, output_path, drop_isolated,
                 employment_path)
    named = [("outmult", multipliers.output_multiplier(pipe.coeff, tol))]
    if pipe.employment is not None:
        named.append(
            ("empmult", multipliers.employment_multiplier(pipe.coeff, pipe.employment, tol))
        )
    _emit_scores(pipe.coeff.sectors, named, out, fmt)


@cli.command("rank-all")
@_input_options
@_output_options
@_solver_options
@_alpha_option
@click.option(
    "--employment",
    "employment_path",
    type=click.Path(dir_okay=False),
    help="Employment coefficients; adds an empmult column.",
)
@click.option(
    "--cbet-exclude-endpoints",
    "exclude_endpoints",
    is_flag=True,
    help="Leave out endpoint visits in the cbet column.",
)
def cmd_rank_all(flows_path, transpose, rpc_path, output_path, drop_isolated,
                 out, fmt, tol, allow_unreachable, alphas, employment_path,
                 exclude_endpoints):
    """Rank every sector under each measure (competition ranking).

    Multiplier columns come from the matrix before output scaling; the
    centrality columns use the final flow matrix.  Path measures are
    added per --alpha only when one is given.
    """
    pipe = _load(flows_path, transpose, rpc_path, output_path, drop_isolated,
                 employment_path)
    named = [("outmult", multipliers.output_multiplier(pipe.coeff, tol))]
    if pipe.employment is not None:
        named.append(
            ("empmult", multipliers.employment_multiplier(pipe.coeff, pipe.employment, tol))
        )
    m = graph.build_transition(pipe.flows)
    if exclude_endpoints:
        h = randomwalk.mfpt_matrix(m, tol, allow_unreachable)
        rwc_cv = randomwalk.random_walk_centrality(h, allow_unreachable)
        cbet_cv = randomwalk.counting_betweenness(
            m, tol=tol, include_endpoints=False,
            allow_unreachable=allow_unreachable,
        )
    else:
        rwc_cv, cbet_cv, _ = randomwalk.random_walk_profile(m, tol, allow_unreachable)
    named.append(("rwc", rwc_cv))
    named.append(("cbet", cbet_cv))
    for alpha in alphas:
        clo_cv = paths.closeness(
            paths.weighted_distance(pipe.flows, alpha),
            allow_unreachable=allow_unreachable,
        )
        named.append((_path_column(clo_cv), clo_cv))
        bet_cv = paths.betweenness(pipe.flows, alpha)
        named.append((_path_column(bet_cv), bet_cv))
    table = RankTable.build(pipe.flows.sectors, named)
    if fmt == "json":
        _emit_json(table.rows(), out)
    else:
        table.to_csv(_writable(out))


@cli.command("oracle")
@_input_options
@_output_options
@click.option("--source", required=True, help="Source sector id.")
@click.option("--target", required=True, help="Target sector id.")
@click.option("--node", default=None, help="Tally visits to this sector instead.")
@click.option("--seed", default=0, show_default=True, help="64-bit RNG seed.")
@click.option("--walks", default=100_000, show_default=True,
              help="Walks to simulate for the pair.")
@click.option("--max-steps", default=10_000_000, show_default=True,
              help="Per-walk step cap.")
def cmd_oracle(flows_path, transpose, rpc_path, output_path, drop_isolated,
               out, fmt, source, target, node, seed, walks, max_steps):
    """Monte Carlo estimate of first-passage time or visit counts."""
    pipe = _load(flows_path, transpose, rpc_path, output_path, drop_isolated)
    m = graph.build_transition(pipe.flows)
    src = _sector_index(pipe.flows, source, "source")
    tgt = _sector_index(pipe.flows, target, "target")
    config = WalkConfig(seed=seed, walks_per_pair=walks, max_steps=max_steps)
    if node is None:
        measure = "mfpt"
        mean, stderr = simulate_mfpt(m, src, tgt, config)
        node_code = ""
    else:
        measure = "visits"
        nd = _sector_index(pipe.flows, node, "node")
        mean, stderr = simulate_visits(m, src, tgt, nd, config)
        node_code = node
    row = {
        "measure": measure,
        "source": source,
        "target": target,
        "node": node_code,
        "seed": int(seed),
        "walks": int(walks),
        "mean": mean,
        "stderr": stderr,
    }
    if fmt == "json":
        row["mean"] = float(mean)
        row["stderr"] = float(stderr)
        _emit_json([row], out)
    else:
        dest = _writable(out)
        text = (
            "measure,source,target,node,seed,walks,mean,stderr\n"
            f"{measure},{source},{target},{node_code},{int(seed)},{int(walks)},"
            f"{dataio.format_value(mean)},{dataio.format_value(stderr)}\n"
        )
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            with open(dest, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)


@cli.command("aggregate")
@_input_options
@_output_options
@click.option(
    "--agg-map",
    "map_path",
    required=True,
    type=click.Path(dir_okay=False),
    help="fine_id,coarse_id,coarse_label CSV covering every sector.",
)
def cmd_aggregate(flows_path, transpose, rpc_path, output_path, drop_isolated,
                  out, fmt, map_path):
    """Sum fine sectors into coarse ones and write the coarse matrix."""
    pipe = _load(flows_path, transpose, rpc_path, output_path, drop_isolated)
    mapping = dataio.read_aggregation_map(map_path, pipe.flows.sectors)
    coarse = graph.aggregate(pipe.flows, mapping)
    if fmt == "json":
        rows = []
        for i, sector in enumerate(coarse.sectors):
            row = {"sector_id": sector.code}
            for j, other in enumerate(coarse.sectors):
                row[other.code] = float(coarse.values[i, j])
            rows.append(row)
        _emit_json(rows, out)
    else:
        dataio.write_matrix_csv(coarse.values, coarse.sectors, _writable(out))


def run(argv=None) -> int:
    """Run the CLI and map exceptions onto documented exit codes."""
    try:
        cli.main(args=argv, prog_name="ionet", standalone_mode=False)
        return EXIT_OK
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except DataError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_DATA
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_DATA
    except NumericalError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())
