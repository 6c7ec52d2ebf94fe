"""Operator-facing command line: ingest, validate, query, export, report."""

from __future__ import annotations

import csv
import io
import sys
from dataclasses import dataclass
from pathlib import Path

import click

from . import discovery, report as report_mod, validate as validate_mod
from .errors import ChainsemError, CriteriaError, EmptyCriteria, ParseError
from .ingest.fixtures import read_fixture
from .ingest.records import Corpus
from .ingest.rpc import RpcClient
from .ontology import DEFAULT_BASE_NS, INSTANCE_SUFFIX, Iri, serialize, sniff_format
from .ontology import vocab as V
from .ontology.graph import Graph, Namespaces
from .ontology.serialize import FORMATS, parse
from .pipeline import map_corpus

ACTIONS = {"mint": V.MINT, "burn": V.BURN, "transfer": V.TRANSFER, "delegate": V.DELEGATE}


class InputError(click.ClickException):
    exit_code = 2


@dataclass
class RunConfig:
    fixture: Path | None
    rpc_url: str | None
    from_block: int | None
    to_block: int | None
    out: Path
    format: str
    namespace: str

    def __post_init__(self):
        if (self.fixture is None) == (self.rpc_url is None):
            raise InputError("exactly one of --fixture and --rpc-url is required")
        if self.rpc_url is not None:
            if self.from_block is None or self.to_block is None:
                raise InputError("--rpc-url needs --from-block and --to-block")
            if self.to_block < self.from_block:
                raise InputError("empty block range")

    def namespaces(self) -> Namespaces:
        return Namespaces(instance=self.namespace + INSTANCE_SUFFIX)


def _load_graph(path: Path) -> Graph:
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return parse(data, sniff_format(data))
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from exc


@click.group()
def main():
    """Index Ethereum chain data into a queryable knowledge graph."""


@main.command()
@click.option("--fixture", type=click.Path(path_type=Path), help="Fixture corpus to ingest.")
@click.option("--rpc-url", envvar="CHAINSEM_RPC_URL",
              help="JSON-RPC endpoint (or set CHAINSEM_RPC_URL).")
@click.option("--from-block", type=int, default=None)
@click.option("--to-block", type=int, default=None)
@click.option("--out", type=click.Path(path_type=Path), required=True,
              help="Graph file to write.")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="ntriples")
@click.option("--namespace", default=DEFAULT_BASE_NS, show_default=True,
              help="Base namespace for minted individuals.")
@click.option("--summary", type=click.Path(path_type=Path), default=None,
              help="Also write the summary report to this file.")
def ingest(fixture, rpc_url, from_block, to_block, out, fmt, namespace, summary):
    """Ingest chain data, map it, and persist the resulting graph."""
    config = RunConfig(fixture, rpc_url, from_block, to_block, out, fmt, namespace)
    try:
        if config.fixture is not None:
            corpus = read_fixture(config.fixture)
        else:
            client = RpcClient(config.rpc_url)
            corpus = Corpus(blocks=[], receipts=[])
            for number in range(config.from_block, config.to_block + 1):
                block, receipts = client.fetch_block(number)
                corpus.blocks.append(block)
                corpus.receipts.extend(receipts)
        graph, _, ingest_summary = map_corpus(corpus, namespaces=config.namespaces())
    except ChainsemError as exc:
        raise InputError(str(exc)) from exc
    out.write_bytes(serialize(graph, fmt))
    text = "\n".join(ingest_summary.lines()) + "\n"
    click.echo(text, nl=False)
    if summary is not None:
        summary.write_text(text)


@main.command()
@click.argument("graph_file", type=click.Path(path_type=Path))
@click.option("--fail-fast", is_flag=True, help="Exit 1 when any violation is found.")
def validate(graph_file, fail_fast):
    """Check all conditionals and lifecycle invariants of a graph."""
    graph = _load_graph(graph_file)
    violations = validate_mod.run_validation(graph)
    if not violations:
        click.echo("OK: no violations")
        return
    for violation in violations:
        click.echo(violation.line())
    click.echo(f"{len(violations)} violation(s)")
    if fail_fast:
        sys.exit(1)


def _class_by_name(name: str) -> Iri:
    try:
        return V.Vocabulary().class_by_name(name)
    except KeyError:
        raise InputError(f"unknown vocabulary class: {name}") from None


@main.command()
@click.argument("graph_file", type=click.Path(path_type=Path))
@click.option("--agent-category", default=None, help="Vocabulary class name, e.g. "
              "EthereumERC721SmartContractAgent.")
@click.option("--action", type=click.Choice(sorted(ACTIONS)), default=None)
@click.option("--token-class", default=None, help="Vocabulary class name, e.g. "
              "EthereumTokenERC721.")
@click.option("--owner", default=None, help="Wallet address.")
@click.option("--plan", "plan_file", type=click.Path(path_type=Path), default=None,
              help="Execute a previously saved query plan instead of criteria flags.")
@click.option("--sparql-out", type=click.Path(path_type=Path), default=None,
              help="Write the rendered SPARQL to this file.")
@click.option("--show-sparql", is_flag=True, help="Print the rendered SPARQL before the table.")
def query(graph_file, agent_category, action, token_class, owner, plan_file, sparql_out,
          show_sparql):
    """Run a discovery query and print the result table as CSV."""
    graph = _load_graph(graph_file)
    if plan_file is not None:
        try:
            plan = discovery.QueryPlan.from_json(plan_file.read_text())
        except (OSError, ValueError, KeyError, CriteriaError) as exc:
            raise InputError(f"bad plan file: {exc}") from exc
    else:
        criteria = discovery.Criteria(
            agent_category=_class_by_name(agent_category) if agent_category else None,
            action=ACTIONS[action] if action else None,
            token_class=_class_by_name(token_class) if token_class else None,
            owner=owner,
        )
        try:
            plan = discovery.compile_criteria(criteria, graph.vocabulary)
        except EmptyCriteria as exc:
            raise click.UsageError(str(exc)) from exc
        except CriteriaError as exc:
            raise InputError(str(exc)) from exc
    sparql = discovery.render_sparql(plan, graph.namespaces)
    if sparql_out is not None:
        sparql_out.write_text(sparql)
    if show_sparql:
        for line in sparql.rstrip("\n").split("\n"):
            click.echo(f"# {line}")
    rows = discovery.execute(plan, graph)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([v.name for v in plan.projection])
    for row in rows:
        writer.writerow(
            [t.rendered if isinstance(t, Iri) else t.lexical for t in row]
        )
    click.echo(buffer.getvalue(), nl=False)


@main.command()
@click.argument("graph_file", type=click.Path(path_type=Path))
@click.option("--format", "fmt", type=click.Choice(FORMATS), required=True)
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Output file (default: stdout).")
def export(graph_file, fmt, out):
    """Re-serialize a graph file in the requested format."""
    graph = _load_graph(graph_file)
    data = serialize(graph, fmt)
    if out is None:
        click.echo(data.decode("utf-8"), nl=False)
    else:
        out.write_bytes(data)


@main.command()
@click.argument("graph_file", type=click.Path(path_type=Path))
@click.option("--out-dir", type=click.Path(path_type=Path), required=True,
              help="Directory for summary.csv and the figures.")
def report(graph_file, out_dir):
    """Write a CSV summary and rendered figures for a graph."""
    graph = _load_graph(graph_file)
    summary_path, figures = report_mod.write_report(graph, out_dir)
    click.echo(str(summary_path))
    for figure in figures:
        click.echo(str(figure))


if __name__ == "__main__":
    main()
