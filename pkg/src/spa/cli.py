"""Command-line interface: a thin client over the checking service layer.

Exit codes: 0 success, 1 proof or parse failure, 2 usage error.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .prover import Budget, BudgetExceeded, at_once
from .script import Report, check_text
from .semantics import (
    EnumerationBudgetError, describe_countermodel, find_countermodel,
)
from .syntax import ParseError, parse_formula, print_formula


@click.group()
def main() -> None:
    """A small LCF-style proof assistant for first-order logic."""


def _print_human(report: Report) -> None:
    if report.error is not None:
        e = report.error
        click.echo(f"syntax error at {e['line']}:{e['column']}: {e['message']}")
        return
    for lemma in report.lemmas:
        status = "ok" if lemma.complete else "INCOMPLETE"
        click.echo(f"lemma {lemma.name}: {status}")
        for w in lemma.warnings:
            click.echo(f"  warning: {w}")
        for step in lemma.steps:
            if step.status == "error":
                click.echo(f"  line {step.line}: error: {step.message}")
            elif step.status == "unchecked" and not lemma.complete:
                click.echo(f"  line {step.line}: unchecked")


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--json", "as_json", is_flag=True, help="emit the full JSON report")
def check(file: Path, as_json: bool) -> None:
    """Check a proof script; exit 0 iff every lemma is complete."""
    report = check_text(file.read_text(encoding="utf-8"))
    if as_json:
        click.echo(report.to_json())
    else:
        _print_human(report)
    sys.exit(0 if report.complete else 1)


@main.command()
@click.argument("formula")
@click.option("--budget", "steps", type=int, default=None,
              help="maximum number of search expansions")
def prove(formula: str, steps: int | None) -> None:
    """Run the automated prover on a formula."""
    try:
        f = parse_formula(formula)
    except ParseError as e:
        click.echo(f"parse error: {e}", err=True)
        sys.exit(1)
    budget = Budget(max_steps=steps) if steps else Budget()
    try:
        th = at_once([], f, budget)
    except BudgetExceeded as e:
        click.echo(f"BudgetExceeded: {e}")
        sys.exit(1)
    click.echo(f"proved: {th!r}")
    sys.exit(0)


@main.command(name="parse")
@click.argument("formula")
def parse_cmd(formula: str) -> None:
    """Parse a formula and echo its canonical rendering."""
    try:
        f = parse_formula(formula)
    except ParseError as e:
        click.echo(f"parse error: {e}", err=True)
        sys.exit(1)
    click.echo(print_formula(f))
    sys.exit(0)


@main.command()
@click.argument("formula")
@click.option("--max-size", type=int, default=2, show_default=True,
              help="largest domain size to search")
def models(formula: str, max_size: int) -> None:
    """Search small finite domains for a countermodel."""
    try:
        f = parse_formula(formula)
    except ParseError as e:
        click.echo(f"parse error: {e}", err=True)
        sys.exit(1)
    try:
        found = find_countermodel(f, max_size)
    except EnumerationBudgetError as e:
        click.echo(f"enumeration too large: {e}", err=True)
        sys.exit(1)
    if found is None:
        click.echo(f"no countermodel up to {max_size}")
        sys.exit(0)
    m, v = found
    click.echo("countermodel found:")
    click.echo(describe_countermodel(m, v))
    sys.exit(1)


@main.command()
@click.option("--port", type=int, default=None,
              help="port to listen on (default: $SPA_PORT or 7423)")
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port: int | None, host: str) -> None:
    """Start the HTTP checking service and web editor."""
    from . import service

    service.serve(port=port, host=host)


if __name__ == "__main__":
    main()
