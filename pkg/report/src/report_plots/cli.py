"""`report --in results.csv [--in more.csv] --out figs`"""

from __future__ import annotations

import sys

import click

from .render import FIGURES, ReportSpec, render
from .schema import SchemaMismatch


@click.command()
@click.option("--in", "inputs", multiple=True, required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=str)
@click.option(
    "--figures",
    default=",".join(FIGURES),
    help="comma-separated subset of " + ",".join(FIGURES),
)
def main(inputs, out_dir, figures):
    wanted = tuple(f for f in figures.split(",") if f)
    unknown = [f for f in wanted if f not in FIGURES]
    if unknown:
        click.echo(f"unknown figures: {unknown}", err=True)
        sys.exit(2)
    try:
        path = render(ReportSpec(list(inputs), out_dir, wanted))
    except SchemaMismatch as exc:
        click.echo(str(exc), err=True)
        sys.exit(2)
    click.echo(path)


if __name__ == "__main__":
    main()
