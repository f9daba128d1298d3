"""cpcert: certify contact pair structures described in .cps files.

Thin client over :mod:`contactpairs.pipeline`; exit codes are 0 (success),
1 (certification failure, witnesses in the report), 2 (input error).
"""

from __future__ import annotations

import sys
from fractions import Fraction

import click

from .catalog import UnknownBuiltinError
from .dsl import DslError
from .pipeline import (
    InputError,
    RunResult,
    load_instance,
    run_associate,
    run_certify,
    run_detect,
    run_validate,
)
from .reports import render_json, render_text


def _parse_kappa(ctx, param, value):
    if value is None:
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"{value!r} is not a rational like 1/2")


def input_options(f):
    f = click.option("--builtin", "builtin_name", metavar="NAME",
                     help="Use a builtin instance by name.")(f)
    f = click.option("--file", "file_path", metavar="PATH",
                     help="Read a .cps instance file.")(f)
    f = click.option("--kappa", callback=_parse_kappa, default=None, metavar="RATIONAL",
                     help="Pairing constant (default 1/2 unless the instance sets one).")(f)
    f = click.option("--tol", type=float, default=None, metavar="FLOAT",
                     help="Float-mode tolerance (default 1e-9).")(f)
    f = click.option("--format", "fmt", type=click.Choice(["text", "json"]),
                     default="text", show_default=True, help="Report format.")(f)
    return f


def _emit(result: RunResult, fmt: str) -> None:
    text = render_json(result.report) if fmt == "json" else render_text(result.report)
    click.echo(text, nl=False)
    sys.exit(result.exit_code)


def _run(runner, builtin_name, file_path, fmt, **kwargs):
    try:
        name, spec = load_instance(builtin_name, file_path)
        result = runner(name, spec, **kwargs)
    except DslError as e:
        click.echo(f"input error: {e}", err=True)
        sys.exit(2)
    except (InputError, UnknownBuiltinError, OSError) as e:
        click.echo(f"input error: {e}", err=True)
        sys.exit(2)
    _emit(result, fmt)


@click.group()
@click.version_option(package_name="contactpairs")
def main() -> None:
    """Exact certification of metric contact pair geometry on Lie algebras."""


@main.command()
@input_options
def validate(builtin_name, file_path, kappa, tol, fmt) -> None:
    """Check the structure equations: Jacobi identity and d squared zero."""
    _run(run_validate, builtin_name, file_path, fmt, kappa=kappa, tol=tol)


@main.command()
@input_options
def detect(builtin_name, file_path, kappa, tol, fmt) -> None:
    """Detect the pair type (h, k), Reeb vectors, and the splittings."""
    _run(run_detect, builtin_name, file_path, fmt, kappa=kappa, tol=tol)


@main.command()
@input_options
def certify(builtin_name, file_path, kappa, tol, fmt) -> None:
    """Run the full certificate: pair, metric, foliations, volume identity."""
    _run(run_certify, builtin_name, file_path, fmt, kappa=kappa, tol=tol)


@main.command()
@input_options
@click.option("--seed", type=click.Choice(["identity", "instance", "random"]),
              default="identity", show_default=True,
              help="Seed metric for polarization.")
@click.option("--rng-seed", type=int, default=None, metavar="INT",
              help="Deterministic seed for --seed random.")
@click.option("--out", "out_path", metavar="PATH", default=None,
              help="Write the constructed instance back as a .cps file.")
def associate(builtin_name, file_path, kappa, tol, fmt, seed, rng_seed, out_path) -> None:
    """Build an associated metric by polarization from a seed metric."""
    _run(run_associate, builtin_name, file_path, fmt,
         kappa=kappa, tol=tol, seed=seed, rng_seed=rng_seed, out_path=out_path)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP certification service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
