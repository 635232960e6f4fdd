#!/usr/bin/env python
"""Command line interface to mixmult"""

import contextlib
import json
import logging
from collections.abc import Iterator
from pathlib import Path
from typing import Annotated, Any, List, Optional

import typer
from pydantic import ValidationError
from xdg_base_dirs import xdg_data_home

from mixmult import __version__
from mixmult.corpus import run_corpus
from mixmult.grid import Window
from mixmult.hilbert import FitOptions, MultiIdealSystem, NonStabilizedError, fit_bhattacharya, length_table
from mixmult.instance import InstanceDocument
from mixmult.monomial import InputError, MixmultError
from mixmult.primes import annihilator, build_pi, dimension, localization_length, minimal_primes
from mixmult.sequence import ElementCandidate
from mixmult.verify import (
    Theorem,
    Verdict,
    VerificationReport,
    verify_additivity,
    verify_chain,
    verify_degree_law,
    verify_exact_sequence,
    verify_recursion,
    verify_samuel_mixed,
    verify_saturation,
    verify_scaling,
    verify_telescoping,
)

app = typer.Typer()

default_corpus_dir = xdg_data_home() / "mixmult" / "corpus"

EXIT_VIOLATED = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3
VERDICT_EXIT_CODES = {Verdict.VERIFIED: 0, Verdict.VIOLATED: EXIT_VIOLATED, Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}

InstanceArg = Annotated[
    Path,
    typer.Argument(exists=True, file_okay=True, dir_okay=False, readable=True),
]
OffsetOpt = Annotated[Optional[int], typer.Option(min=0, help="First sampling offset")]
CapOpt = Annotated[Optional[int], typer.Option(min=1, help="Largest sampling offset")]
WindowOpt = Annotated[Optional[int], typer.Option(min=1, help="Window side")]
JsonOpt = Annotated[bool, typer.Option("--json/--tsv", help="Output format")]


@contextlib.contextmanager
def exit_codes() -> Iterator[None]:
    """Report errors on stderr and leave with the matching exit code"""
    try:
        yield
    except NonStabilizedError as error:
        typer.echo(f"Error: {error}", err=True)
        raise typer.Exit(EXIT_INCONCLUSIVE) from error
    except (MixmultError, ValidationError) as error:
        typer.echo(f"Error: {error}", err=True)
        raise typer.Exit(EXIT_INPUT) from error


def load(path: Path, offset: int | None = None, cap: int | None = None, window: int | None = None) -> InstanceDocument:
    """Read an instance; given flags override its options"""
    document = InstanceDocument.load(path)
    given = {"offset": offset, "cap": cap, "window": window}
    overrides = {key: value for key, value in given.items() if value is not None}
    if overrides:
        document.options = FitOptions.model_validate(document.options.model_dump() | overrides)
    return document


def echo_json(data: Any) -> None:
    typer.echo(json.dumps(data, indent=2, ensure_ascii=False))


def echo_rows(rows: list[list[Any]]) -> None:
    for row in rows:
        typer.echo("\t".join(str(cell) for cell in row))


@app.callback()
def main(
    *,
    debug: Annotated[bool, typer.Option()] = False,
) -> None:
    logging.basicConfig(level=logging.DEBUG if debug else logging.WARNING)
    if debug:
        logging.debug("Debug logging enabled!")


@app.command()
def compute(
    path: InstanceArg,
    offset: OffsetOpt = None,
    cap: CapOpt = None,
    *,
    as_json: JsonOpt = True,
) -> None:
    """Fit the Hilbert polynomial of the fiber module and print its mixed multiplicities"""
    with exit_codes():
        document = load(path, offset, cap)
        system = document.to_system()
        result = fit_bhattacharya(system, document.options)

    if as_json:
        data = {"system": system.pretty(), **result.to_json(), "tool_version": __version__}
        if system.d == 0:
            data["samuel_multiplicity"] = result.mixed[(result.q - 1,)]
        echo_json(data)
    else:
        echo_rows([["q", result.q], ["offset", result.offset], ["tilde_e", result.tilde_e]])
        echo_rows([[key, value] for key, value in result.to_json()["mixed"].items()])


def run_verifier(
    theorem: Theorem,
    document: InstanceDocument,
    system: MultiIdealSystem,
    candidates: list[ElementCandidate],
) -> VerificationReport:
    options = document.options
    extras = document.verify
    match theorem:
        case Theorem.DEGREE:
            return verify_degree_law(system, options)
        case Theorem.SATURATION:
            return verify_saturation(system, options)
        case Theorem.ADDITIVITY:
            return verify_additivity(system, options)
        case Theorem.SCALING:
            if extras.u is None:
                msg = "The scaling identity needs exponents (--u)"
                raise InputError(msg)
            return verify_scaling(system, extras.u, options)
        case Theorem.EXACTSEQ:
            lower_prime = document.lower_prime()
            if lower_prime is None:
                msg = "The exact sequence needs a second ideal (--l-prime)"
                raise InputError(msg)
            if not system.module.upper.is_unit:
                msg = "The exact sequence is formed from R/L, so U must be the unit ideal"
                raise InputError(msg)
            return verify_exact_sequence(system.primary, system.ideals, system.module.lower, lower_prime, options)
        case Theorem.RECURSION:
            if not candidates:
                msg = "The recursion needs an element (--candidate)"
                raise InputError(msg)
            return verify_recursion(system, candidates[0], extras.v, options)
        case Theorem.TELESCOPING:
            return verify_telescoping(system, candidates, options)
        case Theorem.CHAIN:
            return verify_chain(system, candidates, options)
        case Theorem.SAMUEL:
            return verify_samuel_mixed(system, options)


@app.command()
def verify(  # noqa: PLR0913
    theorem: Theorem,
    path: InstanceArg,
    u: Annotated[Optional[List[int]], typer.Option(min=1, help="Exponent of each ideal")] = None,
    l_prime: Annotated[Optional[List[str]], typer.Option(help="Generator of the larger ideal L′")] = None,
    candidate: Annotated[Optional[List[str]], typer.Option(help="Monomial element, in chain order")] = None,
    index: Annotated[Optional[int], typer.Option(min=1, help="Ideal the elements are taken from")] = None,
    v: Annotated[Optional[int], typer.Option(min=0, help="Power of the dropped ideal")] = None,
    offset: OffsetOpt = None,
    cap: CapOpt = None,
    window: WindowOpt = None,
    *,
    as_json: JsonOpt = True,
) -> None:
    """Check an identity of mixed multiplicities on an instance; the exit code reflects the verdict"""
    with exit_codes():
        document = load(path, offset, cap, window)
        extras = document.verify
        if u:
            extras.u = u
        if l_prime:
            extras.l_prime = [*l_prime]
        if candidate:
            extras.candidates = [*candidate]
        if index is not None:
            extras.index = index
        if v is not None:
            extras.v = v
        system = document.to_system()
        report = run_verifier(theorem, document, system, document.candidates(system))
        report.seed = document.seed

    if as_json:
        typer.echo(report.model_dump_json(indent=2))
    else:
        echo_rows([["theorem", report.theorem], ["verdict", report.verdict]])
        echo_rows([[key, value, report.rhs.get(key, "")] for key, value in report.lhs.items()])
    raise typer.Exit(VERDICT_EXIT_CODES[report.verdict])


@app.command()
def corpus(
    seed: Annotated[int, typer.Option(min=0, max=2**64 - 1)] = 1,
    size: Annotated[int, typer.Option(min=0)] = 20,
    out: Annotated[Path, typer.Option(file_okay=False, dir_okay=True)] = default_corpus_dir,
    threads: Annotated[int, typer.Option(min=1, envvar="MIXMULT_THREADS")] = 1,
) -> None:
    """Generate a seeded corpus of instances, verify them and write a summary"""
    with exit_codes():
        manifest, rows = run_corpus(seed, size, out, threads)
    counts = ", ".join(f"{count} {verdict}" for verdict, count in manifest.counts.items())
    typer.echo(f"Wrote {size} instances and {len(rows)} verifications to {out}: {counts}")
    if manifest.verdict is Verdict.VIOLATED:
        raise typer.Exit(EXIT_VIOLATED)


@app.command()
def primes(path: InstanceArg, *, as_json: JsonOpt = True) -> None:
    """Show the minimal primes of the annihilator of N with dimensions and the top-dimensional components"""
    with exit_codes():
        document = load(path)
        system = document.to_system()
        module = system.module
        if module.is_zero:
            msg = f"{module.pretty()} is the zero module"
            raise InputError(msg)
        minimal = minimal_primes(annihilator(module))
        lengths = {prime: localization_length(module, prime) for prime in minimal}
        components = [] if system.is_degenerate else build_pi(system)

    if as_json:
        echo_json(
            {
                "minimal_primes": [
                    {"prime": prime.names, "coheight": prime.coheight, "local_length": lengths[prime]}
                    for prime in minimal
                ],
                "dim_N": dimension(module),
                "dim_saturation": dimension(system.saturated_module),
                "components": [
                    {"prime": component.prime.names, "local_length": component.local_length}
                    for component in components
                ],
            },
        )
    else:
        echo_rows([[prime.pretty(), prime.coheight, lengths[prime]] for prime in minimal])


@app.command()
def hilbert(
    path: InstanceArg,
    offset: OffsetOpt = None,
    window: WindowOpt = None,
    *,
    as_json: JsonOpt = True,
) -> None:
    """Print the graded piece lengths of the fiber module on a tensor window"""
    with exit_codes():
        document = load(path, offset, window=window)
        system = document.to_system()
        table = length_table(system, Window(document.options.offset, document.options.window))

    if as_json:
        echo_json({"system": system.pretty(), **table.to_json()})
    else:
        echo_rows([list(row) for row in table.rows()])
