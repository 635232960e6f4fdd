"""Seeded corpora of random monomial instances

Every instance draws from its own generator seeded with ``"{seed}/{index}"``, so a corpus is reproducible
instance by instance and independent of the order in which instances are verified.
Instances stay small: at most three variables, at most two ideals and generator degrees of at most four.
"""

import functools
import json
import logging
import random
from collections import Counter
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from pydantic import BaseModel

from . import __version__
from .hilbert import MultiIdealSystem, fit_bhattacharya
from .instance import InstanceDocument, VerifyDocument
from .monomial import (
    ExponentVector,
    MixmultError,
    MonomialIdeal,
    MonomialSubquotient,
    VariableContext,
    is_primary,
)
from .primes import dimension
from .sequence import ElementCandidate, find_weak_fc, quotient_system
from .verify import (
    Theorem,
    Value,
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

_logger = logging.getLogger(__name__)

VARIABLE_NAMES = ("x", "y", "z")
SUMMARY_COLUMNS = ("instance", "theorem", "verdict", "lhs", "rhs")


class CorpusRow(BaseModel):
    instance: str
    theorem: Theorem
    verdict: Verdict
    lhs: dict[str, Value]
    rhs: dict[str, Value]
    seed: int | None = None

    def cells(self) -> list[str]:
        return [
            self.instance,
            self.theorem,
            self.verdict,
            json.dumps(self.lhs, sort_keys=True),
            json.dumps(self.rhs, sort_keys=True),
        ]


class CorpusManifest(BaseModel):
    seed: int
    size: int
    tool_version: str = __version__
    counts: dict[Verdict, int]

    @property
    def verdict(self) -> Verdict:
        return Verdict.combine(verdict for verdict, count in self.counts.items() if count)


def _random_monomial(rng: random.Random, context: VariableContext, degree: int) -> ExponentVector:
    return rng.choice(list(context.monomials_of_degree(degree)))


def _random_ideal(rng: random.Random, context: VariableContext, count: int, degrees: tuple[int, int]) -> MonomialIdeal:
    return MonomialIdeal(context, (_random_monomial(rng, context, rng.randint(*degrees)) for _ in range(count)))


def random_instance(seed: int, index: int) -> InstanceDocument:
    """Draw a non-degenerate instance whose saturation has positive dimension"""
    rng = random.Random(f"{seed}/{index}")
    while True:
        s = rng.choice((2, 3))
        d = rng.choice((1, 1, 2))
        context = VariableContext(VARIABLE_NAMES[:s])
        pure_powers = [
            tuple(rng.randint(1, 2) if other == position else 0 for other in range(s)) for position in range(s)
        ]
        if rng.random() < 0.5:
            pure_powers.append(_random_monomial(rng, context, 2))
        primary = MonomialIdeal(context, pure_powers)
        ideals = [_random_ideal(rng, context, rng.randint(1, 2), (1, 2)) for _ in range(d)]
        upper = context.unit_ideal()
        if rng.random() < 0.25:
            upper = MonomialIdeal(context, [context.variable(rng.randrange(s))])
        lower = _random_ideal(rng, context, rng.randint(0, 2), (2, 3)) * upper
        system = MultiIdealSystem(primary, ideals, MonomialSubquotient(upper, lower))
        if system.is_degenerate or dimension(system.saturated_module) < 1:
            _logger.debug("Redrawing degenerate instance %d: %s", index, system.pretty())
            continue
        lower_prime = lower + MonomialIdeal(context, [_random_monomial(rng, context, rng.randint(1, 2))])
        verify = VerifyDocument(u=[rng.choice((1, 2, 3)) for _ in range(d)], l_prime=lower_prime.to_strings(), v=2)
        return InstanceDocument.from_system(system, verify=verify, seed=seed)


def generate_corpus(seed: int, size: int) -> list[InstanceDocument]:
    return [random_instance(seed, index) for index in range(size)]


def _first_weak_fc(system: MultiIdealSystem, index: int, document: InstanceDocument) -> ElementCandidate | None:
    ideal = system.ideals[index - 1]
    found = find_weak_fc(system, index, ideal.max_degree, document.options)
    return found[0] if found else None


def _greedy_chain(system: MultiIdealSystem, document: InstanceDocument) -> list[ElementCandidate]:
    """Weak-FC monomials of the single ideal, each for the quotient by the previous ones"""
    base = fit_bhattacharya(system, document.options)
    length = max(index[1] for index, value in base.mixed.items() if value)
    chain: list[ElementCandidate] = []
    current = system
    while len(chain) < length and not current.is_degenerate:
        candidate = _first_weak_fc(current, 1, document)
        if candidate is None:
            break
        chain.append(candidate)
        current = quotient_system(current, candidate)
    return chain


def _guarded(theorem: Theorem, call: Callable[[], VerificationReport | None]) -> VerificationReport | None:
    try:
        return call()
    except MixmultError as error:
        _logger.warning("Verification of %s failed: %s", theorem, error)
        return VerificationReport(theorem=theorem, verdict=Verdict.INCONCLUSIVE, notes=[str(error)])


def run_instance(name: str, document: InstanceDocument) -> list[CorpusRow]:
    """Run every verifier that applies to the instance"""
    _logger.debug("Verifying %s", name)
    system = document.to_system()
    options = document.options
    extras = document.verify
    calls: list[tuple[Theorem, Callable[[], VerificationReport | None]]] = [
        (Theorem.DEGREE, lambda: verify_degree_law(system, options)),
        (Theorem.SATURATION, lambda: verify_saturation(system, options)),
        (Theorem.ADDITIVITY, lambda: verify_additivity(system, options)),
        (Theorem.SCALING, lambda: verify_scaling(system, extras.u or [1] * system.d, options)),
    ]

    lower_prime = document.lower_prime()
    middle = MultiIdealSystem(system.primary, system.ideals, MonomialSubquotient.cyclic(system.module.lower))
    if lower_prime is not None and not middle.is_degenerate:
        exact_sequence = functools.partial(
            verify_exact_sequence,
            system.primary,
            system.ideals,
            system.module.lower,
            lower_prime,
            options,
        )
        calls.append((Theorem.EXACTSEQ, exact_sequence))

    for index in range(1, system.d + 1):

        def recursion(index: int = index) -> VerificationReport | None:
            candidate = _first_weak_fc(system, index, document)
            return None if candidate is None else verify_recursion(system, candidate, extras.v, options)

        def telescoping(index: int = index) -> VerificationReport | None:
            candidate = _first_weak_fc(system, index, document)
            return None if candidate is None else verify_telescoping(system, [candidate], options)

        calls += [(Theorem.RECURSION, recursion), (Theorem.TELESCOPING, telescoping)]

    if system.d == 1:
        calls.append((Theorem.CHAIN, lambda: verify_chain(system, _greedy_chain(system, document), options)))
    if all(is_primary(ideal) for ideal in system.ideals):
        calls.append((Theorem.SAMUEL, lambda: verify_samuel_mixed(system, options)))

    rows = []
    for theorem, call in calls:
        report = _guarded(theorem, call)
        if report is None:
            _logger.debug("Skipping %s on %s: no weak-FC monomial", theorem, name)
            continue
        report.seed = document.seed
        rows.append(
            CorpusRow(
                instance=name,
                theorem=theorem,
                verdict=report.verdict,
                lhs=report.lhs,
                rhs=report.rhs,
                seed=report.seed,
            ),
        )
    return rows


def _run_named(item: tuple[str, InstanceDocument]) -> list[CorpusRow]:
    return run_instance(*item)


def instance_name(index: int) -> str:
    return f"instance-{index:03d}"


def summary_tsv(rows: Sequence[CorpusRow]) -> str:
    """Tab separated rows; the JSON cells are written unquoted"""
    lines = [SUMMARY_COLUMNS, *(row.cells() for row in rows)]
    return "".join("\t".join(cells) + "\n" for cells in lines)


def run_corpus(seed: int, size: int, out: Path, threads: int = 1) -> tuple[CorpusManifest, list[CorpusRow]]:
    """Generate, store and verify a corpus; files are written from this process only"""
    out.mkdir(parents=True, exist_ok=True)
    items = [(instance_name(index), document) for index, document in enumerate(generate_corpus(seed, size))]
    for name, document in items:
        (out / f"{name}.json").write_text(document.dump())

    if threads > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=threads) as executor:
            results = list(executor.map(_run_named, items))
    else:
        results = [_run_named(item) for item in items]
    rows = [row for result in results for row in result]

    counts = Counter(row.verdict for row in rows)
    manifest = CorpusManifest(seed=seed, size=size, counts={verdict: counts[verdict] for verdict in Verdict})
    (out / "summary.tsv").write_text(summary_tsv(rows))
    (out / "manifest.json").write_text(manifest.model_dump_json(indent=2) + "\n")
    _logger.info("Corpus %d of size %d: %s", seed, size, dict(counts))
    return manifest, rows
