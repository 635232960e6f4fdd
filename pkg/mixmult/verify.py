"""Two-sided checks of the identities satisfied by mixed multiplicities of fiber modules.

Each verifier evaluates both sides through separate fits of different systems and compares them exactly.
A fit that does not stabilize below the cap makes the verdict inconclusive; it never decides the verdict.
"""

import functools
import logging
import math
from collections.abc import Callable, Iterable, Mapping, Sequence
from enum import StrEnum
from typing import Any, ParamSpec

from pydantic import BaseModel, Field

from . import __version__
from .hilbert import (
    BhattacharyaResult,
    FitOptions,
    MultiIdealSystem,
    NonStabilizedError,
    fit_bhattacharya,
    hilbert_polynomial,
    hilbert_samuel_fit,
    vanishing_table,
)
from .monomial import InputError, MonomialIdeal, MonomialSubquotient, is_primary, primarity_exponents
from .primes import PrimeComponent, build_pi, dimension, has_positive_height
from .sequence import (
    ElementCandidate,
    chain_systems,
    check_weak_fc,
    drop_index_system,
    filter_regular_identity,
    quotient_system,
)
from .tools import MultiIndex, format_key, keyed, shift

_logger = logging.getLogger(__name__)

P = ParamSpec("P")

Value = int | str


class Theorem(StrEnum):
    DEGREE = "degree"
    SATURATION = "saturation"
    ADDITIVITY = "additivity"
    SCALING = "scaling"
    EXACTSEQ = "exactseq"
    RECURSION = "recursion"
    TELESCOPING = "telescoping"
    CHAIN = "chain"
    SAMUEL = "samuel"


class Verdict(StrEnum):
    VERIFIED = "verified"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"

    @classmethod
    def combine(cls, verdicts: Iterable["Verdict"]) -> "Verdict":
        """Violated beats inconclusive, which beats verified"""
        collected = set(verdicts)
        if cls.VIOLATED in collected:
            return cls.VIOLATED
        if cls.INCONCLUSIVE in collected:
            return cls.INCONCLUSIVE
        return cls.VERIFIED


class VerificationReport(BaseModel):
    theorem: Theorem
    verdict: Verdict
    lhs: dict[str, Value] = Field(default_factory=dict)
    rhs: dict[str, Value] = Field(default_factory=dict)
    witnesses: list[dict[str, Any]] = Field(default_factory=list)
    notes: list[str] = Field(default_factory=list)
    tool_version: str = __version__
    seed: int | None = None


def _report(
    theorem: Theorem,
    lhs: Mapping[str, Value],
    rhs: Mapping[str, Value],
    witnesses: Iterable[dict[str, Any]] = (),
    notes: Iterable[str] = (),
) -> VerificationReport:
    verdict = Verdict.VERIFIED if dict(lhs) == dict(rhs) else Verdict.VIOLATED
    if verdict is Verdict.VIOLATED:
        _logger.warning("Identity %s is violated: %s != %s", theorem, dict(lhs), dict(rhs))
    return VerificationReport(
        theorem=theorem,
        verdict=verdict,
        lhs=dict(lhs),
        rhs=dict(rhs),
        witnesses=list(witnesses),
        notes=list(notes),
    )


def _inconclusive(
    theorem: Theorem,
    reason: str,
    witnesses: Iterable[dict[str, Any]] = (),
    notes: Iterable[str] = (),
) -> VerificationReport:
    _logger.warning("Identity %s is inconclusive: %s", theorem, reason)
    return VerificationReport(
        theorem=theorem,
        verdict=Verdict.INCONCLUSIVE,
        witnesses=list(witnesses),
        notes=[*notes, reason],
    )


def _stabilized(theorem: Theorem) -> Callable[[Callable[P, VerificationReport]], Callable[P, VerificationReport]]:
    """Turn a fit that reaches its cap into an inconclusive report"""

    def decorator(func: Callable[P, VerificationReport]) -> Callable[P, VerificationReport]:
        @functools.wraps(func)
        def wrapper(*args: P.args, **kwargs: P.kwargs) -> VerificationReport:
            try:
                return func(*args, **kwargs)
            except NonStabilizedError as error:
                return _inconclusive(theorem, str(error))

        return wrapper

    return decorator


def _fit(system: MultiIdealSystem, options: FitOptions) -> BhattacharyaResult | None:
    """Fit a system, or None when nothing of positive dimension survives the saturation"""
    if system.is_degenerate or dimension(system.saturated_module) < 1:
        return None
    return fit_bhattacharya(system, options)


def _table_at(fit: BhattacharyaResult | None, degree: int, arity: int) -> dict[MultiIndex, int]:
    """Mixed multiplicities of a given total degree, zero for absent fits and above the natural degree.

    Below the natural degree no table exists; the natural one is returned so that any comparison fails.
    """
    if fit is None or degree > fit.q - 1:
        return vanishing_table(degree, arity)
    return dict(fit.mixed)


def _summed(table: Mapping[MultiIndex, int], predicate: Callable[[MultiIndex], bool]) -> int:
    return sum(value for index, value in table.items() if predicate(index))


def _tagged(table: Mapping[MultiIndex, int], tilde_e: int | None = None) -> dict[str, Value]:
    tagged: dict[str, Value] = dict(keyed(table))
    if tilde_e is not None:
        tagged["tilde_e"] = tilde_e
    return tagged


@_stabilized(Theorem.DEGREE)
def verify_degree_law(system: MultiIdealSystem, options: FitOptions | None = None) -> VerificationReport:
    """The Hilbert polynomial has total degree ``dim N̄ - 1``; with positive height also ``dim N̄ = dim N``"""
    options = options or FitOptions()
    polynomial = hilbert_polynomial(system, options)
    q = dimension(system.saturated_module)
    lhs: dict[str, Value] = {"total_degree": polynomial.total_degree}
    rhs: dict[str, Value] = {"total_degree": q - 1}
    notes = []
    if has_positive_height(system):
        lhs["dim_saturation"] = q
        rhs["dim_saturation"] = dimension(system.module)
        notes.append("the ideal product has positive height modulo the annihilator")
    return _report(Theorem.DEGREE, lhs, rhs, [{"polynomial": polynomial.to_json()}], notes)


@_stabilized(Theorem.SATURATION)
def verify_saturation(system: MultiIdealSystem, options: FitOptions | None = None) -> VerificationReport:
    """N and N̄ have the same mixed multiplicities"""
    options = options or FitOptions()
    original = fit_bhattacharya(system, options)
    saturated = fit_bhattacharya(system.saturated(), options)
    return _report(
        Theorem.SATURATION,
        _tagged(original.mixed, original.tilde_e),
        _tagged(saturated.mixed, saturated.tilde_e),
        [{"saturation": system.saturated_module.pretty()}],
    )


@_stabilized(Theorem.ADDITIVITY)
def verify_additivity(system: MultiIdealSystem, options: FitOptions | None = None) -> VerificationReport:
    """The mixed table of N is the sum over the top-dimensional primes of their local lengths times their tables"""
    options = options or FitOptions()
    base = fit_bhattacharya(system, options)
    components = build_pi(system)
    rhs = vanishing_table(base.q - 1, system.arity)
    witnesses = []
    for component in components:
        domain = system.with_module(MonomialSubquotient.cyclic(component.prime.ideal()))
        table = fit_bhattacharya(domain, options).mixed
        for index in rhs:
            rhs[index] += component.local_length * table.get(index, 0)
        witnesses.append(
            {"prime": component.prime.names, "local_length": component.local_length, "mixed": keyed(table)},
        )

    via_saturation = build_pi(system.saturated())
    lhs_tagged = _tagged(base.mixed)
    rhs_tagged = _tagged(rhs)
    lhs_tagged["components"] = _components_text(components)
    rhs_tagged["components"] = _components_text(via_saturation)

    notes = []
    if has_positive_height(system):
        notes.append("the ideal product has positive height modulo the annihilator, so N̄ may be replaced by N")
    if all(is_primary(ideal) for ideal in system.ideals):
        notes.append("all ideals are primary to the maximal ideal")
    return _report(Theorem.ADDITIVITY, lhs_tagged, rhs_tagged, witnesses, notes)


def _components_text(components: Sequence[PrimeComponent]) -> str:
    return "; ".join(f"{component.prime.pretty()}:{component.local_length}" for component in components)


@_stabilized(Theorem.SCALING)
def verify_scaling(
    system: MultiIdealSystem,
    u: Sequence[int],
    options: FitOptions | None = None,
) -> VerificationReport:
    """Replacing ``I_j`` by ``I_j^{u_j}`` multiplies ``e(J^[k_0+1], I^[k]; N)`` by ``u^k``"""
    options = options or FitOptions()
    if len(u) != system.d:
        msg = f"Expected {system.d} exponents, got {len(u)}"
        raise InputError(msg)
    if any(exponent < 1 for exponent in u):
        msg = f"Exponents must be positive, got {list(u)}"
        raise InputError(msg)
    base = fit_bhattacharya(system, options)
    powers = [ideal**exponent for ideal, exponent in zip(system.ideals, u, strict=True)]
    scaled = fit_bhattacharya(system.with_ideals(powers), options)
    expected = {
        index: value * math.prod(exponent**power for exponent, power in zip(u, index[1:], strict=True))
        for index, value in base.mixed.items()
    }
    return _report(
        Theorem.SCALING,
        _tagged(scaled.mixed, scaled.tilde_e),
        _tagged(expected, sum(expected.values())),
        [{"u": list(u), "base": keyed(base.mixed)}],
    )


@_stabilized(Theorem.EXACTSEQ)
def verify_exact_sequence(
    primary: MonomialIdeal,
    ideals: Sequence[MonomialIdeal],
    lower: MonomialIdeal,
    lower_prime: MonomialIdeal,
    options: FitOptions | None = None,
) -> VerificationReport:
    """Mixed tables along ``0 → L′/L → R/L → R/L′ → 0``.

    With ``p_j`` the dimensions of the saturations, ``p_3 = max(p_1, p_2)``. The table of the middle term is the
    sum of the outer tables when all three dimensions agree and the table of the outer term of top dimension
    otherwise; reading tables above their natural degree as zero makes both cases one sum.
    """
    options = options or FitOptions()
    if not lower <= lower_prime:
        msg = f"{lower.pretty()} is not contained in {lower_prime.pretty()}"
        raise InputError(msg)
    unit = lower.context.unit_ideal()
    sub = MultiIdealSystem(primary, ideals, MonomialSubquotient(lower_prime, lower))
    middle = MultiIdealSystem(primary, ideals, MonomialSubquotient(unit, lower))
    quotient = MultiIdealSystem(primary, ideals, MonomialSubquotient(unit, lower_prime))
    middle.require_nondegenerate()
    p1, p3, p2 = (dimension(system.saturated_module) for system in (sub, middle, quotient))

    degree = p3 - 1
    arity = middle.arity
    table3 = _table_at(_fit(middle, options), degree, arity)
    table1 = _table_at(_fit(sub, options), degree, arity)
    table2 = _table_at(_fit(quotient, options), degree, arity)
    expected = {index: table1.get(index, 0) + table2.get(index, 0) for index in table3}

    if p1 == p2 == p3:
        branch = "all dimensions agree: the middle table is the sum of the outer tables"
    else:
        top = "L′/L" if p1 == p3 else "R/L′"
        branch = f"strict dimension drop: the middle table is the table of {top}"
    lhs = _tagged(table3)
    rhs = _tagged(expected)
    lhs["dim_middle"] = p3
    rhs["dim_middle"] = max(p1, p2)
    return _report(
        Theorem.EXACTSEQ,
        lhs,
        rhs,
        [{"dimensions": {"L′/L": p1, "R/L": p3, "R/L′": p2}, "L′/L": keyed(table1), "R/L′": keyed(table2)}],
        [branch],
    )


V_STABILITY_NOTE = "the dropped-index multiplicity is taken as stable once it agrees at v and v + 1"


@_stabilized(Theorem.RECURSION)
def verify_recursion(
    system: MultiIdealSystem,
    candidate: ElementCandidate,
    v: int,
    options: FitOptions | None = None,
) -> VerificationReport:
    """Split ``ẽ(M)`` along a weak-FC element ``x ∈ I_i``.

    The quotient ``N/xN`` accounts for the entries with ``h_i > 0`` (shifted down by one in ``i``), the system
    without ``I_i`` on ``I_i^v N`` accounts for the entries with ``h_i = 0``.
    """
    options = options or FitOptions()
    fc_report = check_weak_fc(system, candidate, options)
    witnesses: list[dict[str, Any]] = [fc_report.model_dump(mode="json")]
    if not fc_report.is_weak_fc:
        return _inconclusive(
            Theorem.RECURSION,
            f"{candidate.pretty(system)} is not certified weak-FC ({fc_report.classification})",
            witnesses,
        )
    if not filter_regular_identity(system, candidate, options):
        return _inconclusive(Theorem.RECURSION, f"length identity fails for {candidate.pretty(system)}", witnesses)
    i = candidate.index
    base = fit_bhattacharya(system, options)
    q = base.q
    notes = [V_STABILITY_NOTE]

    quotient = quotient_system(system, candidate)
    quotient_fit = _fit(quotient, options)
    quotient_table = _table_at(quotient_fit, q - 2, system.arity)

    dropped_fits = [_fit(drop_index_system(system, i, power), options) for power in (v, v + 1)]
    if any(fit is not None and fit.q > q for fit in dropped_fits):
        return _inconclusive(Theorem.RECURSION, f"v = {v} is too small: I_i^v N still exceeds dimension {q}", witnesses)
    dropped = [sum(_table_at(fit, q - 1, system.d).values()) for fit in dropped_fits]
    if dropped[0] != dropped[1]:
        return _inconclusive(
            Theorem.RECURSION,
            f"the dropped-index multiplicity changes from {dropped[0]} at v = {v} to {dropped[1]} at v = {v + 1}",
            witnesses,
            notes,
        )

    if any(value for index, value in base.mixed.items() if index[i] > 0):
        notes.append(f"some entry with k_{i} > 0 is nonzero: the quotient keeps the leading degree")
    else:
        notes.append(f"all entries with k_{i} > 0 vanish: the dropped index keeps the dimension")
    if has_positive_height(system):
        notes.append("the ideal product has positive height modulo the annihilator")

    quotient_sum = sum(quotient_table.values())
    if q > 1 and quotient_sum + dropped[0] > 0:
        notes.append(
            "the multiplicity of the fiber module is the sum of its mixed multiplicities, "
            "so it splits into the multiplicities of N/xN and of the system without the dropped ideal",
        )
    if system.primary == system.context.maximal_ideal():
        notes.append("J is the maximal ideal: the identity splits the Rees multiplicity of N̄")
    lhs: dict[str, Value] = {
        "quotient_tilde_e": quotient_sum,
        "dropped_tilde_e": dropped[0],
        "tilde_e": base.tilde_e,
        "difference": base.polynomial.difference(i).text(),
    }
    rhs: dict[str, Value] = {
        "quotient_tilde_e": _summed(base.mixed, lambda index: index[i] > 0),
        "dropped_tilde_e": _summed(base.mixed, lambda index: index[i] == 0),
        "tilde_e": quotient_sum + dropped[0],
        "difference": quotient_fit.polynomial.text() if quotient_fit is not None else "0",
    }
    for index, value in base.mixed.items():
        if index[i] > 0:
            key = f"shift:{format_key(index)}"
            lhs[key] = value
            rhs[key] = quotient_table.get(shift(index, i, -1), 0)
    witnesses.append(
        {"base": keyed(base.mixed), "quotient": keyed(quotient_table), "dropped": dropped, "v": v},
    )
    return _report(Theorem.RECURSION, lhs, rhs, witnesses, notes)


def _certify_chain(
    theorem: Theorem,
    systems: Sequence[MultiIdealSystem],
    candidates: Sequence[ElementCandidate],
    options: FitOptions,
) -> tuple[list[dict[str, Any]], VerificationReport | None]:
    """Check each candidate against the system it is applied to; the first failure gives an inconclusive report"""
    witnesses = []
    for step, (system, candidate) in enumerate(zip(systems, candidates, strict=False)):
        fc_report = check_weak_fc(system, candidate, options)
        witnesses.append({"step": step, **fc_report.model_dump(mode="json")})
        if not fc_report.is_weak_fc:
            reason = f"candidate {step} ({candidate.pretty(system)}) is not certified weak-FC"
            return witnesses, _inconclusive(theorem, reason, witnesses)
        if not filter_regular_identity(system, candidate, options):
            reason = f"length identity fails for candidate {step} ({candidate.pretty(system)})"
            return witnesses, _inconclusive(theorem, reason, witnesses)
    return witnesses, None


@_stabilized(Theorem.TELESCOPING)
def verify_telescoping(
    system: MultiIdealSystem,
    candidates: Sequence[ElementCandidate],
    options: FitOptions | None = None,
) -> VerificationReport:
    """``ẽ(J, I; N) = ẽ(J, I; N/(x_1..x_p)N) + Σ_{j<p} ẽ(J, I without I_i; (N/(x_1..x_j)N)‾)``

    All candidates are taken from the same ideal ``I_i``; term ``j`` is read in total degree ``q - j - 1``.
    """
    options = options or FitOptions()
    indices = {candidate.index for candidate in candidates}
    if len(indices) > 1:
        msg = f"All candidates must come from one ideal, got indices {sorted(indices)}"
        raise InputError(msg)
    base = fit_bhattacharya(system, options)
    if not candidates:
        return _report(Theorem.TELESCOPING, {"tilde_e": base.tilde_e}, {"tilde_e": base.tilde_e})
    i = indices.pop()
    systems = chain_systems(system, candidates)
    witnesses, failure = _certify_chain(Theorem.TELESCOPING, systems, candidates, options)
    if failure is not None:
        return failure

    q = base.q
    p = len(candidates)
    remainder = sum(_table_at(_fit(systems[p], options), q - p - 1, system.arity).values())
    terms = []
    for step in range(p):
        dropped = MultiIdealSystem(
            system.primary,
            system.ideals[: i - 1] + system.ideals[i:],
            systems[step].saturated_module,
        )
        terms.append(sum(_table_at(_fit(dropped, options), q - step - 1, system.d).values()))
    witnesses.append({"remainder": remainder, "dropped": terms})
    return _report(Theorem.TELESCOPING, {"tilde_e": base.tilde_e}, {"tilde_e": remainder + sum(terms)}, witnesses)


@_stabilized(Theorem.CHAIN)
def verify_chain(
    system: MultiIdealSystem,
    candidates: Sequence[ElementCandidate],
    options: FitOptions | None = None,
) -> VerificationReport:
    """For one ideal, ``ẽ`` is the sum of the Samuel multiplicities of J on the saturated successive quotients.

    The chain length ``p`` is the largest ``i`` with ``e(J^[q-i], I^[i]; N) ≠ 0``; term ``j`` is read in degree
    ``q - j - 1``.
    """
    options = options or FitOptions()
    if system.d != 1:
        msg = f"The chain formula needs exactly one ideal, got {system.d}"
        raise InputError(msg)
    base = fit_bhattacharya(system, options)
    q = base.q
    p = max(index[1] for index, value in base.mixed.items() if value)
    notes = []
    if len(candidates) < p:
        return _inconclusive(Theorem.CHAIN, f"the chain needs {p} elements, got {len(candidates)}")
    if len(candidates) > p:
        notes.append(f"only the first {p} elements are used")
    used = list(candidates[:p])
    systems = chain_systems(system, used)
    witnesses, failure = _certify_chain(Theorem.CHAIN, systems, used, options)
    if failure is not None:
        return failure

    terms = []
    for step, current in enumerate(systems):
        samuel = MultiIdealSystem(system.primary, (), current.saturated_module)
        terms.append(_table_at(_fit(samuel, options), q - step - 1, 1).get((q - step - 1,), 0))
    if has_positive_height(system):
        notes.append("the ideal has positive height modulo the annihilator, so N̄ may be replaced by N")
    witnesses.append({"p": p, "samuel": terms})
    return _report(
        Theorem.CHAIN,
        {"tilde_e": base.tilde_e},
        {"tilde_e": sum(terms)},
        witnesses,
        ["the Rees multiplicity is the sum of the mixed multiplicities of the fiber module", *notes],
    )


@_stabilized(Theorem.SAMUEL)
def verify_samuel_mixed(system: MultiIdealSystem, options: FitOptions | None = None) -> VerificationReport:
    """For primary ideals, the classical mixed multiplicities come from fiber modules.

    ``e(I^[k]; N)`` with ``|k| = dim N`` equals ``e(I_j^[k_j], I'^[k']; N)`` where ``I_j`` is the first ideal with
    ``k_j > 0`` taken in the role of J, and ``I'`` are the other ideals.
    """
    options = options or FitOptions()
    if system.d < 1:
        msg = "At least one ideal is needed"
        raise InputError(msg)
    for ideal in system.ideals:
        primarity_exponents(ideal)
    classical = hilbert_samuel_fit(system.ideals, system.module, options)
    expected = {}
    fits: dict[int, BhattacharyaResult] = {}
    for index in classical:
        j = next(position for position, entry in enumerate(index) if entry)
        if j not in fits:
            fiber = MultiIdealSystem(system.ideals[j], system.ideals[:j] + system.ideals[j + 1 :], system.module)
            fits[j] = fit_bhattacharya(fiber, options)
        expected[index] = fits[j].mixed_multiplicity((index[j] - 1, *index[:j], *index[j + 1 :]))
    return _report(
        Theorem.SAMUEL,
        _tagged(classical),
        _tagged(expected),
        [{"fiber_ideal": j + 1, "mixed": keyed(fit.mixed)} for j, fit in sorted(fits.items())],
    )
