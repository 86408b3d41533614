"""Personalization / contextuality rate over sampled observable triples.

For each sampled triple the pipeline estimates pairwise transitions,
applies the closed-form invariant check, and solves the joint
feasibility problem.  Two ratios are reported because the closed form
only applies to bistochastic triples:

* ``pers_accardi``: violating fraction among triples where the
  bistochastic hypothesis holds (the personalization rate proper);
* ``pers_lp``: feasibility-violating fraction among all decided
  triples (the general test, no hypothesis needed).

All sampling and evaluation is deterministic given the plan seed, and
independent of the number of worker threads: triples are evaluated as
pure functions and merged in sampled order.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Literal

from .accardi import AccardiVerdict, TripleParams
from .errors import (
    ContextualityError,
    ProblemTooLarge,
    SampleExceedsPopulation,
    SolverFailure,
    TooFewObservables,
)
from .feasibility import (
    DEFAULT_FEASIBILITY_TOL,
    FeasibilityResult,
    feasibility_from_dataset,
)
from .observables import ObservableSet
from .transitions import DEFAULT_BISTOCHASTIC_TOL

MAX_EXHAUSTIVE_TRIPLES = 10**5
_WILSON_Z95 = 1.959963984540054  # two-sided 95% normal quantile

SamplingMode = Literal["without_replacement", "with_replacement", "exhaustive"]


@dataclass(frozen=True)
class SamplingPlan:
    """How to pick triples and which tolerances to forward.

    ``num_triples=None`` means min(1000, C(T,3)).  Exhaustive mode visits
    all C(T,3) triples in lexicographic order and requires C(T,3) <= 1e5.
    """

    num_triples: int | None = None
    mode: SamplingMode = "without_replacement"
    seed: int = 0
    bistochastic_tol: float = DEFAULT_BISTOCHASTIC_TOL
    smoothing: float = 0.0
    feasibility_tol: float = DEFAULT_FEASIBILITY_TOL


@dataclass(frozen=True)
class TripleReport:
    """Everything the pipeline decided about one sampled triple."""

    ids: tuple[str, str, str]
    params: TripleParams | None
    accardi: AccardiVerdict | None
    lp: FeasibilityResult | None
    error: str | None = None

    @property
    def skipped(self) -> bool:
        return self.error is not None


@dataclass(frozen=True)
class PersEstimate:
    """The personalization-rate estimate with its bookkeeping.

    ``violations`` = (invariant-violating count, LP-infeasible count).
    ``pers_accardi_sampled`` is the auxiliary reading of the ratio with
    all decided triples in the denominator (not just applicable ones).
    Wilson 95% intervals use the same denominators as their ratios.
    """

    pers_accardi: float
    pers_lp: float
    pers_accardi_sampled: float
    sampled: int
    decided: int
    applicable: int
    violations: tuple[int, int]
    skipped: int
    seed: int
    ci95_accardi: tuple[float, float]
    ci95_lp: tuple[float, float]

    def __post_init__(self):
        if not (0.0 <= self.pers_accardi <= 1.0 and 0.0 <= self.pers_lp <= 1.0):
            raise ValueError("ratios must lie in [0, 1]")
        if self.violations[0] > max(self.applicable, 0) or self.violations[1] > self.decided:
            raise ValueError("violation counts exceed their denominators")


def wilson_interval(successes: int, total: int, z: float = _WILSON_Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion; (0, 1) when total=0."""
    if total == 0:
        return (0.0, 1.0)
    phat = successes / total
    denom = 1.0 + z * z / total
    center = (phat + z * z / (2 * total)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / total + z * z / (4 * total * total))
    # clamp against rounding so the interval always contains the estimate
    low = min(max(0.0, center - half), phat)
    high = max(min(1.0, center + half), phat)
    return (low, high)


def _num_triples(t: int) -> int:
    return t * (t - 1) * (t - 2) // 6


def _unrank_triple(rank: int, t: int) -> tuple[int, int, int]:
    """rank-th 3-combination of range(t) in lexicographic order."""
    i = 0
    while True:
        block = (t - 1 - i) * (t - 2 - i) // 2
        if rank < block:
            break
        rank -= block
        i += 1
    j = i + 1
    while True:
        block = t - 1 - j
        if rank < block:
            break
        rank -= block
        j += 1
    k = j + 1 + rank
    return (i, j, k)


def sample_triples(
    observables: ObservableSet, plan: SamplingPlan
) -> list[tuple[str, str, str]]:
    """Deterministically sample index-ordered triples of observable ids.

    Raises:
        TooFewObservables: fewer than 3 observables.
        SampleExceedsPopulation: without-replacement request larger than
            C(T,3).
        ProblemTooLarge: exhaustive mode beyond 1e5 triples.
    """
    t = len(observables)
    if t < 3:
        raise TooFewObservables(f"need at least 3 observables, have {t}")
    ids = observables.ids()
    population = _num_triples(t)
    if plan.mode == "exhaustive":
        if population > MAX_EXHAUSTIVE_TRIPLES:
            raise ProblemTooLarge(
                f"{population} triples exceed the exhaustive cap {MAX_EXHAUSTIVE_TRIPLES}"
            )
        ranks = range(population)
    else:
        requested = plan.num_triples
        if requested is None:
            requested = min(1000, population)
        if requested < 0:
            raise ValueError("num_triples must be non-negative")
        rng = random.Random(plan.seed)
        if plan.mode == "without_replacement":
            if requested > population:
                raise SampleExceedsPopulation(
                    f"{requested} distinct triples requested, only {population} exist"
                )
            ranks = rng.sample(range(population), requested)
        elif plan.mode == "with_replacement":
            ranks = [rng.randrange(population) for _ in range(requested)]
        else:
            raise ValueError(f"unknown sampling mode {plan.mode!r}")
    return [
        tuple(ids[x] for x in _unrank_triple(rank, t)) for rank in ranks
    ]


def evaluate_triple(source, ids: tuple[str, str, str], plan: SamplingPlan) -> TripleReport:
    """Run the full pipeline on one triple; failures become skip reports."""
    try:
        params, verdict, lp = feasibility_from_dataset(
            source,
            ids,
            smoothing=plan.smoothing,
            bistochastic_tol=plan.bistochastic_tol,
            tolerance=plan.feasibility_tol,
        )
    except SolverFailure:
        raise
    except ContextualityError as exc:
        return TripleReport(ids=ids, params=None, accardi=None, lp=None, error=str(exc))
    return TripleReport(ids=ids, params=params, accardi=verdict, lp=lp)


def evaluate_triples(
    source,
    triples: list[tuple[str, str, str]],
    plan: SamplingPlan,
    workers: int = 1,
) -> list[TripleReport]:
    """Evaluate triples (possibly concurrently), merged in sampled order.

    Evaluation is a pure function of (source, ids, plan), so repeated
    triples (with-replacement sampling) are computed once and reused.
    """
    unique = list(dict.fromkeys(triples))
    if workers > 1 and len(unique) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda ids: evaluate_triple(source, ids, plan), unique))
    else:
        results = [evaluate_triple(source, ids, plan) for ids in unique]
    by_ids = dict(zip(unique, results))
    return [by_ids[ids] for ids in triples]


def summarize(reports: list[TripleReport], plan: SamplingPlan) -> PersEstimate:
    """Tally per-triple reports into the two ratios with Wilson intervals."""
    sampled = len(reports)
    skipped = sum(1 for r in reports if r.skipped)
    decided = sampled - skipped
    applicable = sum(
        1 for r in reports if r.accardi is not None and r.accardi.verdict != "not_applicable"
    )
    accardi_violations = sum(
        1 for r in reports if r.accardi is not None and r.accardi.verdict == "contextual"
    )
    lp_violations = sum(1 for r in reports if r.lp is not None and not r.lp.feasible)
    return PersEstimate(
        pers_accardi=accardi_violations / applicable if applicable else 0.0,
        pers_lp=lp_violations / decided if decided else 0.0,
        pers_accardi_sampled=accardi_violations / decided if decided else 0.0,
        sampled=sampled,
        decided=decided,
        applicable=applicable,
        violations=(accardi_violations, lp_violations),
        skipped=skipped,
        seed=plan.seed,
        ci95_accardi=wilson_interval(accardi_violations, applicable),
        ci95_lp=wilson_interval(lp_violations, decided),
    )


def estimate_pers(
    source,
    observables: ObservableSet,
    plan: SamplingPlan,
    workers: int = 1,
) -> PersEstimate:
    """Sample triples, run the pipeline on each, and tally the ratios."""
    triples = sample_triples(observables, plan)
    reports = evaluate_triples(source, triples, plan, workers=workers)
    return summarize(reports, plan)


def resolve_plan(plan: SamplingPlan, observables: ObservableSet) -> SamplingPlan:
    """A copy of the plan with num_triples made explicit for reporting."""
    if plan.num_triples is not None or plan.mode == "exhaustive":
        return plan
    return replace(plan, num_triples=min(1000, _num_triples(len(observables))))
