"""Exact single-sample-space decision by linear feasibility.

Given target joint tables for pairs of observables, the question is
whether a non-negative probability vector over the full product sample
space (n outcomes per observable, n**T points) reproduces every pair
marginal.  This is decided by a phase-one style solve that minimizes the
largest entrywise deviation t:

    minimize t  subject to  |marginal(x) - target| <= t  entrywise,
                            sum(x) = 1, x >= 0, t >= 0.

The optimum is reported as ``max_violation``; the problem is feasible
exactly when it falls below the problem tolerance.  Any witness is a
genuine joint distribution certifying classicality; a strictly positive
optimum certifies that no single sample space exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .accardi import AccardiVerdict, TripleParams, accardi_check, triple_params
from .errors import InconsistentOrientations, ProblemTooLarge, SolverFailure
from .datasets import frozen_array
from .observables import ObservableSet
from .transitions import DEFAULT_BISTOCHASTIC_TOL, TransitionMatrix

DEFAULT_FEASIBILITY_TOL = 1e-8
MAX_PRODUCT_OUTCOMES = 10**6


@dataclass(frozen=True)
class JointFeasibilityProblem:
    """Pair-marginal targets over a product sample space.

    Attributes:
        num_observables: T.
        num_outcomes: outcomes per observable, n.
        pair_marginals: map from index pairs (a, b) with a < b to n x n
            tables J[i][j] = target P(A_a = i and A_b = j).  Pairs not
            present are unconstrained (partial marginal problems are
            allowed: pair logs may simply lack some pairs).
        tolerance: feasibility slack bound.
        observable_ids: optional display names, index-aligned.
    """

    num_observables: int
    num_outcomes: int
    pair_marginals: dict[tuple[int, int], np.ndarray]
    tolerance: float = DEFAULT_FEASIBILITY_TOL
    observable_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        t, n = self.num_observables, self.num_outcomes
        if t < 1 or n < 2:
            raise ValueError("need at least one observable with two outcomes")
        tables = {}
        for key, table in self.pair_marginals.items():
            a, b = key
            if not (0 <= a < b < t):
                raise ValueError(f"pair key {key} must satisfy 0 <= a < b < T")
            table = frozen_array(table, np.float64)
            if table.shape != (n, n):
                raise ValueError(f"pair {key}: table must be {n}x{n}")
            if table.min() < -1e-12:
                raise ValueError(f"pair {key}: negative entry")
            if not math.isclose(table.sum(), 1.0, abs_tol=1e-9):
                raise ValueError(f"pair {key}: entries must sum to 1")
            tables[key] = table
        object.__setattr__(self, "pair_marginals", tables)
        if self.observable_ids is not None and len(self.observable_ids) != t:
            raise ValueError("observable_ids must match num_observables")


@dataclass(frozen=True, eq=False)
class FeasibilityResult:
    """Verdict of a feasibility solve.

    ``witness`` is a probability vector over the n**T product outcomes in
    canonical order (observable 0 most significant), present iff feasible.
    ``max_violation`` is the optimal residual: 0 (to solver precision)
    when feasible, strictly positive when not.
    """

    feasible: bool
    witness: np.ndarray | None
    max_violation: float


def linear_feasibility(
    soft_rows: np.ndarray, soft_rhs: np.ndarray, eq_rows: np.ndarray | None = None,
    eq_rhs: np.ndarray | None = None,
) -> tuple[float, np.ndarray]:
    """Minimize the largest deviation of soft equality constraints.

    Solves min t over x >= 0, t >= 0 with |soft_rows @ x - soft_rhs| <= t
    and eq_rows @ x = eq_rhs held exactly.  Returns (optimal t, x).

    Raises:
        SolverFailure: numerical breakdown; this program is feasible and
            bounded by construction, so any solver failure is numerical.
    """
    soft_rhs = np.asarray(soft_rhs, dtype=np.float64)
    num_rows, num_vars = soft_rows.shape
    if sparse.issparse(soft_rows):
        ones = sparse.csr_matrix(np.ones((num_rows, 1)))
        a_ub = sparse.vstack(
            [sparse.hstack([soft_rows, -ones]), sparse.hstack([-soft_rows, -ones])]
        ).tocsr()
    else:
        soft_rows = np.asarray(soft_rows, dtype=np.float64)
        ones = np.ones((num_rows, 1))
        a_ub = np.block([[soft_rows, -ones], [-soft_rows, -ones]])
    b_ub = np.concatenate([soft_rhs, -soft_rhs])
    a_eq = b_eq = None
    if eq_rows is not None:
        eq_rows = np.asarray(eq_rows, dtype=np.float64)
        a_eq = np.hstack([eq_rows, np.zeros((eq_rows.shape[0], 1))])
        b_eq = np.asarray(eq_rhs, dtype=np.float64)
    cost = np.zeros(num_vars + 1)
    cost[-1] = 1.0
    result = linprog(
        cost, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq,
        bounds=(0, None), method="highs", options={"presolve": False},
    )
    if result.status != 0:
        raise SolverFailure(f"linear feasibility solve failed: {result.message}")
    return max(float(result.fun), 0.0), result.x[:num_vars]


def _outcome_digits(num_observables: int, num_outcomes: int) -> np.ndarray:
    """digits[t][k] = value of observable t in product outcome k."""
    size = num_outcomes**num_observables
    ks = np.arange(size)
    return np.stack(
        [
            (ks // num_outcomes ** (num_observables - 1 - t)) % num_outcomes
            for t in range(num_observables)
        ]
    )


def pair_marginal(
    witness: np.ndarray, num_observables: int, num_outcomes: int, pair: tuple[int, int]
) -> np.ndarray:
    """Marginal table of a product-space distribution for one index pair."""
    a, b = pair
    cube = np.asarray(witness).reshape((num_outcomes,) * num_observables)
    axes = tuple(ax for ax in range(num_observables) if ax not in (a, b))
    table = cube.sum(axis=axes)
    return table if a < b else table.T


def decide_feasibility(problem: JointFeasibilityProblem) -> FeasibilityResult:
    """Decide whether a single joint distribution matches all pair targets.

    Raises:
        ProblemTooLarge: n**T exceeds the desk-scale guard (10**6).
        SolverFailure: numerical breakdown, distinguishable from an
            infeasible verdict.
    """
    t, n = problem.num_observables, problem.num_outcomes
    size = n**t
    if size > MAX_PRODUCT_OUTCOMES:
        raise ProblemTooLarge(f"product sample space has {size} > {MAX_PRODUCT_OUTCOMES} points")
    if not problem.pair_marginals:
        witness = np.full(size, 1.0 / size)
        return FeasibilityResult(feasible=True, witness=witness, max_violation=0.0)

    digits = _outcome_digits(t, n)
    row_columns, rhs = [], []
    for (a, b) in sorted(problem.pair_marginals):
        table = problem.pair_marginals[(a, b)]
        for i in range(n):
            for j in range(n):
                row_columns.append(np.flatnonzero((digits[a] == i) & (digits[b] == j)))
                rhs.append(table[i, j])
    num_rows = len(row_columns)
    if num_rows * size > 5_000_000:
        indptr = np.cumsum([0] + [len(c) for c in row_columns])
        indices = np.concatenate(row_columns)
        soft_rows = sparse.csr_matrix(
            (np.ones(len(indices)), indices, indptr), shape=(num_rows, size)
        )
    else:
        soft_rows = np.zeros((num_rows, size))
        for k, cols in enumerate(row_columns):
            soft_rows[k, cols] = 1.0
    soft_rhs = np.array(rhs)
    mass_row = np.ones((1, size))

    violation, x = linear_feasibility(soft_rows, soft_rhs, mass_row, np.array([1.0]))
    if violation > problem.tolerance:
        return FeasibilityResult(feasible=False, witness=None, max_violation=violation)

    # Independent recheck of the returned witness before certifying.
    actual = max(
        float(np.abs(pair_marginal(x, t, n, key) - table).max())
        for key, table in problem.pair_marginals.items()
    )
    actual = max(actual, abs(float(x.sum()) - 1.0))
    if actual > 2 * problem.tolerance:
        raise SolverFailure(
            f"solver reported residual {violation:g} but witness violates targets by {actual:g}"
        )
    return FeasibilityResult(feasible=True, witness=x, max_violation=violation)


def build_problem(
    matrices: list[TransitionMatrix] | tuple[TransitionMatrix, ...],
    observables: ObservableSet,
    tolerance: float = DEFAULT_FEASIBILITY_TOL,
) -> JointFeasibilityProblem:
    """Joint targets from transition matrices carrying priors.

    Each matrix contributes the pair joint J(i, j) = P(cond = i) *
    P(other = j | cond = i) for its pair.  When both orientations of one
    pair are supplied their implied joints must agree within tolerance.

    Raises:
        InconsistentOrientations: the two orientations disagree beyond
            tolerance; reported rather than averaged.
    """
    targets: dict[tuple[int, int], np.ndarray] = {}
    first_seen: dict[tuple[int, int], tuple[str, str]] = {}
    for matrix in matrices:
        a, b = matrix.pair
        ia, ib = observables.index_of(a), observables.index_of(b)
        key = (ia, ib) if ia < ib else (ib, ia)
        table = matrix.joint if ia < ib else matrix.joint.T
        if key in targets:
            gap = float(np.abs(targets[key] - table).max())
            if gap > tolerance:
                raise InconsistentOrientations(
                    f"orientations {first_seen[key]} and {matrix.pair} imply joint "
                    f"tables differing by {gap:g} (> {tolerance:g})"
                )
            continue  # keep the first-listed orientation
        targets[key] = table
        first_seen[key] = matrix.pair
    return JointFeasibilityProblem(
        num_observables=len(observables),
        num_outcomes=2,
        pair_marginals=targets,
        tolerance=tolerance,
        observable_ids=observables.ids(),
    )


def bistochastic_triple_problem(
    p: float, q: float, r: float, tolerance: float = DEFAULT_FEASIBILITY_TOL
) -> JointFeasibilityProblem:
    """The uniform-prior problem for symmetric parameters (p, q, r).

    Pair {A,B} carries p, {B,C} carries q, {C,A} carries r; with uniform
    priors each target is the symmetric table
    [[s/2, (1-s)/2], [(1-s)/2, s/2]].
    """

    def table(s: float) -> np.ndarray:
        return np.array([[s / 2.0, (1.0 - s) / 2.0], [(1.0 - s) / 2.0, s / 2.0]])

    return JointFeasibilityProblem(
        num_observables=3,
        num_outcomes=2,
        pair_marginals={(0, 1): table(p), (1, 2): table(q), (0, 2): table(r)},
        tolerance=tolerance,
        observable_ids=("A", "B", "C"),
    )


def feasibility_from_dataset(
    source,
    ids: tuple[str, str, str],
    smoothing: float = 0.0,
    bistochastic_tol: float = DEFAULT_BISTOCHASTIC_TOL,
    tolerance: float = DEFAULT_FEASIBILITY_TOL,
) -> tuple[TripleParams, AccardiVerdict, FeasibilityResult]:
    """End-to-end pipeline for one triple: estimate, check invariants, solve.

    Returns the triple parameters, the closed-form verdict, and the
    feasibility result for the pair-joint targets implied by the data.
    """
    params, matrices = triple_params(source, ids, smoothing, bistochastic_tol)
    verdict = accardi_check(params)
    triple_set = source.observables.subset(ids)
    problem = build_problem(matrices, triple_set, tolerance)
    result = decide_feasibility(problem)
    return params, verdict, result
