"""Closed-form classicality test for triples of binary observables.

For three binary observables whose pairwise transition matrices are
bistochastic with parameters p = P(A|B), q = P(B|C), r = P(C|A), the
statistics admit a single sample space (a Kolmogorovian model) if and
only if the Accardi statistical invariants hold:

    |p + q - 1| <= r <= 1 - |p - q|

Equivalently, the symmetric system p+q+r >= 1, p+q-r <= 1, p-q+r <= 1,
-p+q+r <= 1, which makes the verdict invariant under permutations of
(p, q, r) and under outcome relabelings of any one observable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .transitions import DEFAULT_BISTOCHASTIC_TOL, TransitionMatrix, pair_transition

EQUALITY_TOL = 1e-9

Verdict = Literal["classical", "contextual", "not_applicable"]


@dataclass(frozen=True)
class TripleParams:
    """Symmetric transition parameters of an ordered observable triple (A, B, C).

    Attributes:
        observables: the triple ids.
        p, q, r: bistochastic parameters of P(A|B), P(B|C), P(C|A).  When a
            matrix is not bistochastic within tolerance these hold the
            symmetrized midpoint (M[0][0] + M[1][1]) / 2 and ``applicable``
            is False.
        applicable: all three matrices bistochastic within tolerance.
        deviations: bistochastic deviations of the three matrices, in the
            same cyclic order as (p, q, r).
    """

    observables: tuple[str, str, str]
    p: float
    q: float
    r: float
    applicable: bool
    deviations: tuple[float, float, float]

    def __post_init__(self):
        for name, value in (("p", self.p), ("q", self.q), ("r", self.r)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class AccardiVerdict:
    """Outcome of the invariant check.

    ``slack`` = min(r - |p+q-1|, 1 - |p-q| - r): non-negative iff the
    invariants hold, and its magnitude measures the distance to the
    boundary.  ``not_applicable`` means the bistochastic hypothesis
    failed; the linear-programming route remains available.
    """

    verdict: Verdict
    lower: float
    upper: float
    slack: float


def accardi_check(params: TripleParams, equality_tol: float = EQUALITY_TOL) -> AccardiVerdict:
    """Classify a parameter triple as classical or contextual.

    Boundary cases (|slack| <= equality_tol) count as classical: the
    invariants are non-strict inequalities.
    """
    p, q, r = params.p, params.q, params.r
    lower = abs(p + q - 1.0)
    upper = 1.0 - abs(p - q)
    slack = min(r - lower, upper - r)
    if not params.applicable:
        verdict: Verdict = "not_applicable"
    elif slack >= -equality_tol:
        verdict = "classical"
    else:
        verdict = "contextual"
    return AccardiVerdict(verdict=verdict, lower=lower, upper=upper, slack=slack)


def triple_params(
    source,
    ids: tuple[str, str, str],
    smoothing: float = 0.0,
    bistochastic_tol: float = DEFAULT_BISTOCHASTIC_TOL,
) -> tuple[TripleParams, tuple[TransitionMatrix, TransitionMatrix, TransitionMatrix]]:
    """Estimate the cyclic transition matrices of a triple and its parameters.

    Returns the params together with the three matrices (P(A|B), P(B|C),
    P(C|A)) so callers can reuse them, e.g. as joint targets for the
    feasibility solver.
    """
    a, b, c = ids
    if len({a, b, c}) != 3:
        raise ValueError("triple must name three distinct observables")
    m_ab = pair_transition(source, b, a, smoothing, bistochastic_tol)  # P(A|B)
    m_bc = pair_transition(source, c, b, smoothing, bistochastic_tol)  # P(B|C)
    m_ca = pair_transition(source, a, c, smoothing, bistochastic_tol)  # P(C|A)
    matrices = (m_ab, m_bc, m_ca)
    params = TripleParams(
        observables=(a, b, c),
        p=m_ab.symmetrized_param,
        q=m_bc.symmetrized_param,
        r=m_ca.symmetrized_param,
        applicable=all(m.bistochastic_param is not None for m in matrices),
        deviations=tuple(m.bistochastic_deviation for m in matrices),
    )
    return params, matrices
