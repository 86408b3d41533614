"""Pairwise counting and conditional-probability (transition) estimation.

A transition matrix between two binary observables is row stochastic in
general; the classicality test for triples assumes the bistochastic
one-parameter form.  Estimation therefore records how far each matrix is
from bistochastic (``bistochastic_deviation``) and exposes the single
parameter only when the deviation is within tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .datasets import (
    ExactJointTable,
    ExactQuantumModel,
    JointRecordDataset,
    PairLogDataset,
    frozen_array,
)
from .errors import EmptyPairData, PairMismatch, ZeroConditioningRow

DEFAULT_BISTOCHASTIC_TOL = 0.05

_UNSET = object()  # distinguishes "not supplied" from an explicit None


@dataclass(frozen=True, eq=False)
class CountTable:
    """2x2 pair counts: counts[i][j] = number of trials with A=i and B=j."""

    pair: tuple[str, str]
    counts: np.ndarray

    def __post_init__(self):
        counts = frozen_array(self.counts, np.int64)
        if counts.shape != (2, 2):
            raise ValueError("counts must be a 2x2 table")
        if counts.min() < 0:
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def transposed(self) -> CountTable:
        return CountTable((self.pair[1], self.pair[0]), self.counts.T)


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Conditional probabilities of one binary observable given another.

    Attributes:
        pair: (conditioning id, conditioned id); entries[i][j] is
            P(conditioned = j | conditioning = i).
        entries: 2x2 row-stochastic matrix.
        priors: P(conditioning = 0), P(conditioning = 1).
        joint: 2x2 table priors[i] * entries[i][j] = P(A=i and B=j).
            Materialized so that downstream consistency checks and joint
            targets use one rounding of the underlying ratios.
        bistochastic_param: the single parameter (entries[0][0] +
            entries[1][1]) / 2, present only when the matrix is
            bistochastic within the tolerance used at estimation time
            (the default tolerance when constructed directly).
        bistochastic_deviation: |entries[0][0] - entries[1][1]|.
    """

    pair: tuple[str, str]
    entries: np.ndarray
    priors: np.ndarray
    joint: np.ndarray = None  # type: ignore[assignment]
    bistochastic_param: float | None = _UNSET  # type: ignore[assignment]
    bistochastic_deviation: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.pair[0] == self.pair[1]:
            raise ValueError("pair must name two distinct observables")
        entries = np.asarray(self.entries, dtype=np.float64)
        priors = np.asarray(self.priors, dtype=np.float64)
        if entries.shape != (2, 2) or priors.shape != (2,):
            raise ValueError("entries must be 2x2 and priors length 2")
        if entries.min() < -1e-12 or entries.max() > 1 + 1e-12:
            raise ValueError("entries must lie in [0, 1]")
        if not np.allclose(entries.sum(axis=1), 1.0, rtol=0.0, atol=1e-9):
            raise ValueError("each row of a transition matrix must sum to 1")
        if not math.isclose(priors.sum(), 1.0, abs_tol=1e-9):
            raise ValueError("priors must sum to 1")
        joint = self.joint
        joint = priors[:, None] * entries if joint is None else np.asarray(joint, np.float64)
        deviation = self.bistochastic_deviation
        if deviation is None:
            deviation = float(abs(entries[0, 0] - entries[1, 1]))
        for name, arr in (("entries", entries), ("priors", priors), ("joint", joint)):
            object.__setattr__(self, name, frozen_array(arr, np.float64))
        object.__setattr__(self, "bistochastic_deviation", deviation)
        if self.bistochastic_param is _UNSET:
            param = None
            if deviation <= DEFAULT_BISTOCHASTIC_TOL:
                param = float((entries[0, 0] + entries[1, 1]) / 2.0)
            object.__setattr__(self, "bistochastic_param", param)

    @property
    def symmetrized_param(self) -> float:
        """(entries[0][0] + entries[1][1]) / 2, regardless of applicability."""
        return float((self.entries[0, 0] + self.entries[1, 1]) / 2.0)


@dataclass(frozen=True)
class ConsistencyReport:
    """Result of a two-orientation Bayes-consistency check."""

    pair: tuple[str, str]
    discrepancy: float
    consistent: bool
    tolerance: float


def count_pairs(dataset, a: str, b: str) -> CountTable:
    """Count joint outcomes of observables ``a`` and ``b``.

    Joint datasets are counted record by record; pair logs count every
    entry mentioning the unordered pair, transposing entries logged in
    (b, a) orientation.

    Raises:
        UnknownObservable: an id is not in the dataset.
        EmptyPairData: no records, or no logged entries for this pair.
    """
    if a == b:
        raise ValueError("pair must name two distinct observables")
    obs = dataset.observables
    ia, ib = obs.index_of(a), obs.index_of(b)
    counts = np.zeros((2, 2), dtype=np.int64)
    if isinstance(dataset, JointRecordDataset):
        if len(dataset) == 0:
            raise EmptyPairData(f"no records for pair ({a!r}, {b!r})")
        col_a = dataset.records[:, ia].astype(np.int64)
        col_b = dataset.records[:, ib].astype(np.int64)
        np.add.at(counts, (col_a, col_b), 1)
    elif isinstance(dataset, PairLogDataset):
        forward = (dataset.first_index == ia) & (dataset.second_index == ib)
        backward = (dataset.first_index == ib) & (dataset.second_index == ia)
        if not forward.any() and not backward.any():
            raise EmptyPairData(f"no logged pairs for ({a!r}, {b!r})")
        np.add.at(counts, (dataset.first_value[forward], dataset.second_value[forward]), 1)
        np.add.at(counts, (dataset.second_value[backward], dataset.first_value[backward]), 1)
    else:
        raise TypeError(f"cannot count pairs on {type(dataset).__name__}")
    return CountTable((a, b), counts)


def estimate_transition(
    counts: CountTable,
    smoothing: float = 0.0,
    bistochastic_tol: float = DEFAULT_BISTOCHASTIC_TOL,
) -> TransitionMatrix:
    """Estimate conditionals and priors from a pair count table.

    With additive smoothing ``smoothing`` = a:

        entries[i][j] = (counts[i][j] + a) / (row_i + 2a)
        priors[i]     = (row_i + 2a) / (total + 4a)

    Raises:
        ZeroConditioningRow: a = 0 and some conditioning outcome never
            occurs, so the conditional is undefined.
    """
    if smoothing < 0:
        raise ValueError("smoothing must be non-negative")
    table = counts.counts.astype(np.float64)
    rows = table.sum(axis=1)
    if smoothing == 0.0 and (rows == 0).any():
        i = int(np.argmin(rows))
        raise ZeroConditioningRow(
            f"outcome {i} of {counts.pair[0]!r} never occurs; "
            "conditionals undefined without smoothing"
        )
    denom_rows = rows + 2.0 * smoothing
    denom_total = table.sum() + 4.0 * smoothing
    entries = (table + smoothing) / denom_rows[:, None]
    priors = denom_rows / denom_total
    joint = (table + smoothing) / denom_total
    return _finish(counts.pair, entries, priors, joint, bistochastic_tol)


def transition_from_joint(
    pair: tuple[str, str],
    joint: np.ndarray,
    bistochastic_tol: float = DEFAULT_BISTOCHASTIC_TOL,
) -> TransitionMatrix:
    """Exact transition matrix from an explicit 2x2 pair joint table."""
    joint = np.asarray(joint, dtype=np.float64)
    rows = joint.sum(axis=1)
    if (rows == 0).any():
        i = int(np.argmin(rows))
        raise ZeroConditioningRow(
            f"outcome {i} of {pair[0]!r} has zero probability; conditionals undefined"
        )
    entries = joint / rows[:, None]
    return _finish(pair, entries, rows, joint, bistochastic_tol)


def _finish(pair, entries, priors, joint, bistochastic_tol) -> TransitionMatrix:
    deviation = float(abs(entries[0, 0] - entries[1, 1]))
    param = None
    if deviation <= bistochastic_tol:
        param = float((entries[0, 0] + entries[1, 1]) / 2.0)
    return TransitionMatrix(
        pair=pair,
        entries=entries,
        priors=priors,
        joint=joint,
        bistochastic_param=param,
        bistochastic_deviation=deviation,
    )


def pair_transition(
    source,
    conditioning: str,
    conditioned: str,
    smoothing: float = 0.0,
    bistochastic_tol: float = DEFAULT_BISTOCHASTIC_TOL,
) -> TransitionMatrix:
    """Transition matrix P(conditioned | conditioning) from any source.

    Exact models are evaluated analytically; empirical datasets are
    counted and estimated with the given smoothing.
    """
    if isinstance(source, (ExactJointTable, ExactQuantumModel)):
        joint = source.pair_joint(conditioning, conditioned)
        return transition_from_joint((conditioning, conditioned), joint, bistochastic_tol)
    return estimate_transition(
        count_pairs(source, conditioning, conditioned), smoothing, bistochastic_tol
    )


def bayes_consistency(
    t_ab: TransitionMatrix, t_ba: TransitionMatrix, tol: float = 1e-9
) -> ConsistencyReport:
    """Check that two orientations of a pair describe one joint distribution.

    The discrepancy is max over outcomes (i, j) of
    |P(A=i) P(B=j|A=i) - P(B=j) P(A=i|B=j)|, i.e. the largest entrywise
    disagreement between the two implied joint tables.

    Raises:
        PairMismatch: the matrices do not cover the same unordered pair
            in opposite orientations.
    """
    if t_ab.pair != (t_ba.pair[1], t_ba.pair[0]):
        raise PairMismatch(
            f"orientations do not match: {t_ab.pair} vs {t_ba.pair}"
        )
    discrepancy = float(np.abs(t_ab.joint - t_ba.joint.T).max())
    return ConsistencyReport(
        pair=t_ab.pair,
        discrepancy=discrepancy,
        consistent=discrepancy <= tol,
        tolerance=tol,
    )
