"""Data sources: joint record tables, pairwise measurement logs, and
exact (infinite-sample) models.

Two empirical formats are first class because genuinely contextual
sources cannot supply one joint record per trial:

* ``JointRecordDataset``: every record assigns a value to every
  observable; a literal single sample space.
* ``PairLogDataset``: each entry reports outcomes for one pair of
  observables only; no global record ever exists.

The exact models (``ExactJointTable``, ``ExactQuantumModel``) expose
``pair_joint`` so pipelines can bypass sampling noise entirely.

Product outcomes are indexed with observable 0 as the most significant
digit: outcome index = sum over t of value_t * n**(T-1-t).  This
convention is shared with the feasibility witness vectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .observables import ObservableSet


def product_outcome_index(values, num_outcomes: int = 2) -> int:
    """Index of one product-space outcome under the canonical ordering."""
    idx = 0
    for v in values:
        idx = idx * num_outcomes + int(v)
    return idx


def frozen_array(values, dtype) -> np.ndarray:
    """An owned, read-only array; never freezes the caller's buffer."""
    array = np.asarray(values, dtype=dtype)
    if array is values or not array.flags.owndata:
        array = array.copy()
    array.flags.writeable = False
    return array


@dataclass(frozen=True, eq=False)
class JointRecordDataset:
    """Records that assign a 0/1 value to every observable at once."""

    observables: ObservableSet
    records: np.ndarray  # shape (N, T), values 0/1

    def __post_init__(self):
        records = frozen_array(self.records, np.uint8)
        if records.ndim != 2 or records.shape[1] != len(self.observables):
            raise ValueError(
                f"records must have shape (N, {len(self.observables)}), got {records.shape}"
            )
        if records.size and records.max() > 1:
            raise ValueError("record values must be 0 or 1")
        object.__setattr__(self, "records", records)

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True, eq=False)
class PairLogDataset:
    """Logged pairwise measurements: (observable, outcome, observable, outcome).

    Entries are stored column-wise as index arrays into ``observables``.
    """

    observables: ObservableSet
    first_index: np.ndarray
    first_value: np.ndarray
    second_index: np.ndarray
    second_value: np.ndarray

    def __post_init__(self):
        t = len(self.observables)
        cols = []
        for name in ("first_index", "first_value", "second_index", "second_value"):
            col = frozen_array(getattr(self, name), np.int64)
            if col.ndim != 1:
                raise ValueError(f"{name} must be one-dimensional")
            cols.append(col)
        if len({len(c) for c in cols}) > 1:
            raise ValueError("entry columns must have equal length")
        fi, fv, si, sv = cols
        for idx in (fi, si):
            if idx.size and (idx.min() < 0 or idx.max() >= t):
                raise ValueError("entry references an observable outside the set")
        for val in (fv, sv):
            if val.size and (val.min() < 0 or val.max() > 1):
                raise ValueError("logged values must be 0 or 1")
        for name, col in zip(
            ("first_index", "first_value", "second_index", "second_value"), cols
        ):
            object.__setattr__(self, name, col)

    @classmethod
    def from_entries(cls, observables: ObservableSet, entries) -> PairLogDataset:
        """Build from an iterable of (obs_a, val_a, obs_b, val_b) tuples."""
        fi, fv, si, sv = [], [], [], []
        for a, va, b, vb in entries:
            fi.append(observables.index_of(a))
            fv.append(va)
            si.append(observables.index_of(b))
            sv.append(vb)
        return cls(
            observables,
            np.array(fi, dtype=np.int64),
            np.array(fv, dtype=np.int64),
            np.array(si, dtype=np.int64),
            np.array(sv, dtype=np.int64),
        )

    def __len__(self) -> int:
        return len(self.first_index)

    def entries(self):
        """Yield entries as (obs_a_id, val_a, obs_b_id, val_b)."""
        ids = self.observables.ids()
        for fi, fv, si, sv in zip(
            self.first_index, self.first_value, self.second_index, self.second_value
        ):
            yield ids[fi], int(fv), ids[si], int(sv)


@dataclass(frozen=True, eq=False)
class ExactJointTable:
    """An explicit joint distribution over {0,1}^T: the infinite-sample limit
    of a JointRecordDataset."""

    observables: ObservableSet
    probabilities: np.ndarray  # flat, length 2**T, canonical outcome order

    def __post_init__(self):
        t = len(self.observables)
        probs = frozen_array(np.reshape(self.probabilities, -1), np.float64)
        if probs.size != 2**t:
            raise ValueError(f"need 2**{t} probabilities, got {probs.size}")
        if probs.min() < -1e-12:
            raise ValueError("probabilities must be non-negative")
        if not math.isclose(probs.sum(), 1.0, abs_tol=1e-9):
            raise ValueError("probabilities must sum to 1")
        object.__setattr__(self, "probabilities", probs)

    def pair_joint(self, a: str, b: str) -> np.ndarray:
        """Exact 2x2 table of P(A=i and B=j)."""
        t = len(self.observables)
        ia, ib = self.observables.index_of(a), self.observables.index_of(b)
        if ia == ib:
            raise ValueError("pair must name two distinct observables")
        cube = self.probabilities.reshape((2,) * t)
        keep = sorted((ia, ib))
        summed = cube.sum(axis=tuple(ax for ax in range(t) if ax not in keep))
        return summed if keep == [ia, ib] else summed.T


@dataclass(frozen=True, eq=False)
class ExactQuantumModel:
    """Analytic pairwise statistics of planar qubit measurements on the
    maximally mixed state.

    Both single-outcome priors are uniform and the same-outcome
    probability for directions separated by d degrees is cos^2(d/2), so
    every pair joint is the symmetric table [[p/2, (1-p)/2], [(1-p)/2, p/2]].
    """

    observables: ObservableSet
    angles_deg: tuple[float, ...]

    def __post_init__(self):
        if len(self.angles_deg) != len(self.observables):
            raise ValueError("one angle per observable required")

    def transition_param(self, a: str, b: str) -> float:
        ia, ib = self.observables.index_of(a), self.observables.index_of(b)
        return same_outcome_probability(self.angles_deg[ia], self.angles_deg[ib])

    def pair_joint(self, a: str, b: str) -> np.ndarray:
        p = self.transition_param(a, b)
        return np.array([[p / 2.0, (1.0 - p) / 2.0], [(1.0 - p) / 2.0, p / 2.0]])


def same_outcome_probability(angle_a_deg: float, angle_b_deg: float) -> float:
    """Born-rule probability that two planar qubit measurements agree."""
    half = math.radians(angle_a_deg - angle_b_deg) / 2.0
    return math.cos(half) ** 2
