"""Pasted overlapping contexts as hypergraphs, and their states.

Atoms are elementary outcomes; a context is a set of atoms forming one
local sample space.  Pasting contexts that share atoms yields a
combinatorial structure (a Greechie-style diagram / test space) on which
classical probability may or may not survive globally:

* a *state* assigns each atom a probability so that every context sums
  to 1 (global probabilistic consistency);
* a *two-valued state* assigns 0/1 with exactly one 1 per context; its
  non-existence is a Kochen-Specker-type obstruction.

Contexts of size 2 and cycles of any length are permitted here, although
strict Greechie diagrams for orthomodular structures forbid short cycles:
validation reports structural oddities instead of forbidding them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import ProblemTooLarge, SolverFailure
from .feasibility import linear_feasibility

STATE_TOL = 1e-9
MAX_STATE_ATOMS = 10**4
MAX_ENUMERATION_ATOMS = 64


@dataclass(frozen=True)
class ContextHypergraph:
    """Atoms plus contexts (subsets of atoms).

    Construction only requires well-formedness (contexts reference
    declared atoms and are non-empty); the structural invariants
    (coverage, no subset contexts, uniqueness, context size >= 2) are
    checked by :func:`validate`, which reports rather than rejects.
    """

    atoms: tuple[str, ...]
    contexts: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        atoms = tuple(self.atoms)
        known = set(atoms)
        if not all(atoms):
            raise ValueError("atom ids must be non-empty")
        contexts = []
        for context in self.contexts:
            members = tuple(context)
            if not members:
                raise ValueError("contexts must be non-empty")
            unknown = [m for m in members if m not in known]
            if unknown:
                raise ValueError(f"context references undeclared atoms: {unknown}")
            contexts.append(members)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "contexts", tuple(contexts))


@dataclass(frozen=True)
class ValidationReport:
    """Structural findings; ``ok`` means every invariant holds."""

    uncovered_atoms: tuple[str, ...]
    subset_contexts: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]
    duplicate_atoms: tuple[str, ...]
    duplicate_contexts: tuple[tuple[str, ...], ...]
    undersized_contexts: tuple[tuple[str, ...], ...]

    @property
    def ok(self) -> bool:
        return not (
            self.uncovered_atoms
            or self.subset_contexts
            or self.duplicate_atoms
            or self.duplicate_contexts
            or self.undersized_contexts
        )

    def issues(self) -> list[str]:
        out = []
        for atom in self.uncovered_atoms:
            out.append(f"atom {atom!r} belongs to no context")
        for small, big in self.subset_contexts:
            out.append(f"context {small} is a subset of {big}")
        for atom in self.duplicate_atoms:
            out.append(f"duplicate atom id {atom!r}")
        for context in self.duplicate_contexts:
            out.append(f"duplicate context {context}")
        for context in self.undersized_contexts:
            out.append(f"context {context} has fewer than 2 atoms")
        return out


@dataclass(frozen=True)
class State:
    """Probabilities on atoms summing to 1 in every context."""

    values: dict[str, float]

    def satisfies(self, hypergraph: ContextHypergraph, tol: float = STATE_TOL) -> bool:
        for context in hypergraph.contexts:
            total = sum(self.values[a] for a in set(context))
            if abs(total - 1.0) > tol:
                return False
        return all(-tol <= v <= 1.0 + tol for v in self.values.values())


@dataclass(frozen=True)
class TwoValuedState:
    """A 0/1 state: exactly one atom valued 1 in every context."""

    values: dict[str, int]

    def as_state(self) -> State:
        return State({a: float(v) for a, v in self.values.items()})


def validate(hypergraph: ContextHypergraph) -> ValidationReport:
    """Report all structural invariant violations without rejecting."""
    covered = set()
    for context in hypergraph.contexts:
        covered.update(context)
    uncovered = tuple(a for a in hypergraph.atoms if a not in covered)

    seen_atoms, dup_atoms = set(), []
    for atom in hypergraph.atoms:
        if atom in seen_atoms and atom not in dup_atoms:
            dup_atoms.append(atom)
        seen_atoms.add(atom)

    as_sets = [frozenset(c) for c in hypergraph.contexts]
    seen_ctx, dup_ctx = set(), []
    for context, members in zip(hypergraph.contexts, as_sets):
        if members in seen_ctx:
            dup_ctx.append(context)
        seen_ctx.add(members)

    subsets = []
    for i, small in enumerate(as_sets):
        for j, big in enumerate(as_sets):
            if i != j and small < big:
                subsets.append((hypergraph.contexts[i], hypergraph.contexts[j]))

    undersized = tuple(c for c in hypergraph.contexts if len(set(c)) < 2)
    return ValidationReport(
        uncovered_atoms=uncovered,
        subset_contexts=tuple(subsets),
        duplicate_atoms=tuple(dup_atoms),
        duplicate_contexts=tuple(dup_ctx),
        undersized_contexts=undersized,
    )


def _context_matrix(hypergraph: ContextHypergraph) -> tuple[np.ndarray, dict[str, int]]:
    index = {atom: k for k, atom in enumerate(hypergraph.atoms)}
    if len(index) != len(hypergraph.atoms):
        raise ValueError("duplicate atom ids; fix the hypergraph before solving")
    rows = np.zeros((len(hypergraph.contexts), len(hypergraph.atoms)))
    for r, context in enumerate(hypergraph.contexts):
        for atom in set(context):
            rows[r, index[atom]] = 1.0
    return rows, index


def find_state(hypergraph: ContextHypergraph, tol: float = STATE_TOL) -> State | None:
    """A probability assignment satisfying every context sum, or None.

    Solved through the same linear-feasibility contract as the marginal
    problems: one variable per atom, one sum-to-1 constraint per context,
    non-negativity.

    Raises:
        ProblemTooLarge: more than 10**4 atoms.
    """
    if len(hypergraph.atoms) > MAX_STATE_ATOMS:
        raise ProblemTooLarge(f"{len(hypergraph.atoms)} atoms exceed {MAX_STATE_ATOMS}")
    rows, index = _context_matrix(hypergraph)
    if rows.shape[0] == 0:
        return State({a: 0.0 for a in hypergraph.atoms})
    residual, x = linear_feasibility(rows, np.ones(rows.shape[0]))
    if residual > tol:
        return None
    covered = rows.any(axis=0)
    state = State(
        {atom: float(x[k]) if covered[k] else 0.0 for atom, k in index.items()}
    )
    if not state.satisfies(hypergraph, max(tol, 10 * residual + 1e-12)):
        raise SolverFailure("solver returned a state that fails independent recheck")
    return state


def state_is_unique(hypergraph: ContextHypergraph, tol: float = STATE_TOL) -> bool:
    """Heuristic uniqueness probe: re-solve with two opposed objectives.

    Returns True when both optima coincide entrywise within tolerance
    ("unique up to tolerance").  Requires that a state exists.
    """
    rows, _ = _context_matrix(hypergraph)
    cost = np.arange(1.0, len(hypergraph.atoms) + 1.0)
    witnesses = []
    for sign in (1.0, -1.0):
        result = _solve_with_objective(rows, np.ones(rows.shape[0]), sign * cost)
        if result is None:
            raise ValueError("no state exists; uniqueness is undefined")
        witnesses.append(result)
    return bool(np.abs(witnesses[0] - witnesses[1]).max() <= tol)


def _solve_with_objective(rows, rhs, cost) -> np.ndarray | None:
    # state values are probabilities, so [0, 1] bounds are part of the model
    result = linprog(cost, A_eq=rows, b_eq=rhs, bounds=(0, 1), method="highs")
    if result.status == 2:
        return None
    if result.status != 0:
        raise SolverFailure(f"objective probe failed: {result.message}")
    return result.x


def enumerate_two_valued_states(
    hypergraph: ContextHypergraph, limit: int | None = None
) -> list[TwoValuedState]:
    """All 0/1 states with exactly one atom true per context.

    Exhaustive backtracking (exact-cover style), deterministic: contexts
    are processed in declaration order and atoms tried lexicographically;
    the returned list is sorted lexicographically by the value vector
    over atom ids.  An empty result certifies a Kochen-Specker-type
    obstruction at the 0/1 level.

    Atoms outside every context are pinned to 0, so enumeration is
    meaningful primarily for hypergraphs that validate.

    Raises:
        ProblemTooLarge: more than 64 atoms.
    """
    atoms = hypergraph.atoms
    if len(atoms) > MAX_ENUMERATION_ATOMS:
        raise ProblemTooLarge(f"{len(atoms)} atoms exceed {MAX_ENUMERATION_ATOMS}")
    if limit is not None and limit <= 0:
        return []

    atom_contexts: dict[str, list[int]] = {a: [] for a in atoms}
    contexts = [tuple(sorted(set(c))) for c in hypergraph.contexts]
    for ci, context in enumerate(contexts):
        for atom in context:
            atom_contexts[atom].append(ci)

    assignment: dict[str, int] = {}
    found: list[dict[str, int]] = []

    def assign(atom: str, value: int, trail: list[str]) -> bool:
        """Set atom=value, propagating exclusions; False on conflict."""
        if atom in assignment:
            return assignment[atom] == value
        assignment[atom] = value
        trail.append(atom)
        if value == 1:
            for ci in atom_contexts[atom]:
                for other in contexts[ci]:
                    if other != atom and not assign(other, 0, trail):
                        return False
        return True

    def context_state(ci: int) -> tuple[bool, list[str]]:
        has_one = any(assignment.get(a) == 1 for a in contexts[ci])
        open_atoms = [a for a in contexts[ci] if a not in assignment]
        return has_one, open_atoms

    def search(ci: int):
        if limit is not None and len(found) >= limit:
            return
        if ci == len(contexts):
            complete = dict(assignment)
            for atom in atoms:
                complete.setdefault(atom, 0)
            found.append(complete)
            return
        has_one, open_atoms = context_state(ci)
        if has_one:
            trail: list[str] = []
            if all(assign(a, 0, trail) for a in open_atoms):
                search(ci + 1)
            for a in trail:
                del assignment[a]
            return
        if not open_atoms:
            return  # every atom 0: context unsatisfiable on this branch
        for chosen in open_atoms:
            trail = []
            ok = assign(chosen, 1, trail) and all(
                assign(a, 0, trail) for a in open_atoms if a != chosen
            )
            if ok:
                search(ci + 1)
            for a in trail:
                del assignment[a]

    search(0)
    ordered_ids = sorted(set(atoms))
    found.sort(key=lambda values: tuple(values[a] for a in ordered_ids))
    return [TwoValuedState(values) for values in found]


def is_connected(hypergraph: ContextHypergraph) -> bool:
    """True when the contexts form one pasted component via shared atoms."""
    contexts = [set(c) for c in hypergraph.contexts]
    if len(contexts) <= 1:
        return True
    remaining = set(range(len(contexts)))
    stack = [remaining.pop()]
    component = set(stack)
    while stack:
        current = stack.pop()
        linked = [i for i in remaining if contexts[i] & contexts[current]]
        for i in linked:
            remaining.discard(i)
            component.add(i)
            stack.append(i)
    return not remaining


def contingency_to_hypergraph(
    relevant_id: str = "A", retrieved_id: str = "B", split: bool = False
) -> ContextHypergraph:
    """Hypergraph form(s) of the classical 2x2 contingency table.

    Default: the degenerate classical picture, four intersection atoms
    in a single context (one sample space of four points).  With
    ``split=True``: two separate binary contexts, one per observable,
    sharing no atoms, i.e. an unpasted pair (see :func:`is_connected`).
    """
    a, b = relevant_id, retrieved_id
    if split:
        atoms = (a, f"~{a}", b, f"~{b}")
        contexts = ((a, f"~{a}"), (b, f"~{b}"))
    else:
        atoms = (f"{a}&{b}", f"{a}&~{b}", f"~{a}&{b}", f"~{a}&~{b}")
        contexts = (atoms,)
    return ContextHypergraph(atoms=atoms, contexts=contexts)
