"""Independent feasibility oracle for cross-checking the production solver.

A dense phase-one simplex with Bland's rule, written from scratch on
plain numpy arrays: decides whether {x >= 0 : A x = b} is non-empty by
minimizing the total artificial mass.  Deliberately shares no code with
the package's solver path.
"""

from __future__ import annotations

import numpy as np

PIVOT_EPS = 1e-11


def phase_one_feasible(A, b, tol=1e-7):
    """Decide feasibility of A x = b, x >= 0.

    Returns (feasible, artificial_mass, x).  ``artificial_mass`` is the
    optimal total of the artificial variables: 0 (within tol) exactly
    when the system is feasible.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    m, n = A.shape
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    # tableau: columns = [x | artificials | rhs]; bottom row = reduced costs, rhs = -objective
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -b.sum()
    basis = list(range(n, n + m))

    for _ in range(100000):
        enter = -1
        for j in range(n + m):
            if T[m, j] < -PIVOT_EPS:
                enter = j
                break
        if enter == -1:
            break
        leave = -1
        best_ratio = None
        for i in range(m):
            coef = T[i, enter]
            if coef > PIVOT_EPS:
                ratio = T[i, -1] / coef
                if (
                    best_ratio is None
                    or ratio < best_ratio - 1e-12
                    or (abs(ratio - best_ratio) <= 1e-12 and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave == -1:
            raise RuntimeError("phase-one objective unbounded; cannot happen")
        pivot = T[leave, enter]
        T[leave] /= pivot
        for r in range(m + 1):
            if r != leave and T[r, enter] != 0.0:
                T[r] -= T[r, enter] * T[leave]
        basis[leave] = enter
    else:
        raise RuntimeError("simplex iteration limit hit")

    mass = -T[m, -1]
    x = np.zeros(n + m)
    for i, bv in enumerate(basis):
        x[bv] = T[i, -1]
    return mass <= tol, float(mass), x[:n]


def pair_constraint_rows(num_observables, num_outcomes, pair_tables):
    """Equality system (rows, rhs) for pair-marginal targets plus unit mass.

    ``pair_tables`` maps (a, b) with a < b to an n x n target table.
    Columns enumerate product outcomes with observable 0 most significant.
    """
    t, n = num_observables, num_outcomes
    size = n**t
    digits = [(np.arange(size) // n ** (t - 1 - k)) % n for k in range(t)]
    rows, rhs = [], []
    for (a, b), table in sorted(pair_tables.items()):
        table = np.asarray(table, dtype=float)
        for i in range(n):
            for j in range(n):
                rows.append(((digits[a] == i) & (digits[b] == j)).astype(float))
                rhs.append(table[i, j])
    rows.append(np.ones(size))
    rhs.append(1.0)
    return np.array(rows), np.array(rhs)


def oracle_decide(problem) -> bool:
    """Feasibility verdict for a JointFeasibilityProblem, simplex route."""
    rows, rhs = pair_constraint_rows(
        problem.num_observables, problem.num_outcomes, problem.pair_marginals
    )
    feasible, _, _ = phase_one_feasible(rows, rhs)
    return feasible
