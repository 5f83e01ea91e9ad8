"""Window-bounded exact linear algebra over the fraction field Q(q).

This is the desk-scale oracle behind translation maps, graded translation
maps, membership tests and the derived calculus data: enumerate candidate
elements on a window, extract coefficients per term key, and solve the
resulting system exactly.  Everything is deterministic given the candidate
order.
"""

from __future__ import annotations

from .scalars import Frac, Scalar


class NoSolutionError(RuntimeError):
    """The window admits no solution for the requested system."""


class LinearSolution:
    """Coefficient vector for a span problem, with free-parameter count."""

    def __init__(self, coeffs, free_params=0):
        self.coeffs = list(coeffs)
        self.free_params = free_params

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        return f"LinearSolution({self.coeffs}, free={self.free_params})"


def _vectorize(elems):
    keys = []
    seen = {}
    cols = []
    for e in elems:
        col = {}
        for k, c in e.terms.items():
            if k not in seen:
                seen[k] = len(keys)
                keys.append(k)
            col[seen[k]] = c
        cols.append(col)
    return keys, cols


def solve_in_span(candidates, target, frac=False):
    """Scalars ``c_j`` with ``sum c_j candidate_j = target`` or None.

    Returns a LinearSolution (free parameters set to zero, deterministically)
    or None when the system is inconsistent on the window.  With ``frac``
    the coefficients stay in the fraction field.
    """
    keys, cols = _vectorize(list(candidates) + [target])
    ncand = len(cols) - 1
    rows = []
    for ki in range(len(keys)):
        row = [Frac.of(cols[j].get(ki, 0)) for j in range(ncand)]
        row.append(Frac.of(cols[ncand].get(ki, 0)))
        rows.append(row)
    return _gauss_solve(rows, ncand, frac=frac)


def _gauss_solve(rows, n, frac=False):
    m = len(rows)
    pivots = []  # (row, col)
    r = 0
    for col in range(n):
        pr = None
        for i in range(r, m):
            if not rows[i][col].is_zero():
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][col]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(m):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append((r, col))
        r += 1
        if r == m:
            break
    # consistency: zero rows must have zero rhs
    for i in range(r, m):
        if not rows[i][n].is_zero():
            return None
    if frac:
        coeffs = [Frac.of(0) for _ in range(n)]
        for row, col in pivots:
            coeffs[col] = rows[row][n]
    else:
        coeffs = [Scalar() for _ in range(n)]
        for row, col in pivots:
            coeffs[col] = rows[row][n].to_scalar()
    free = n - len(pivots)
    return LinearSolution(coeffs, free)


def nullspace(candidates):
    """Basis of scalar relations sum c_j candidate_j = 0 on the window."""
    keys, cols = _vectorize(candidates)
    n = len(cols)
    rows = []
    for ki in range(len(keys)):
        rows.append([Frac.of(cols[j].get(ki, 0)) for j in range(n)])
    # reduced row echelon
    m = len(rows)
    pivots = []
    r = 0
    for col in range(n):
        pr = next((i for i in range(r, m) if not rows[i][col].is_zero()), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = rows[r][col]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(m):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == m:
            break
    pivot_set = set(pivots)
    basis = []
    for col in range(n):
        if col in pivot_set:
            continue
        vec = [Frac.of(0)] * n
        vec[col] = Frac.of(1)
        for prow, pcol in enumerate(pivots):
            vec[pcol] = -rows[prow][col]
        # clear denominators: any scalar multiple of a relation is a relation
        clear = Frac.of(1)
        for x in vec:
            if not x.d.is_one():
                clear = clear * Frac(x.d)
        basis.append([(x * clear).to_scalar() for x in vec])
    return basis


def solve_linear(candidates, target):
    """Solve ``sum c_j candidate_j = target``; NoSolutionError when infeasible.

    The equations must be linear in the unknown coefficients and all elements
    must lie in a common window.  Underdetermined systems come back flagged
    through ``LinearSolution.free_params``.
    """
    sol = solve_in_span(candidates, target)
    if sol is None:
        raise NoSolutionError("no solution on this window")
    return sol


def in_span(candidates, target) -> bool:
    return solve_in_span(candidates, target) is not None
