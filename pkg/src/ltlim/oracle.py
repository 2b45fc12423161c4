"""Exhaustive reference evaluation over small interpretation spaces.

Everything here enumerates the full space of interpretations for a
knowledge base signature, so it only works below a cell cap, but inside
that cap it is a trustworthy oracle: measures are computed by brute
force rather than by search.  The evaluation is vectorized with numpy
over all candidate interpretations at once using the backward
recurrence for until

    u(m) = 0,   u(i) = min(left(i), max(right(i+1), u(i+1)))

which the test suite checks against the clause-by-clause evaluator in
the semantics module.

Cells are ordered state major ((t_0, a), (t_0, b), ..., (t_1, a), ...)
with atoms sorted, and enumeration is lexicographic over cells with the
per-cell value order 0 < 1 < B, so iteration order and tie-breaking are
deterministic.
"""

from __future__ import annotations

from typing import Iterator

import numpy as np

from .formula import (
    And,
    Atom,
    FalseConst,
    Finally,
    Formula,
    Globally,
    Implies,
    KnowledgeBase,
    Next,
    Not,
    Or,
    TrueConst,
    Until,
)
from .semantics import Interpretation3, SignatureMismatchError, TruthValue3

__all__ = [
    "DEFAULT_CELL_CAP",
    "OracleCapExceeded",
    "count_models3",
    "iter_models3",
    "oracle_min_b_atoms",
    "oracle_min_cost",
    "oracle_minimal_conflict_bases",
    "oracle_sat2",
]

DEFAULT_CELL_CAP = 12

INF = float("inf")

# Digit-to-ordinal tables for the enumeration orders 0 < 1 (two-valued)
# and 0 < 1 < B (three-valued); ordinals follow TruthValue3.
_LUT2 = np.array([0, 2], dtype=np.uint8)
_LUT3 = np.array([0, 2, 1], dtype=np.uint8)

_BOTH = int(TruthValue3.BOTH)


class OracleCapExceeded(ValueError):
    """The signature has too many cells for exhaustive enumeration."""


def _signature(kb: KnowledgeBase, signature: tuple[str, ...] | None) -> tuple[str, ...]:
    atoms = tuple(signature) if signature is not None else kb.atoms()
    missing = set(kb.atoms()) - set(atoms)
    if missing:
        raise SignatureMismatchError(
            f"signature {atoms!r} misses atoms {sorted(missing)!r} of the base"
        )
    return atoms


def _check_cap(n_cells: int, cell_cap: int) -> None:
    if n_cells > cell_cap:
        raise OracleCapExceeded(
            f"{n_cells} cells exceed the oracle cap of {cell_cap}"
        )


def _digit_grid(n_cells: int, base: int) -> np.ndarray:
    """All length-n digit strings over 0..base-1, one row each, in
    lexicographic order."""
    count = base**n_cells
    index = np.arange(count, dtype=np.int64)
    grid = np.empty((count, n_cells), dtype=np.uint8)
    for column in range(n_cells):
        grid[:, column] = (index // base ** (n_cells - 1 - column)) % base
    return grid


def _atom_columns(
    grid: np.ndarray, atoms: tuple[str, ...], m: int
) -> dict[str, np.ndarray]:
    """Split the state-major cell grid into per-atom (rows, m+1) views."""
    rows = grid.shape[0]
    cube = grid.reshape(rows, m + 1, len(atoms))
    return {atom: cube[:, :, i] for i, atom in enumerate(atoms)}


def _eval_vec(
    formula: Formula, columns: dict[str, np.ndarray], rows: int, m: int
) -> np.ndarray:
    """Ordinal values of a core formula, shape (rows, m+1)."""
    if isinstance(formula, TrueConst):
        return np.full((rows, m + 1), 2, dtype=np.uint8)
    if isinstance(formula, FalseConst):
        return np.zeros((rows, m + 1), dtype=np.uint8)
    if isinstance(formula, Atom):
        try:
            return columns[formula.name]
        except KeyError:
            raise SignatureMismatchError(
                f"atom {formula.name!r} is not in the enumeration signature"
            ) from None
    if isinstance(formula, Not):
        return 2 - _eval_vec(formula.operand, columns, rows, m)
    if isinstance(formula, And):
        return np.minimum(
            _eval_vec(formula.left, columns, rows, m),
            _eval_vec(formula.right, columns, rows, m),
        )
    if isinstance(formula, Or):
        return np.maximum(
            _eval_vec(formula.left, columns, rows, m),
            _eval_vec(formula.right, columns, rows, m),
        )
    if isinstance(formula, Next):
        inner = _eval_vec(formula.operand, columns, rows, m)
        out = np.zeros_like(inner)
        out[:, :m] = inner[:, 1:]
        return out
    if isinstance(formula, Until):
        left = _eval_vec(formula.left, columns, rows, m)
        right = _eval_vec(formula.right, columns, rows, m)
        out = np.zeros_like(left)
        for i in range(m - 1, -1, -1):
            out[:, i] = np.minimum(
                left[:, i], np.maximum(right[:, i + 1], out[:, i + 1])
            )
        return out
    if isinstance(formula, (Finally, Globally, Implies)):
        raise ValueError(
            f"derived connective in evaluator input: {formula!r}; expand_derived first"
        )
    raise TypeError(f"not a formula node: {formula!r}")


def _model_space(
    kb: KnowledgeBase,
    signature: tuple[str, ...] | None,
    cell_cap: int,
    *,
    two_valued: bool = False,
) -> tuple[tuple[str, ...], np.ndarray, np.ndarray]:
    """Enumerate the space and flag the admissible models.

    Returns (atoms, ordinal grid, model mask).  The grid rows follow
    the documented enumeration order.
    """
    atoms = _signature(kb, signature)
    m = kb.trace_length_m
    n_cells = (m + 1) * len(atoms)
    _check_cap(n_cells, cell_cap)
    lut = _LUT2 if two_valued else _LUT3
    grid = lut[_digit_grid(n_cells, len(lut))]
    rows = grid.shape[0]
    columns = _atom_columns(grid, atoms, m)
    mask = np.ones(rows, dtype=bool)
    for formula in kb.core_formulas:
        mask &= _eval_vec(formula, columns, rows, m)[:, 0] >= 1
    if not two_valued:
        index = {
            (state, atom): state * len(atoms) + i
            for state in range(m + 1)
            for i, atom in enumerate(atoms)
        }
        for state, atom in kb.ground_cells:
            column = index.get((state, atom))
            if column is None:
                raise SignatureMismatchError(
                    f"ground cell atom {atom!r} is not in the enumeration signature"
                )
            mask &= grid[:, column] != _BOTH
    return atoms, grid, mask


def _row_interpretation(
    atoms: tuple[str, ...], grid: np.ndarray, row: int, m: int
) -> Interpretation3:
    cells = grid[row].reshape(m + 1, len(atoms))
    return Interpretation3(
        atoms=atoms,
        values=tuple(
            tuple(TruthValue3(int(v)) for v in state_row) for state_row in cells
        ),
    )


def iter_models3(
    kb: KnowledgeBase,
    *,
    signature: tuple[str, ...] | None = None,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> Iterator[Interpretation3]:
    """Yield every admissible three-valued model in enumeration order."""
    atoms, grid, mask = _model_space(kb, signature, cell_cap)
    m = kb.trace_length_m
    for row in np.flatnonzero(mask):
        yield _row_interpretation(atoms, grid, int(row), m)


def count_models3(
    kb: KnowledgeBase,
    *,
    signature: tuple[str, ...] | None = None,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> int:
    """Number of admissible three-valued models over the signature."""
    _, _, mask = _model_space(kb, signature, cell_cap)
    return int(mask.sum())


def oracle_sat2(
    kb: KnowledgeBase,
    *,
    signature: tuple[str, ...] | None = None,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> tuple[bool, Interpretation3 | None]:
    """Classical satisfiability by enumerating two-valued interpretations."""
    atoms, grid, mask = _model_space(kb, signature, cell_cap, two_valued=True)
    hits = np.flatnonzero(mask)
    if hits.size == 0:
        return False, None
    return True, _row_interpretation(atoms, grid, int(hits[0]), kb.trace_length_m)


def _both_cube(grid: np.ndarray, n_atoms: int, m: int) -> np.ndarray:
    return (grid == _BOTH).reshape(grid.shape[0], m + 1, n_atoms)


def _min_by(
    kb: KnowledgeBase,
    costs: np.ndarray,
    mask: np.ndarray,
    atoms: tuple[str, ...],
    grid: np.ndarray,
) -> tuple[int | float, Interpretation3 | None]:
    hits = np.flatnonzero(mask)
    if hits.size == 0:
        return INF, None
    local = np.argmin(costs[hits])
    row = int(hits[local])
    return int(costs[row]), _row_interpretation(atoms, grid, row, kb.trace_length_m)


def oracle_min_cost(
    kb: KnowledgeBase,
    cost: str,
    *,
    signature: tuple[str, ...] | None = None,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> tuple[int | float, Interpretation3 | None]:
    """Minimum model cost by brute force.

    ``cost`` selects what is counted: "affected_states" counts states
    holding at least one B cell, "conflict_base" counts B cells.
    Returns (inf, None) when no admissible model exists.
    """
    atoms, grid, mask = _model_space(kb, signature, cell_cap)
    m = kb.trace_length_m
    both = _both_cube(grid, len(atoms), m)
    if cost == "affected_states":
        costs = both.any(axis=2).sum(axis=1)
    elif cost == "conflict_base":
        costs = both.sum(axis=(1, 2))
    else:
        raise ValueError(f"unknown cost kind {cost!r}")
    return _min_by(kb, costs, mask, atoms, grid)


def oracle_min_b_atoms(
    kb: KnowledgeBase,
    *,
    signature: tuple[str, ...] | None = None,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> tuple[int | float, Interpretation3 | None]:
    """Minimum number of distinct atoms ever carrying B in a model."""
    atoms, grid, mask = _model_space(kb, signature, cell_cap)
    m = kb.trace_length_m
    both = _both_cube(grid, len(atoms), m)
    costs = both.any(axis=1).sum(axis=1)
    return _min_by(kb, costs, mask, atoms, grid)


def oracle_minimal_conflict_bases(
    kb: KnowledgeBase,
    *,
    signature: tuple[str, ...] | None = None,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> tuple[int, tuple[tuple[tuple[int, str], ...], ...], int]:
    """Conflict bases of the models with minimal affected-state count.

    Returns (minimal affected-state count, the inclusion-minimal
    distinct conflict bases as sorted tuples, and the raw number of
    minimal-cost interpretations).  Requires the base to be properly
    but not hopelessly inconsistent: the minimal cost must be finite
    and at least 1.
    """
    atoms, grid, mask = _model_space(kb, signature, cell_cap)
    m = kb.trace_length_m
    both = _both_cube(grid, len(atoms), m)
    costs = both.any(axis=2).sum(axis=1)
    hits = np.flatnonzero(mask)
    if hits.size == 0:
        raise ValueError("no admissible three-valued model exists")
    best = int(costs[hits].min())
    if best == 0:
        raise ValueError("the base is classically consistent; no conflict to explain")
    rows = np.flatnonzero(mask & (costs == best))
    bases: list[frozenset[tuple[int, str]]] = []
    seen: set[frozenset[tuple[int, str]]] = set()
    for row in rows:
        cells = np.flatnonzero(grid[row] == _BOTH)
        base = frozenset(
            (int(c) // len(atoms), atoms[int(c) % len(atoms)]) for c in cells
        )
        if base not in seen:
            seen.add(base)
            bases.append(base)
    minimal = [b for b in bases if not any(o < b for o in seen)]
    ordered = tuple(
        tuple(sorted(b)) for b in sorted(minimal, key=lambda b: (len(b), sorted(b)))
    )
    return best, ordered, int(rows.size)
