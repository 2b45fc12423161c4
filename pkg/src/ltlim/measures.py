"""The inconsistency measures.

Eight measures are exposed under short string ids:

* ``d``      drastic: 1 if the base is classically unsatisfiable.
* ``MI``     number of minimal unsatisfiable subsets.
* ``p``      number of formulas lying in some minimal unsatisfiable subset.
* ``r``      size of a smallest hitting set of the minimal subsets.
* ``c``      fewest atoms that must ever carry the glut value in an
             admissible three-valued model.
* ``at``     number of atoms occurring in formulas of minimal subsets.
* ``LTL_d``  fewest trace states touched by glut cells in a model.
* ``LTL_c``  fewest glut cells in a model.

The first six treat time through satisfiability only; the last two read
the temporal structure directly and can tell a conflict pinned to one
state from one smeared over the whole trace.  ``c``, ``LTL_d`` and
``LTL_c`` are inf when the base has no admissible three-valued model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .formula import Formula, KnowledgeBase
from .semantics import Interpretation3, conflict_base
from . import oracle as oracle_mod
from .solver import (
    CostMode,
    DEFAULT_NODE_BUDGET,
    decide_b_atoms,
    minimize,
    sat2,
)

__all__ = [
    "DEFAULT_FORMULA_CAP",
    "INF",
    "MEASURE_IDS",
    "MeasureRun",
    "MisCapExceeded",
    "free_formulas",
    "horizon_warning",
    "measure",
    "mis_enumerate",
    "run_measures",
]

INF = float("inf")

MEASURE_IDS = ("d", "MI", "p", "r", "c", "at", "LTL_d", "LTL_c")

DEFAULT_FORMULA_CAP = 12


class MisCapExceeded(ValueError):
    """Too many formulas for exhaustive minimal-subset enumeration."""


class _BudgetPool:
    """A node budget shared across the solver calls of one run."""

    def __init__(self, budget: int):
        self.budget = budget
        self.spent = 0

    @property
    def remaining(self) -> int:
        return max(self.budget - self.spent, 0)

    def charge(self, nodes: int) -> None:
        self.spent += nodes


def _sat2_check(
    kb: KnowledgeBase, pool: _BudgetPool, use_oracle: bool, cell_cap: int
) -> bool:
    if use_oracle:
        return oracle_mod.oracle_sat2(kb, cell_cap=cell_cap)[0]
    result = sat2(kb, budget=pool.remaining)
    pool.charge(result.nodes)
    return result.found


def _mis_index_sets(
    kb: KnowledgeBase,
    pool: _BudgetPool,
    *,
    use_oracle: bool,
    cell_cap: int,
    formula_cap: int,
) -> list[frozenset[int]]:
    formulas = kb.formulas
    if len(formulas) > formula_cap:
        raise MisCapExceeded(
            f"{len(formulas)} formulas exceed the minimal-subset cap of {formula_cap}"
        )
    found: list[frozenset[int]] = []
    for size in range(1, len(formulas) + 1):
        for combo in itertools.combinations(range(len(formulas)), size):
            candidate = frozenset(combo)
            if any(mis <= candidate for mis in found):
                continue
            subset = kb.replace_formulas(formulas[i] for i in combo)
            if not _sat2_check(subset, pool, use_oracle, cell_cap):
                found.append(candidate)
    return found


def mis_enumerate(
    kb: KnowledgeBase,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
    formula_cap: int = DEFAULT_FORMULA_CAP,
) -> tuple[tuple[Formula, ...], ...]:
    """All minimal classically-unsatisfiable subsets, smallest first.

    Subsets are returned as tuples in the base's formula order; the
    family is ordered by size, then by position.
    """
    pool = _BudgetPool(budget)
    index_sets = _mis_index_sets(
        kb, pool, use_oracle=False, cell_cap=oracle_mod.DEFAULT_CELL_CAP,
        formula_cap=formula_cap,
    )
    return tuple(
        tuple(kb.formulas[i] for i in sorted(indices))
        for indices in sorted(index_sets, key=lambda s: (len(s), sorted(s)))
    )


def free_formulas(
    kb: KnowledgeBase, *, budget: int = DEFAULT_NODE_BUDGET
) -> tuple[Formula, ...]:
    """Formulas that belong to no minimal unsatisfiable subset."""
    pool = _BudgetPool(budget)
    index_sets = _mis_index_sets(
        kb, pool, use_oracle=False, cell_cap=oracle_mod.DEFAULT_CELL_CAP,
        formula_cap=DEFAULT_FORMULA_CAP,
    )
    bound = set().union(*index_sets) if index_sets else set()
    return tuple(f for i, f in enumerate(kb.formulas) if i not in bound)


def _min_hitting_set_size(index_sets: Sequence[frozenset[int]]) -> int:
    if not index_sets:
        return 0
    universe = sorted(set().union(*index_sets))
    for size in range(1, len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            chosen = set(combo)
            if all(chosen & mis for mis in index_sets):
                return size
    return len(universe)


def _b_atoms_minimum(
    kb: KnowledgeBase, pool: _BudgetPool, use_oracle: bool, cell_cap: int
) -> int | float:
    if use_oracle:
        return oracle_mod.oracle_min_b_atoms(kb, cell_cap=cell_cap)[0]
    atoms = kb.atoms()
    for size in range(len(atoms) + 1):
        for combo in itertools.combinations(atoms, size):
            result = decide_b_atoms(kb, combo, budget=pool.remaining)
            pool.charge(result.nodes)
            if result.found:
                return size
    return INF


def horizon_warning(nu: Interpretation3) -> bool:
    """Whether every glut cell of the witness sits at the last state.

    Such a conflict lives exactly at the trace horizon: the verdict may
    change if the base is read over a longer trace, so reports flag it.
    """
    base = conflict_base(nu)
    return bool(base) and all(state == nu.m for state, _ in base)


@dataclass
class MeasureRun:
    """Outcome of evaluating a set of measures over one base."""

    values: dict[str, int | float] = field(default_factory=dict)
    witness_affected: Interpretation3 | None = None
    witness_conflict: Interpretation3 | None = None
    nodes: int = 0
    probes: int = 0
    warnings: tuple[str, ...] = ()


def run_measures(
    kb: KnowledgeBase,
    ids: Iterable[str] = MEASURE_IDS,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
    use_oracle: bool = False,
    oracle_cell_cap: int = oracle_mod.DEFAULT_CELL_CAP,
    formula_cap: int = DEFAULT_FORMULA_CAP,
) -> MeasureRun:
    """Evaluate the requested measures, sharing one node budget.

    With ``use_oracle`` the values come from exhaustive enumeration
    (subject to the cell cap) instead of backtracking search; results
    must agree, which is what the oracle-check command verifies.
    """
    requested = list(ids)
    unknown = [i for i in requested if i not in MEASURE_IDS]
    if unknown:
        raise ValueError(f"unknown measure ids {unknown!r}; expected {MEASURE_IDS}")
    pool = _BudgetPool(budget)
    run = MeasureRun()
    warnings: list[str] = []
    probes = 0

    index_sets: list[frozenset[int]] | None = None

    def need_mis() -> list[frozenset[int]]:
        nonlocal index_sets
        if index_sets is None:
            index_sets = _mis_index_sets(
                kb, pool, use_oracle=use_oracle, cell_cap=oracle_cell_cap,
                formula_cap=formula_cap,
            )
        return index_sets

    for mid in MEASURE_IDS:
        if mid not in requested:
            continue
        if mid == "d":
            run.values[mid] = 0 if _sat2_check(kb, pool, use_oracle, oracle_cell_cap) else 1
        elif mid == "MI":
            run.values[mid] = len(need_mis())
        elif mid == "p":
            mis = need_mis()
            run.values[mid] = len(set().union(*mis)) if mis else 0
        elif mid == "r":
            run.values[mid] = _min_hitting_set_size(need_mis())
        elif mid == "at":
            mis = need_mis()
            names: set[str] = set()
            for indices in mis:
                for i in indices:
                    names |= _formula_atoms(kb.formulas[i])
            run.values[mid] = len(names)
        elif mid == "c":
            run.values[mid] = _b_atoms_minimum(kb, pool, use_oracle, oracle_cell_cap)
        elif mid in ("LTL_d", "LTL_c"):
            mode = (
                CostMode.AFFECTED_STATES if mid == "LTL_d" else CostMode.CONFLICT_BASE
            )
            if use_oracle:
                kind = mode.value
                value, witness = oracle_mod.oracle_min_cost(
                    kb, kind, cell_cap=oracle_cell_cap
                )
            else:
                summary = minimize(kb, mode, budget=pool.remaining)
                pool.charge(summary.nodes)
                probes += summary.probes
                value, witness = summary.value, summary.witness
            run.values[mid] = value
            if mid == "LTL_d":
                run.witness_affected = witness
            else:
                run.witness_conflict = witness
            if witness is not None and horizon_warning(witness):
                warnings.append(
                    f"{mid}: every glut cell of the witness sits at the last state "
                    f"t_{kb.trace_length_m}; the verdict may differ on longer traces"
                )

    run.values = {mid: run.values[mid] for mid in MEASURE_IDS if mid in run.values}
    run.nodes = pool.spent
    run.probes = probes
    run.warnings = tuple(warnings)
    return run


def _formula_atoms(formula: Formula) -> set[str]:
    from .formula import atoms_of

    return set(atoms_of(formula))


def measure(
    kb: KnowledgeBase,
    measure_id: str,
    *,
    budget: int = DEFAULT_NODE_BUDGET,
    use_oracle: bool = False,
) -> int | float:
    """Evaluate one measure and return its value."""
    return run_measures(kb, (measure_id,), budget=budget, use_oracle=use_oracle).values[
        measure_id
    ]
