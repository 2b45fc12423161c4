"""Two- and three-valued trace semantics.

An interpretation assigns a truth value to every (state, atom) cell of
a fixed trace t_0 .. t_m.  The two-valued evaluator is classical.  The
three-valued evaluator adds the glut value B ("both"), ordered between
false and true: conjunction takes the minimum, disjunction the maximum,
and negation maps B to itself.  A formula is three-valued satisfied at
a state when it evaluates to 1 or B there.

Until looks strictly into the future.  It is true at i when its right
argument is true at some later j and the left argument is true in
between; it is B when some later j makes every value on that pattern
at least B with a B among them; otherwise it is false.  At the last
state there is no future, so X phi and until are false there.

Both evaluators are deliberately written as direct transcriptions of
those clauses.  A faster vectorized evaluator lives in the oracle
module; the test suite checks the two against each other.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Union

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

__all__ = [
    "Interpretation3",
    "SignatureMismatchError",
    "TruthValue3",
    "affected_states",
    "conflict_base",
    "eval2",
    "eval3",
    "land",
    "lnot",
    "lor",
    "satisfies2",
    "satisfies3",
]


class TruthValue3(enum.IntEnum):
    """The three truth values, encoded along the truth ordering.

    FALSE < BOTH < TRUE as integers 0 < 1 < 2, which lets conjunction
    and disjunction be plain min and max.
    """

    FALSE = 0
    BOTH = 1
    TRUE = 2

    @property
    def designated(self) -> bool:
        """Whether the value counts as satisfied (TRUE or BOTH)."""
        return self is not TruthValue3.FALSE

    @property
    def token(self) -> str:
        return _VALUE_TOKEN[self]

    @classmethod
    def from_token(cls, token: str) -> "TruthValue3":
        try:
            return _TOKEN_VALUE[token]
        except KeyError:
            raise ValueError(f"unknown truth value token {token!r}") from None

    @classmethod
    def from_bool(cls, value: bool) -> "TruthValue3":
        return cls.TRUE if value else cls.FALSE


_VALUE_TOKEN = {
    TruthValue3.FALSE: "0",
    TruthValue3.BOTH: "B",
    TruthValue3.TRUE: "1",
}
_TOKEN_VALUE = {token: value for value, token in _VALUE_TOKEN.items()}


def lnot(value: TruthValue3) -> TruthValue3:
    return TruthValue3(2 - value)


def land(left: TruthValue3, right: TruthValue3) -> TruthValue3:
    return min(left, right)


def lor(left: TruthValue3, right: TruthValue3) -> TruthValue3:
    return max(left, right)


class SignatureMismatchError(LookupError):
    """An atom required by evaluation is missing from the interpretation."""


CellValue = Union[TruthValue3, int, bool, str]


def _coerce_value(value: CellValue) -> TruthValue3:
    if isinstance(value, TruthValue3):
        return value
    if isinstance(value, bool):
        return TruthValue3.from_bool(value)
    if isinstance(value, int):
        return TruthValue3(value)
    if isinstance(value, str):
        return TruthValue3.from_token(value)
    raise TypeError(f"cannot interpret {value!r} as a truth value")


@dataclass(frozen=True)
class Interpretation3:
    """A full assignment of truth values to the cells of a trace.

    ``values[i]`` is the row for state t_i, aligned with ``atoms``.
    Two-valued interpretations are the special case without B cells.
    """

    atoms: tuple[str, ...]
    values: tuple[tuple[TruthValue3, ...], ...]

    def __post_init__(self) -> None:
        atoms = tuple(self.atoms)
        if len(set(atoms)) != len(atoms):
            raise ValueError(f"duplicate atoms in signature {atoms!r}")
        rows = []
        for row in self.values:
            cells = tuple(_coerce_value(v) for v in row)
            if len(cells) != len(atoms):
                raise ValueError(
                    f"row width {len(cells)} does not match signature size {len(atoms)}"
                )
            rows.append(cells)
        if not rows:
            raise ValueError("an interpretation needs at least state t_0")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "values", tuple(rows))

    @property
    def m(self) -> int:
        """Index of the last state."""
        return len(self.values) - 1

    @cached_property
    def _column(self) -> dict[str, int]:
        return {atom: i for i, atom in enumerate(self.atoms)}

    def value(self, state: int, atom: str) -> TruthValue3:
        if not 0 <= state <= self.m:
            raise IndexError(f"state {state} outside 0..{self.m}")
        try:
            column = self._column[atom]
        except KeyError:
            raise SignatureMismatchError(
                f"atom {atom!r} is not in the signature {self.atoms!r}"
            ) from None
        return self.values[state][column]

    @property
    def is_two_valued(self) -> bool:
        return all(v is not TruthValue3.BOTH for row in self.values for v in row)

    @classmethod
    def from_map(
        cls,
        assignment: Mapping[tuple[int, str], CellValue],
        *,
        atoms: Iterable[str] | None = None,
        m: int | None = None,
        default: CellValue = TruthValue3.FALSE,
    ) -> "Interpretation3":
        """Build an interpretation from a sparse (state, atom) mapping."""
        names = tuple(atoms) if atoms is not None else tuple(
            sorted({atom for _, atom in assignment})
        )
        last = m if m is not None else max((s for s, _ in assignment), default=0)
        fill = _coerce_value(default)
        grid = [[fill] * len(names) for _ in range(last + 1)]
        column = {atom: i for i, atom in enumerate(names)}
        for (state, atom), value in assignment.items():
            if not 0 <= state <= last:
                raise ValueError(f"state {state} outside 0..{last}")
            if atom not in column:
                raise ValueError(f"atom {atom!r} missing from signature {names!r}")
            grid[state][column[atom]] = _coerce_value(value)
        return cls(atoms=names, values=tuple(tuple(row) for row in grid))

    @classmethod
    def all_both(cls, atoms: Iterable[str], m: int) -> "Interpretation3":
        """The interpretation mapping every cell to B."""
        names = tuple(atoms)
        row = tuple(TruthValue3.BOTH for _ in names)
        return cls(atoms=names, values=tuple(row for _ in range(m + 1)))

    def with_value(self, state: int, atom: str, value: CellValue) -> "Interpretation3":
        column = self._column.get(atom)
        if column is None:
            raise SignatureMismatchError(
                f"atom {atom!r} is not in the signature {self.atoms!r}"
            )
        rows = [list(row) for row in self.values]
        rows[state][column] = _coerce_value(value)
        return Interpretation3(self.atoms, tuple(tuple(row) for row in rows))

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "atoms": list(self.atoms),
            "states": [
                {atom: row[i].token for i, atom in enumerate(self.atoms)}
                for row in self.values
            ],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Interpretation3":
        atoms = tuple(data["atoms"])
        rows = tuple(
            tuple(TruthValue3.from_token(state[atom]) for atom in atoms)
            for state in data["states"]
        )
        return cls(atoms=atoms, values=rows)


def affected_states(nu: Interpretation3) -> frozenset[int]:
    """States where at least one atom carries the glut value."""
    return frozenset(
        state
        for state, row in enumerate(nu.values)
        if any(v is TruthValue3.BOTH for v in row)
    )


def conflict_base(nu: Interpretation3) -> frozenset[tuple[int, str]]:
    """The (state, atom) cells carrying the glut value."""
    return frozenset(
        (state, atom)
        for state, row in enumerate(nu.values)
        for atom, v in zip(nu.atoms, row)
        if v is TruthValue3.BOTH
    )


def _reject_derived(formula: Formula) -> None:
    raise ValueError(
        f"derived connective in evaluator input: {formula!r}; expand_derived first"
    )


def eval2(omega: Interpretation3, state: int, formula: Formula) -> bool:
    """Classical evaluation of a core formula at a state.

    ``omega`` must be two-valued; derived connectives are rejected.
    """
    if not omega.is_two_valued:
        raise ValueError("eval2 requires a two-valued interpretation")
    return _eval2(omega, state, formula, {})


def _eval2(omega, state, formula, memo) -> bool:
    key = (id(formula), state)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(formula, TrueConst):
        result = True
    elif isinstance(formula, FalseConst):
        result = False
    elif isinstance(formula, Atom):
        result = omega.value(state, formula.name) is TruthValue3.TRUE
    elif isinstance(formula, Not):
        result = not _eval2(omega, state, formula.operand, memo)
    elif isinstance(formula, And):
        result = _eval2(omega, state, formula.left, memo) and _eval2(
            omega, state, formula.right, memo
        )
    elif isinstance(formula, Or):
        result = _eval2(omega, state, formula.left, memo) or _eval2(
            omega, state, formula.right, memo
        )
    elif isinstance(formula, Next):
        result = state < omega.m and _eval2(omega, state + 1, formula.operand, memo)
    elif isinstance(formula, Until):
        result = any(
            _eval2(omega, j, formula.right, memo)
            and all(_eval2(omega, k, formula.left, memo) for k in range(state, j))
            for j in range(state + 1, omega.m + 1)
        )
    elif isinstance(formula, (Finally, Globally, Implies)):
        _reject_derived(formula)
    else:
        raise TypeError(f"not a formula node: {formula!r}")
    memo[key] = result
    return result


def eval3(nu: Interpretation3, state: int, formula: Formula) -> TruthValue3:
    """Three-valued evaluation of a core formula at a state."""
    return _eval3(nu, state, formula, {})


def _eval3(nu, state, formula, memo) -> TruthValue3:
    key = (id(formula), state)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if isinstance(formula, TrueConst):
        result = TruthValue3.TRUE
    elif isinstance(formula, FalseConst):
        result = TruthValue3.FALSE
    elif isinstance(formula, Atom):
        result = nu.value(state, formula.name)
    elif isinstance(formula, Not):
        result = lnot(_eval3(nu, state, formula.operand, memo))
    elif isinstance(formula, And):
        result = land(
            _eval3(nu, state, formula.left, memo),
            _eval3(nu, state, formula.right, memo),
        )
    elif isinstance(formula, Or):
        result = lor(
            _eval3(nu, state, formula.left, memo),
            _eval3(nu, state, formula.right, memo),
        )
    elif isinstance(formula, Next):
        if state < nu.m:
            result = _eval3(nu, state + 1, formula.operand, memo)
        else:
            result = TruthValue3.FALSE
    elif isinstance(formula, Until):
        result = _eval3_until(nu, state, formula, memo)
    elif isinstance(formula, (Finally, Globally, Implies)):
        _reject_derived(formula)
    else:
        raise TypeError(f"not a formula node: {formula!r}")
    memo[key] = result
    return result


def _eval3_until(nu, state, formula, memo) -> TruthValue3:
    # True clause: a strictly later j where the right argument is true
    # and the left argument is true throughout the gap.
    for j in range(state + 1, nu.m + 1):
        if _eval3(nu, j, formula.right, memo) is TruthValue3.TRUE and all(
            _eval3(nu, k, formula.left, memo) is TruthValue3.TRUE
            for k in range(state, j)
        ):
            return TruthValue3.TRUE
    # Glut clause: some j makes the same pattern hold with every value
    # designated and at least one B among them.
    for j in range(state + 1, nu.m + 1):
        window = [_eval3(nu, j, formula.right, memo)]
        window.extend(_eval3(nu, k, formula.left, memo) for k in range(state, j))
        if all(v.designated for v in window) and any(
            v is TruthValue3.BOTH for v in window
        ):
            return TruthValue3.BOTH
    return TruthValue3.FALSE


def satisfies2(omega: Interpretation3, kb: KnowledgeBase) -> bool:
    """Whether a two-valued interpretation classically models the base."""
    return all(eval2(omega, 0, f) for f in kb.core_formulas)


def satisfies3(nu: Interpretation3, kb: KnowledgeBase) -> bool:
    """Whether an interpretation is an admissible three-valued model.

    Admissibility means every ground cell of the base stays two valued
    in ``nu``; on top of that every formula must evaluate to a
    designated value at t_0.
    """
    for state, atom in kb.ground_cells:
        if nu.value(state, atom) is TruthValue3.BOTH:
            return False
    return all(eval3(nu, 0, f).designated for f in kb.core_formulas)
