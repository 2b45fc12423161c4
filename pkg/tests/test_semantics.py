import random

import pytest
from hypothesis import given, strategies as st

from ltlim.formula import (
    GMode,
    KnowledgeBase,
    expand_derived,
    parse_formula,
    temporal_depth,
)
from ltlim.generators import random_formula, random_interpretation
from ltlim.semantics import (
    Interpretation3,
    SignatureMismatchError,
    TruthValue3,
    affected_states,
    conflict_base,
    eval2,
    eval3,
    land,
    lnot,
    lor,
    satisfies2,
    satisfies3,
)

F, B, T = TruthValue3.FALSE, TruthValue3.BOTH, TruthValue3.TRUE


def core(text: str, mode: GMode = GMode.STRICT):
    return expand_derived(parse_formula(text), mode)


@pytest.fixture
def nu():
    # t0: a=1 b=0 / t1: a=B b=B / t2: a=0 b=1
    return Interpretation3(atoms=("a", "b"), values=((T, F), (B, B), (F, T)))


def test_connective_tables():
    order = (F, B, T)
    for x in order:
        assert lnot(x) is order[2 - x]
        for y in order:
            assert land(x, y) is min(x, y)
            assert lor(x, y) is max(x, y)


def test_designated_values():
    assert not F.designated
    assert B.designated
    assert T.designated


def test_tokens_round_trip():
    for v in (F, B, T):
        assert TruthValue3.from_token(v.token) is v
    with pytest.raises(ValueError):
        TruthValue3.from_token("2")


def test_eval3_atoms_and_negation(nu):
    assert eval3(nu, 0, parse_formula("a")) is T
    assert eval3(nu, 1, parse_formula("a")) is B
    assert eval3(nu, 2, parse_formula("! a")) is T
    assert eval3(nu, 1, parse_formula("! a")) is B


def test_eval3_next_hits_glut(nu):
    assert eval3(nu, 0, core("X a")) is B
    assert eval3(nu, 0, core("X (! a)")) is B
    assert eval3(nu, 1, core("X b")) is T


def test_next_at_horizon_is_false(nu):
    assert eval3(nu, 2, core("X a")) is F
    assert eval3(nu, 2, core("X (! a)")) is F


def test_eval3_until_glut_clause(nu):
    # No strictly later state gives b = 1 with a = 1 across the gap,
    # but t1 offers a designated window containing a glut.
    assert eval3(nu, 0, core("a U b")) is B


def test_eval3_until_true_clause_wins_over_glut():
    grid = Interpretation3(atoms=("a", "b"), values=((T, F), (T, B), (T, T)))
    assert eval3(grid, 0, core("a U b")) is T


def test_eval3_until_needs_left_from_current_state():
    grid = Interpretation3(atoms=("a", "b"), values=((F, F), (F, T), (F, F)))
    assert eval3(grid, 0, core("a U b")) is F


def test_strict_finally_ignores_current_state():
    grid = Interpretation3(atoms=("a",), values=((T,), (F,), (F,)))
    assert eval3(grid, 0, core("F a")) is F
    assert eval3(grid, 0, core("a | F a")) is T


def test_reflexive_globally_covers_current_state():
    grid = Interpretation3(atoms=("a",), values=((F,), (T,), (T,)))
    assert eval3(grid, 0, core("G a", GMode.REFLEXIVE)) is F
    assert eval3(grid, 0, core("G a", GMode.STRICT)) is T


def test_eval_rejects_unexpanded_derived_nodes(nu):
    for text in ("F a", "G a", "a -> b"):
        with pytest.raises(ValueError):
            eval3(nu, 0, parse_formula(text))
        with pytest.raises(ValueError):
            eval2(nu, 0, parse_formula(text))


def test_eval2_rejects_three_valued_input(nu):
    with pytest.raises(ValueError):
        eval2(nu, 0, parse_formula("a"))


def test_eval2_classical_until():
    omega = Interpretation3(atoms=("a", "b"), values=((T, F), (F, F), (F, T)))
    # the gap needs a at both t0 and t1, but a fails at t1
    assert eval2(omega, 0, core("a U b")) is False
    assert eval2(omega, 1, core("a U b")) is False
    assert eval2(omega, 0, core("F b")) is True
    assert eval2(omega, 0, core("G a")) is False


@given(st.integers(0, 2**32 - 1))
def test_faithfulness_on_two_valued_interpretations(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 4)
    omega = random_interpretation(rng, ("a", "b"), m, three_valued=False)
    formula = core_random(rng)
    state = rng.randint(0, m)
    classical = eval2(omega, state, formula)
    three_valued = eval3(omega, state, formula)
    assert three_valued in (T, F)
    assert (three_valued is T) == classical


def core_random(rng):
    mode = rng.choice(list(GMode))
    return expand_derived(
        random_formula(rng, ("a", "b"), 5, allow_constants=True), mode
    )


@given(st.integers(0, 2**32 - 1))
def test_all_glut_interpretation_yields_glut_on_core_fragment(seed):
    rng = random.Random(seed)
    formula = random_formula(rng, ("a", "b"), 4, core_only=True)
    m = max(temporal_depth(formula), 2)
    nu = Interpretation3.all_both(("a", "b"), m)
    assert eval3(nu, 0, formula) is B


def test_affected_states_and_conflict_base(nu):
    assert affected_states(nu) == frozenset({1})
    assert conflict_base(nu) == frozenset({(1, "a"), (1, "b")})


def test_interpretation_validation():
    with pytest.raises(ValueError):
        Interpretation3(atoms=("a", "a"), values=((T, T),))
    with pytest.raises(ValueError):
        Interpretation3(atoms=("a",), values=((T, F),))
    with pytest.raises(ValueError):
        Interpretation3(atoms=("a",), values=())


def test_interpretation_coerces_mixed_cell_spellings():
    grid = Interpretation3(atoms=("a", "b"), values=((1, "B"), (True, 0)))
    assert grid.value(0, "a") is B
    assert grid.value(0, "b") is B
    assert grid.value(1, "a") is T
    assert grid.value(1, "b") is F


def test_from_map_and_defaults():
    grid = Interpretation3.from_map(
        {(1, "a"): B, (2, "b"): T}, atoms=("a", "b"), m=2
    )
    assert grid.value(0, "a") is F
    assert grid.value(1, "a") is B
    assert grid.value(2, "b") is T
    assert grid.m == 2


def test_value_bounds_and_signature(nu):
    with pytest.raises(IndexError):
        nu.value(3, "a")
    with pytest.raises(SignatureMismatchError):
        nu.value(0, "zz")
    with pytest.raises(SignatureMismatchError):
        nu.with_value(0, "zz", T)


def test_with_value_is_functional(nu):
    changed = nu.with_value(2, "a", B)
    assert changed.value(2, "a") is B
    assert nu.value(2, "a") is F


def test_two_valued_flag(nu):
    assert not nu.is_two_valued
    assert Interpretation3(atoms=("a",), values=((T,), (F,))).is_two_valued


def test_json_round_trip(nu):
    assert Interpretation3.from_json_dict(nu.to_json_dict()) == nu


def test_satisfies3_checks_designation_at_start():
    kb = KnowledgeBase.of("X a", "X (! a)", m=2)
    model = Interpretation3.from_map({(1, "a"): B}, atoms=("a",), m=2)
    assert satisfies3(model, kb)
    broken = model.with_value(1, "a", T)
    assert not satisfies3(broken, kb)


def test_satisfies3_enforces_ground_cells():
    kb = KnowledgeBase(
        formulas=(parse_formula("a"),),
        trace_length_m=2,
        ground_cells=frozenset({(0, "a")}),
    )
    pinned = Interpretation3.from_map({(0, "a"): T}, atoms=("a",), m=2)
    assert satisfies3(pinned, kb)
    glutted = pinned.with_value(0, "a", B)
    assert not satisfies3(glutted, kb)


def test_satisfies2_on_simple_base():
    kb = KnowledgeBase.of("a", "X b", m=2)
    omega = Interpretation3(atoms=("a", "b"), values=((T, F), (F, T), (F, F)))
    assert satisfies2(omega, kb)
    assert not satisfies2(omega.with_value(1, "b", F), kb)
