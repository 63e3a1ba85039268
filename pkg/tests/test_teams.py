import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ifwb.syntax import Quant, free_vars, parse_formula, walk
from ifwb.teams import (
    ChoiceFunction, SemanticsError, Structure, Team, Truth,
    duplicate, is_uniform, neg_satisfies, satisfies, supplement, truth_value,
)

from strategies import formulas, sentences, structures, teams

P = parse_formula
TWO = Structure(2)


def T(vars_, *rows):
    return Team(tuple(vars_), frozenset(rows))


def test_duplicate_examples():
    assert duplicate(Team.unit(), "x", TWO) == T("x", (0,), (1,))
    assert duplicate(T("x"), "x", TWO) == T("x")
    assert duplicate(T("x", (0,)), "y", TWO) == T("xy", (0, 0), (0, 1))


def test_duplicate_overwrites_existing_variable():
    assert duplicate(T("x", (0,)), "x", Structure(3)) == T("x", (0,), (1,), (2,))


def test_supplement_examples():
    x = T("x", (0,), (1,))
    ident = ChoiceFunction.from_callable(x, lambda s: s["x"])
    assert supplement(x, ident, "y") == T("xy", (0, 0), (1, 1))
    empty = T("x")
    assert supplement(empty, ChoiceFunction(("x",), {}), "y") == T("xy")
    one = ChoiceFunction.from_callable(x, lambda s: 1)
    assert supplement(x, one, "y") == T("xy", (0, 1), (1, 1))


def test_supplement_needs_total_function():
    x = T("x", (0,), (1,))
    with pytest.raises(SemanticsError):
        supplement(x, ChoiceFunction(("x",), {(0,): 0}), "y")


def test_is_uniform_examples():
    x = T("x", (0,), (1,))
    varying = ChoiceFunction.from_callable(x, lambda s: s["x"])
    assert is_uniform(varying, x, set())
    assert not is_uniform(varying, x, {"x"})
    xy = T("xy", (0, 0), (1, 0))
    assert is_uniform(ChoiceFunction.from_callable(xy, lambda s: s["y"]), xy, {"x"})


def test_team_rejects_ragged_rows():
    with pytest.raises(SemanticsError):
        Team(("x", "y"), frozenset({(0,)}))


def test_satisfies_examples():
    x = T("x", (0,), (1,))
    assert satisfies(TWO, T("x"), P("(E y/{x}) x=y"))
    assert not satisfies(TWO, x, P("(E y/{x}) x=y"))
    assert satisfies(TWO, x, P("E y x=y"))


def test_neg_satisfies_examples():
    assert neg_satisfies(TWO, T("x"), P("x=x"))
    assert neg_satisfies(TWO, T("x", (0,), (1,)), P("x != x"))
    assert not neg_satisfies(TWO, Team.unit(), P("A x (E y/{x}) x=y"))


def test_truth_value_examples():
    for n in (1, 2, 3):
        assert truth_value(Structure(n), P("A x E y x=y")) is Truth.TRUE
    assert truth_value(Structure(2), P("A x (E y/{x}) x=y")) is Truth.UNDETERMINED
    assert truth_value(Structure(1), P("A x (E y/{x}) x=y")) is Truth.TRUE


def test_false_sentence():
    assert truth_value(Structure(2), P("E x A y x=y")) is Truth.FALSE


def test_matching_pennies_disjunction():
    m = Structure(2, {"R": {(0, 0), (1, 1)}})
    assert truth_value(m, P("A x (E y/{x}) R(x,y)")) is Truth.UNDETERMINED


def test_open_formula_rejected():
    with pytest.raises(SemanticsError, match="not a sentence"):
        truth_value(TWO, P("E y x=y"))


def test_unsuitable_team_rejected():
    with pytest.raises(SemanticsError, match="suitable"):
        satisfies(TWO, T("y", (0,)), P("x=y"))


def test_unknown_relation_and_constant():
    with pytest.raises(SemanticsError):
        truth_value(TWO, P("A x R(x,x)"))
    with pytest.raises(SemanticsError):
        truth_value(TWO, P("A x x=c", constants=("c",)))


def test_structure_validation():
    with pytest.raises(SemanticsError):
        Structure(0)
    with pytest.raises(SemanticsError):
        Structure(2, {"R": {(0, 2)}})
    with pytest.raises(SemanticsError):
        Structure(2, {"R": {(0,), (0, 1)}})
    with pytest.raises(SemanticsError):
        Structure(2, constants={"c": 5})


def test_structure_json_round_trip():
    m = Structure(3, {"E": {(0, 1), (1, 0)}}, {"0": 0, "1": 1})
    assert Structure.from_json(m.to_json()) == m


def test_constants_are_evaluated():
    m = Structure(2, {"R": {(1,)}}, {"c": 1, "d": 0})
    assert truth_value(m, P("R(c)", constants=("c",))) is Truth.TRUE
    assert truth_value(m, P("R(d)", constants=("d",))) is Truth.FALSE


# properties

@settings(max_examples=250, deadline=None)
@given(st.data())
def test_downward_closure(data):
    m = data.draw(structures(max_n=3))
    f = data.draw(formulas(scope=("x", "y"), depth=3))
    x = data.draw(teams(("x", "y"), m.size))
    if satisfies(m, x, f):
        rows = sorted(x.rows)
        for k in range(len(rows)):
            for sub in itertools.combinations(rows, k):
                assert satisfies(m, Team(x.vars, frozenset(sub)), f)
    if neg_satisfies(m, x, f):
        for r in x.rows:
            assert neg_satisfies(m, Team(x.vars, x.rows - {r}), f)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_empty_team_satisfies_everything(data):
    m = data.draw(structures(max_n=3))
    f = data.draw(formulas(scope=("x", "y"), depth=3))
    empty = Team(("x", "y"), frozenset())
    assert satisfies(m, empty, f)
    assert neg_satisfies(m, empty, f)


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_search_modes_agree(data):
    m = data.draw(structures(max_n=3))
    f = data.draw(formulas(scope=("x",), depth=3))
    x = data.draw(teams(("x",), m.size, max_rows=3))
    for pos in (satisfies, neg_satisfies):
        verdicts = {pos(m, x, f, mode=mode) for mode in ("pruned", "partition", "cover")}
        assert len(verdicts) == 1


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_never_true_and_false(data):
    m = data.draw(structures(max_n=3))
    s = data.draw(sentences(depth=3))
    ev_t = satisfies(m, Team.unit(), s)
    ev_f = neg_satisfies(m, Team.unit(), s)
    assert not (ev_t and ev_f)
    assert truth_value(m, s) in (Truth.TRUE, Truth.FALSE, Truth.UNDETERMINED)


def _slash_free(f):
    return not any(isinstance(n, Quant) and n.slash for _, n in walk(f))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_locality_for_slash_free_formulas(data):
    m = data.draw(structures(max_n=3))
    f = data.draw(formulas(scope=("x",), depth=3).filter(_slash_free))
    x = data.draw(teams(("x", "y"), m.size))
    keep = [i for i, v in enumerate(x.vars) if v in free_vars(f)]
    restricted = Team(tuple(x.vars[i] for i in keep), frozenset(tuple(r[i] for i in keep) for r in x.rows))
    assert satisfies(m, x, f) == satisfies(m, restricted, f)


def test_locality_fails_with_slashes():
    # a copy of x in the team lets y read x through z
    f = P("(E y/{x}) x=y")
    full = T("xz", (0, 0), (1, 1))
    assert satisfies(TWO, full, f)
    assert not satisfies(TWO, T("x", (0,), (1,)), f)


def test_team_json_round_trip():
    x = T("xy", (0, 1), (1, 0))
    assert Team.from_json(x.to_json()) == x
    assert Team.from_json([{"x": 0, "y": 1}, {"x": 1, "y": 0}]) == x
