from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

import oracles
from ietlab.errors import DegenerateCoincidence, InvalidSeed, OutOfDomain
from ietlab.field import ExactNumber
from ietlab.iet import (
    ExactIET,
    check_keane,
    evaluate,
    golden_rotation,
    iet_from_cone,
    induce_lattice,
    induce_path,
    induce_step,
)
from ietlab.perm import Permutation
from ietlab.rauzy import IntegerMatrix, Move, step

F = Fraction
T4 = ExactIET("4321", [F(1, 10), F(2, 10), F(3, 10), F(4, 10)])


def test_evaluate_examples():
    assert evaluate(T4, 0) == F(9, 10)
    # 1/2 lies in I_3 = [3/10, 6/10), which lands right after I_4
    assert evaluate(T4, F(1, 2)) == F(3, 5)
    ls = oracles.mp_lengths(T4)
    y, j = oracles.mp_apply(T4.perm.image, ls, mpmath.mpf(1) / 2)
    assert j == 3 and abs(y - mpmath.mpf(3) / 5) < 1e-40
    ident = ExactIET("1234", [F(1, 4)] * 4)
    assert evaluate(ident, F(2, 7)) == F(2, 7)
    with pytest.raises(OutOfDomain):
        evaluate(T4, 1)


@given(st.fractions(min_value=0, max_value=1, max_denominator=997).filter(lambda x: x < 1))
def test_evaluate_matches_float_route(x):
    ls = oracles.mp_lengths(T4)
    y, _ = oracles.mp_apply(T4.perm.image, ls, mpmath.mpf(x.numerator) / x.denominator)
    got = evaluate(T4, x)
    assert got.b == 0
    assert abs(mpmath.mpf(got.a.numerator) / got.a.denominator - y) < 1e-40


def test_induce_step_examples():
    mv, S, M = induce_step(T4)
    assert mv is Move.B and S.perm == Permutation.parse("2431")
    assert S.lengths == tuple(ExactNumber(F(i, 9)) for i in (1, 2, 3, 3))
    assert M == step(T4.perm, Move.B)[1]
    mv, _, _ = induce_step(ExactIET("4321", [F(4, 10), F(3, 10), F(2, 10), F(1, 10)]))
    assert mv is Move.A
    with pytest.raises(DegenerateCoincidence):
        induce_step(ExactIET("4321", [F(1, 4)] * 4))


def test_induce_path_examples():
    S, M, moves = induce_path(T4, 0)
    assert S.lengths == T4.lengths and M == IntegerMatrix.identity(4) and moves == ()
    mv, S1, M1 = induce_step(T4)
    S, M, moves = induce_path(T4, 1)
    assert moves == (mv,) and M == M1 and S.lengths == S1.lengths
    mv2, S2, M2 = induce_step(S1)
    S, M, moves = induce_path(T4, 2)
    assert M == M1 @ M2 and S.lengths == S2.lengths


def test_induced_map_is_first_return():
    T = ExactIET.normalized("4321", [ExactNumber(1, 1, 2), 2, ExactNumber(3, -1, 2), 1])
    mv, S, _ = induce_step(T)
    ls = oracles.mp_lengths(T)
    _, top, bottom = oracles.mp_delta_max(T.perm.image, ls)
    right = max(top, bottom)
    ls_S = [x * right for x in oracles.mp_lengths(S)]
    for i in range(1, 40):
        x = right * i / 41
        want = oracles.mp_first_return(T.perm.image, ls, x, right)
        got, _ = oracles.mp_apply(S.perm.image, ls_S, x)
        assert abs(want - got) < 1e-40


def test_lattice_induction_agrees():
    T = ExactIET.normalized("25431", [ExactNumber(1, 1, 2), 2, ExactNumber(3, -1, 2), 1, ExactNumber(0, 1, 2)])
    S, M, moves = induce_path(T, 25)
    ind = induce_lattice(T, 25)
    assert ind.moves == moves
    assert ind.iet().lengths == S.lengths


def test_keane_examples():
    rep = check_keane(ExactIET("4321", [F(1, 4)] * 4), 4)
    assert not rep.passed and rep.witness is not None
    assert rep.witness[2] == 1
    assert evaluate(ExactIET("4321", [F(1, 4)] * 4), F(1, 4)) == F(1, 2)
    assert check_keane(golden_rotation(), 100).passed
    with pytest.raises(ValueError):
        check_keane(golden_rotation(), 0)


def test_golden_orbit_distinct_by_brute_force():
    T = golden_rotation()
    ls = oracles.mp_lengths(T)
    x = ls[0]
    seen = [x]
    for _ in range(100):
        x, _ = oracles.mp_apply(T.perm.image, ls, x)
        seen.append(x)
    seen.sort()
    assert min(b - a for a, b in zip(seen, seen[1:])) > 1e-10


def test_cone_examples():
    s = ExactNumber(-1, 1, 2)
    T = iet_from_cone("4321", IntegerMatrix.identity(4), s)
    raw = [s**k for k in range(4)]
    assert all(T.lengths[i] / T.lengths[0] == raw[i] for i in range(4))
    M = step(Permutation.parse("4321"), Move.B)[1]
    mv, _, _ = induce_step(iet_from_cone("4321", M, s))
    assert mv is Move.B
    with pytest.raises(InvalidSeed):
        iet_from_cone("4321", M, ExactNumber(F(1, 2), 0, 2))


def test_json_round_trip():
    T = golden_rotation()
    assert ExactIET.from_json(T.to_json()) == T


def test_invalid_lengths():
    with pytest.raises(ValueError):
        ExactIET("4321", [F(1, 2), F(1, 2), 0, 0])
    with pytest.raises(ValueError):
        ExactIET("4321", [F(1, 4)] * 3 + [F(1, 2)])
