import pytest
from hypothesis import given, strategies as st

from ietlab.errors import GoalUnreachable
from ietlab.keane_paths import build_named_path
from ietlab.perm import Permutation
from ietlab.rauzy import (
    IntegerMatrix,
    Move,
    RauzyPath,
    enumerate_class,
    find_path,
    path_product,
    replay,
    step,
)

P = Permutation.parse


def cols(*columns):
    return IntegerMatrix.from_columns(columns)


def test_step_examples():
    p, M = step(P("4321"), Move.B)
    assert p == P("2431")
    expected = IntegerMatrix.identity(4).to_json()
    expected[3][0] = 1
    assert M.to_json() == expected

    p, M = step(P("4321"), Move.A)
    assert p == P("4132")
    assert M == cols((1, 0, 0, 0), (1, 0, 0, 1), (0, 1, 0, 0), (0, 0, 1, 0))

    p, _ = step(P("2413"), Move.B)
    assert p == P("2413")


def test_path_product_examples():
    assert path_product(RauzyPath(P("4321"), ())) == (P("4321"), IntegerMatrix.identity(4))
    assert path_product(RauzyPath(P("4321"), (Move.B,))) == step(P("4321"), Move.B)


def test_m1_one_one():
    named = build_named_path("M1", (1, 1))
    end, M = path_product(named.path)
    assert named.printed_name(end) == P("2431")
    assert M.to_json() == [[1, 1, 0, 0], [0, 0, 2, 1], [2, 1, 2, 2], [1, 1, 1, 1]]


def test_class_examples():
    g = enumerate_class(P("4321"))
    assert {v.compact() for v in g.vertices} == {"2413", "2431", "3142", "3241", "4132", "4213", "4321"}
    g = enumerate_class(P("21"))
    assert g.vertices == (P("21"),)
    assert all(dst == P("21") for _, _, dst in g.edges) and len(g.edges) == 2
    assert {v.compact() for v in enumerate_class(P("321")).vertices} == {"321", "312", "231"}


def test_dot_output():
    dot = enumerate_class(P("4321")).to_dot()
    assert dot.startswith("digraph") and dot.count("->") == 14


def test_find_path_examples():
    path = find_path(P("2413"), lambda q: q == P("4321"))
    assert len(path) >= 1 and replay(P("2413"), path.moves)[0] == P("4321")
    assert len(find_path(P("4321"), lambda q: q(1) == q.d and q(q.d) == 1)) == 0
    with pytest.raises(GoalUnreachable):
        find_path(P("4321"), lambda q: q(1) == 1)


@given(st.sampled_from(["4321", "25431", "243615", "2413"]), st.lists(st.sampled_from([Move.A, Move.B]), max_size=40))
def test_products_are_unimodular(start, moves):
    end, M = path_product(RauzyPath(P(start), tuple(moves)))
    assert M.det() in (1, -1)
    assert min(M.column_sums()) >= 1
    # composition
    cut = len(moves) // 2
    mid, M1 = path_product(RauzyPath(P(start), tuple(moves[:cut])))
    end2, M2 = path_product(RauzyPath(mid, tuple(moves[cut:])))
    assert end2 == end and M1 @ M2 == M


def test_json_round_trip():
    path = RauzyPath(P("4321"), (Move.A, Move.B, Move.B))
    assert RauzyPath.from_json(path.to_json()) == path
    _, M = path_product(path)
    assert IntegerMatrix.from_json(M.to_json()) == M
