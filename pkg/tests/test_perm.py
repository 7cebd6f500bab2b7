import pytest

from ietlab.perm import (
    Permutation,
    ProxyKind,
    all_permutations,
    classify,
    degeneracy_witnesses,
    is_degenerate,
    is_irreducible,
    is_standard,
    proxy_kind,
)
from ietlab.rauzy import enumerate_class

P = Permutation.parse


def test_irreducible_examples():
    assert is_irreducible(P("4321"))
    assert not is_irreducible(P("12"))
    assert is_irreducible(P("2413"))


def test_irreducible_by_prefix_definition():
    for d in range(2, 6):
        for p in all_permutations(d):
            closed = any(set(p.image[:k]) == set(range(1, k + 1)) for k in range(1, d))
            assert is_irreducible(p) == (not closed)


def test_degenerate_examples():
    assert is_degenerate(P("4321")) == (False, None)
    assert is_degenerate(P("2413")) == (False, None)
    bad, witness = is_degenerate(P("3412"))
    assert bad and witness == (1, 1)
    assert (1, 3) in degeneracy_witnesses(P("3412"))


def test_classify_examples():
    c = classify(P("4321"))
    assert c.proxy_kind is ProxyKind.PROXY and c.standard and not c.degenerate
    assert classify(P("25431")).proxy_kind is ProxyKind.PROXY
    c = classify(P("52431"))
    assert c.proxy_kind is ProxyKind.QUASI and c.standard


def test_parse_forms():
    assert P("(4321)") == P("4,3,2,1") == P([4, 3, 2, 1])
    assert P("10,9,8,7,6,5,4,3,2,1").d == 10
    with pytest.raises(ValueError):
        P("4421")


def test_json_round_trip():
    p = P("25431")
    assert Permutation.from_json(p.to_json()) == p
    assert p.to_json() == {"d": 5, "image": [2, 5, 4, 3, 1]}


@pytest.mark.parametrize("d", [4, 5, 6])
def test_degeneracy_is_a_class_invariant(d):
    seen = set()
    for p in all_permutations(d):
        if not is_irreducible(p) or p in seen:
            continue
        V = enumerate_class(p).vertices
        seen.update(V)
        assert len({is_degenerate(v)[0] for v in V}) == 1


def test_proxy_patterns_hold_verbatim():
    for d in (4, 5, 6):
        for p in all_permutations(d):
            k = proxy_kind(p)
            if k is None:
                continue
            assert p(d - 2) == d - 1 and p(d - 1) == d - 2 and p(d) == 1
            assert p(d - 3) == d if k is ProxyKind.PROXY else p(1) == d


def test_standard():
    assert is_standard(P("4321")) and not is_standard(P("2413"))
