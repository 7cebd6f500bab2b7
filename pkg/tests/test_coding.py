from fractions import Fraction

import mpmath
import pytest

import oracles
from ietlab.coding import (
    BlockExpression,
    Word,
    allowed_blocks,
    code_orbit,
    expand,
    hat_blocks,
    return_blocks,
)
from ietlab.errors import BadParams, OrbitHitsDiscontinuity
from ietlab.iet import ExactIET, golden_rotation, induce_path
from ietlab.rauzy import path_product, RauzyPath

F = Fraction
T4 = ExactIET("4321", [F(1, 10), F(2, 10), F(3, 10), F(4, 10)])


def test_golden_coding_matches_orbit():
    T = golden_rotation()
    w = code_orbit(T, 0, 0, 40)
    ls = oracles.mp_lengths(T)
    ref = oracles.orbit_word(T.perm.image, ls, mpmath.mpf(0), 41)
    assert w.letters == ref


def test_identity_coding():
    T = ExactIET("1234", [F(1, 4)] * 4)
    assert code_orbit(T, F(3, 10), 0, 3).letters == (2, 2, 2, 2)


def test_one_sided_codings():
    assert code_orbit(T4, F(1, 10), 0, 0, side="left").letters == (1,)
    assert code_orbit(T4, F(1, 10), 0, 0, side="right").letters == (2,)


def test_exact_coding_refuses_discontinuity():
    with pytest.raises(OrbitHitsDiscontinuity):
        code_orbit(T4, F(1, 10), 0, 3, side="exact")


def test_return_blocks_example():
    fam = return_blocks(T4, 1, cross_check=True)
    assert [b.letters for b in fam.blocks] == [(1, 4), (2,), (3,), (4,)]
    assert fam.lengths() == path_product(RauzyPath(T4.perm, fam.moves))[1].column_sums()
    assert [b.letters for b in return_blocks(T4, 0).blocks] == [(1,), (2,), (3,), (4,)]


def test_return_blocks_deep_cross_check():
    from ietlab.field import ExactNumber

    T = ExactIET.normalized("25431", [ExactNumber(1, 1, 2), 2, ExactNumber(3, -1, 2), 1, ExactNumber(0, 1, 2)])
    fam = return_blocks(T, 30, cross_check=True)
    _, M, _ = induce_path(T, 30)
    assert fam.lengths() == M.column_sums()


def test_allowed_blocks_examples():
    ident = ExactIET("123", [F(1, 3)] * 3)
    assert {w.letters for w in allowed_blocks(ident, 2)} == {(1, 1), (2, 2), (3, 3)}
    golden = {w.letters for w in allowed_blocks(golden_rotation(), 2)}
    assert golden == {(1, 1), (1, 2), (2, 1)}
    # fine exact grid: a subset always; equal once the grid resolves every cylinder
    ls = oracles.mp_lengths(T4)
    grid = oracles.grid_blocks(T4.perm.image, ls, 2, 1000)
    assert {w.letters for w in allowed_blocks(T4, 2)} == grid


def test_allowed_blocks_against_fibonacci():
    words = {w.letters for w in allowed_blocks(golden_rotation(), 12)}
    assert words == {f for f in oracles.all_factors(oracles.fibonacci_word(3000), 12) if len(f) == 12}


def test_hat_block_examples():
    p = 3
    H = hat_blocks("FourLetter", 4, p, p)
    E = BlockExpression.of
    assert H == (
        E((1, 1), (3, p + 1), (4, 1)),
        E((1, 1), (3, p), (4, 1)),
        E((2, p + 1), (3, p + 1), (4, 1)),
        E((2, p), (3, p + 1), (4, 1)),
    )
    n = 2
    assert hat_blocks("Proxy", 5, 1, n)[0] == E((1, 1), (4, n), (5, 1))
    Q = hat_blocks("Quasi", 5, 1, n)
    assert Q[0] == E((1, 1), (4, n + 1), (5, 1)) and Q[1] == E((1, 1), (4, n), (5, 1))
    Q6 = hat_blocks("Quasi", 6, 2, 2)
    assert len(Q6) == 6 and Q6[2] == E((2, 1), (5, 2), (6, 1))
    with pytest.raises(BadParams):
        hat_blocks("FourLetter", 5, 1, 1)


def test_expand_letters():
    fam = [Word.of(1), Word.of(2, 2), Word.of(3), Word.of(4)]
    (w,) = expand([BlockExpression.of((2, 2), (4, 1))], fam)
    assert w.letters == (2, 2, 2, 2, 4)


def test_json_round_trip():
    e = BlockExpression.of((1, 1), (3, 4), (4, 1))
    assert BlockExpression.from_json(e.to_json()) == e
    w = Word.of(1, 2, 3)
    assert Word.from_json(w.to_json()) == w
