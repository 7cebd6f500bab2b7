"""Symbolic coding of interval exchanges.

Orbit words, return blocks of induced maps, languages of allowed blocks
and the run-length calculus of block concatenations used after the
``M1``-type paths.

Letters are the interval labels ``1..d``.  Internally long words are
``numpy`` arrays of ``int16``; the public :class:`Word` wraps a tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import BadParams, BudgetExceeded, OrbitHitsDiscontinuity
from .field import ExactNumber
from .iet import ExactIET, induce_lattice
from .perm import Permutation
from .rauzy import Move, RauzyPath

__all__ = [
    "Word",
    "BlockExpression",
    "BlockFamily",
    "DEFAULT_BUDGET",
    "code_orbit",
    "return_blocks",
    "blocks_along",
    "allowed_blocks",
    "hat_blocks",
    "hat_kind",
    "expand",
    "contains_factor",
    "factors",
]

DEFAULT_BUDGET = 10**7

LETTER = np.int16


@dataclass(frozen=True)
class Word:
    """A finite word over ``{1, ..., d}``."""

    letters: Tuple[int, ...]

    def __post_init__(self):
        letters = tuple(int(a) for a in self.letters)
        if any(a < 1 for a in letters):
            raise ValueError("letters are positive interval labels")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def of(cls, *letters) -> "Word":
        if len(letters) == 1 and not isinstance(letters[0], int):
            return cls(tuple(letters[0]))
        return cls(letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.letters[i])
        return self.letters[i]

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + tuple(other))

    def __pow__(self, r: int) -> "Word":
        return Word(self.letters * r)

    def array(self) -> np.ndarray:
        return np.asarray(self.letters, dtype=LETTER)

    def to_json(self) -> List[int]:
        return list(self.letters)

    @classmethod
    def from_json(cls, data) -> "Word":
        return cls(tuple(data))

    def __str__(self):
        return "(" + ",".join(map(str, self.letters)) + ")"


@dataclass(frozen=True)
class BlockExpression:
    """``B_{i1}^{e1} B_{i2}^{e2} ...`` kept in run-length form."""

    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        fs = tuple((int(i), int(e)) for i, e in self.factors)
        if any(e < 1 for _, e in fs):
            raise BadParams("exponents must be at least 1")
        if any(i < 1 for i, _ in fs):
            raise BadParams("block ids are 1-based")
        object.__setattr__(self, "factors", fs)

    @classmethod
    def of(cls, *factors) -> "BlockExpression":
        """Drops zero exponents, so table rows can be written uniformly."""
        return cls(tuple((i, e) for i, e in factors if e))

    def length(self, base_lengths: Sequence[int]) -> int:
        return sum(e * int(base_lengths[i - 1]) for i, e in self.factors)

    def count(self, base_lengths: Sequence[int]) -> List[int]:
        """How many copies of each base block the expansion uses."""
        out = [0] * len(base_lengths)
        for i, e in self.factors:
            out[i - 1] += e
        return out

    def expand_array(self, blocks: Sequence, budget: int = DEFAULT_BUDGET) -> np.ndarray:
        arrs = [np.asarray(b, dtype=LETTER) for b in blocks]
        total = sum(e * len(arrs[i - 1]) for i, e in self.factors)
        if total > budget:
            raise BudgetExceeded(f"expansion needs {total} letters, budget {budget}")
        parts = [np.tile(arrs[i - 1], e) for i, e in self.factors]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=LETTER)

    def expand(self, blocks: Sequence, budget: int = DEFAULT_BUDGET) -> Word:
        return Word(tuple(self.expand_array(blocks, budget).tolist()))

    def to_json(self) -> List[List[int]]:
        return [[i, e] for i, e in self.factors]

    @classmethod
    def from_json(cls, data) -> "BlockExpression":
        return cls(tuple((i, e) for i, e in data))

    def __str__(self):
        return "".join(f"B{i}" + (f"^{e}" if e != 1 else "") for i, e in self.factors)


@dataclass(frozen=True)
class BlockFamily:
    """The return blocks ``B_{1,n}, ..., B_{d,n}`` of ``T``."""

    blocks: Tuple[Word, ...]
    iet: Optional[ExactIET] = None
    n: int = 0
    moves: Tuple[Move, ...] = ()

    @property
    def d(self) -> int:
        return len(self.blocks)

    def lengths(self) -> Tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def __getitem__(self, j: int) -> Word:
        """``B_j`` (1-based)."""
        return self.blocks[j - 1]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "moves": "".join(m.value for m in self.moves),
            "blocks": [b.to_json() for b in self.blocks],
            "lengths": list(self.lengths()),
        }


def expand(exprs: Sequence[BlockExpression], family, budget: int = DEFAULT_BUDGET) -> Tuple[Word, ...]:
    """Letter expansion of every expression over the blocks of ``family``.

    ``budget`` bounds the total number of letters produced.
    """
    blocks = family.blocks if isinstance(family, BlockFamily) else family
    lens = [len(b) for b in blocks]
    total = sum(e.length(lens) for e in exprs)
    if total > budget:
        raise BudgetExceeded(f"expansion needs {total} letters, budget {budget}")
    return tuple(e.expand(blocks, budget) for e in exprs)


# ---------------------------------------------------------------------------
# orbit words


def code_orbit(T: ExactIET, x, p: int, q: int, side: str = "exact") -> Word:
    """The coding ``w_{p,q}(x) = a_p ... a_q`` with ``T^i(x)`` in ``I_{a_i}``.

    Parameters
    ----------
    side : {"exact", "left", "right"}
        ``exact`` codes ``x`` itself and refuses orbits that meet a
        discontinuity of ``T`` (or of ``T^{-1}`` on the backward part),
        where the coding would depend on the side.  ``right`` and ``left``
        return the one-sided limit words ``w_{p,q}(x^+)`` and
        ``w_{p,q}(x^-)``.

    Raises
    ------
    OrbitHitsDiscontinuity
        For ``side="exact"``; ``index`` is the offending ``i``.
    """
    if p > q:
        raise ValueError("need p <= q")
    if side not in ("exact", "left", "right"):
        raise ValueError("side must be exact, left or right")
    x = ExactNumber.coerce(x, T.N)
    if x < 0 or x > 1 or (x == 1 and side != "left") or (x == 0 and side == "left"):
        raise ValueError(f"{x} has no {side} coding in [0, 1)")
    S = T.lattice_for(x)
    pt = S.to_point(x)
    closed = side == "left"
    cuts = set(S.discontinuity_points()) if side == "exact" else set()
    img_cuts = set(S.image_discontinuity_points()) if side == "exact" else set()

    letters: Dict[int, int] = {}
    y = pt
    for i in range(0, q + 1):
        if i >= p:
            if y in cuts:
                raise OrbitHitsDiscontinuity(f"T^{i}(x) is a discontinuity", index=i)
            letters[i] = S.locate_point(y, closed) + 1
        if i < q:
            y = S.apply_point(y, closed)
    y = pt
    for i in range(-1, p - 1, -1):
        if y in img_cuts:
            raise OrbitHitsDiscontinuity(f"T^{i}(x) is ambiguous: T^{i + 1}(x) is an image endpoint", index=i)
        y = S.apply_inverse_point(y, closed)
        if i <= q:
            if y in cuts:
                raise OrbitHitsDiscontinuity(f"T^{i}(x) is a discontinuity", index=i)
            letters[i] = S.locate_point(y, closed) + 1
    return Word(tuple(letters[i] for i in range(p, q + 1)))


# ---------------------------------------------------------------------------
# return blocks


def _substitute(perm: Permutation, moves: Iterable[Move], blocks: List[np.ndarray]):
    """Carry blocks along moves: ``A`` inserts ``B_k B_d`` after ``B_k``,
    ``B`` replaces ``B_k`` by ``B_k B_d`` (``k = pi^{-1}(d)``)."""
    from .rauzy import step_permutation

    d = perm.d
    for mv in moves:
        k = perm.index_of(d)
        joined = np.concatenate((blocks[k - 1], blocks[d - 1]))
        if mv is Move.A:
            blocks = blocks[:k] + [joined] + blocks[k : d - 1]
        else:
            blocks = blocks[: k - 1] + [joined] + blocks[k:]
        perm = step_permutation(perm, mv)
    return perm, blocks


def blocks_along(path: RauzyPath, base=None) -> Tuple[Word, ...]:
    """Return blocks after ``path`` expressed over ``base`` (default: the
    one-letter blocks ``(j)``)."""
    d = path.start.d
    if base is None:
        arrs = [np.array([j], dtype=LETTER) for j in range(1, d + 1)]
    else:
        arrs = [np.asarray(tuple(b), dtype=LETTER) for b in base]
    _, arrs = _substitute(path.start, path.moves, arrs)
    return tuple(Word(tuple(a.tolist())) for a in arrs)


def _block_arrays(start: Permutation, moves) -> List[np.ndarray]:
    arrs = [np.array([j], dtype=LETTER) for j in range(1, start.d + 1)]
    return _substitute(start, moves, arrs)[1]


def _orbit_blocks(T: ExactIET, n: int, moves) -> List[Tuple[int, ...]]:
    """Second route: iterate ``T`` from each induced subinterval's left
    endpoint (original coordinates) until it re-enters ``I^{(n)}``."""
    ind = induce_lattice(T, n)
    L = ind.lengths
    D = ind.D
    left = [(0, 0)]
    for p, q in L[:-1]:
        left.append((left[-1][0] + p, left[-1][1] + q))
    right_end = (left[-1][0] + L[-1][0], left[-1][1] + L[-1][1])
    # lattice points are in units of 1/D already, with D = T._D
    assert D == T._D
    out = []
    for start in left:
        word = [T.locate_point(start) + 1]
        y = T.apply_point(start)
        while T._cmp(y, right_end) >= 0:
            word.append(T.locate_point(y) + 1)
            y = T.apply_point(y)
        out.append(tuple(word))
    return out


def return_blocks(T: ExactIET, n: int, cross_check: bool = False) -> BlockFamily:
    """Return words ``B_{j,n}`` of the subintervals of ``I^{(n)}``.

    The blocks are obtained by carrying letters along the realized moves.
    With ``cross_check`` they are also recomputed by iterating ``T`` on
    the induced intervals' endpoints and compared.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    ind = induce_lattice(T, n)
    arrs = _block_arrays(T.perm, ind.moves)
    blocks = tuple(Word(tuple(a.tolist())) for a in arrs)
    if cross_check:
        other = _orbit_blocks(T, n, ind.moves)
        if [b.letters for b in blocks] != other:
            raise AssertionError("substitution and orbit routes disagree")
    return BlockFamily(blocks, T, n, ind.moves)


# ---------------------------------------------------------------------------
# languages


def _cut_points(T: ExactIET, l: int):
    """``{0} U {T^{-i}(delta_j) : 0 <= i < l}`` sorted."""
    pts = {(0, 0)}
    layer = T.discontinuity_points()
    for i in range(l):
        pts.update(layer)
        if i + 1 < l:
            layer = [T.apply_inverse_point(y) for y in layer]
    from functools import cmp_to_key

    return sorted(pts, key=cmp_to_key(T._cmp))


def allowed_blocks(T: ExactIET, l: int, horizon: int = 0) -> Set[Word]:
    """The allowed ``l``-blocks ``{a_1...a_l : cap T^{-i} I_{a_i} nonempty}``.

    The coding of length ``l`` is constant on each interval between
    consecutive points of ``{0} U {T^{-i}(delta_j) : i < l}``, and every
    such interval has positive length, so coding the left endpoints gives
    the language exactly.  ``horizon`` is accepted for interface
    compatibility; no acceleration is needed at the sizes involved.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    out = set()
    for x in _cut_points(T, l):
        word = []
        y = x
        for i in range(l):
            word.append(T.locate_point(y) + 1)
            if i + 1 < l:
                y = T.apply_point(y)
        out.add(Word(tuple(word)))
    return out


def factors(words: Iterable, l: int) -> Set[Tuple[int, ...]]:
    """All length-``l`` factors of the given words."""
    out: Set[Tuple[int, ...]] = set()
    for w in words:
        w = tuple(w)
        for i in range(len(w) - l + 1):
            out.add(w[i : i + l])
    return out


def contains_factor(word, factor) -> bool:
    """Whether ``factor`` occurs in ``word`` (numpy sliding comparison)."""
    w = np.asarray(tuple(word), dtype=LETTER)
    f = np.asarray(tuple(factor), dtype=LETTER)
    if len(f) == 0:
        return True
    if len(f) > len(w):
        return False
    win = np.lib.stride_tricks.sliding_window_view(w, len(f))
    return bool(np.any(np.all(win == f, axis=1)))


# ---------------------------------------------------------------------------
# hat blocks


def hat_blocks(kind: str, d: int, m: int, n: int) -> Tuple[BlockExpression, ...]:
    """Blocks after the ``M1``-type path with parameters ``(m, n)``, as
    concatenations of the blocks before it.

    ``kind`` is ``FourLetter`` (``d = 4``), ``Proxy`` or ``Quasi``
    (``d > 4``).
    """
    m, n, d = int(m), int(n), int(d)
    if m < 0 or n < 0:
        raise BadParams("m and n must be nonnegative")
    E = BlockExpression.of
    if kind == "FourLetter":
        if d != 4:
            raise BadParams("FourLetter tables are for d = 4")
        return (
            E((1, 1), (3, n + 1), (4, 1)),
            E((1, 1), (3, n), (4, 1)),
            E((2, m + 1), (3, n + 1), (4, 1)),
            E((2, m), (3, n + 1), (4, 1)),
        )
    if kind not in ("Proxy", "Quasi"):
        raise BadParams(f"unknown hat table {kind!r}")
    if d <= 4:
        raise BadParams("proxy tables need d > 4")
    tail_hi = E((d - 2, m + 1), (d - 1, n + 1), (d, 1))
    tail_lo = E((d - 2, m), (d - 1, n + 1), (d, 1))
    if kind == "Proxy":
        rows = [E((l, 1), (d - 1, n), (d, 1)) for l in range(1, d - 3)]
        rows.append(E((d - 3, 1), (d - 1, n + 1), (d, 1)))
        rows.append(E((d - 3, 1), (d - 1, n), (d, 1)))
    else:
        rows = [E((1, 1), (d - 1, n + 1), (d, 1)), E((1, 1), (d - 1, n), (d, 1))]
        rows += [E((l - 1, 1), (d - 1, n), (d, 1)) for l in range(3, d - 1)]
    rows += [tail_hi, tail_lo]
    return tuple(rows)


def hat_kind(kind) -> str:
    """Map a proxy kind or a tilde path name to a hat table name."""
    s = str(getattr(kind, "value", kind))
    if s.startswith("Quasi") or s.endswith("Quasi"):
        return "Quasi"
    if "Proxy" in s:
        return "Proxy"
    return "FourLetter"
