"""Rauzy induction on permutations and transition matrices.

Moves are named by which discontinuity wins:

* ``Move.A``: the rightmost discontinuity of ``T`` is the larger one; the
  interval ``I_k`` (``k = pi^{-1}(d)``) is split and ``I_d`` disappears.
* ``Move.B``: the rightmost discontinuity of ``T^{-1}`` is the larger one;
  ``I_d`` is shortened by ``|I_k|``.

The step matrix ``M`` satisfies ``L = M L'`` for the length vectors before
and after the step, so its column sums are the return times of the new
intervals and path matrices compose left to right in move order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .errors import GoalUnreachable, ReducibleInput
from .perm import Permutation, as_permutation, is_irreducible

__all__ = [
    "Move",
    "IntegerMatrix",
    "RauzyPath",
    "RauzyClassGraph",
    "step",
    "step_permutation",
    "step_matrix",
    "path_product",
    "enumerate_class",
    "find_path",
    "parse_moves",
]


class Move(str, Enum):
    A = "A"
    B = "B"

    def other(self) -> "Move":
        return Move.B if self is Move.A else Move.A


def parse_moves(moves) -> Tuple[Move, ...]:
    """``"AAB"``, ``["A", "B"]`` or Move values."""
    if isinstance(moves, str):
        moves = [c for c in moves.strip() if not c.isspace()]
    return tuple(m if isinstance(m, Move) else Move(str(m).upper()) for m in moves)


@dataclass(frozen=True)
class IntegerMatrix:
    """Square matrix of Python integers (exact, no overflow)."""

    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("IntegerMatrix must be square and nonempty")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, d: int) -> "IntegerMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]]) -> "IntegerMatrix":
        d = len(columns)
        return cls(tuple(tuple(columns[j][i] for j in range(d)) for i in range(d)))

    @property
    def d(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        cols = list(zip(*other.entries))
        return IntegerMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
                for row in self.entries
            )
        )

    def apply(self, vector: Sequence):
        """``M v`` for any vector whose entries support ``*`` and ``+``."""
        out = []
        for row in self.entries:
            acc = 0
            for a, v in zip(row, vector):
                if a:
                    acc = acc + a * v
            out.append(acc)
        return out

    def column(self, j: int) -> Tuple[int, ...]:
        """Column ``j`` (1-based, as in ``C_j``)."""
        return tuple(row[j - 1] for row in self.entries)

    def column_sums(self) -> Tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.entries))

    def row_vector_times(self, row: Sequence[int]) -> Tuple[int, ...]:
        """``row @ M``; with ``row`` a vector of column sums this gives the
        column sums of ``current @ M``."""
        return tuple(sum(r * x for r, x in zip(row, col)) for col in zip(*self.entries))

    def is_positive(self) -> bool:
        return all(x > 0 for row in self.entries for x in row)

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        a = [list(r) for r in self.entries]
        n = self.d
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for r in range(k + 1, n):
                    if a[r][k]:
                        a[k], a[r] = a[r], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=object)

    def to_json(self) -> List[List[int]]:
        return [list(r) for r in self.entries]

    @classmethod
    def from_json(cls, rows) -> "IntegerMatrix":
        return cls(tuple(tuple(r) for r in rows))

    def __str__(self):
        width = max(len(str(x)) for r in self.entries for x in r)
        return "\n".join(" ".join(str(x).rjust(width) for x in r) for r in self.entries)


def _require_irreducible(p: Permutation) -> None:
    if not is_irreducible(p):
        raise ReducibleInput(f"{p} is reducible; Rauzy induction is undefined")


def step_permutation(p: Permutation, move: Move) -> Permutation:
    d = p.d
    k = p.index_of(d)
    if move is Move.A:
        img = list(p.image[:k]) + [p(d)] + list(p.image[k:d - 1])
    else:
        pd = p(d)
        img = []
        for pj in p.image:
            if pj <= pd:
                img.append(pj)
            elif pj < d:
                img.append(pj + 1)
            else:
                img.append(pd + 1)
    return Permutation(tuple(img))


def step_matrix(p: Permutation, move: Move) -> IntegerMatrix:
    d = p.d
    k = p.index_of(d)
    rows = [[0] * d for _ in range(d)]
    if move is Move.A:
        for j in range(1, d + 1):
            if j <= k:
                rows[j - 1][j - 1] = 1
            else:
                rows[j - 2][j - 1] = 1
        rows[d - 1][k] = 1  # column k+1 also passes through I_d
    else:
        for i in range(d):
            rows[i][i] = 1
        rows[d - 1][k - 1] = 1
    return IntegerMatrix(tuple(tuple(r) for r in rows))


def step(p, move) -> Tuple[Permutation, IntegerMatrix]:
    """One Rauzy step: the new permutation and the step matrix."""
    p = as_permutation(p)
    move = Move(move)
    _require_irreducible(p)
    return step_permutation(p, move), step_matrix(p, move)


@dataclass(frozen=True)
class RauzyPath:
    start: Permutation
    moves: Tuple[Move, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "start", as_permutation(self.start))
        object.__setattr__(self, "moves", parse_moves(self.moves))

    def __len__(self):
        return len(self.moves)

    def __add__(self, other: "RauzyPath") -> "RauzyPath":
        if other.start != self.end():
            raise ValueError("paths do not compose: end and start differ")
        return RauzyPath(self.start, self.moves + other.moves)

    def extend(self, moves) -> "RauzyPath":
        return RauzyPath(self.start, self.moves + parse_moves(moves))

    def permutations(self) -> List[Permutation]:
        """Every permutation visited, start and end included."""
        out = [self.start]
        p = self.start
        for m in self.moves:
            _require_irreducible(p)
            p = step_permutation(p, m)
            out.append(p)
        return out

    def end(self) -> Permutation:
        return self.permutations()[-1]

    def word(self) -> str:
        return "".join(m.value for m in self.moves)

    def to_json(self) -> dict:
        return {"start": self.start.to_json(), "moves": self.word()}

    @classmethod
    def from_json(cls, data) -> "RauzyPath":
        return cls(Permutation.from_json(data["start"]), data["moves"])


def path_product(path: RauzyPath) -> Tuple[Permutation, IntegerMatrix]:
    p = path.start
    M = IntegerMatrix.identity(p.d)
    for m in path.moves:
        p, S = step(p, m)
        M = M @ S
    return p, M


@dataclass(frozen=True)
class RauzyClassGraph:
    vertices: Tuple[Permutation, ...]
    edges: Tuple[Tuple[Permutation, Move, Permutation], ...]

    def successor(self, p: Permutation, move: Move) -> Permutation:
        for src, m, dst in self.edges:
            if src == p and m is move:
                return dst
        raise KeyError((p, move))

    def adjacency(self) -> Dict[Permutation, Dict[Move, Permutation]]:
        adj: Dict[Permutation, Dict[Move, Permutation]] = {v: {} for v in self.vertices}
        for src, m, dst in self.edges:
            adj[src][m] = dst
        return adj

    def is_strongly_connected(self) -> bool:
        if not self.vertices:
            return False
        adj = self.adjacency()
        radj: Dict[Permutation, List[Permutation]] = {v: [] for v in self.vertices}
        for src, _, dst in self.edges:
            radj[dst].append(src)

        def reach(root, nbrs):
            seen = {root}
            todo = [root]
            while todo:
                v = todo.pop()
                for w in nbrs(v):
                    if w not in seen:
                        seen.add(w)
                        todo.append(w)
            return seen

        root = self.vertices[0]
        n = len(self.vertices)
        return (
            len(reach(root, lambda v: adj[v].values())) == n
            and len(reach(root, lambda v: radj[v])) == n
        )

    def to_json(self) -> dict:
        return {
            "vertices": [v.compact() for v in self.vertices],
            "edges": [
                {"from": s.compact(), "move": m.value, "to": t.compact()}
                for s, m, t in self.edges
            ],
        }

    def to_dot(self, name: str = "rauzy_class") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            lines.append(f'  "{v.compact()}";')
        for s, m, t in self.edges:
            lines.append(f'  "{s.compact()}" -> "{t.compact()}" [label="{m.value}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def enumerate_class(p) -> RauzyClassGraph:
    """Closure of ``p`` under both moves, vertices in lexicographic order."""
    p = as_permutation(p)
    _require_irreducible(p)
    seen = {p}
    todo = deque([p])
    while todo:
        q = todo.popleft()
        for m in (Move.A, Move.B):
            r = step_permutation(q, m)
            if r not in seen:
                seen.add(r)
                todo.append(r)
    vertices = tuple(sorted(seen))
    edges = tuple((v, m, step_permutation(v, m)) for v in vertices for m in (Move.A, Move.B))
    return RauzyClassGraph(vertices, edges)


def find_path(p, goal: Callable[[Permutation], bool]) -> RauzyPath:
    """Shortest path (BFS, A explored before B) from ``p`` to a goal vertex."""
    p = as_permutation(p)
    _require_irreducible(p)
    parent: Dict[Permutation, Tuple[Permutation, Move]] = {}
    seen = {p}
    todo = deque([p])
    while todo:
        q = todo.popleft()
        if goal(q):
            moves: List[Move] = []
            while q != p:
                q, m = parent[q]
                moves.append(m)
            return RauzyPath(p, tuple(reversed(moves)))
        for m in (Move.A, Move.B):
            r = step_permutation(q, m)
            if r not in seen:
                seen.add(r)
                parent[r] = (q, m)
                todo.append(r)
    raise GoalUnreachable(f"no permutation in the class of {p} satisfies the goal")


def replay(start, moves: Iterable) -> Tuple[Permutation, IntegerMatrix]:
    return path_product(RauzyPath(as_permutation(start), tuple(moves)))
