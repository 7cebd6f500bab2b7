"""
A tour of the Rauzy class of (4321)
===================================

Enumerate the class, follow the two moves, and watch exact induction on a
concrete interval exchange pick the same moves.
"""

from fractions import Fraction

from ietlab import ExactIET, Move, enumerate_class, induce_path, path_product
from ietlab.perm import Permutation, classify
from ietlab.rauzy import RauzyPath

# The class is a directed graph with one A-edge and one B-edge per vertex.
g = enumerate_class("4321")
for src, move, dst in g.edges:
    print(f"{src.compact()} --{move.value}--> {dst.compact()}")
print("strongly connected:", g.is_strongly_connected())

# Every vertex is irreducible and non-degenerate; (4321) is also standard.
for v in g.vertices:
    print(v.compact(), classify(v).to_json())

# A path multiplies transition matrices; column sums are return-block lengths.
path = RauzyPath(Permutation.parse("4321"), (Move.B, Move.A, Move.A, Move.B))
end, M = path_product(path)
print("end", end.compact(), "column sums", M.column_sums(), "det", M.det())

# Exact induction on the lengths (1, 2, 3, 4) / 10 realizes some word of moves.
T = ExactIET("4321", [Fraction(i, 10) for i in (1, 2, 3, 4)])
S, M, moves = induce_path(T, 3)
print("moves", "".join(m.value for m in moves), "->", S.perm.compact(), [str(x) for x in S.lengths])
