"""Interval exchange transformations with lengths in ``Q(sqrt(N))``.

An :class:`ExactIET` keeps its lengths as :class:`ExactNumber` values and
also caches a scaled integer form: every point of the field over the common
denominator ``D`` of the lengths is a pair ``(p, q)`` standing for
``(p + q*sqrt(N)) / D``.  Orbits of points in that lattice stay in it, so
orbit computations run on Python integers.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DegenerateCoincidence, InvalidSeed, OutOfDomain
from .field import DEFAULT_SQRT, ExactNumber, sign_of
from .perm import Permutation, as_permutation
from .rauzy import IntegerMatrix, Move, step_matrix, step_permutation

__all__ = [
    "ExactIET",
    "KeaneReport",
    "evaluate",
    "induce_step",
    "induce_path",
    "check_keane",
    "iet_from_cone",
    "golden_rotation",
    "cone_point",
    "generic_cone_point",
    "LatticeInduction",
    "induce_lattice",
]

Point = Tuple[int, int]


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


class ExactIET:
    """A ``d``-IET ``T_{L, pi}`` on ``[0, 1)`` with exact lengths.

    Parameters
    ----------
    perm : Permutation or str
        One-line notation; interval ``j`` lands in position ``perm(j)``.
    lengths : sequence
        ``d`` positive values summing to exactly 1.  Entries may be
        ExactNumber, Fraction, int or ``"p/q"`` strings.
    N : int
        The square root the field is built on.
    """

    def __init__(self, perm, lengths: Sequence, N: Optional[int] = None, _extra_den: int = 1):
        self.perm = as_permutation(perm)
        if N is None:
            N = next((x.N for x in lengths if isinstance(x, ExactNumber) and x.b), DEFAULT_SQRT)
        self.N = int(N)
        self.lengths = tuple(ExactNumber.coerce(x, self.N) for x in lengths)
        for x in self.lengths:
            if x.b and x.N != self.N:
                raise ValueError("all lengths must live in the same field")
        if len(self.lengths) != self.perm.d:
            raise ValueError("need one length per interval")
        if any(x.sign() <= 0 for x in self.lengths):
            raise ValueError("lengths must be strictly positive")
        total = sum(self.lengths, ExactNumber(0, 0, self.N))
        if total != 1:
            raise ValueError(f"lengths must sum to 1, got {total}")
        self._build_lattice(_extra_den)

    @classmethod
    def normalized(cls, perm, raw: Sequence, N: Optional[int] = None) -> "ExactIET":
        """Rescale positive ``raw`` lengths to total 1."""
        if N is None:
            N = next((x.N for x in raw if isinstance(x, ExactNumber) and x.b), DEFAULT_SQRT)
        vals = [ExactNumber.coerce(x, N) for x in raw]
        total = sum(vals, ExactNumber(0, 0, N))
        return cls(perm, [v / total for v in vals], N)

    @property
    def d(self) -> int:
        return self.perm.d

    # scaled integer lattice ----------------------------------------------
    def _build_lattice(self, extra: int = 1):
        D = extra
        for x in self.lengths:
            D = _lcm(D, x.a.denominator)
            D = _lcm(D, x.b.denominator)
        self._D = D
        L = [(int(x.a * D), int(x.b * D)) for x in self.lengths]
        self._L = L
        d = self.d
        left = [(0, 0)]
        for j in range(d - 1):
            left.append((left[-1][0] + L[j][0], left[-1][1] + L[j][1]))
        self._left = left
        # image left endpoints, by interval
        inv = self.perm.inverse()
        img_left = [None] * d
        acc = (0, 0)
        for pos in range(1, d + 1):
            j = inv(pos)
            img_left[j - 1] = acc
            acc = (acc[0] + L[j - 1][0], acc[1] + L[j - 1][1])
        self._img_left = img_left
        self._shift = [
            (img_left[j][0] - left[j][0], img_left[j][1] - left[j][1]) for j in range(d)
        ]
        # image intervals sorted by position, for the inverse map
        self._img_order = [inv(pos) - 1 for pos in range(1, d + 1)]
        self._one = (D, 0)

    def _cmp(self, x: Point, y: Point) -> int:
        return sign_of(x[0] - y[0], x[1] - y[1], self.N)

    def to_point(self, x) -> Point:
        x = ExactNumber.coerce(x, self.N)
        if x.b and x.N != self.N:
            raise ValueError("point is not in the IET's field")
        p, q = x.a * self._D, x.b * self._D
        if p.denominator != 1 or q.denominator != 1:
            raise ValueError("point is not on the IET's lattice; use evaluate()")
        return (int(p), int(q))

    def from_point(self, pt: Point) -> ExactNumber:
        return ExactNumber(Fraction(pt[0], self._D), Fraction(pt[1], self._D), self.N)

    def on_lattice(self, x) -> bool:
        x = ExactNumber.coerce(x, self.N)
        return (x.a * self._D).denominator == 1 and (x.b * self._D).denominator == 1

    def lattice_for(self, *points) -> "ExactIET":
        """The same map with a lattice fine enough to hold ``points``."""
        D = self._D
        for x in points:
            x = ExactNumber.coerce(x, self.N)
            D = _lcm(_lcm(D, x.a.denominator), x.b.denominator)
        if D == self._D:
            return self
        return ExactIET(self.perm, self.lengths, self.N, _extra_den=D)

    def locate_point(self, pt: Point, closed_right: bool = False) -> int:
        """0-based index ``j`` with ``pt`` in ``I_{j+1}``; ``closed_right``
        uses ``(a, b]`` intervals (left limits)."""
        lo, hi = 0, self.d - 1
        left = self._left
        while lo < hi:
            mid = (lo + hi + 1) // 2
            c = self._cmp(pt, left[mid])
            if c > 0 or (c == 0 and not closed_right):
                lo = mid
            else:
                hi = mid - 1
        return lo

    def apply_point(self, pt: Point, closed_right: bool = False) -> Point:
        j = self.locate_point(pt, closed_right)
        s = self._shift[j]
        return (pt[0] + s[0], pt[1] + s[1])

    def apply_inverse_point(self, pt: Point, closed_right: bool = False) -> Point:
        order = self._img_order
        img_left = self._img_left
        lo, hi = 0, self.d - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            c = self._cmp(pt, img_left[order[mid]])
            if c > 0 or (c == 0 and not closed_right):
                lo = mid
            else:
                hi = mid - 1
        j = order[lo]
        s = self._shift[j]
        return (pt[0] - s[0], pt[1] - s[1])

    def in_domain_point(self, pt: Point) -> bool:
        return self._cmp(pt, (0, 0)) >= 0 and self._cmp(pt, self._one) < 0

    # exact interface ----------------------------------------------------
    def discontinuities(self) -> List[ExactNumber]:
        """``delta_j = l_1 + ... + l_j`` for ``j = 1..d-1``."""
        return [self.from_point(p) for p in self._left[1:]]

    def discontinuity_points(self) -> List[Point]:
        return list(self._left[1:])

    def image_discontinuity_points(self) -> List[Point]:
        """Interior discontinuities of ``T^{-1}`` (left ends of images)."""
        return [self._img_left[j] for j in self._img_order[1:]]

    def interval_of(self, x) -> int:
        """1-based index of the interval containing ``x``."""
        x = ExactNumber.coerce(x, self.N)
        if x < 0 or x >= 1:
            raise OutOfDomain(f"{x} is outside [0, 1)")
        for j in range(self.d - 1, -1, -1):
            if x >= self.from_point(self._left[j]):
                return j + 1
        return 1  # unreachable

    def __call__(self, x) -> ExactNumber:
        return evaluate(self, x)

    def delta_plus(self) -> ExactNumber:
        return 1 - self.lengths[-1]

    def delta_minus(self) -> ExactNumber:
        return 1 - self.lengths[self.perm.index_of(self.d) - 1]

    def to_json(self) -> dict:
        return {
            "perm": self.perm.to_json(),
            "sqrt": self.N,
            "lengths": [x.to_json() for x in self.lengths],
        }

    @classmethod
    def from_json(cls, data) -> "ExactIET":
        N = int(data.get("sqrt", DEFAULT_SQRT))
        perm = data["perm"]
        perm = Permutation.from_json(perm) if isinstance(perm, dict) else as_permutation(perm)
        return cls(perm, [ExactNumber.from_json(x, N) for x in data["lengths"]], N)

    def __eq__(self, other):
        return (
            isinstance(other, ExactIET)
            and self.perm == other.perm
            and self.lengths == other.lengths
        )

    def __hash__(self):
        return hash((self.perm, self.lengths))

    def __repr__(self):
        ls = ", ".join(f"{float(x):.6g}" for x in self.lengths)
        return f"ExactIET({self.perm}, [{ls}])"


def evaluate(T: ExactIET, x) -> ExactNumber:
    """``T(x) = x - sum_{k<j} l_k + sum_{pi(k') < pi(j)} l_k'`` for ``x`` in ``I_j``."""
    x = ExactNumber.coerce(x, T.N)
    if x < 0 or x >= 1:
        raise OutOfDomain(f"{x} is outside [0, 1)")
    j = T.interval_of(x)
    shift = T._shift[j - 1]
    return x + T.from_point(shift)


def _induced_lengths(T: ExactIET, move: Move) -> List[ExactNumber]:
    L = list(T.lengths)
    d = T.d
    k = T.perm.index_of(d)
    if move is Move.A:
        # I_k splits into a piece returning at once and a piece through I_d
        new = L[: k - 1] + [L[k - 1] - L[d - 1], L[d - 1]] + L[k : d - 1]
    else:
        new = L[: d - 1] + [L[d - 1] - L[k - 1]]
    return new


def induce_step(T: ExactIET) -> Tuple[Move, ExactIET, IntegerMatrix]:
    """One step of Rauzy induction, renormalized to ``[0, 1)``.

    Raises
    ------
    DegenerateCoincidence
        If ``delta+ == delta-`` (the last two images have equal length).
    """
    d = T.d
    k = T.perm.index_of(d)
    c = (T.lengths[d - 1] - T.lengths[k - 1]).sign()
    if c == 0:
        raise DegenerateCoincidence("delta+ equals delta-; induction undefined", step=0)
    move = Move.A if c < 0 else Move.B
    new_perm = step_permutation(T.perm, move)
    raw = _induced_lengths(T, move)
    total = sum(raw, ExactNumber(0, 0, T.N))
    S = ExactIET(new_perm, [x / total for x in raw], T.N)
    return move, S, step_matrix(T.perm, move)


def induce_path(T: ExactIET, n: int) -> Tuple[ExactIET, IntegerMatrix, Tuple[Move, ...]]:
    """``R^n(T)``, ``M(T, n)`` and the realized move word."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    M = IntegerMatrix.identity(T.d)
    moves: List[Move] = []
    S = T
    for i in range(n):
        try:
            mv, S, step_M = induce_step(S)
        except DegenerateCoincidence as exc:
            raise DegenerateCoincidence(str(exc), step=i) from None
        M = M @ step_M
        moves.append(mv)
    return S, M, tuple(moves)


@dataclass(frozen=True)
class KeaneReport:
    verified_horizon: int
    passed: bool
    witness: Optional[Tuple[int, int, int]] = None
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "verified_horizon": self.verified_horizon,
            "passed": self.passed,
            "witness": list(self.witness) if self.witness else None,
            "detail": self.detail,
        }


def check_keane(T: ExactIET, horizon: int) -> KeaneReport:
    """Check that the orbits ``T^i(delta_j)``, ``0 <= i <= horizon``, are
    pairwise distinct.

    The witness ``(i, j, steps)`` reports the first collision in step
    order: ``T^steps(delta_i)`` equals an earlier orbit point of
    ``delta_j`` (``detail`` gives that point's step count).
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    seen: Dict[Point, Tuple[int, int]] = {}
    current = T.discontinuity_points()
    for j, p in enumerate(current, start=1):
        seen[p] = (j, 0)
    for s in range(1, horizon + 1):
        nxt = []
        for i, p in enumerate(current, start=1):
            q = T.apply_point(p)
            hit = seen.get(q)
            if hit is not None:
                j, s0 = hit
                return KeaneReport(
                    verified_horizon=s - 1,
                    passed=False,
                    witness=(i, j, s),
                    detail=f"T^{s}(delta_{i}) = T^{s0}(delta_{j})",
                )
            seen[q] = (i, s)
            nxt.append(q)
        current = nxt
    return KeaneReport(verified_horizon=horizon, passed=True)


def iet_from_cone(p, M: IntegerMatrix, seed) -> ExactIET:
    """A point of the cone ``M R_+^d`` on the simplex.

    The lengths are ``M v`` normalized, with ``v = (1, s, s^2, ...)`` for the
    irrational ``seed`` ``s`` in ``(0, 1)``.  When the path producing ``M``
    ends at a matrix with a positive column, the resulting IET realizes that
    path under induction.
    """
    p = as_permutation(p)
    if not isinstance(seed, ExactNumber) or seed.b == 0:
        raise InvalidSeed("seed must be an irrational element of Q(sqrt N)")
    if not (0 < seed < 1):
        raise InvalidSeed("seed must lie in (0, 1)")
    if M.d != p.d:
        raise ValueError("matrix size does not match the permutation")
    v = [seed ** k for k in range(p.d)]
    raw = M.apply(v)
    return ExactIET.normalized(p, raw, seed.N)


def cone_point(p, M: IntegerMatrix, weights: Sequence) -> ExactIET:
    """``normalize(M w)`` for a positive weight vector ``w``."""
    p = as_permutation(p)
    if M.d != p.d or len(weights) != p.d:
        raise ValueError("matrix and weights must match the permutation")
    N = next((x.N for x in weights if isinstance(x, ExactNumber) and x.b), DEFAULT_SQRT)
    w = [ExactNumber.coerce(x, N) for x in weights]
    if any(x.sign() <= 0 for x in w):
        raise InvalidSeed("cone weights must be positive")
    return ExactIET.normalized(p, M.apply(w), N)


def generic_cone_point(p, M: IntegerMatrix, seed: int = 0, digits: int = 60) -> ExactIET:
    """A cone point with rational weights of ``digits`` random digits.

    Lengths in a quadratic field have rank at most 2 over ``Q`` and their
    induction is eventually periodic, so such maps are self-similar.  A
    rational point with a huge denominator behaves like a typical point of
    the cone for every induction depth and orbit length far below
    ``10**digits``; the Keane condition must still be checked to the
    horizon in use.
    """
    rng = random.Random(seed)
    scale = 10**digits
    w = [Fraction(rng.randrange(scale // 10, scale), scale) for _ in range(as_permutation(p).d)]
    return cone_point(p, M, w)


@dataclass(frozen=True)
class LatticeInduction:
    """Rauzy induction run on unnormalized integer lengths.

    ``lengths[j] = (p, q)`` stands for ``(p + q*sqrt(N)) / D`` in the
    coordinates of the original map; no renormalization is performed, so
    the numbers only shrink.
    """

    perm: Permutation
    lengths: Tuple[Point, ...]
    N: int
    D: int
    moves: Tuple[Move, ...]

    def iet(self) -> ExactIET:
        raw = [ExactNumber(Fraction(p, self.D), Fraction(q, self.D), self.N) for p, q in self.lengths]
        return ExactIET.normalized(self.perm, raw, self.N)

    def total(self) -> ExactNumber:
        p = sum(x[0] for x in self.lengths)
        q = sum(x[1] for x in self.lengths)
        return ExactNumber(Fraction(p, self.D), Fraction(q, self.D), self.N)


def induce_lattice(T: ExactIET, n: Optional[int] = None, until=None, cap: int = 10**6) -> LatticeInduction:
    """Fast induction on integer lengths.

    Runs ``n`` steps, or, with ``until``, steps until the predicate
    ``until(perm, moves)`` holds (at most ``cap`` steps).
    """
    if n is None and until is None:
        raise ValueError("give a step count or a stopping predicate")
    perm = T.perm
    L = list(T._L)
    d, N = T.d, T.N
    moves: List[Move] = []
    i = 0
    while True:
        if n is not None and i >= n:
            break
        if until is not None and until(perm, moves):
            break
        if i >= cap:
            raise DegenerateCoincidence(f"stopping rule not met within {cap} steps", step=i)
        k = perm.index_of(d)
        ld, lk = L[d - 1], L[k - 1]
        c = sign_of(ld[0] - lk[0], ld[1] - lk[1], N)
        if c == 0:
            raise DegenerateCoincidence("delta+ equals delta-; induction undefined", step=i)
        if c < 0:
            mv = Move.A
            L = L[: k - 1] + [(lk[0] - ld[0], lk[1] - ld[1]), ld] + L[k : d - 1]
        else:
            mv = Move.B
            L = L[: d - 1] + [(ld[0] - lk[0], ld[1] - lk[1])]
        perm = step_permutation(perm, mv)
        moves.append(mv)
        i += 1
    return LatticeInduction(perm, tuple(L), N, T._D, tuple(moves))


def golden_rotation() -> ExactIET:
    """The 2-IET ``(21)`` with lengths ``(lambda, 1 - lambda)``,
    ``lambda = (sqrt5 - 1)/2``."""
    lam = ExactNumber(Fraction(-1, 2), Fraction(1, 2), 5)
    return ExactIET(Permutation((2, 1)), [lam, 1 - lam], 5)
