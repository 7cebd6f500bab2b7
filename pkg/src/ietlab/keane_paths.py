"""Named induction paths and the column-sum number theory built on them.

The named paths are given as words in two letters ``a`` and ``b`` together
with closed-form matrices.  Which engine move each letter stands for, and
whether the printed permutation names are read directly or as inverses, is
settled once by :func:`resolve_convention`: the ``M1``/``M2`` words must
reproduce their closed forms and endpoints for every ``0 <= m, n <= 4``.
Exactly one of the four candidate conventions does.

Families
--------
``M1``, ``M2``
    Keane inductions of the first and second kind on four letters.
``TildeM1Proxy`` ... ``TildeM2Quasi``
    Their ``d``-letter versions at a (4321) proxy or quasi-proxy ``sigma``.
``MStar``
    The closed loop at a standard permutation used to make ``|C_d|`` prime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from sympy import isprime

from .errors import (
    BadInput,
    BadParams,
    ConventionUnresolved,
    GoalUnreachable,
    SearchCapExceeded,
)
from .perm import (
    Permutation,
    ProxyKind,
    all_permutations,
    as_permutation,
    is_degenerate,
    is_irreducible,
    is_standard,
    proxy_kind,
)
from .rauzy import IntegerMatrix, Move, RauzyPath, find_path, path_product

__all__ = [
    "PathKind",
    "LabelConvention",
    "ConventionReport",
    "NamedPath",
    "CoprimalityCertificate",
    "CdPrimeResult",
    "ProxyCoprimeResult",
    "printed_word",
    "printed_closed_form",
    "resolve_convention",
    "conformance_report",
    "build_named_path",
    "default_sigma",
    "embedded_vertex",
    "make_columns_coprime",
    "make_cd_prime",
    "cd_prime_descent",
    "make_proxy_coprime",
    "designated_columns",
]

PathKind = str
KINDS = (
    "M1",
    "M2",
    "TildeM1Proxy",
    "TildeM1Quasi",
    "TildeM2Proxy",
    "TildeM2Quasi",
    "MStar",
)

PRINTED_M1_START = Permutation.parse("4213")
PRINTED_M1_END = Permutation.parse("2431")


# ---------------------------------------------------------------------------
# conventions


@dataclass(frozen=True)
class LabelConvention:
    """How the letters ``a``/``b`` and printed permutation names map to the
    engine.

    ``mapping`` is ``"identity"`` (``a -> A``) or ``"swap"`` (``a -> B``);
    ``naming`` is ``"direct"`` or ``"inverse"`` (a printed name ``p`` denotes
    the engine permutation ``p^{-1}``).
    """

    mapping: str = "identity"
    naming: str = "direct"

    def move(self, letter: str) -> Move:
        letter = letter.lower()
        if letter not in ("a", "b"):
            raise ValueError(f"unknown letter {letter!r}")
        if self.mapping == "identity":
            return Move.A if letter == "a" else Move.B
        return Move.B if letter == "a" else Move.A

    def translate(self, word: str) -> Tuple[Move, ...]:
        return tuple(self.move(c) for c in word)

    def engine(self, printed: Permutation) -> Permutation:
        return printed.inverse() if self.naming == "inverse" else printed

    def name(self, engine_perm: Permutation) -> Permutation:
        return engine_perm.inverse() if self.naming == "inverse" else engine_perm

    def to_json(self) -> dict:
        return {"mapping": self.mapping, "naming": self.naming}


CANDIDATES = (
    LabelConvention("identity", "direct"),
    LabelConvention("swap", "direct"),
    LabelConvention("identity", "inverse"),
    LabelConvention("swap", "inverse"),
)


# ---------------------------------------------------------------------------
# words and closed forms


def _runs(*parts) -> str:
    return "".join(letter * count for letter, count in parts)


def printed_word(kind: str, params: Tuple[int, int], d: int = 4, written_sigma: Optional[Permutation] = None) -> str:
    """The two-letter move word of a named path.

    For ``MStar``, ``written_sigma`` is the standard permutation as it is
    written (the word depends on ``written_sigma^{-1}(l)``).
    """
    x, y = params
    if kind in ("M1", "TildeM1Proxy", "TildeM1Quasi"):
        m, n = x, y
        return _runs(("a", n), ("b", d - 3), ("a", 1), ("b", 1), ("a", m), ("b", 1))
    if kind in ("M2", "TildeM2Proxy"):
        m, n = x, y
        return _runs(("a", 1), ("b", m), ("a", 1), ("b", n * (d - 1) + 2), ("a", 1))
    if kind == "TildeM2Quasi":
        m, n = x, y
        return _runs(("a", 1), ("b", m), ("a", d - 3), ("b", n * (d - 1) + 2), ("a", 1))
    if kind == "MStar":
        s, ell = x, y
        if written_sigma is None:
            raise BadParams("MStar needs sigma")
        pos = written_sigma.inverse()(ell)
        return _runs(("b", d - pos), ("a", s * (d - ell)), ("b", pos - 1))
    raise BadParams(f"unknown path kind {kind!r}")


def _zeros(d):
    return [[0] * d for _ in range(d)]


def printed_closed_form(
    kind: str, params: Tuple[int, int], d: int = 4, written_sigma: Optional[Permutation] = None
) -> IntegerMatrix:
    """The displayed closed form of a named path matrix, verbatim."""
    x, y = params
    if kind == "M1" or (kind == "TildeM1Proxy" and d == 4):
        m, n = x, y
        return IntegerMatrix(
            ((1, 1, 0, 0), (0, 0, m + 1, m), (n + 1, n, n + 1, n + 1), (1, 1, 1, 1))
        )
    if kind == "M2" or (kind == "TildeM2Proxy" and d == 4):
        m, n = x, y
        return IntegerMatrix(
            ((1, 1, 1, 1), (n + 1, n + 1, n, n + 1), (m, m + 1, 0, 0), (0, 0, 1, 1))
        )
    A = _zeros(d)
    if kind == "TildeM1Proxy":
        m, n = x, y
        for i in range(d - 4):
            A[i][i] = 1
        r = d - 4
        A[r][r], A[r][r + 1] = 1, 1
        A[r + 1][r + 2], A[r + 1][r + 3] = m + 1, m
        A[r + 2] = [n] * (d - 4) + [n + 1, n, n + 1, n + 1]
        A[r + 3] = [1] * d
    elif kind == "TildeM2Proxy":
        m, n = x, y
        for i in range(d - 4):
            A[i][i] = 1
        r = d - 4
        A[r][r:] = [1, 1, 1, 1]
        A[r + 1] = [n] * (d - 4) + [n + 1, n + 1, n, n + 1]
        A[r + 2][r:] = [m, m + 1, 0, 0]
        A[r + 3][r:] = [0, 0, 1, 1]
    elif kind == "TildeM1Quasi":
        m, n = x, y
        A[0][0], A[0][1] = 1, 1
        for i in range(d - 4):
            A[1 + i][2 + i] = 1
        A[d - 3][d - 2], A[d - 3][d - 1] = m + 1, m
        A[d - 2] = [n + 1, n] + [n] * (d - 4) + [n + 1, n + 1]
        A[d - 1] = [1] * d
    elif kind == "TildeM2Quasi":
        m, n = x, y
        A[0] = [1] * d
        A[1] = [n + 1] + [n] * (d - 4) + [n + 1, n, n + 1]
        for i in range(d - 4):
            A[2 + i][1 + i] = 1
        A[d - 2] = [m] * (d - 3) + [m + 1, 0, 0]
        A[d - 1] = [0] * (d - 2) + [1, 1]
    elif kind == "MStar":
        s, ell = x, y
        if written_sigma is None:
            raise BadParams("MStar needs sigma")
        inv = written_sigma.inverse()
        for i in range(1, d + 1):
            for j in range(1, d + 1):
                v = 0
                if (i == j and i != ell) or (i == d and j > 1):
                    v = 1
                elif i == j == ell:
                    v = s + 1
                elif i == ell and (
                    j == d
                    or (j < ell and inv(j) < inv(ell))
                    or (j > ell and inv(j) > inv(ell))
                ):
                    v = s
                if i == ell and ell < j < d and inv(j) < inv(ell):
                    v = 2 * s
                A[i - 1][j - 1] = v
    else:
        raise BadParams(f"unknown path kind {kind!r}")
    return IntegerMatrix(tuple(tuple(r) for r in A))


def _mstar_expected(printed: IntegerMatrix) -> IntegerMatrix:
    # The displayed formula leaves entry (d, 1) at 0, but the first b-move at
    # a standard permutation already adds e_d to column 1.
    rows = [list(r) for r in printed.entries]
    rows[-1][0] = 1
    return IntegerMatrix(tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------------------
# resolution


@dataclass(frozen=True)
class ConventionReport:
    chosen: Optional[LabelConvention]
    results: Tuple[Tuple[LabelConvention, bool, str], ...]

    def to_json(self) -> dict:
        return {
            "chosen": self.chosen.to_json() if self.chosen else None,
            "candidates": [
                {"convention": c.to_json(), "reproduces": ok, "note": note}
                for c, ok, note in self.results
            ],
        }


def _check_four_letter(conv: LabelConvention, max_param: int = 4) -> Tuple[bool, str]:
    starts = {"M1": (PRINTED_M1_START, PRINTED_M1_END), "M2": (PRINTED_M1_END, PRINTED_M1_START)}
    for kind, (start_name, end_name) in starts.items():
        start = conv.engine(start_name)
        for m in range(max_param + 1):
            for n in range(max_param + 1):
                moves = conv.translate(printed_word(kind, (m, n), 4))
                end, M = path_product(RauzyPath(start, moves))
                if conv.name(end) != end_name:
                    return False, f"{kind}({m},{n}) ends at {conv.name(end)}, not {end_name}"
                if M != printed_closed_form(kind, (m, n), 4):
                    return False, f"{kind}({m},{n}) matrix differs from the closed form"
    return True, "M1 and M2 reproduced for 0 <= m,n <= %d" % max_param


@lru_cache(maxsize=1)
def conformance_report() -> ConventionReport:
    results = []
    for conv in CANDIDATES:
        ok, note = _check_four_letter(conv)
        results.append((conv, ok, note))
    winners = [c for c, ok, _ in results if ok]
    chosen = winners[0] if len(winners) == 1 else None
    return ConventionReport(chosen, tuple(results))


def resolve_convention() -> LabelConvention:
    """The unique convention under which the ``M1``/``M2`` words reproduce
    their closed forms; cached.

    Raises
    ------
    ConventionUnresolved
        If zero or several candidates succeed.
    """
    rep = conformance_report()
    if rep.chosen is None:
        raise ConventionUnresolved(
            "no unique convention reproduces M1/M2: "
            + "; ".join(f"{c.mapping}/{c.naming}: {n}" for c, _, n in rep.results)
        )
    return rep.chosen


# ---------------------------------------------------------------------------
# named paths


def default_sigma(kind: str, d: int) -> Permutation:
    """A canonical base permutation for a family on ``d`` letters.

    Proxy: ``(2, ..., d-3, d, d-1, d-2, 1)``; quasi-proxy:
    ``(d, 2, ..., d-3, d-1, d-2, 1)``; otherwise the reversal.
    """
    if kind.endswith("Proxy"):
        return Permutation(tuple(range(2, d - 2)) + (d, d - 1, d - 2, 1))
    if kind.endswith("Quasi"):
        return Permutation((d,) + tuple(range(2, d - 2)) + (d - 1, d - 2, 1))
    return Permutation(tuple(range(d, 0, -1)))


def embedded_vertex(sigma: Permutation, name: str, conv: Optional[LabelConvention] = None) -> Permutation:
    """``sigma_pi`` for ``pi`` in ``{(4321), (4213), (2431)}``.

    ``sigma_(4213)`` is the vertex from which ``d-3`` b-moves lead back to
    ``sigma``; since ``sigma(d) = 1`` the b-moves cycle with period ``d-1``,
    so it is ``b^2 sigma``.  ``sigma_(2431) = a sigma``.
    """
    conv = conv or resolve_convention()
    if name == "4321":
        return sigma
    if name == "4213":
        return RauzyPath(sigma, conv.translate("bb")).end()
    if name == "2431":
        return RauzyPath(sigma, conv.translate("a")).end()
    raise BadParams(f"no embedded vertex named {name}")


@dataclass(frozen=True)
class NamedPath:
    kind: str
    params: Tuple[int, int]
    d: int
    start: Permutation
    resolved_moves: Tuple[Move, ...]
    expected_matrix: IntegerMatrix
    expected_end: Permutation
    printed_matrix: IntegerMatrix
    sigma: Optional[Permutation] = None
    convention: LabelConvention = field(default_factory=LabelConvention)

    @property
    def path(self) -> RauzyPath:
        return RauzyPath(self.start, self.resolved_moves)

    def printed_name(self, p: Permutation) -> Permutation:
        return self.convention.name(p)

    def discrepancies(self) -> List[Tuple[int, int, int, int]]:
        """Entries ``(i, j, printed, realized)`` (1-based) where the printed
        closed form differs from the realized product."""
        _, M = path_product(self.path)
        out = []
        for i in range(self.d):
            for j in range(self.d):
                if M[i, j] != self.printed_matrix[i, j]:
                    out.append((i + 1, j + 1, self.printed_matrix[i, j], M[i, j]))
        return out

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "params": list(self.params),
            "d": self.d,
            "start": self.start.to_json(),
            "end": self.expected_end.to_json(),
            "start_name": self.printed_name(self.start).compact(),
            "end_name": self.printed_name(self.expected_end).compact(),
            "sigma": self.sigma.to_json() if self.sigma else None,
            "convention": self.convention.to_json(),
            "moves": [m.value for m in self.resolved_moves],
            "matrix": self.expected_matrix.to_json(),
            "printed_matrix": self.printed_matrix.to_json(),
        }


def build_named_path(kind: str, params, d: int = 4, sigma=None) -> NamedPath:
    """Build a named path and check it against its closed form.

    Parameters
    ----------
    kind : str
        One of ``M1, M2, TildeM1Proxy, TildeM1Quasi, TildeM2Proxy,
        TildeM2Quasi, MStar``.
    params : (int, int)
        ``(m, n)``, or ``(s, l)`` for ``MStar``.
    d : int
        Number of letters.
    sigma : Permutation, optional
        Base permutation (engine one-line form) for the tilde families and
        ``MStar``; defaults to :func:`default_sigma`.

    Raises
    ------
    ConventionUnresolved
        If the realized product does not equal the expected matrix.
    """
    if kind not in KINDS:
        raise BadParams(f"unknown path kind {kind!r}")
    x, y = (int(v) for v in params)
    if x < 0 or y < 0:
        raise BadParams("parameters must be nonnegative")
    conv = resolve_convention()
    if kind in ("M1", "M2"):
        if d != 4:
            raise BadParams("M1/M2 live on four letters")
        start_name = PRINTED_M1_START if kind == "M1" else PRINTED_M1_END
        end_name = PRINTED_M1_END if kind == "M1" else PRINTED_M1_START
        start, end = conv.engine(start_name), conv.engine(end_name)
        word = printed_word(kind, (x, y), 4)
        printed = expected = printed_closed_form(kind, (x, y), 4)
        sigma_p = None
    elif kind.startswith("Tilde"):
        if d < 4:
            raise BadParams("tilde paths need d >= 4")
        sigma_p = as_permutation(sigma) if sigma is not None else default_sigma(kind, d)
        want = ProxyKind.PROXY if kind.endswith("Proxy") else ProxyKind.QUASI
        got = proxy_kind(sigma_p)
        if d == 4:
            got = ProxyKind.QUASI if (want is ProxyKind.QUASI and got is not None) else got
        if got is not want or sigma_p.d != d:
            raise BadParams(f"{sigma_p} is not a {want.value} on {d} letters")
        v4213 = embedded_vertex(sigma_p, "4213", conv)
        v2431 = embedded_vertex(sigma_p, "2431", conv)
        start, end = (v4213, v2431) if "M1" in kind else (v2431, v4213)
        word = printed_word(kind, (x, y), d)
        printed = expected = printed_closed_form(kind, (x, y), d)
    else:  # MStar
        s, ell = x, y
        sigma_p = as_permutation(sigma) if sigma is not None else default_sigma(kind, d)
        if sigma_p.d != d or not is_standard(sigma_p) or not is_irreducible(sigma_p):
            raise BadParams(f"{sigma_p} is not a standard permutation on {d} letters")
        if not 1 <= ell < d or s < 1:
            raise BadParams("MStar needs s >= 1 and 1 <= l < d")
        written = conv.name(sigma_p)
        word = printed_word("MStar", (s, ell), d, written)
        printed = printed_closed_form("MStar", (s, ell), d, written)
        expected = _mstar_expected(printed)
        start = end = sigma_p
    moves = conv.translate(word)
    real_end, M = path_product(RauzyPath(start, moves))
    if real_end != end or M != expected:
        raise ConventionUnresolved(
            f"{kind}{(x, y)} on {d} letters: realized path ends at {real_end} "
            f"(expected {end}); matrices {'agree' if M == expected else 'differ'}"
        )
    return NamedPath(kind, (x, y), d, start, moves, expected, end, printed, sigma_p, conv)


# ---------------------------------------------------------------------------
# coprime designated columns


@dataclass(frozen=True)
class CoprimalityCertificate:
    chosen_a: int
    chosen_b: int
    col2_sum: int
    col3_sum: int
    primes: Tuple[int, int]
    start_sums: Tuple[int, int, int, int] = (0, 0, 0, 0)

    def verify(self) -> bool:
        c1, c2, c3, c4 = self.start_sums
        a, b = self.chosen_a, self.chosen_b
        return (
            self.col3_sum == c1 + b * c2 + c4
            and self.col2_sum == c1 + (b + 1) * c2 + (a + 1) * c3
            and math.gcd(self.col2_sum, self.col3_sum) == 1
            and self.primes[0] != self.primes[1]
        )

    def to_json(self) -> dict:
        return {
            "chosen_a": self.chosen_a,
            "chosen_b": self.chosen_b,
            "col2_sum": self.col2_sum,
            "col3_sum": self.col3_sum,
            "primes": list(self.primes),
            "start_sums": list(self.start_sums),
        }


def make_columns_coprime(start_sums: Sequence[int], cap: int = 10**6) -> CoprimalityCertificate:
    """Choose ``(a, b)`` so that the two middle columns after ``M2(a, b)`` have
    coprime sums.

    With ``c = start_sums``, ``|C3| = c1 + b c2 + c4`` and
    ``|C2| = c1 + (b+1) c2 + (a+1) c3``.  ``b`` is scanned upward from 1 until
    ``|C3| = p1 * gcd(c2, c1 + c4)`` with ``p1`` prime, then ``a`` until
    ``|C2| = p2 * gcd(c3, (b+1) c2 + c1)`` with ``p2`` a different prime and
    the two sums coprime.
    """
    if len(start_sums) != 4:
        raise BadInput("need four column sums")
    c1, c2, c3, c4 = (int(c) for c in start_sums)
    if min(c1, c2, c3, c4) < 1:
        raise BadInput("column sums must be positive")
    if math.gcd(math.gcd(c1, c2), math.gcd(c3, c4)) != 1:
        raise BadInput("column sums share a common factor; not a unimodular product")
    g1 = math.gcd(c2, c1 + c4)
    for b in range(1, cap + 1):
        col3 = c1 + b * c2 + c4
        p1, r = divmod(col3, g1)
        if r or not isprime(p1):
            continue
        g2 = math.gcd(c3, (b + 1) * c2 + c1)
        if math.gcd(g1, g2) != 1 or g2 % p1 == 0:
            continue  # no choice of a can make the sums coprime
        for a in range(1, cap + 1):
            col2 = c1 + (b + 1) * c2 + (a + 1) * c3
            p2, r = divmod(col2, g2)
            if r or p2 == p1 or not isprime(p2):
                continue
            if math.gcd(col2, col3) == 1:
                cert = CoprimalityCertificate(a, b, col2, col3, (p1, p2), (c1, c2, c3, c4))
                assert cert.verify()
                return cert
    raise SearchCapExceeded(f"no coprime choice with a, b <= {cap}")


# ---------------------------------------------------------------------------
# prime last column


@dataclass(frozen=True)
class CdPrimeResult:
    path: RauzyPath
    q: int
    descent: Tuple[int, ...]
    loops: Tuple[Tuple[str, int, int], ...]
    final_sums: Tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "path": self.path.to_json(),
            "q": self.q,
            "descent": list(self.descent),
            "loops": [list(x) for x in self.loops],
            "final_sums": list(self.final_sums),
        }


def _prime_factors(n: int) -> List[int]:
    from sympy import factorint

    return sorted(factorint(n))


def _potential(q: int, D: int) -> int:
    # 2D while no prime has been secured yet, 2D - 1 afterwards; strictly
    # decreasing along the iteration and equal to 1 exactly at the goal
    return 2 * D if q == 1 else 2 * D - 1


def cd_prime_descent(current: IntegerMatrix, sigma, cap: int = 10**6) -> CdPrimeResult:
    """Closed loops at the standard ``sigma`` after which ``|C_d|`` is a prime
    dividing no other column sum.

    The state is ``c_d = q D`` with ``q`` prime not dividing any other sum
    (or ``q = 1`` with every ``c_j != c_d``).  Each ``MStar(s, l)`` loop takes
    ``l`` with ``p`` not dividing ``c_l`` for a prime ``p | D`` and the least
    ``s`` such that ``c_d + s c_l = q' gcd(c_d, c_l)`` for a prime ``q' > q``
    dividing none of the new sums.
    """
    sigma = as_permutation(sigma)
    if not is_standard(sigma) or not is_irreducible(sigma):
        raise BadParams(f"{sigma} is not standard")
    conv = resolve_convention()
    d = sigma.d
    sums = list(current.column_sums())
    if len(sums) != d:
        raise BadParams("matrix size does not match sigma")
    moves: List[Move] = []
    loops: List[Tuple[str, int, int]] = []

    def apply_loop(word_moves, label, a1, a2):
        nonlocal sums
        end, M = path_product(RauzyPath(sigma, word_moves))
        if end != sigma:
            raise ConventionUnresolved(f"loop {label} does not close at {sigma}")
        sums = list(M.row_vector_times(sums))
        moves.extend(word_moves)
        loops.append((label, a1, a2))

    def ok_prime(q, vals):
        return all(v % q for v in vals[:-1])

    cd = sums[-1]
    if cd > 1 and isprime(cd) and ok_prime(cd, sums):
        return CdPrimeResult(RauzyPath(sigma, ()), cd, (1,), (), tuple(sums))

    q = 1
    if any(sums[j] == cd for j in range(d - 1)):
        apply_loop(conv.translate("b" * (d - 1)), "normalize", d - 1, 0)
    D = sums[-1]
    descent = [_potential(q, D)]
    written = conv.name(sigma)

    while not (q > 1 and D == 1):
        cd = sums[-1]
        primes_D = _prime_factors(D) if D > 1 else []
        candidates = [
            ell for ell in range(1, d) if not primes_D or any(sums[ell - 1] % p for p in primes_D)
        ]
        if not candidates:
            raise SearchCapExceeded("no admissible l; column sums not coprime")
        chosen = None
        for ell in candidates:
            c_ell = sums[ell - 1]
            Dn = math.gcd(cd, c_ell)
            if D > 1 and Dn >= D:
                continue
            # new sums are affine in s: evaluate at s=1 and s=2
            w1 = conv.translate(printed_word("MStar", (1, ell), d, written))
            w2 = conv.translate(printed_word("MStar", (2, ell), d, written))
            s1 = path_product(RauzyPath(sigma, w1))[1].row_vector_times(sums)
            s2 = path_product(RauzyPath(sigma, w2))[1].row_vector_times(sums)
            slope = [y - x for x, y in zip(s1, s2)]
            base = [x - sl for x, sl in zip(s1, slope)]
            for s in range(1, cap + 1):
                new_cd = base[-1] + s * slope[-1]
                qn, r = divmod(new_cd, Dn)
                if r or qn <= q or not isprime(qn):
                    continue
                new = [b0 + s * sl for b0, sl in zip(base, slope)]
                if ok_prime(qn, new):
                    chosen = (ell, s, qn, Dn)
                    break
            if chosen:
                break
        if chosen is None:
            raise SearchCapExceeded(f"no loop parameter s <= {cap} works")
        ell, s, qn, Dn = chosen
        expected = [b0 + s * sl for b0, sl in zip(base, slope)]
        apply_loop(conv.translate(printed_word("MStar", (s, ell), d, written)), "MStar", s, ell)
        assert sums == expected, "affine extrapolation of loop sums failed"
        q, D = qn, Dn
        pot = _potential(q, D)
        assert pot < descent[-1], "descent value did not decrease"
        descent.append(pot)

    assert sums[-1] == q and isprime(q) and ok_prime(q, sums)
    return CdPrimeResult(RauzyPath(sigma, tuple(moves)), q, tuple(descent), tuple(loops), tuple(sums))


def make_cd_prime(current: IntegerMatrix, sigma, cap: int = 10**6) -> RauzyPath:
    """Closed path at ``sigma`` making ``|C_d|`` prime and coprime to the
    other column sums.  See :func:`cd_prime_descent` for the trace."""
    return cd_prime_descent(current, sigma, cap).path


# ---------------------------------------------------------------------------
# proxies


def designated_columns(kind: ProxyKind, d: int) -> Tuple[int, int, int, int]:
    """1-based columns whose sums enter the coprimality choice at
    ``sigma_(2431)``."""
    if kind is ProxyKind.PROXY:
        return (d - 3, d - 2, d - 1, d)
    return (1, 2, d - 1, d)


@dataclass(frozen=True)
class ProxyCoprimeResult:
    path: RauzyPath
    certificate: CoprimalityCertificate
    sigma: Permutation
    kind: ProxyKind
    standard: Permutation
    cd_prime: Optional[CdPrimeResult]
    matrix: IntegerMatrix

    def to_json(self) -> dict:
        return {
            "path": self.path.to_json(),
            "certificate": self.certificate.to_json(),
            "sigma": self.sigma.to_json(),
            "kind": self.kind.value,
            "standard": self.standard.to_json(),
            "cd_prime": self.cd_prime.to_json() if self.cd_prime else None,
            "column_sums": list(self.matrix.column_sums()),
        }


def _proxy_route(pi: Permutation, conv: LabelConvention):
    """Shortest path to a standard permutation from which ``j >= 0``
    b-moves reach a proxy or quasi-proxy."""
    d = pi.d

    def reach(p):
        q = p
        for j in range(d - 1):
            k = proxy_kind(q)
            if k is not None:
                return j, q, k
            q = RauzyPath(q, conv.translate("b")).end()
        return None

    def goal(p):
        return is_standard(p) and reach(p) is not None

    path = find_path(pi, goal)
    std = path.end()
    j, sigma, kind = reach(std)
    return path, std, j, sigma, kind


def make_proxy_coprime(pi, cap: int = 10**6, prefix: Optional[RauzyPath] = None) -> ProxyCoprimeResult:
    """Path from ``pi`` to ``sigma_(4213)`` of a proxy or quasi-proxy with
    coprime designated block lengths ``|B_{d-2}|`` and ``|B_{d-1}|``.

    Route: a standard permutation, the prime-column loops there, the
    b-moves to ``sigma``, the a-move to ``sigma_(2431)``, then the tilde
    ``M2(m, n)`` path with ``(m, n)`` from :func:`make_columns_coprime`.
    On four letters the route is the four-letter coprimality pipeline.

    ``prefix``, when given, is a path ending at ``pi`` whose matrix is
    accounted for in every column sum.
    """
    pi = as_permutation(pi)
    d = pi.d
    if d < 4:
        raise BadParams("need at least four letters")
    if not is_irreducible(pi):
        raise BadParams(f"{pi} is reducible")
    if is_degenerate(pi)[0]:
        raise BadParams(f"{pi} is degenerate")
    conv = resolve_convention()
    if prefix is None:
        prefix = RauzyPath(pi, ())
    if prefix.end() != pi:
        raise BadParams("prefix does not end at pi")
    route, std, j, sigma, kind = _proxy_route(pi, conv)
    full = RauzyPath(prefix.start, prefix.moves + route.moves)
    _, M = path_product(full)
    cdp = None
    cols = designated_columns(kind, d)
    after_a = lambda base: RauzyPath(base.start, base.moves + conv.translate("b" * j + "a"))
    trial = after_a(full)
    sums = path_product(trial)[1].column_sums()
    x = tuple(sums[c - 1] for c in cols)
    if math.gcd(*x) != 1:
        cdp = cd_prime_descent(M, std, cap)
        full = RauzyPath(full.start, full.moves + cdp.path.moves)
        trial = after_a(full)
        sums = path_product(trial)[1].column_sums()
        x = tuple(sums[c - 1] for c in cols)
        if math.gcd(*x) != 1:
            raise GoalUnreachable("designated column sums still share a factor")
    cert = make_columns_coprime(x, cap)
    tkind = "TildeM2Proxy" if kind is ProxyKind.PROXY else "TildeM2Quasi"
    word = conv.translate(printed_word(tkind, (cert.chosen_a, cert.chosen_b), d))
    final = RauzyPath(trial.start, trial.moves + word)
    end, Mf = path_product(final)
    if end != embedded_vertex(sigma, "4213", conv):
        raise ConventionUnresolved("tilde M2 path did not end at sigma_(4213)")
    fs = Mf.column_sums()
    if (fs[d - 3], fs[d - 2]) != (cert.col2_sum, cert.col3_sum):
        raise ConventionUnresolved("designated block lengths disagree with the certificate")
    assert math.gcd(fs[d - 3], fs[d - 2]) == 1
    return ProxyCoprimeResult(final, cert, sigma, kind, std, cdp, Mf)


def proxy_vertices(p) -> List[Permutation]:
    """All proxy and quasi-proxy vertices in the class of ``p``."""
    from .rauzy import enumerate_class

    return [v for v in enumerate_class(p).vertices if proxy_kind(v) is not None]


def nondegenerate_classes(d: int) -> List[Tuple[Permutation, ...]]:
    """Vertex sets of all Rauzy classes on ``d`` letters whose members are
    non-degenerate (checked on every vertex)."""
    from .rauzy import enumerate_class

    seen = set()
    out = []
    for p in all_permutations(d):
        if p in seen or not is_irreducible(p):
            continue
        g = enumerate_class(p)
        seen.update(g.vertices)
        if not any(is_degenerate(v)[0] for v in g.vertices):
            out.append(g.vertices)
    return out
