"""Two-coin representations, covering certificates and k-alphabet mixing.

The checker works on a *language*: any object that can list its allowed
``k``-blocks and, for every ordered pair ``(u, v)`` of them, the set of
lengths ``n`` for which some allowed ``n``-block starts with ``u`` and ends
with ``v``.  Languages of interval exchanges are produced exactly from
return blocks (see :class:`IETLanguage`); shifts of finite type use
boolean matrix powers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .coding import (
    BlockExpression,
    _block_arrays,
    allowed_blocks,
    hat_blocks,
)
from .errors import BadInput, BadParams, BudgetExceeded, OutOfRange
from .iet import ExactIET, induce_lattice

__all__ = [
    "coin_representation",
    "CoverageCertificate",
    "coverage_certificate",
    "gap_constant",
    "max_pattern_gap",
    "Language",
    "FactorLanguage",
    "WordLanguage",
    "SubstitutionLanguage",
    "IETLanguage",
    "GraphLanguage",
    "FullShift",
    "fibonacci_language",
    "MixingReport",
    "alphabet_mixing_check",
    "length_cap",
]

DEFAULT_LENGTH_CAP = 10**5
DEFAULT_LETTER_CAP = 10**7

Block = Tuple[int, ...]


def length_cap() -> int:
    """Largest bridge length a check may ask for; ``IETLAB_BUDGET``
    overrides the default of ``10**5``."""
    env = os.environ.get("IETLAB_BUDGET")
    return int(env) if env else DEFAULT_LENGTH_CAP


# ---------------------------------------------------------------------------
# two coins


def coin_representation(c2: int, c3: int, g: int, M: int) -> Tuple[int, int]:
    """``(a, b)`` with ``a*c2 + b*c3 = M`` and ``0 <= a, b <= 5g``.

    Uses the residue construction: with ``b2*c2 + b3*c3 = 1`` take
    ``b = b3*M mod c2`` and ``a = (M - b*c3) / c2`` when ``M <= 5g*c2``
    (for ``c2 >= c3``), and reflect ``M -> 5g(c2 + c3) - M`` otherwise.

    Raises
    ------
    BadInput
        If ``gcd(c2, c3) != 1`` or ``g < 2*c2*c3``.
    OutOfRange
        If ``M`` is outside ``[g, 5g(c2 + c3) - g]``.
    """
    c2, c3, g, M = int(c2), int(c3), int(g), int(M)
    if c2 < 1 or c3 < 1:
        raise BadInput("coin values must be positive")
    if math.gcd(c2, c3) != 1:
        raise BadInput(f"gcd({c2}, {c3}) = {math.gcd(c2, c3)} != 1")
    if g < 2 * c2 * c3:
        raise BadInput(f"g = {g} is below 2*c2*c3 = {2 * c2 * c3}")
    top = 5 * g * (c2 + c3) - g
    if not g <= M <= top:
        raise OutOfRange(f"M = {M} outside [{g}, {top}]")
    if c2 < c3:
        b, a = coin_representation(c3, c2, g, M)
        return a, b
    if M > 5 * g * c2:
        a, b = coin_representation(c2, c3, g, 5 * g * (c2 + c3) - M)
        return 5 * g - a, 5 * g - b
    # pow(c3, -1, c2) is the b3 of a Bezout pair reduced mod c2
    b3 = pow(c3, -1, c2) if c2 > 1 else 0
    b = (b3 * M) % c2
    a, rem = divmod(M - b * c3, c2)
    assert rem == 0 and 0 <= a <= 5 * g and 0 <= b <= 5 * g
    return a, b


# ---------------------------------------------------------------------------
# covering certificate


@dataclass(frozen=True)
class CoverageCertificate:
    """Bridge lengths guaranteed by the covering lemmas.

    ``covered_intervals`` are the lemma intervals along the worst anchor
    chain (each anchor is the start of a hat block to the left of the
    distinguished discontinuity); ``verified`` means their union contains
    every integer of ``[threshold, threshold + span]``.
    """

    g: int
    block_lengths: Tuple[int, ...]
    gap_constant_C: int
    threshold: Optional[int]
    covered_intervals: Tuple[Tuple[int, int], ...]
    verified: bool
    span: int
    hat_lengths: Tuple[int, ...] = ()
    corollary_threshold: int = 0
    first_uncovered: Optional[int] = None
    kind: str = "FourLetter"

    def covers(self, r: int) -> bool:
        return any(lo <= r <= hi for lo, hi in self.covered_intervals)

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "block_lengths": list(self.block_lengths),
            "gap_constant_C": self.gap_constant_C,
            "threshold": self.threshold,
            "covered_intervals": [list(iv) for iv in self.covered_intervals],
            "verified": self.verified,
            "span": self.span,
            "hat_lengths": list(self.hat_lengths),
            "corollary_threshold": self.corollary_threshold,
            "first_uncovered": self.first_uncovered,
            "kind": self.kind,
        }

    @classmethod
    def from_json(cls, data) -> "CoverageCertificate":
        return cls(
            g=data["g"],
            block_lengths=tuple(data["block_lengths"]),
            gap_constant_C=data["gap_constant_C"],
            threshold=data["threshold"],
            covered_intervals=tuple(tuple(iv) for iv in data["covered_intervals"]),
            verified=data["verified"],
            span=data["span"],
            hat_lengths=tuple(data.get("hat_lengths", ())),
            corollary_threshold=data.get("corollary_threshold", 0),
            first_uncovered=data.get("first_uncovered"),
            kind=data.get("kind", "FourLetter"),
        )


def _merge(intervals: Iterable[Tuple[int, int]]) -> List[Tuple[int, int]]:
    out: List[Tuple[int, int]] = []
    for lo, hi in sorted(intervals):
        if lo > hi:
            continue
        if out and lo <= out[-1][1] + 1:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def coverage_certificate(
    block_lengths: Sequence[int],
    g: int,
    C: Optional[int] = None,
    d: Optional[int] = None,
    kind: Optional[str] = None,
    span: Optional[int] = None,
) -> CoverageCertificate:
    """Certify the bridge lengths produced by the ``5g`` hat blocks.

    Parameters
    ----------
    block_lengths : sequence of int
        ``|B_1|, ..., |B_d|`` before the ``M1``-type path; the designated
        pair is ``(|B_{d-2}|, |B_{d-1}|)``.
    g : int
        At least ``2 |B_{d-2}| |B_{d-1}|``.
    C : int, optional
        Gap constant; defaults to the formula of :func:`gap_constant`.
        It enters only the reported corollary threshold.
    kind : str, optional
        Hat table (``FourLetter`` for ``d = 4``, else ``Proxy``).
    span : int, optional
        How far past the threshold to enumerate (default ``10 g``).

    Notes
    -----
    For an anchor whose hat block ``H`` is followed by a word of length
    ``W`` before the discontinuity, the tail run ``B_{d-1}^{5g} B_d`` of
    ``H`` and the head run ``B_{d-2}^{5g}`` of the block on the right side
    give, by the two-coin lemma, every ``r`` in
    ``[W + b_d + g + b2 + b3, W + b_d + 5g(b2 + b3) - g - b2 - b3]``.
    Blocks that start with a ``B_{d-2}`` run add the interval obtained by
    pairing that run with the ``B_{d-1}`` run of the block on the left
    side.  Consecutive anchors differ by one hat-block length, so the
    chain is gap-free once every block's reach is at least its length.
    """
    L = [int(x) for x in block_lengths]
    d = int(d or len(L))
    if len(L) != d or d < 4:
        raise BadParams("need d >= 4 block lengths")
    b2, b3, bd = L[d - 3], L[d - 2], L[d - 1]
    if math.gcd(b2, b3) != 1:
        raise BadInput(f"designated lengths ({b2}, {b3}) are not coprime")
    g = int(g)
    if g < 2 * b2 * b3:
        raise BadInput(f"g = {g} is below 2*|B_(d-2)|*|B_(d-1)| = {2 * b2 * b3}")
    kind = kind or ("FourLetter" if d == 4 else "Proxy")
    if C is None:
        C = gap_constant_formula(L)
    span = int(span if span is not None else 10 * g)
    p = 5 * g
    hats = hat_blocks(kind, d, p, p)
    hat_len = tuple(h.length(L) for h in hats)
    # block on the minus side of the discontinuity: B_(d-3) B_(d-1)^n B_d
    minus = hats[d - 3]
    minus_head = minus.factors[0]
    garbage = minus_head[1] * L[minus_head[0] - 1]
    lo_off = bd + g + b2 + b3
    hi_off = bd + 5 * g * (b2 + b3) - g - b2 - b3
    reach = []
    for h in hats:
        first, e = h.factors[0]
        r = hi_off
        if first == d - 2 and e >= p:
            # everything after the leading B_(d-2) run, then the minus block's head
            after = h.length(L) - e * b2 + garbage
            n_lo = after + g + b2 + b3
            n_hi = after + 5 * g * (b2 + b3) - g - b2 - b3
            if n_lo <= hi_off + 1:
                r = max(r, n_hi)
        reach.append(r)
    # worst anchor: least slack between reach and the jump to the next anchor
    slack = [reach[i] - hat_len[i] for i in range(d)]
    worst = min(range(d), key=lambda i: (slack[i], i))
    intervals = []
    W = 0
    while W + lo_off <= lo_off + span:
        intervals.append((W + lo_off, W + reach[worst]))
        W += hat_len[worst]
    merged = _merge(intervals)
    threshold = lo_off
    first_gap = None
    end = lo_off + span
    r = lo_off
    for a, b in merged:
        if b < r:
            continue
        if a > r:
            break
        r = b + 1
        if r > end:
            break
    if r <= end:
        first_gap = r
    chain_ok = all(s + 1 >= lo_off for s in slack)
    verified = first_gap is None and chain_ok
    if not chain_ok and first_gap is None:
        first_gap = lo_off + min(slack) + 1
    return CoverageCertificate(
        g=g,
        block_lengths=tuple(L),
        gap_constant_C=int(C),
        threshold=threshold if verified else None,
        covered_intervals=tuple(merged),
        verified=verified,
        span=span,
        hat_lengths=hat_len,
        corollary_threshold=b2 + b3 + bd + g + int(C) + 1,
        first_uncovered=first_gap,
        kind=kind,
    )


# ---------------------------------------------------------------------------
# gap constant


def gap_constant_formula(base_lengths: Sequence[int]) -> int:
    """``max_{j <= d-3} |B_j| + |B_{d-2}| + |B_{d-1}| + |B_d|``."""
    L = [int(x) for x in base_lengths]
    d = len(L)
    return max(L[: d - 3]) + L[d - 3] + L[d - 2] + L[d - 1]


def _flatten(exprs: Sequence[BlockExpression]) -> List[Tuple[int, int]]:
    runs: List[Tuple[int, int]] = []
    for ex in exprs:
        for i, e in ex.factors:
            if runs and runs[-1][0] == i:
                runs[-1] = (i, runs[-1][1] + e)
            else:
                runs.append((i, e))
    return runs


def max_pattern_gap(hat: Sequence[BlockExpression], base_lengths: Sequence[int]) -> int:
    """Longest stretch (in letters) between consecutive occurrences of
    ``B_{d-1}^n`` or ``B_{d-2}^m B_{d-1}^n`` over all two-block
    concatenations of ``hat``.

    ``m`` and ``n`` are read off the table as the smallest exponents of
    ``B_{d-2}`` and ``B_{d-1}`` that occur.
    """
    L = [int(x) for x in base_lengths]
    d = len(L)
    n = min(e for h in hat for i, e in h.factors if i == d - 1)
    m_vals = [e for h in hat for i, e in h.factors if i == d - 2]
    m = min(m_vals) if m_vals else None
    worst = 0
    for h1 in hat:
        for h2 in hat:
            runs = _flatten([h1, h2])
            marked = [False] * len(runs)
            for t, (i, e) in enumerate(runs):
                if i == d - 1 and e >= n:
                    marked[t] = True
                    if m is not None and t > 0 and runs[t - 1][0] == d - 2 and runs[t - 1][1] >= m:
                        marked[t - 1] = True
            hits = [t for t in range(len(runs)) if marked[t]]
            for a, b in zip(hits, hits[1:]):
                gap = sum(L[i - 1] * e for i, e in runs[a + 1 : b])
                worst = max(worst, gap)
    return worst


def gap_constant(hat: Sequence[BlockExpression], base_lengths: Sequence[int]) -> int:
    """Gap constant ``C`` for a hat table over ``base_lengths``.

    Also measures the largest gap between pattern occurrences over all
    pairs ``B^_j B^_j'`` and checks it does not exceed ``C``.
    """
    C = gap_constant_formula(base_lengths)
    gap = max_pattern_gap(hat, base_lengths)
    if gap > C:
        raise AssertionError(f"pattern gap {gap} exceeds C = {C}")
    return C


# ---------------------------------------------------------------------------
# languages


class Language:
    """Interface: allowed ``k``-blocks and bridge-length sets."""

    def k_blocks(self, k: int) -> List[Block]:
        raise NotImplementedError

    def bridge_sets(self, k: int, max_n: int, threads: int = 1) -> Dict[Tuple[Block, Block], np.ndarray]:
        """``out[(u, v)][n]`` is True iff some allowed ``n``-block starts
        with ``u`` and ends with ``v`` (``2k <= n <= max_n``)."""
        raise NotImplementedError


def _kgram_codes(w: np.ndarray, k: int, base: int) -> np.ndarray:
    if len(w) < k:
        return np.zeros(0, dtype=np.int64)
    codes = np.zeros(len(w) - k + 1, dtype=np.int64)
    for t in range(k):
        codes = codes * base + w[t : len(w) - k + 1 + t].astype(np.int64)
    return codes


def _decode(code: int, k: int, base: int) -> Block:
    out = []
    for _ in range(k):
        code, r = divmod(code, base)
        out.append(r)
    return tuple(reversed(out))


class FactorLanguage(Language):
    """A language given by a *factor basis*: finite words whose factors of
    length at most ``max_n`` are exactly the allowed blocks of those
    lengths.  Bridge sets come from FFT cross-correlation of occurrence
    indicators."""

    letter_cap = DEFAULT_LETTER_CAP

    def basis(self, max_n: int) -> List[np.ndarray]:
        raise NotImplementedError

    def _base(self, words) -> int:
        return int(max(int(w.max()) for w in words if len(w)) + 1)

    def k_blocks(self, k: int) -> List[Block]:
        words = self.basis(max(k, 1))
        base = self._base(words)
        codes = set()
        for w in words:
            codes.update(np.unique(_kgram_codes(w, k, base)).tolist())
        return sorted(_decode(c, k, base) for c in codes)

    def bridge_sets(self, k: int, max_n: int, threads: int = 1):
        words = self.basis(max_n)
        if sum(len(w) for w in words) > self.letter_cap:
            raise BudgetExceeded("factor basis exceeds the letter cap")
        base = self._base(words)
        blocks = self.k_blocks(k)
        code_of = {}
        for u in blocks:
            c = 0
            for a in u:
                c = c * base + a
            code_of[u] = c
        width = max_n - k + 1  # shifts delta = n - k, 0 <= delta <= max_n - k

        def one(w):
            codes = _kgram_codes(w, k, base)
            m = len(codes)
            if m == 0:
                return {}
            size = 1 << int(math.ceil(math.log2(m + width + 1)))
            spectra = {}
            for u in blocks:
                ind = (codes == code_of[u]).astype(np.float64)
                if ind.any():
                    spectra[u] = (np.fft.rfft(ind, size), ind)
            res = {}
            for u, (fu, _) in spectra.items():
                for v, (fv, _) in spectra.items():
                    corr = np.fft.irfft(np.conj(fu) * fv, size)[:width]
                    res[(u, v)] = corr > 0.5
            return res

        out = {(u, v): np.zeros(max_n + 1, dtype=bool) for u in blocks for v in blocks}
        if threads > 1:
            with ThreadPoolExecutor(threads) as ex:
                parts = list(ex.map(one, words))
        else:
            parts = [one(w) for w in words]
        for part in parts:
            for key, hit in part.items():
                arr = out[key]
                arr[k : k + len(hit)] |= hit
        for arr in out.values():
            arr[: 2 * k] = False
        return out


class WordLanguage(FactorLanguage):
    """Factors of a fixed set of words (complete up to their lengths)."""

    def __init__(self, words: Iterable[Sequence[int]]):
        self.words = [np.asarray(tuple(w), dtype=np.int16) for w in words]

    def basis(self, max_n: int):
        return self.words


class SubstitutionLanguage(FactorLanguage):
    """Language of a primitive substitution, read from a long prefix of
    its fixed point (``factor`` times the requested length)."""

    def __init__(self, rules: Dict[int, Sequence[int]], seed: int = 1, factor: int = 10):
        self.rules = {int(a): tuple(int(x) for x in w) for a, w in rules.items()}
        self.seed = int(seed)
        self.factor = int(factor)

    def prefix(self, length: int) -> np.ndarray:
        w = [self.seed]
        while len(w) < length:
            nxt = [x for a in w for x in self.rules[a]]
            if len(nxt) <= len(w):
                raise BadParams("substitution does not grow")
            w = nxt
        return np.asarray(w[:length], dtype=np.int16)

    def basis(self, max_n: int):
        return [self.prefix(self.factor * max(max_n, 1) + 1)]


def fibonacci_language() -> SubstitutionLanguage:
    """``1 -> 12, 2 -> 1``: the coding of the golden rotation."""
    return SubstitutionLanguage({1: (1, 2), 2: (1,)})


class IETLanguage(FactorLanguage):
    """The exact language of an interval exchange.

    After inducing until every return block has length at least
    ``max_n - 1``, each window of length ``<= max_n`` of an orbit coding
    sits inside ``B_i B_j`` for an allowed 2-block ``(i, j)`` of the
    induced map, and every factor of such a product is allowed.
    """

    def __init__(self, T: ExactIET, step_cap: int = 10**5):
        self.T = T
        self.step_cap = step_cap
        self._cache: Dict[int, List[np.ndarray]] = {}
        self.depth = 0

    def basis(self, max_n: int):
        target = max(int(max_n) - 1, 1)
        for have in sorted(self._cache):
            if have >= target:
                return self._cache[have]
        T = self.T
        d = T.d
        state = {"lens": [1] * d, "perm": T.perm, "done": 0}

        def until(perm, moves):
            # keep block lengths in step with the moves seen so far
            lens = state["lens"]
            p = state["perm"]
            for mv in moves[state["done"]:]:
                kk = p.index_of(d)
                joined = lens[kk - 1] + lens[d - 1]
                if mv.value == "A":
                    lens = lens[:kk] + [joined] + lens[kk : d - 1]
                else:
                    lens = lens[: kk - 1] + [joined] + lens[kk:]
                from .rauzy import step_permutation

                p = step_permutation(p, mv)
            state.update(lens=lens, perm=p, done=len(moves))
            if sum(lens) > self.letter_cap:
                raise BudgetExceeded("return blocks exceed the letter cap")
            return min(lens) >= target

        ind = induce_lattice(T, until=until, cap=self.step_cap)
        blocks = _block_arrays(T.perm, ind.moves)
        pairs = allowed_blocks(ind.iet(), 2)
        words = [np.concatenate((blocks[i - 1], blocks[j - 1])) for i, j in sorted(w.letters for w in pairs)]
        self.depth = len(ind.moves)
        self._cache[target] = words
        return words


class GraphLanguage(Language):
    """One-step shift of finite type on ``1..d`` with 0/1 adjacency."""

    def __init__(self, adjacency):
        A = np.asarray(adjacency, dtype=bool)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise BadParams("adjacency must be square")
        self.A = A

    @property
    def d(self) -> int:
        return self.A.shape[0]

    def k_blocks(self, k: int) -> List[Block]:
        paths = [(a,) for a in range(1, self.d + 1)]
        for _ in range(k - 1):
            paths = [p + (b,) for p in paths for b in range(1, self.d + 1) if self.A[p[-1] - 1, b - 1]]
        return sorted(paths)

    def bridge_sets(self, k: int, max_n: int, threads: int = 1):
        blocks = self.k_blocks(k)
        A = self.A.astype(np.int64)
        out = {(u, v): np.zeros(max_n + 1, dtype=bool) for u in blocks for v in blocks}
        # reach[t][a, b]: a path with t edges from a to b
        R = np.eye(self.d, dtype=np.int64)
        for n in range(k + 1, max_n + 1):
            # u ends at position k-1, v starts at n-k: n-2k+1 edges between
            t = n - 2 * k + 1
            if t < 1:
                continue
            if t == 1:
                R = A.copy()
            else:
                R = ((R @ A) > 0).astype(np.int64)
            for u in blocks:
                for v in blocks:
                    out[(u, v)][n] = bool(R[u[-1] - 1, v[0] - 1])
        return out


class FullShift(GraphLanguage):
    def __init__(self, d: int = 2):
        super().__init__(np.ones((d, d), dtype=bool))


# ---------------------------------------------------------------------------
# checker


@dataclass(frozen=True)
class MixingReport:
    k: int
    status: str
    N: Optional[int]
    horizon: int
    length_budget: int
    checked_up_to: int
    pairs: int
    failing_pairs: Tuple[Tuple[Block, Block, int], ...] = ()
    missing_counts: Tuple[int, ...] = ()

    @property
    def verified(self) -> bool:
        return self.status == "Verified"

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "status": self.status,
            "N": self.N,
            "horizon": self.horizon,
            "length_budget": self.length_budget,
            "checked_up_to": self.checked_up_to,
            "pairs": self.pairs,
            "failing_pairs": [
                {"u": list(u), "v": list(v), "missing_n": n} for u, v, n in self.failing_pairs
            ],
            "missing_counts": list(self.missing_counts),
        }

    @classmethod
    def from_json(cls, data) -> "MixingReport":
        return cls(
            k=data["k"],
            status=data["status"],
            N=data["N"],
            horizon=data["horizon"],
            length_budget=data["length_budget"],
            checked_up_to=data["checked_up_to"],
            pairs=data["pairs"],
            failing_pairs=tuple(
                (tuple(f["u"]), tuple(f["v"]), f["missing_n"]) for f in data["failing_pairs"]
            ),
            missing_counts=tuple(data.get("missing_counts", ())),
        )

    def summary(self) -> str:
        head = f"k={self.k} status={self.status} N={self.N} horizon={self.horizon} pairs={self.pairs}"
        rows = [head]
        for (u, v, n), c in zip(self.failing_pairs, self.missing_counts):
            rows.append(f"  u={''.join(map(str, u))} v={''.join(map(str, v))} largest missing n={n} ({c} missing)")
        return "\n".join(rows)


def _first_window(ok: np.ndarray, start: int, horizon: int) -> Optional[int]:
    """Least ``N >= start`` with ``ok[N .. N + horizon]`` all True."""
    run = 0
    for n in range(start, len(ok)):
        run = run + 1 if ok[n] else 0
        if run == horizon + 1:
            return n - horizon
    return None


def alphabet_mixing_check(
    lang: Language,
    k: int,
    horizon: int,
    length_budget: int,
    threads: int = 1,
) -> MixingReport:
    """Search for ``N`` with every pair of allowed ``k``-blocks bridged at
    every length in ``[N, N + horizon]``.

    Lengths are explored by doubling up to ``length_budget``.  The result
    is evidence to a horizon, not a proof of mixing.

    Raises
    ------
    BudgetExceeded
        If ``length_budget`` exceeds :func:`length_cap`.
    """
    k, horizon, length_budget = int(k), int(horizon), int(length_budget)
    if k < 1 or horizon < 0:
        raise BadParams("need k >= 1 and horizon >= 0")
    if length_budget > length_cap():
        raise BudgetExceeded(f"length budget {length_budget} exceeds cap {length_cap()}")
    if length_budget < 2 * k + horizon:
        raise BadParams("length budget too small for the horizon")
    max_n = min(length_budget, max(4 * (horizon + 2 * k), 256))
    while True:
        sets = lang.bridge_sets(k, max_n, threads=threads)
        keys = sorted(sets)
        ok = np.ones(max_n + 1, dtype=bool)
        for key in keys:
            ok &= sets[key]
        N = _first_window(ok, 2 * k, horizon)
        if N is not None:
            return MixingReport(k, "Verified", N, horizon, length_budget, max_n, len(keys))
        if max_n >= length_budget:
            break
        max_n = min(length_budget, 2 * max_n)
    failing = []
    counts = []
    for u, v in keys:
        miss = np.flatnonzero(~sets[(u, v)][2 * k :]) + 2 * k
        if len(miss):
            failing.append((u, v, int(miss[-1])))
            counts.append(int(len(miss)))
    return MixingReport(
        k, "NotVerified", None, horizon, length_budget, max_n, len(keys), tuple(failing), tuple(counts)
    )
