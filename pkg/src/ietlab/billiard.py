"""L-shaped tables and their ``(2413)`` transversal exchanges.

A table with widths ``a, b`` and heights ``s, t`` (opposite sides
identified) flowed in direction ``theta`` has a 4-IET transversal with
lengths ``(a - (s+t) cot, t cot, b, s cot)`` and permutation ``(2413)``;
the return times are ``s / sin`` over ``I_3`` and ``(s + t) / sin`` over
the other intervals.

Heights are kept as exact coefficients ``c_i`` with ``h_i = c_i / sin``,
so the identities ``h cos = length`` reduce to exact field arithmetic;
``sin`` and ``cos`` themselves are evaluated with mpmath.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import mpmath
import numpy as np

from .errors import BadInput, BadParams, BudgetExceeded, InvalidDirection
from .field import DEFAULT_SQRT, ExactNumber
from .iet import ExactIET
from .mixing import FactorLanguage, GraphLanguage, IETLanguage, _kgram_codes
from .perm import Permutation

__all__ = [
    "LTable",
    "SuspensionData",
    "FlowMixingReport",
    "TABLE_PERM",
    "transversal_lengths",
    "transversal_iet",
    "suspension_data",
    "validate_suspension",
    "table_from_lengths",
    "flow_mixing_check",
]

TABLE_PERM = Permutation((2, 4, 1, 3))
PRECISION = 50


@dataclass(frozen=True)
class LTable:
    """Widths ``a, b``, heights ``s, t`` and the direction's ``cot``."""

    a: ExactNumber
    b: ExactNumber
    s: ExactNumber
    t: ExactNumber
    cot_theta: ExactNumber

    def __post_init__(self):
        N = next((x.N for x in self._raw() if isinstance(x, ExactNumber) and x.b), DEFAULT_SQRT)
        for name in ("a", "b", "s", "t", "cot_theta"):
            object.__setattr__(self, name, ExactNumber.coerce(getattr(self, name), N))
        if any(x.sign() <= 0 for x in self._raw()):
            raise InvalidDirection("widths, heights and cot(theta) must be positive")

    def _raw(self):
        return (self.a, self.b, self.s, self.t, self.cot_theta)

    @property
    def N(self) -> int:
        return next((x.N for x in self._raw() if x.b), DEFAULT_SQRT)

    def sin_cos(self, dps: int = PRECISION) -> Tuple[mpmath.mpf, mpmath.mpf]:
        """``(sin theta, cos theta)`` with ``0 < theta < pi/2``."""
        with mpmath.workdps(dps):
            c = _mp(self.cot_theta)
            sin = 1 / mpmath.sqrt(1 + c * c)
            return +sin, +(c * sin)

    def to_json(self) -> dict:
        return {
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "s": self.s.to_json(),
            "t": self.t.to_json(),
            "cot_theta": self.cot_theta.to_json(),
            "sqrt": self.N,
        }

    @classmethod
    def from_json(cls, data) -> "LTable":
        N = int(data.get("sqrt", DEFAULT_SQRT))
        f = lambda key: ExactNumber.from_json(data[key], N)
        return cls(f("a"), f("b"), f("s"), f("t"), f("cot_theta"))


def _mp(x: ExactNumber):
    return mpmath.mpf(x.a.numerator) / x.a.denominator + (
        mpmath.mpf(x.b.numerator) / x.b.denominator
    ) * mpmath.sqrt(x.N)


def transversal_lengths(table: LTable) -> Tuple[ExactNumber, ...]:
    """Unnormalized ``(L1, L2, L3, L4)``; they sum to ``a + b``."""
    c = table.cot_theta
    L = (table.a - (table.s + table.t) * c, table.t * c, table.b, table.s * c)
    if any(x.sign() <= 0 for x in L):
        raise InvalidDirection(f"direction leaves a nonpositive interval: {[str(x) for x in L]}")
    return L


def transversal_iet(table: LTable) -> ExactIET:
    """The ``(2413)`` exchange, lengths divided by ``a + b``."""
    L = transversal_lengths(table)
    total = table.a + table.b
    return ExactIET(TABLE_PERM, [x / total for x in L], table.N)


@dataclass(frozen=True)
class SuspensionData:
    """Heights ``h_i = coefficients[i] / sin(theta)`` over ``I_1..I_4``."""

    coefficients: Tuple[ExactNumber, ...]
    heights: Tuple[float, ...]

    def to_json(self) -> dict:
        return {
            "coefficients": [c.to_json() for c in self.coefficients],
            "heights": list(self.heights),
        }


def suspension_data(table: LTable) -> SuspensionData:
    """Return times ``(s+t, s+t, s, s+t) / sin`` (validated)."""
    transversal_lengths(table)
    st = table.s + table.t
    coeffs = (st, st, table.s, st)
    sin, _ = table.sin_cos()
    with mpmath.workdps(PRECISION):
        heights = tuple(float(_mp(c) / sin) for c in coeffs)
    data = SuspensionData(coeffs, heights)
    validate_suspension(table, data)
    return data


def validate_suspension(table: LTable, data: SuspensionData, tol: float = 1e-12) -> None:
    """Check ``h_3 cos = |I_4|`` and ``h_1 cos = |I_2| + |I_4|``.

    Exact on the coefficients (``c cot = length``) and to ``tol`` on the
    floating heights.

    Raises
    ------
    BadInput
        If either identity fails or ``h_3 >= h_1``.
    """
    L = transversal_lengths(table)
    c = data.coefficients
    if c[2] * table.cot_theta != L[3] or c[0] * table.cot_theta != L[1] + L[3]:
        raise BadInput("return-time identities fail for the height coefficients")
    _, cos = table.sin_cos()
    h = [mpmath.mpf(x) for x in data.heights]
    with mpmath.workdps(PRECISION):
        if abs(h[2] * cos - _mp(L[3])) > tol * max(1, abs(_mp(L[3]))):
            raise BadInput("h_3 cos(theta) differs from |I_4|")
        if abs(h[0] * cos - _mp(L[1] + L[3])) > tol * max(1, abs(_mp(L[1] + L[3]))):
            raise BadInput("h_1 cos(theta) differs from |I_2| + |I_4|")
    if not (data.heights[2] < data.heights[0] == data.heights[1] == data.heights[3]):
        raise BadInput("heights must satisfy h_3 < h_1 = h_2 = h_4")


def table_from_lengths(lengths: Sequence, cot_theta) -> LTable:
    """Invert the dictionary: unnormalized ``(L1..L4)`` and ``cot`` give
    ``s = L4/cot``, ``t = L2/cot``, ``b = L3``, ``a = L1 + L2 + L4``."""
    L = [ExactNumber.coerce(x) for x in lengths]
    c = ExactNumber.coerce(cot_theta)
    return LTable(L[0] + L[1] + L[3], L[2], L[3] / c, L[1] / c, c)


# ---------------------------------------------------------------------------
# flow check


@dataclass(frozen=True)
class FlowMixingReport:
    k: int
    status: str
    T0: Optional[float]
    epsilon: float
    t_max: float
    max_n: int
    pairs: int
    failing_pairs: Tuple[Tuple[Tuple[int, ...], Tuple[int, ...], float], ...] = ()
    sum_counts: Tuple[int, ...] = ()

    @property
    def verified(self) -> bool:
        return self.status == "Verified"

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "status": self.status,
            "T0": self.T0,
            "epsilon": self.epsilon,
            "t_max": self.t_max,
            "max_n": self.max_n,
            "pairs": self.pairs,
            "failing_pairs": [
                {"u": list(u), "v": list(v), "last_uncovered_t": t} for u, v, t in self.failing_pairs
            ],
            "occupied_bins_per_pair": list(self.sum_counts),
        }


def _factor_bins(lang: FactorLanguage, k: int, h: np.ndarray, max_n: int, beta: float, nbins: int):
    """Occupied ``beta``-bins of bridge sums, one row per ordered pair.

    Loops over the bridge length ``m`` and vectorizes over start positions,
    so the cost is ``O(max_n * total basis length)`` without storing sums.
    """
    words = lang.basis(max_n)
    base = int(max(int(w.max()) for w in words) + 1)
    blocks = lang.k_blocks(k)
    codes_sorted = np.array([_encode(u, base) for u in blocks], dtype=np.int64)
    order = np.argsort(codes_sorted)
    codes_sorted = codes_sorted[order]
    nb = len(blocks)
    occ = np.zeros(nb * nb * nbins, dtype=bool)
    for w in words:
        if len(w) < 2 * k:
            continue
        codes = _kgram_codes(w, k, base)
        idx = order[np.searchsorted(codes_sorted, codes)]
        H = np.concatenate(([0.0], np.cumsum(h[w.astype(np.int64) - 1])))
        for m in range(2 * k, min(max_n, len(w)) + 1):
            sums = H[m:] - H[:-m]
            pair = idx[: len(w) - m + 1] * nb + idx[m - k :]
            b = np.floor(sums / beta).astype(np.int64)
            keep = b < nbins
            if not keep.any():
                break
            occ[pair[keep] * nbins + b[keep]] = True
    occ = occ.reshape(nb * nb, nbins)
    return {(blocks[i], blocks[j]): occ[i * nb + j] for i in range(nb) for j in range(nb)}


def _encode(u, base: int) -> int:
    c = 0
    for a in u:
        c = c * base + a
    return c


def _graph_bins(lang: GraphLanguage, k: int, h: np.ndarray, max_n: int, beta: float, nbins: int):
    if k != 1:
        raise BadParams("graph languages support k = 1 in the flow check")
    A = lang.A
    out = {}
    for u in range(1, lang.d + 1):
        # frontier[x] = sums of allowed words u ... x of the current length
        frontier = {u: {round(float(h[u - 1]), 9)}}
        collected = {v: set() for v in range(1, lang.d + 1)}
        for n in range(2, max_n + 1):
            nxt: Dict[int, set] = {}
            for last, vals in frontier.items():
                for b in range(1, lang.d + 1):
                    if A[last - 1, b - 1]:
                        nxt.setdefault(b, set()).update(round(x + h[b - 1], 9) for x in vals)
            frontier = nxt
            for v, vals in frontier.items():
                collected[v].update(vals)
        for v in range(1, lang.d + 1):
            row = np.zeros(nbins, dtype=bool)
            b = np.floor(np.array(sorted(collected[v])) / beta).astype(np.int64)
            row[b[b < nbins]] = True
            out[((u,), (v,))] = row
    return out


def flow_mixing_check(
    lang,
    heights,
    k: int,
    epsilon: float,
    t_max: float,
    length_budget: int = 10**4,
    min_window: Optional[float] = None,
    resolution: int = 32,
) -> FlowMixingReport:
    """``(k, epsilon)``-alphabet mixing of a suspension flow, up to ``t_max``.

    For each ordered pair of allowed ``k``-blocks ``(u, v)`` the times
    ``sum h_{w_i}`` of allowed words ``u ... v`` are marked in bins of
    width ``beta = epsilon / resolution``.  A grid point ``t`` (spacing
    ``epsilon / 2``) counts as covered when some occupied bin lies inside
    ``(t - epsilon, t + epsilon)``, which can only under-report coverage.
    ``T0`` is the first grid point from which every later grid point up to
    ``t_max`` is covered for every pair; ``Verified`` needs
    ``t_max - T0 >= min_window`` (default ``t_max / 4``).

    ``lang`` may be an :class:`ExactIET`, whose exact language is used.

    Raises
    ------
    BadParams
        ``epsilon <= 0``, nonpositive heights, or an unsupported language.
    BudgetExceeded
        If ``t_max`` needs words longer than ``length_budget``.
    """
    if epsilon is None or not epsilon > 0:
        raise BadParams("epsilon must be positive")
    if isinstance(heights, SuspensionData):
        heights = heights.heights
    h = np.asarray([float(x) for x in heights], dtype=np.float64)
    if np.any(h <= 0):
        raise BadParams("heights must be positive")
    if isinstance(lang, ExactIET):
        lang = IETLanguage(lang)
    max_n = int(np.ceil((t_max + epsilon) / h.min()))
    if max_n > length_budget:
        raise BudgetExceeded(f"t_max needs words of length {max_n}, budget {length_budget}")
    beta = epsilon / resolution
    nbins = int(np.ceil((t_max + epsilon) / beta)) + 1
    if isinstance(lang, GraphLanguage):
        bins = _graph_bins(lang, k, h, max_n, beta, nbins)
    elif isinstance(lang, FactorLanguage):
        bins = _factor_bins(lang, k, h, max_n, beta, nbins)
    else:
        raise BadParams("unsupported language type")
    step = epsilon / 2
    grid = np.arange(0, t_max + step / 2, step)
    # bin j = [j beta, (j+1) beta) lies inside (t - eps, t + eps) for lo <= j <= hi
    lo = np.floor((grid - epsilon) / beta).astype(np.int64) + 1
    hi = np.ceil((grid + epsilon) / beta).astype(np.int64) - 2
    lo = np.clip(lo, 0, nbins)
    hi = np.clip(hi, -1, nbins - 1)
    ok = np.ones(len(grid), dtype=bool)
    last_bad = {}
    for key in sorted(bins):
        O = np.concatenate(([0], np.cumsum(bins[key])))
        covered = (hi >= lo) & (O[np.maximum(hi + 1, 0)] - O[lo] > 0)
        bad = np.flatnonzero(~covered)
        if len(bad):
            last_bad[key] = float(grid[bad[-1]])
        ok &= covered
    bad = np.flatnonzero(~ok)
    start = 0 if len(bad) == 0 else bad[-1] + 1
    window = t_max / 4 if min_window is None else min_window
    T0 = float(grid[start]) if start < len(grid) else None
    verified = T0 is not None and t_max - T0 >= window
    failing = ()
    if not verified:
        failing = tuple((u, v, t) for (u, v), t in sorted(last_bad.items()))
    return FlowMixingReport(
        k,
        "Verified" if verified else "NotVerified",
        T0 if verified else None,
        float(epsilon),
        float(t_max),
        max_n,
        len(bins),
        failing,
        tuple(int(bins[key].sum()) for key in sorted(bins)),
    )
