"""End-to-end construction of a certified k-alphabet mixing IET.

Pipeline, for a non-degenerate permutation ``pi``:

1. a prefix at ``pi`` built greedily from elementary loops (shortest
   path to an edge, the edge, shortest path back) until both designated
   return blocks of the coprime stage contain every allowed ``k``-block of
   the final map;
2. the route to a proxy or quasi-proxy and the coprimality path
   (:func:`make_proxy_coprime`);
3. the ``M1``-type path with ``m = n = p``, ``p = min(5g, scale_p)``;
4. a point of the resulting cone;
5. Keane check, mixing check, and the covering certificate for the ``5g``
   path.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .coding import allowed_blocks, blocks_along, factors, hat_blocks, hat_kind
from .errors import BadParams, ConstructionFailed
from .field import ExactNumber
from .iet import ExactIET, KeaneReport, check_keane, generic_cone_point, iet_from_cone, induce_lattice
from .keane_paths import (
    CoprimalityCertificate,
    make_proxy_coprime,
    printed_word,
    resolve_convention,
)
from .mixing import (
    CoverageCertificate,
    IETLanguage,
    MixingReport,
    alphabet_mixing_check,
    coverage_certificate,
    gap_constant,
)
from .perm import Permutation, ProxyKind, as_permutation, is_degenerate, is_irreducible
from .rauzy import Move, RauzyPath, enumerate_class, find_path, path_product

__all__ = ["ConstructionOptions", "ConstructionReport", "construct_mixing_iet", "elementary_loops", "prefix_loop"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConstructionOptions:
    scale_p: int = 3
    keane_horizon: int = 10**4
    mixing_horizon: int = 500
    length_budget: int = 5 * 10**4
    seed: int = 0
    seed_mode: str = "generic"
    digits: int = 60
    quadratic_seed: Optional[ExactNumber] = None
    prefix_cap: int = 12
    search_cap: int = 10**6
    threads: int = 1

    def to_json(self) -> dict:
        return {
            "scale_p": self.scale_p,
            "keane_horizon": self.keane_horizon,
            "mixing_horizon": self.mixing_horizon,
            "length_budget": self.length_budget,
            "seed": self.seed,
            "seed_mode": self.seed_mode,
            "digits": self.digits,
            "prefix_cap": self.prefix_cap,
            "search_cap": self.search_cap,
        }


@dataclass(frozen=True)
class ConstructionReport:
    """Outcome of :func:`construct_mixing_iet`.

    ``path`` is the prefix (``prefix_depth`` moves), then the proxy and
    coprimality route (``coprime_depth`` moves), then the ``M1``-type
    stage; ``stage_lengths`` are the block lengths where that stage starts.
    """

    input_perm: Permutation
    k: int
    path: RauzyPath
    prefix_depth: int
    coprime_depth: int
    coprime_cert: CoprimalityCertificate
    kind: ProxyKind
    stage_lengths: Tuple[int, ...]
    g: int
    scale_p: int
    desk_scale: bool
    iet: ExactIET
    keane: KeaneReport
    mixing: MixingReport
    coverage: CoverageCertificate
    options: ConstructionOptions

    @property
    def success(self) -> bool:
        return self.keane.passed and self.mixing.verified

    def to_json(self) -> dict:
        return {
            "input_perm": self.input_perm.to_json(),
            "k": self.k,
            "path": self.path.to_json(),
            "prefix_depth": self.prefix_depth,
            "coprime_depth": self.coprime_depth,
            "coprime_cert": self.coprime_cert.to_json(),
            "kind": self.kind.value,
            "stage_lengths": list(self.stage_lengths),
            "g": self.g,
            "scale_p": self.scale_p,
            "desk_scale": self.desk_scale,
            "iet": self.iet.to_json(),
            "keane": self.keane.to_json(),
            "mixing": self.mixing.to_json(),
            "coverage": self.coverage.to_json(),
            "options": self.options.to_json(),
        }


def prefix_loop(pi: Permutation, cap: int = 50) -> RauzyPath:
    """A closed path at ``pi`` with a positive matrix.

    One round walks every edge of the Rauzy class (each vertex, each move)
    and returns to ``pi``; rounds are repeated until the product is
    positive.
    """
    graph = enumerate_class(pi)
    moves = []
    cur = pi
    for src, mv, dst in graph.edges:
        moves += list(find_path(cur, lambda x, t=src: x == t).moves) + [mv]
        cur = dst
    moves += list(find_path(cur, lambda x: x == pi).moves)
    unit = tuple(moves)
    word = unit
    for _ in range(cap):
        if path_product(RauzyPath(pi, word))[1].is_positive():
            return RauzyPath(pi, word)
        word = word + unit
    raise ConstructionFailed(f"no positive loop at {pi} within {cap} rounds")


def elementary_loops(pi: Permutation) -> List[Tuple[Move, ...]]:
    """For each edge of the Rauzy class, the loop ``pi -> src -edge-> dst -> pi``
    built from shortest paths (duplicates removed)."""
    graph = enumerate_class(pi)
    out = []
    for src, mv, dst in graph.edges:
        word = find_path(pi, lambda x, t=src: x == t).moves + (mv,) + find_path(dst, lambda x: x == pi).moves
        if word not in out:
            out.append(word)
    return sorted(out, key=len)


def _cone_iet(start, M, opts: ConstructionOptions) -> ExactIET:
    if opts.seed_mode == "generic":
        return generic_cone_point(start, M, opts.seed, opts.digits)
    if opts.seed_mode == "quadratic":
        seed = opts.quadratic_seed or ExactNumber(Fraction(-1, 2), Fraction(1, 2), 5)
        return iet_from_cone(start, M, seed)
    raise BadParams(f"unknown seed mode {opts.seed_mode!r}")


def construct_mixing_iet(pi, k: int, opts: Optional[ConstructionOptions] = None, **kw) -> ConstructionReport:
    """Build an IET whose ``k``-alphabet mixing is verified to a horizon.

    Keyword arguments override fields of :class:`ConstructionOptions`.

    Raises
    ------
    BadParams
        Degenerate, reducible or too small ``pi``, or ``k < 1``.
    ConstructionFailed
        If Keane or the mixing check fails; the report is attached.
    """
    opts = opts or ConstructionOptions()
    if kw:
        opts = ConstructionOptions(**{**opts.__dict__, **kw})
    pi = as_permutation(pi)
    d = pi.d
    if d < 4:
        raise BadParams("construction needs d >= 4")
    if k < 1:
        raise BadParams("k must be at least 1")
    if not is_irreducible(pi) or is_degenerate(pi)[0]:
        raise BadParams(f"{pi} is not a non-degenerate irreducible permutation")
    conv = resolve_convention()

    def attempt(prefix: RauzyPath):
        res = make_proxy_coprime(pi, opts.search_cap, prefix=prefix)
        stage = blocks_along(res.path)
        lens = tuple(len(b) for b in stage)
        g = 2 * lens[d - 3] * lens[d - 2]
        p = min(5 * g, int(opts.scale_p))
        if d == 4:
            tkind = "M1"
        else:
            tkind = "TildeM1Proxy" if res.kind is ProxyKind.PROXY else "TildeM1Quasi"
        word = conv.translate(printed_word(tkind, (p, p), d))
        full = RauzyPath(pi, res.path.moves + word)
        _, M = path_product(full)
        T = _cone_iet(pi, M, opts)
        if induce_lattice(T, len(full)).moves != full.moves:
            raise ConstructionFailed("cone point does not realize the path")
        kblocks = {w.letters for w in allowed_blocks(T, k)}
        hits = sum(len(kblocks & factors([stage[j - 1].letters], k)) for j in (d - 2, d - 1))
        return hits == 2 * len(kblocks), hits, (res, stage, lens, g, p, full, T)

    prefix = RauzyPath(pi, ())
    done, hits, state = attempt(prefix)
    loops = elementary_loops(pi)
    for _ in range(opts.prefix_cap):
        if done:
            break
        best = None
        for lp in loops:
            cand = RauzyPath(pi, prefix.moves + lp)
            ok, h, st = attempt(cand)
            key = (ok, h, -len(lp))
            if best is None or key > best[0]:
                best = (key, cand, st)
        (done, hits, _), prefix, state = best[0], best[1], best[2]
        log.info("prefix of %d moves: %d containments, stage lengths %s", len(prefix), hits, state[2])
    if not done:
        raise ConstructionFailed(f"designated blocks miss some {k}-blocks after {opts.prefix_cap} prefix loops")
    res, stage, lens, g, p, full, T = state
    hk = "FourLetter" if d == 4 else hat_kind(res.kind)

    keane = check_keane(T, opts.keane_horizon)
    lang = IETLanguage(T)
    mixing = alphabet_mixing_check(lang, k, opts.mixing_horizon, opts.length_budget, threads=opts.threads)
    C = gap_constant(hat_blocks(hk, d, 5 * g, 5 * g), lens)
    coverage = coverage_certificate(lens, g, C, d, kind=hk)
    report = ConstructionReport(
        input_perm=pi,
        k=k,
        path=full,
        prefix_depth=len(prefix),
        coprime_depth=len(res.path) - len(prefix),
        coprime_cert=res.certificate,
        kind=res.kind,
        stage_lengths=lens,
        g=g,
        scale_p=p,
        desk_scale=p < 5 * g,
        iet=T,
        keane=keane,
        mixing=mixing,
        coverage=coverage,
        options=opts,
    )
    if not keane.passed:
        raise ConstructionFailed(f"Keane check failed: {keane.detail}", report)
    if not mixing.verified:
        raise ConstructionFailed("mixing not verified:\n" + mixing.summary(), report)
    return report
