"""Exact interval exchanges, Rauzy induction and k-alphabet mixing.

Submodules
----------
perm, rauzy
    Permutations, Rauzy classes, moves and transition matrices.
iet, field
    Exact IETs over ``Q(sqrt N)``, induction, Keane checks, cone points.
keane_paths
    Named paths, coprimality and prime-column searches, proxies.
coding
    Orbit words, return blocks, allowed blocks, block tables.
mixing
    Two-coin representations, covering certificates, mixing checks.
constructor
    The end-to-end construction of a mixing IET.
billiard
    L-shaped tables, their ``(2413)`` transversals, flow checks.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .field import ExactNumber
from .perm import Permutation, ProxyKind, as_permutation, classify, is_degenerate, is_irreducible
from .rauzy import IntegerMatrix, Move, RauzyPath, enumerate_class, path_product, replay, step
from .iet import ExactIET, check_keane, cone_point, evaluate, generic_cone_point, induce_lattice, induce_path
from .keane_paths import (
    build_named_path,
    make_cd_prime,
    make_columns_coprime,
    make_proxy_coprime,
    nondegenerate_classes,
    proxy_vertices,
    resolve_convention,
)
from .coding import BlockExpression, Word, allowed_blocks, code_orbit, hat_blocks, return_blocks
from .mixing import (
    IETLanguage,
    MixingReport,
    alphabet_mixing_check,
    coin_representation,
    coverage_certificate,
    gap_constant,
)
from .constructor import ConstructionOptions, ConstructionReport, construct_mixing_iet
from .billiard import LTable, flow_mixing_check, suspension_data, table_from_lengths, transversal_iet
