import json

import pytest

from ietlab.coding import allowed_blocks, factors
from ietlab.constructor import ConstructionOptions, construct_mixing_iet, elementary_loops
from ietlab.errors import BadParams
from ietlab.iet import ExactIET, induce_lattice
from ietlab.perm import Permutation
from ietlab.rauzy import RauzyPath, path_product


def test_elementary_loops_are_closed():
    pi = Permutation.parse("4321")
    loops = elementary_loops(pi)
    assert loops and len(set(loops)) == len(loops)
    assert [len(l) for l in loops] == sorted(len(l) for l in loops)
    for lp in loops:
        assert path_product(RauzyPath(pi, lp))[0] == pi


@pytest.fixture(scope="module")
def proxy_report():
    return construct_mixing_iet("25431", 1, scale_p=3)


def test_d5_proxy_construction(proxy_report):
    r = proxy_report
    assert r.success and r.keane.passed and r.mixing.verified
    assert r.iet.perm == Permutation.parse("25431")
    # the returned IET realizes the reported path
    assert induce_lattice(r.iet, len(r.path)).moves == r.path.moves
    assert r.coverage.verified


def test_designated_blocks_contain_every_k_block(proxy_report):
    from ietlab.coding import return_blocks

    r = proxy_report
    d = r.iet.d
    stage = return_blocks(r.iet, r.prefix_depth + r.coprime_depth).blocks
    kb = {w.letters for w in allowed_blocks(r.iet, 1)}
    for j in (d - 2, d - 1):
        assert kb <= factors([stage[j - 1].letters], 1)
    assert tuple(len(b) for b in stage) == r.stage_lengths


def test_report_json(proxy_report):
    doc = json.loads(json.dumps(proxy_report.to_json()))
    assert doc["mixing"]["status"] == "Verified"
    assert ExactIET.from_json(doc["iet"]) == proxy_report.iet
    assert RauzyPath.from_json(doc["path"]) == proxy_report.path


def test_rejects_bad_input():
    with pytest.raises(BadParams):
        construct_mixing_iet("3412", 1)
    with pytest.raises(BadParams):
        construct_mixing_iet("321", 1)
    with pytest.raises(BadParams):
        construct_mixing_iet("4321", 0)


def test_options_json():
    opts = ConstructionOptions()
    assert json.loads(json.dumps(opts.to_json()))["length_budget"] == 5 * 10**4
