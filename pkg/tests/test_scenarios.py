import json

import pytest

from detpsi import local as lc
from detpsi import scenarios as sc
from detpsi.ring_core import RingSpec, make_ring


def verdicts(checks):
    return {c["verdict"] for c in checks}


def test_generate_scenario_shapes():
    S = sc.generate_scenario(1, q=3, d=1, group_orders=(3,), degs=[1, 1])
    assert S.l == 1 and len(S.types) == 2
    assert sc.generate_scenario(2, q=3, d=2, degs=[1, 1]).l == 0
    ok, _ = sc.scenario_invariants(S)
    assert ok


@pytest.mark.parametrize("kw", [{"degs": []}, {"degs": [0, 1]}, {"n": 1}, {"d": 2, "degs": [1]}])
def test_generate_scenario_rejects(kw):
    with pytest.raises(sc.ScenarioError):
        sc.generate_scenario(1, **kw)


def test_scenario_json_roundtrip():
    S = sc.generate_scenario(3, q=3, d=2, group_orders=(3,), degs=[1, 1])
    obj = json.loads(json.dumps(S.to_json()))
    T = sc.Scenario.from_json(obj)
    assert T.to_json() == S.to_json()


def test_scenario_is_deterministic():
    a = sc.generate_scenario(5, q=3, d=1, degs=[1, 2]).to_json()
    b = sc.generate_scenario(5, q=3, d=1, degs=[1, 2]).to_json()
    assert a == b


def test_psi_suite_small():
    rep = sc.verify_psi_suite(7, 4)
    assert rep.ok() and sc.PASS in verdicts(rep.checks)
    empty = sc.verify_psi_suite(7, 0)
    assert empty.ok() and empty.checks == []


def test_psi_matrices_invalid_input():
    R = make_ring(RingSpec(3, 2, ()))
    P = R.parse
    out = sc.verify_psi_matrices(R, [[[P("x")]], [[P("1")]]], 1)
    assert [c["verdict"] for c in out] == [sc.INVALID]


def test_appendix_fixed():
    assert verdicts(sc.appendix_fixed()) == {sc.PASS}


def test_main_sequence_d1():
    S = sc.generate_scenario(1, q=3, d=1, degs=[1, 1])
    rep = sc.verify_main_sequence(S, lc.monomial_primes(S.ring, 2))
    assert rep.ok() and sc.PASS in verdicts(rep.checks)


def test_l1_sequence_requires_l1():
    S = sc.generate_scenario(1, q=3, d=1, degs=[1, 2])
    assert S.l == 2
    with pytest.raises(sc.ScenarioError):
        sc.verify_l1_sequence(S)


def test_l1_sequence_d1():
    S = sc.generate_scenario(1, q=3, d=1, degs=[1, 1])
    rep = sc.verify_l1_sequence(S)
    names = {c["check"].split(".", 1)[1]: c["verdict"] for c in rep.checks}
    assert names["l1-sequence"] == sc.PASS
    assert names["finite-part-cyclic"] == sc.PASS


def test_chern_only_for_d2():
    S = sc.generate_scenario(1, q=3, d=1, degs=[1, 1])
    rep = sc.verify_chern(S, lc.monomial_primes(S.ring, 2))
    assert verdicts(rep.checks) == {sc.NOT_MET}


def test_report_summary():
    rep = sc.Report("x", {})
    rep.add("a", sc.PASS)
    rep.add("b", sc.NOT_MET)
    assert rep.ok()
    rep.add("c", sc.FAIL)
    assert not rep.ok() and rep.to_json()["summary"][sc.FAIL] == 1
