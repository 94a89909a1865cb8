"""Tests for the verification suites and their report plumbing."""

import json

import numpy as np
import pytest

from vss import verify
from vss.algebra import SuperAlgebra

REPORT_KEYS = {"claimId", "status", "witnesses", "provenance", "elapsedMs"}


def assert_all_pass(reports):
    failed = [r.claim_id for r in reports if r.status != "pass"]
    assert not failed, failed
    for r in reports:
        assert set(r.to_json_dict()) == REPORT_KEYS
    json.dumps(verify.reports_to_json(reports))  # witnesses stay serializable


def test_k10_suite_passes():
    reports = verify.verify_k10()
    assert_all_pass(reports)
    ids = [r.claim_id for r in reports]
    assert ids[0] == "k10.dims"
    assert "k10.oddOddProduct" in ids
    assert "k10.cayleyHamilton3" in ids


def test_k10_suite_flags_corrupted_product():
    s = verify._albert_pipeline()[5].super
    c = s.c.copy()
    c[8, 9, 0] = 1  # still parity-graded, but the wrong product value
    broken = SuperAlgebra(p=5, c=c, unit=s.unit, parity=s.parity)
    reports = verify.verify_k10(broken)
    by_id = {r.claim_id: r for r in reports}
    assert by_id["k10.oddOddProduct"].status == "fail"
    assert by_id["k10.oddOddProduct"].witnesses["value"][0] == 1
    assert by_id["k10.superCommutative"].status == "fail"
    assert by_id["k10.dims"].status == "pass"


def test_f4_suite_passes():
    reports = verify.verify_lambda_prime()
    assert_all_pass(reports)
    by_id = {r.claim_id: r for r in reports}
    assert by_id["f4.targetSplitsInTwoSimpleIdeals"].witnesses["idealDims"] == [
        [3, 2],
        [3, 2],
    ]


def test_chain_suite_passes():
    reports = verify.verify_super_chain()
    assert_all_pass(reports)
    by_id = {r.claim_id: r for r in reports}
    assert by_id["chain.quaternionLevel"].witnesses["semisimplifiedDims"] == [24, 16]
    assert by_id["chain.splitPairLevel"].witnesses["semisimplifiedDims"] == [11, 8]
    assert by_id["chain.fieldLevel"].witnesses["semisimplifiedDims"] == [6, 4]


def test_recipes_suite_small():
    reports = verify.verify_recipe_coherence(p=3, trials=3, seed=1)
    assert_all_pass(reports)
    assert all(r.provenance == {"p": 3, "trials": 3, "seed": 1} for r in reports)


def test_run_suite_rejects_unknown_name():
    with pytest.raises(ValueError):
        verify.run_suite("nonsense")


def test_module_irreducible_detects_invariant_line():
    mats = [np.array([[1, 0], [0, 2]], dtype=np.int64)]
    ok, info = verify._module_irreducible(mats, 5)
    assert not ok
    assert info["invariantSubspaceDim"] == 1


def test_module_irreducible_accepts_full_action():
    mats = [
        np.array([[0, 1], [0, 0]], dtype=np.int64),
        np.array([[0, 0], [1, 0]], dtype=np.int64),
    ]
    ok, info = verify._module_irreducible(mats, 5)
    assert ok
    assert info["certificate"] == "burnside"


def test_reports_to_text_marks_failures():
    rep = verify.VerificationReport(
        claim_id="demo.claim",
        status="fail",
        witnesses={"value": 3},
        provenance={"p": 5},
        elapsed_ms=1,
    )
    text = verify.reports_to_text([rep])
    assert "FAIL" in text
    assert "witness" in text
    assert "0/1" in text
