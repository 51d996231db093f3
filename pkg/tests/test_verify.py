import json

import numpy as np

from ptsim.verify import (
    FormulaRecord,
    VerificationReport,
    check_bob_state_literal,
    check_dimension_scan,
    check_werner_gap,
)


def test_known_discrepancy_does_not_fail():
    rep = VerificationReport(
        [
            FormulaRecord("a", 10, 1e-12, 1e-9),
            FormulaRecord("b", 10, 0.5, None, known_discrepancy=True, measured_ratio=2.0),
        ]
    )
    assert rep.passed
    rep.records.append(FormulaRecord("c", 10, 1e-6, 1e-9))
    assert not rep.passed
    assert rep.get("c").passed is False


def test_report_serializes():
    rep = VerificationReport([check_werner_gap(alphas=(0.3,), ps=(0.5,))])
    doc = json.loads(json.dumps(rep.to_dict()))
    assert doc["passed"] is True
    assert doc["records"][0]["formula_id"] == "werner_gap_sigma_y"


def test_literal_reading_is_flagged():
    rec = check_bob_state_literal(np.random.default_rng(0), n_states=5)
    assert rec.known_discrepancy and rec.max_abs_err > 1e-3


def test_dimension_scan_record():
    rec = check_dimension_scan()
    assert rec.passed and rec.max_abs_err == 0.0
