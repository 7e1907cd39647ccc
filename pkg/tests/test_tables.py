import numpy as np
import pytest

from gradmetro import tables as T


def by_name(rows):
    return {r.name: r for r in rows}


def test_table1_n4():
    rows = by_name(T.table1_rows(4))
    assert list(rows) == ["polarized", "separable", "ghz", "dicke_x"]
    assert rows["ghz"].closed_form == 8 and np.isclose(rows["ghz"].oracle, 8)
    assert rows["dicke_x"].closed_form == 8
    assert all(r.passed(1e-8) for r in rows.values())


def test_table1_omits_missing_dicke_row(caplog):
    rows = by_name(T.table1_rows(6))
    assert "dicke_x" not in rows
    assert "N/2 = 3 is odd" in caplog.text


def test_table1_odd_n():
    with pytest.raises(ValueError):
        T.table1_rows(5)


def test_table1_parallel_matches_serial():
    serial = [r.to_dict() for r in T.table1_rows(4, workers=1)]
    parallel = [r.to_dict() for r in T.table1_rows(4, workers=4)]
    assert serial == parallel


def test_table2_values():
    rows = by_name(T.table2_rows(1.0, 0.0, 4))
    assert [rows[k].closed_form for k in T.TABLE2_STATES] == pytest.approx([4, 4, 4, 4, 4, 4])
    rows = by_name(T.table2_rows(1.0, 1.0, 4))
    assert rows["singlet"].closed_form == 0 and rows["dicke"].closed_form == 0
    assert by_name(T.table2_rows(1.0, 0.5, 4))["ghz"].closed_form == 10
    assert all(r.passed(1e-8) for r in T.table2_rows(1.0, 0.5, 4))


def test_table2_rejects_bad_eta():
    with pytest.raises(ValueError):
        T.table2_rows(1.0, 1.5, 4)


def test_oracle_skipped_above_cap(caplog):
    rows = T.table2_rows(1.0, 0.0, 10 ** 7, names=("polarized",))
    assert rows[0].oracle is None and rows[0].closed_form == pytest.approx(1e7)
    assert "oracle skipped" in caplog.text


def test_sweep_covers_range():
    rows = T.sweep_rows(1.0, 4, steps=3)
    assert len(rows) == 18
    assert all(r.passed(1e-8) for r in rows)


def test_sld_rows_pi_part():
    rows = [r for r in T.sld_rows(4) if r.name.endswith("|pi")]
    assert rows and all(r.oracle <= 1e-8 for r in rows)


def test_validation_suite_passes_and_fault_is_caught():
    good = T.validation_suite(max_n=4, samples=10)
    assert all(c.passed for c in good), [c for c in good if not c.passed]
    names = {c.property for c in good}
    assert {"translation_invariance", "eta_range", "bec_optimum_attained"} <= names
    bad = T.validation_suite(max_n=4, samples=10, fault=True)
    failing = {c.property for c in bad if not c.passed}
    assert any(name.startswith("oracle_equivalence") for name in failing)
