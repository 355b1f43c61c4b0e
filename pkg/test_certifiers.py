import pytest

from certifiers import (
    STRICT,
    THM3_2,
    THM5_1_CASE1,
    THM5_1_CASE2,
    VERIFIED,
    Certificate,
    Outcome,
    expansion_sweep,
    holographic_certify,
    theorem_partition_builder,
)
from code_model import SubsystemCode
from constructions import EmbeddedCode
from correctability import is_correctable
from geometry import Box, Embedding


def test_bacon_shor_sweep_gets_stuck_at_first_expansion(bs3):
    cert = expansion_sweep(bs3.code, bs3.embedding, None, ell=2, tau=6, d=3, mode=STRICT)
    assert cert.outcome == Outcome.STUCK
    stuck = cert.steps[cert.stuck_step - 1]
    assert stuck.rule == "expand-last"
    assert not stuck.verdict
    assert stuck.boundary_count >= 3
    assert all(step.rule == "next-dimension" for step in cert.steps[: cert.stuck_step - 1])


def test_full_set_with_logical_qubits_is_a_contradiction(bs2):
    cert = expansion_sweep(bs2.code, bs2.embedding, None, ell=1, d=100, mode=STRICT)
    assert cert.outcome == Outcome.CONTRADICTION
    assert cert.steps[-1].rule == "finish"
    assert cert.steps[-1].region_size == 4


@pytest.mark.parametrize("name", ["bs3", "surface3", "five_one_three", "steane"])
def test_verified_sweep_accepts_only_correctable_regions(small_codes, name):
    ec = small_codes[name]
    cert = expansion_sweep(ec.code, ec.embedding, None, ell=1, mode=VERIFIED)
    for step in cert.steps:
        if step.rule in ("expand", "expand-last") and step.verdict:
            assert is_correctable(ec.code, step.detail["qubits"])
    assert cert.outcome != Outcome.CONTRADICTION


def test_sweep_certifies_full_set_without_logical_qubits():
    code = SubsystemCode.from_strings(["ZIII", "IZII", "IIZI", "IIIZ"])
    ec = EmbeddedCode(code, Embedding(2, [[0, 0], [0, 1], [1, 0], [1, 1]]))
    cert = expansion_sweep(ec.code, ec.embedding, None, ell=1, mode=VERIFIED)
    assert cert.outcome == Outcome.CERTIFIED
    assert cert.steps[-1].region_size == 4


def test_sweep_input_checks(bs2):
    with pytest.raises(ValueError):
        expansion_sweep(bs2.code, bs2.embedding, None, ell=0)
    with pytest.raises(ValueError):
        expansion_sweep(bs2.code, bs2.embedding, None, ell=1, tau=-1)
    with pytest.raises(ValueError):
        expansion_sweep(None, bs2.embedding, bs2.interactions(), ell=1, mode=VERIFIED)


def test_empty_layout_is_certified():
    cert = expansion_sweep(None, Embedding(2, []), None, ell=1)
    assert cert.outcome == Outcome.CERTIFIED


def test_certificate_json_lines_round_trip(bs3):
    cert = expansion_sweep(bs3.code, bs3.embedding, None, ell=1, mode=VERIFIED)
    restored = Certificate.from_json_lines(cert.to_json_lines())
    assert restored == cert
    assert restored.trace().startswith("sweep certificate (verified)")
    with pytest.raises(ValueError):
        Certificate.from_json_lines("")


def test_holographic_base_case(bs3):
    box = Box.of([0, 0], [0, 1])
    for mode in (STRICT, VERIFIED):
        cert = holographic_certify(bs3.code, bs3.embedding, box, 1.0, mode)
        assert cert.outcome == Outcome.CERTIFIED
        assert [s.rule for s in cert.steps] == ["base"]


def test_holographic_strict_hypotheses(bs3):
    cert = holographic_certify(bs3.code, bs3.embedding, Box.of([0, 0], [2, 2]), 1.0, STRICT)
    assert cert.outcome == Outcome.HYPOTHESIS_VIOLATED
    assert "ell=1.0" in cert.reason


def test_holographic_verified_replay(bs3):
    cert = holographic_certify(bs3.code, bs3.embedding, Box.of([0, 0], [2, 2]), 1.0, VERIFIED)
    assert cert.notes
    assert cert.steps[0].rule == "base" and cert.steps[0].verdict
    assert cert.outcome == Outcome.STUCK
    assert cert.steps[-1].region_size == 9
    assert len(cert.steps[-1].detail["type_counts"]) == 4


def test_partition_for_length_bound(bs3):
    result = theorem_partition_builder(bs3.code, bs3.embedding, 1.5, THM3_2, mode=VERIFIED)
    assert result.labels == ("A", "B")
    assert sum(result.ledger["sizes"].values()) == 9
    assert result.ledger["width_clamped"]
    assert result.ledger["width"] == pytest.approx(7.5)
    assert result.report.holds
    assert result.certificate.outcome == Outcome.CERTIFIED


@pytest.mark.parametrize("variant", [THM5_1_CASE1, THM5_1_CASE2])
def test_partition_for_count_bound(five_qubit, variant):
    result = theorem_partition_builder(five_qubit.code, five_qubit.embedding, 1.0, variant, mode=VERIFIED, seed=3)
    assert result.labels == ("A", "B", "C")
    assert sorted(q for part in result.partition.parts for q in part.qubits) == list(range(5))
    assert result.report.holds
    assert result.ledger["bad_boxes"] <= result.ledger["bad_box_bound"]
    if variant == THM5_1_CASE2:
        assert "no_bad_boxes" in result.ledger


def test_partition_is_deterministic(five_qubit):
    first = theorem_partition_builder(five_qubit.code, five_qubit.embedding, 1.0, THM5_1_CASE1, seed=4)
    second = theorem_partition_builder(five_qubit.code, five_qubit.embedding, 1.0, THM5_1_CASE1, seed=4)
    assert first.to_dict() == second.to_dict()


def test_partition_input_checks(bs3):
    with pytest.raises(ValueError):
        theorem_partition_builder(bs3.code, bs3.embedding, 1.0, "thm9")
    with pytest.raises(ValueError):
        theorem_partition_builder(bs3.code, bs3.embedding, 1.0, THM5_1_CASE1, mode=VERIFIED)
    with pytest.raises(ValueError):
        theorem_partition_builder(bs3.code, bs3.embedding, 1.0, THM3_2, width=3.0)
