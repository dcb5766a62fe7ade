"""
Unit tests for the element-by-element recovery construction
"""

import math

import numpy as np
import pytest

from core.codeset import CodeSet, CodeWord
from core.exceptions import CodeSetError, ResourceLimitError
from core.recovery import (
    Assignment,
    SourceKind,
    build_recovery,
    damped_pair_vectors,
    error_vector_order,
    verify_recovery,
)

pytestmark = pytest.mark.unit

F, G, BASIS = SourceKind.F, SourceKind.G, SourceKind.BASIS


class TestDampedPairVectors:
    """Test the f/g basis of a complement pair"""

    def test_coefficients(self):
        gamma = 0.19
        basis = damped_pair_vectors(CodeWord.from_bitstring("1111"), gamma)
        assert basis.representative == 0b0000
        assert basis.partner == 0b1111
        norm = math.hypot(1.0, 0.6561)
        assert basis.a == pytest.approx(1.0 / norm)
        assert basis.b == pytest.approx(0.6561 / norm)

    def test_orthonormal(self):
        basis = damped_pair_vectors(0b0011, 0.3, n=5)
        f, g = basis.vector(F), basis.vector(G)
        assert np.vdot(f, f).real == pytest.approx(1.0)
        assert np.vdot(g, g).real == pytest.approx(1.0)
        assert abs(np.vdot(f, g)) < 1e-15

    def test_balanced_pair_gives_plus_and_minus(self):
        basis = damped_pair_vectors(0b0011, 0.4, n=4)
        assert basis.a == pytest.approx(1 / math.sqrt(2))
        assert basis.b == pytest.approx(1 / math.sqrt(2))

    def test_full_damping(self):
        basis = damped_pair_vectors(0b0001, 1.0, n=3)
        assert (basis.a, basis.b) == (1.0, 0.0)

    def test_integer_word_needs_length(self):
        with pytest.raises(ValueError):
            damped_pair_vectors(3, 0.1)


def test_error_vector_order():
    assert error_vector_order(3) == [0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111]
    assert error_vector_order(3, max_weight=1) == [0b001, 0b010, 0b100]


def test_weight_one_truncation_on_4_2_code(code_4_2):
    recovery = build_recovery(code_4_2, 0.1, max_error_weight=1)
    assert len(recovery.elements) == 5
    assert recovery.assigned_rank == 10
    assert recovery.completion_rank == 6
    assert recovery.elements[0].assignments == (Assignment(F, 0b0000, 0b0000), Assignment(F, 0b0011, 0b0011))
    assert recovery.elements[1].error == 0b0001
    assert recovery.elements[1].assignments == (
        Assignment(BASIS, 0b0010, 0b0011),
        Assignment(BASIS, 0b1110, 0b0000),
    )
    assert recovery.completion == (
        Assignment(G, 0b0000, 0b0000),
        Assignment(G, 0b0011, 0b0011),
        Assignment(BASIS, 0b0101, 0b0101),
        Assignment(BASIS, 0b0110, 0b0110),
        Assignment(BASIS, 0b1001, 0b1001),
        Assignment(BASIS, 0b1010, 0b1010),
    )
    assert verify_recovery(recovery).passed


def test_full_recovery_on_4_2_code(code_4_2):
    recovery = build_recovery(code_4_2, 0.1)
    assert recovery.completion_rank == 0
    assert recovery.total_rank == 16
    assert len(recovery.elements) == 10
    by_error = {element.error: element for element in recovery.elements}
    assert by_error[0b0011].assignments == (Assignment(G, 0b0000, 0b0011), Assignment(G, 0b0011, 0b0000))
    assert by_error[0b0101].assignments == (Assignment(BASIS, 0b1010, 0b0000),)
    assert 0b1100 not in by_error
    report = verify_recovery(recovery)
    assert report.passed
    assert report.rank == 16


def test_literal_code_uses_g_vectors(literal_six):
    recovery = build_recovery(literal_six, 0.05)
    first_error = recovery.elements[1]
    assert first_error.error == 0b0001
    assert first_error.assignments == (
        Assignment(G, 0b0000, 0b0001),
        Assignment(BASIS, 0b0010, 0b0011),
        Assignment(G, 0b0001, 0b0000),
    )
    assert verify_recovery(recovery).passed


def test_gamma_changes_only_pair_vectors(code_8_12):
    low = build_recovery(code_8_12, 0.05)
    high = build_recovery(code_8_12, 0.4)
    assert low.elements == high.elements
    assert low.completion == high.completion

    for assignment in low.all_sources():
        if assignment.kind is BASIS:
            np.testing.assert_array_equal(low.source_vector(assignment), high.source_vector(assignment))

    changed = [rep for rep in low.bases if low.bases[rep].f != pytest.approx(high.bases[rep].f)]
    assert changed
    for rep in changed:
        assert low.bases[rep].representative == high.bases[rep].representative
        assert low.bases[rep].partner == high.bases[rep].partner


@pytest.mark.parametrize("gamma", [0.0, 0.01, 0.3, 0.9])
def test_recovery_is_trace_preserving(code_4_2, gamma):
    recovery = build_recovery(code_4_2, gamma)
    report = verify_recovery(recovery)
    assert report.completeness_ok
    assert report.gram_ok
    assert report.targets_ok


def test_element_operator_maps_f_onto_codewords(code_4_2):
    recovery = build_recovery(code_4_2, 0.2)
    first = recovery.kraus.elements[0]
    for rep in code_4_2.pair_representatives:
        source = recovery.bases[rep].vector(F)
        np.testing.assert_allclose(first.apply(source), recovery.target_vector(rep), atol=1e-14)
    assert first.label == "R[f]"
    assert recovery.kraus.elements[1].label == "R[0001]"


def test_completion_is_a_projector(code_4_2):
    recovery = build_recovery(code_4_2, 0.2, max_error_weight=1)
    completion = recovery.completion_operator().to_dense()
    np.testing.assert_allclose(completion @ completion, completion, atol=1e-14)
    assert np.trace(completion).real == pytest.approx(6.0)


def test_recovered_code_state_without_noise(code_4_2):
    recovery = build_recovery(code_4_2, 0.0)
    target = recovery.target_vector(0b0011)
    rho = np.outer(target, target.conj())
    np.testing.assert_allclose(recovery.apply(rho), rho, atol=1e-14)


def test_single_pair_recovery(single_pair_code):
    recovery = build_recovery(single_pair_code, 0.1)
    assert recovery.total_rank == 8
    assert verify_recovery(recovery).passed


def test_to_dict(code_4_2):
    data = build_recovery(code_4_2, 0.1, max_error_weight=1).to_dict()
    assert data["gamma"] == 0.1
    assert data["completion_rank"] == 6
    assert data["elements"][1]["assignments"][0] == {
        "source": {"kind": "basis", "word": "0010"},
        "target_pair": "0011",
    }


def test_invalid_code_rejected():
    with pytest.raises(CodeSetError):
        build_recovery(CodeSet.from_words(["0000", "0011"]), 0.1)


def test_qubit_cap(code_4_2):
    with pytest.raises(ResourceLimitError):
        build_recovery(code_4_2, 0.1, max_qubits=3)


def test_verify_flags_broken_recovery(code_4_2):
    recovery = build_recovery(code_4_2, 0.1)
    broken = recovery.__class__(
        gamma=recovery.gamma,
        code=recovery.code,
        elements=recovery.elements[:-1],
        completion=recovery.completion,
        bases=recovery.bases,
    )
    report = verify_recovery(broken)
    assert not report.passed
    assert not report.completeness_ok
    assert any("FAIL" in line for line in report.lines())
