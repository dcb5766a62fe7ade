"""
Unit tests for codeword arithmetic, closure and conflict validation and the conflict graph
"""

import itertools
import json

import pytest

from core.codeset import (
    CodeSet,
    CodeWord,
    ConflictMode,
    bundled_example_code,
    build_conflict_graph,
    complement,
    conflict_neighbors,
    conflicts,
    conflicts_by_enumeration,
    damped_descendants,
    encoded_qubits,
    hamming_distance,
    load_code_set,
    load_or_build_conflict_graph,
    quantum_hamming_bound,
    save_code_set,
    validate_code_set,
    weight,
)
from core.exceptions import CodeSetError, ResourceLimitError, WordError
from core.codeset import require_valid

pytestmark = pytest.mark.unit


def w(text):
    return CodeWord.from_bitstring(text)


@pytest.mark.parametrize("word, expected", [
    ("00110000", "11001111"),
    ("0000", "1111"),
    ("1010", "0101"),
])
def test_complement(word, expected):
    assert complement(w(word)).bitstring == expected
    assert complement(complement(w(word))) == w(word)


def test_weight_of_word_and_complement_sum_to_n():
    for bits in range(1 << 6):
        u = CodeWord(bits, 6)
        assert weight(u) + weight(complement(u)) == 6


def test_bitstring_puts_qubit_one_first():
    u = w("1000")
    assert u.bits == 8
    assert u.bitstring == "1000"


def test_rejects_out_of_range_words():
    with pytest.raises(WordError):
        CodeWord(16, 4)
    with pytest.raises(WordError):
        CodeWord(0, 33)
    with pytest.raises(WordError):
        w("01a1")


@pytest.mark.parametrize("word, expected", [
    ("0011", {"0001", "0010"}),
    ("0000", set()),
    ("11000000", {"01000000", "10000000"}),
])
def test_damped_descendants(word, expected):
    assert {d.bitstring for d in damped_descendants(w(word))} == expected


def test_hamming_distance():
    assert hamming_distance(w("0011"), w("0101")) == 2
    assert hamming_distance(w("0000"), w("1111")) == 4


def test_conflict_examples():
    assert conflicts(w("0011"), w("0101"), ConflictMode.LITERAL)
    assert not conflicts(w("0011"), w("1100"), ConflictMode.LITERAL)
    assert not conflicts(w("1111"), w("0111"), ConflictMode.LITERAL)
    assert conflicts(w("1111"), w("0111"), ConflictMode.STRICT)


def test_conflict_undefined_for_equal_words():
    with pytest.raises(WordError):
        conflicts(w("0101"), w("0101"))
    with pytest.raises(WordError):
        conflicts(w("010"), w("0101"))


@pytest.mark.parametrize("mode", list(ConflictMode))
def test_optimized_predicate_matches_enumeration_small_n(mode):
    for n in range(2, 7):
        words = [CodeWord(b, n) for b in range(1 << n)]
        for u, v in itertools.combinations(words, 2):
            assert conflicts(u, v, mode) == conflicts_by_enumeration(u, v, mode), (u, v)


@pytest.mark.parametrize("mode", list(ConflictMode))
def test_conflict_symmetry_and_complement_covariance(mode):
    n = 5
    for a, b in itertools.combinations(range(1 << n), 2):
        u, v = CodeWord(a, n), CodeWord(b, n)
        assert conflicts(u, v, mode) == conflicts(v, u, mode)
        assert conflicts(u, v, mode) == conflicts(complement(u), complement(v), mode)


def test_conflict_weight_relations():
    n = 6
    for a, b in itertools.combinations(range(1 << n), 2):
        u, v = CodeWord(a, n), CodeWord(b, n)
        if conflicts(u, v, ConflictMode.LITERAL):
            assert u.weight == v.weight
        elif conflicts(u, v, ConflictMode.STRICT):
            assert abs(u.weight - v.weight) == 1


@pytest.mark.parametrize("mode", list(ConflictMode))
def test_conflict_neighbors_lists_exactly_the_conflicting_words(mode):
    n = 5
    for a in range(1 << n):
        expected = {b for b in range(1 << n) if b != a and conflicts(CodeWord(a, n), CodeWord(b, n), mode)}
        assert set(conflict_neighbors(a, n, mode)) == expected


def test_encoded_qubits():
    assert encoded_qubits(1) == 0.0
    assert encoded_qubits(12) == pytest.approx(3.5849625)
    with pytest.raises(ValueError):
        encoded_qubits(0)


def test_validate_example_code_both_modes():
    code = bundled_example_code()
    assert code.n == 8 and code.size == 24
    for mode in ConflictMode:
        report = validate_code_set(code.with_mode(mode))
        assert report.valid, report.violation_lines()
        assert report.k == 12


def test_validate_4_2_code(code_4_2):
    report = validate_code_set(code_4_2)
    assert report.valid
    assert report.k == 2


def test_validate_reports_closure_violations():
    report = validate_code_set(CodeSet.from_words(["0000", "0011"]))
    assert not report.valid
    assert report.k is None
    assert sorted(report.closure_violations) == [0b0000, 0b0011]
    assert any("1111" in line for line in report.violation_lines())
    assert any("1100" in line for line in report.violation_lines())


def test_literal_six_word_set_is_literal_only(literal_six):
    assert validate_code_set(literal_six).valid
    strict = validate_code_set(literal_six.with_mode(ConflictMode.STRICT))
    assert not strict.valid
    assert (0b0000, 0b0001) in strict.conflict_violations


def test_require_valid_raises_with_report():
    with pytest.raises(CodeSetError) as excinfo:
        require_valid(CodeSet.from_words(["0000", "0011"]))
    assert excinfo.value.report.closure_violations


def test_code_set_pairs_and_membership(code_4_2):
    assert code_4_2.k == 2
    assert code_4_2.pair_representatives == (0b0000, 0b0011)
    assert code_4_2.codeword_pairs() == [(0b0000, 0b1111), (0b0011, 0b1100)]
    assert code_4_2.pair_of(0b1100) == 0b0011
    assert code_4_2.pair_of(0b0000) == 0b0000
    assert 0b1100 in code_4_2
    assert w("1100") in code_4_2
    assert 0b0101 not in code_4_2


def test_duplicate_words_rejected():
    with pytest.raises(WordError):
        CodeSet(4, (0, 0, 15, 15))


def test_save_and_load_code_set(tmp_path, code_4_2):
    path = save_code_set(code_4_2, tmp_path / "code.json")
    data = json.loads(path.read_text())
    assert data == {"n": 4, "mode": "strict", "words": ["0000", "0011", "1100", "1111"]}
    assert load_code_set(path) == code_4_2


def test_load_rejects_bad_documents(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 4, "mode": "strict", "words": ["000"]}')
    with pytest.raises(WordError):
        load_code_set(bad)
    bad.write_text('{"n": 4, "words": []}')
    with pytest.raises(WordError):
        load_code_set(bad)
    bad.write_text("not json")
    with pytest.raises(WordError):
        load_code_set(bad)


def test_conflict_graph_n2():
    strict = build_conflict_graph(2, ConflictMode.STRICT)
    assert strict.vertices == [0b00, 0b01]
    assert strict.is_internally_conflicting(0b01)
    assert not strict.is_internally_conflicting(0b00)
    assert strict.usable_vertices() == [0b00]

    literal = build_conflict_graph(2, ConflictMode.LITERAL)
    assert literal.is_internally_conflicting(0b01)
    assert literal.edges == []


def test_conflict_graph_n4():
    graph = build_conflict_graph(4, ConflictMode.STRICT)
    assert len(graph.vertices) == 8
    assert not graph.graph.has_edge(0b0000, 0b0011)
    assert graph.is_independent([0b0000, 0b0011])
    assert graph.code_set([0b0000, 0b0011]).words == (0b0000, 0b0011, 0b1100, 0b1111)


@pytest.mark.parametrize("mode", list(ConflictMode))
def test_graph_independence_matches_validation(mode):
    n = 4
    graph = build_conflict_graph(n, mode)
    for size in range(1, 4):
        for reps in itertools.combinations(graph.vertices, size):
            code = CodeSet.from_pairs(n, reps, mode)
            assert graph.is_independent(reps) == validate_code_set(code).valid


def test_conflict_graph_refuses_large_n():
    with pytest.raises(ResourceLimitError):
        build_conflict_graph(13, ConflictMode.STRICT, max_n=12)


def test_conflict_graph_cache_roundtrip(tmp_path):
    built = load_or_build_conflict_graph(5, ConflictMode.STRICT, cache_dir=tmp_path)
    assert len(list(tmp_path.glob("*.json"))) == 1
    cached = load_or_build_conflict_graph(5, ConflictMode.STRICT, cache_dir=tmp_path)
    assert cached.edges == built.edges
    assert cached.usable_vertices() == built.usable_vertices()


@pytest.mark.parametrize("n, k, t, a, expected", [
    (5, 1, 1, 3, True),
    (4, 1, 1, 3, False),
    (9, 1, 0, 3, True),
])
def test_quantum_hamming_bound(n, k, t, a, expected):
    assert quantum_hamming_bound(n, k, t, a) is expected


def test_quantum_hamming_bound_large_values_are_exact():
    assert quantum_hamming_bound(200, 150, 3, 3)
    assert not quantum_hamming_bound(200, 190, 3, 3)
    with pytest.raises(ValueError):
        quantum_hamming_bound(3, 1, 4, 3)
