"""
Binary codeword arithmetic, the code validity conditions and the conflict graph.

Words are stored as integers whose binary expansion, read left to right with
qubit 1 as the most significant bit, is the word's bitstring. A code set S
must be closed under complement and must not contain two distinct words
that conflict. The conflict relation comes in two flavours, see
ConflictMode.
"""

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Set, Tuple, Union

import networkx as nx

from .exceptions import CodeSetError, ResourceLimitError, WordError


logger = logging.getLogger("adcodes.codeset")

MAX_WORD_LENGTH = 32
DEFAULT_GRAPH_MAX_N = 12
DATA_DIR = Path(__file__).resolve().parent.parent / "data"
EXAMPLE_CODE_FILE = DATA_DIR / "code_8_12.json"


class ConflictMode(Enum):
    """Reading of the pairwise conflict condition.

    LITERAL forbids two words sharing a damped descendant.
    STRICT additionally forbids one word being a damped descendant of the other.
    """
    LITERAL = "literal"
    STRICT = "strict"

    @classmethod
    def parse(cls, value: Union[str, "ConflictMode"]) -> "ConflictMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise WordError(f"Unknown conflict mode: {value!r} (expected 'strict' or 'literal')") from None


def check_word_length(n: int, max_n: int = MAX_WORD_LENGTH) -> int:
    """Validate a word length"""
    if isinstance(n, bool) or not isinstance(n, int) or n < 2 or n > max_n:
        raise WordError(f"Word length must be an integer in [2, {max_n}], got {n!r}")
    return n


def popcount(bits: int) -> int:
    return bin(bits).count("1")


def full_mask(n: int) -> int:
    return (1 << n) - 1


def to_bitstring(bits: int, n: int) -> str:
    return format(bits, f"0{n}b")


def words_conflict(a: int, b: int, mode: ConflictMode) -> bool:
    """Optimized conflict test on raw words.

    A literal conflict (a shared damped descendant) happens exactly when the
    words have equal weight and differ in two positions. Strict mode also
    flags words one decay apart.
    """
    distance = popcount(a ^ b)
    if distance == 2 and popcount(a) == popcount(b):
        return True
    return mode is ConflictMode.STRICT and distance == 1


def conflict_neighbors(bits: int, n: int, mode: ConflictMode) -> Iterator[int]:
    """Yield every word that conflicts with `bits` under `mode`"""
    ones = [i for i in range(n) if bits >> i & 1]
    zeros = [i for i in range(n) if not bits >> i & 1]
    for i in ones:
        for j in zeros:
            yield bits ^ (1 << i) ^ (1 << j)
    if mode is ConflictMode.STRICT:
        for i in range(n):
            yield bits ^ (1 << i)


@dataclass(frozen=True, order=True)
class CodeWord:
    """An n-bit binary word; bit i of the bitstring is qubit i"""
    bits: int
    n: int

    def __post_init__(self):
        check_word_length(self.n)
        if isinstance(self.bits, bool) or not isinstance(self.bits, int) or not 0 <= self.bits < (1 << self.n):
            raise WordError(f"Word value {self.bits!r} does not fit in {self.n} bits")

    @classmethod
    def from_bitstring(cls, text: str) -> "CodeWord":
        text = text.strip()
        if not text or any(c not in "01" for c in text):
            raise WordError(f"Not a bitstring: {text!r}")
        return cls(int(text, 2), len(text))

    @property
    def bitstring(self) -> str:
        return to_bitstring(self.bits, self.n)

    @property
    def weight(self) -> int:
        return popcount(self.bits)

    def complement(self) -> "CodeWord":
        return CodeWord(self.bits ^ full_mask(self.n), self.n)

    def __str__(self) -> str:
        return self.bitstring


def complement(u: CodeWord) -> CodeWord:
    """Flip every bit of u"""
    return u.complement()


def weight(u: CodeWord) -> int:
    return u.weight


def hamming_distance(u: CodeWord, v: CodeWord) -> int:
    if u.n != v.n:
        raise WordError(f"Words have different lengths: {u.n} and {v.n}")
    return popcount(u.bits ^ v.bits)


def damped_descendants(u: CodeWord) -> Set[CodeWord]:
    """All words obtained from u by clearing exactly one set bit"""
    return {CodeWord(u.bits ^ (1 << i), u.n) for i in range(u.n) if u.bits >> i & 1}


def _check_pair(u: CodeWord, v: CodeWord):
    if u.n != v.n:
        raise WordError(f"Words have different lengths: {u.n} and {v.n}")
    if u.bits == v.bits:
        raise WordError(f"Conflict is undefined for a word and itself ({u})")


def conflicts(u: CodeWord, v: CodeWord, mode: ConflictMode = ConflictMode.STRICT) -> bool:
    """Pairwise conflict predicate, distance/weight form"""
    _check_pair(u, v)
    return words_conflict(u.bits, v.bits, mode)


def conflicts_by_enumeration(u: CodeWord, v: CodeWord, mode: ConflictMode = ConflictMode.STRICT) -> bool:
    """Pairwise conflict predicate by enumerating damped descendants"""
    _check_pair(u, v)
    du = damped_descendants(u)
    dv = damped_descendants(v)
    if du & dv:
        return True
    return mode is ConflictMode.STRICT and (v in du or u in dv)


def encoded_qubits(k: int) -> float:
    """log2 of the encoded dimension"""
    if k < 1:
        raise ValueError(f"Encoded dimension must be positive, got {k}")
    return math.log2(k)


@dataclass(frozen=True)
class CodeSet:
    """A finite set S of n-bit words, the code basis being (|u> + |u~>)/sqrt(2)"""
    n: int
    words: Tuple[int, ...]
    mode: ConflictMode = ConflictMode.STRICT

    def __post_init__(self):
        check_word_length(self.n)
        mode = ConflictMode.parse(self.mode)
        limit = 1 << self.n
        values = []
        for word in self.words:
            if isinstance(word, CodeWord):
                if word.n != self.n:
                    raise WordError(f"Word {word} has length {word.n}, expected {self.n}")
                word = word.bits
            if isinstance(word, bool) or not isinstance(word, int) or not 0 <= word < limit:
                raise WordError(f"Word value {word!r} does not fit in {self.n} bits")
            values.append(word)
        if len(set(values)) != len(values):
            raise WordError("Code set lists a word more than once")
        object.__setattr__(self, "words", tuple(sorted(values)))
        object.__setattr__(self, "mode", mode)

    @classmethod
    def from_words(cls, words: Iterable[Union[CodeWord, int, str]], n: Optional[int] = None,
                   mode: Union[str, ConflictMode] = ConflictMode.STRICT) -> "CodeSet":
        """Build a code set from bitstrings, CodeWords or integers"""
        values = []
        for word in words:
            if isinstance(word, str):
                word = CodeWord.from_bitstring(word)
            if isinstance(word, CodeWord):
                if n is None:
                    n = word.n
                elif word.n != n:
                    raise WordError(f"Word {word} has length {word.n}, expected {n}")
                values.append(word.bits)
            else:
                values.append(word)
        if n is None:
            raise WordError("Word length is required when no bitstrings are given")
        return cls(n, tuple(values), ConflictMode.parse(mode))

    @classmethod
    def from_pairs(cls, n: int, representatives: Iterable[int],
                   mode: Union[str, ConflictMode] = ConflictMode.STRICT) -> "CodeSet":
        """Build the union of complement pairs {u, u~}"""
        mask = full_mask(check_word_length(n))
        words: Set[int] = set()
        for rep in representatives:
            words.add(rep)
            words.add(rep ^ mask)
        return cls(n, tuple(words), ConflictMode.parse(mode))

    @property
    def mask(self) -> int:
        return full_mask(self.n)

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def k(self) -> int:
        """Encoded dimension |S|/2"""
        return len(self.words) // 2

    @property
    def codewords(self) -> List[CodeWord]:
        return [CodeWord(w, self.n) for w in self.words]

    @property
    def pair_representatives(self) -> Tuple[int, ...]:
        """Numerically smaller member of each complement pair, ascending"""
        mask = self.mask
        return tuple(sorted({min(w, w ^ mask) for w in self.words}))

    def pair_of(self, word: int) -> int:
        return min(word, word ^ self.mask)

    def codeword_pairs(self) -> List[Tuple[int, int]]:
        mask = self.mask
        return [(rep, rep ^ mask) for rep in self.pair_representatives]

    def __contains__(self, word: Union[int, CodeWord]) -> bool:
        if isinstance(word, CodeWord):
            if word.n != self.n:
                return False
            word = word.bits
        return word in self._word_set

    @property
    def _word_set(self) -> frozenset:
        cached = self.__dict__.get("_cached_word_set")
        if cached is None:
            cached = frozenset(self.words)
            object.__setattr__(self, "_cached_word_set", cached)
        return cached

    def with_mode(self, mode: Union[str, ConflictMode]) -> "CodeSet":
        return CodeSet(self.n, self.words, ConflictMode.parse(mode))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "mode": self.mode.value,
            "words": [to_bitstring(w, self.n) for w in self.words],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CodeSet":
        if not isinstance(data, dict):
            raise WordError("Code set document must be a JSON object")
        missing = [key for key in ("n", "mode", "words") if key not in data]
        if missing:
            raise WordError(f"Code set document is missing: {', '.join(missing)}")
        n = check_word_length(data["n"])
        words = data["words"]
        if not isinstance(words, list):
            raise WordError("'words' must be a list of bitstrings")
        values = []
        for text in words:
            if not isinstance(text, str) or len(text.strip()) != n:
                raise WordError(f"Word {text!r} is not a bitstring of length {n}")
            values.append(CodeWord.from_bitstring(text).bits)
        if values != sorted(values):
            logger.debug("Code set words were not listed in ascending order")
        return cls(n, tuple(values), ConflictMode.parse(data["mode"]))


def load_code_set(path: Union[str, Path]) -> CodeSet:
    """Read a code set JSON file"""
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise WordError(f"Error parsing code set file {path}: {e}") from e
    return CodeSet.from_dict(data)


def save_code_set(code: CodeSet, path: Union[str, Path]) -> Path:
    """Write a code set JSON file (deterministic layout)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(code.to_dict(), f, indent=2)
        f.write("\n")
    return path


def bundled_example_code() -> CodeSet:
    """The (8,12) code of the worked example"""
    return load_code_set(EXAMPLE_CODE_FILE)


@dataclass
class ValidationReport:
    """Outcome of checking complement closure and conflict freedom"""
    n: int
    mode: ConflictMode
    size: int
    closure_violations: List[int] = field(default_factory=list)
    conflict_violations: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.closure_violations and not self.conflict_violations

    @property
    def k(self) -> Optional[int]:
        return self.size // 2 if self.valid else None

    def violation_lines(self) -> List[str]:
        lines = []
        for word in self.closure_violations:
            missing = to_bitstring(word ^ full_mask(self.n), self.n)
            lines.append(f"closure: complement {missing} of {to_bitstring(word, self.n)} is missing")
        for a, b in self.conflict_violations:
            lines.append(
                f"conflict ({self.mode.value}): {to_bitstring(a, self.n)} conflicts with {to_bitstring(b, self.n)}"
            )
        return lines


def validate_code_set(code: CodeSet) -> ValidationReport:
    """Check complement closure and pairwise conflict freedom"""
    report = ValidationReport(n=code.n, mode=code.mode, size=code.size)
    mask = code.mask
    members = code._word_set

    for word in code.words:
        if word ^ mask not in members:
            report.closure_violations.append(word)

    for word in code.words:
        for other in sorted(set(conflict_neighbors(word, code.n, code.mode))):
            if other > word and other in members:
                report.conflict_violations.append((word, other))

    if report.valid:
        logger.debug(f"Code set of {code.size} words is valid, k = {report.k}")
    return report


def require_valid(code: CodeSet) -> ValidationReport:
    """Validate and raise CodeSetError on any violation"""
    report = validate_code_set(code)
    if not report.valid:
        raise CodeSetError(
            f"Code set has {len(report.closure_violations)} missing complements "
            f"and {len(report.conflict_violations)} conflicting pairs",
            report,
        )
    return report


@dataclass
class ConflictGraph:
    """Graph over complement-pair classes; independent sets are valid code sets.

    Vertices are pair representatives (the numerically smaller word). The node
    attribute `internal_conflict` marks pairs whose two members conflict with
    each other; such pairs can never be part of a code.
    """
    n: int
    mode: ConflictMode
    graph: nx.Graph

    @property
    def vertices(self) -> List[int]:
        return sorted(self.graph.nodes)

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return sorted(tuple(sorted(edge)) for edge in self.graph.edges)

    def is_internally_conflicting(self, rep: int) -> bool:
        return bool(self.graph.nodes[rep]["internal_conflict"])

    def usable_vertices(self) -> List[int]:
        return [v for v in self.vertices if not self.is_internally_conflicting(v)]

    def is_independent(self, reps: Iterable[int]) -> bool:
        chosen = list(reps)
        if any(self.is_internally_conflicting(v) for v in chosen):
            return False
        return not self.graph.subgraph(chosen).number_of_edges()

    def code_set(self, reps: Iterable[int]) -> CodeSet:
        return CodeSet.from_pairs(self.n, reps, self.mode)


def build_conflict_graph(n: int, mode: ConflictMode = ConflictMode.STRICT,
                         max_n: int = DEFAULT_GRAPH_MAX_N) -> ConflictGraph:
    """Build the conflict graph over all 2^(n-1) complement-pair classes"""
    check_word_length(n)
    if n > max_n:
        raise ResourceLimitError(
            f"Conflict graph for n={n} exceeds the configured limit n<={max_n} "
            f"({1 << (n - 1)} vertices)"
        )
    mask = full_mask(n)
    graph = nx.Graph()
    for rep in range(1 << (n - 1)):
        graph.add_node(rep, internal_conflict=words_conflict(rep, rep ^ mask, mode))

    for rep in range(1 << (n - 1)):
        for word in (rep, rep ^ mask):
            for other in conflict_neighbors(word, n, mode):
                other_rep = min(other, other ^ mask)
                if other_rep != rep:
                    graph.add_edge(rep, other_rep)

    logger.debug(
        f"Conflict graph n={n} mode={mode.value}: {graph.number_of_nodes()} vertices, "
        f"{graph.number_of_edges()} edges"
    )
    return ConflictGraph(n=n, mode=mode, graph=graph)


def _graph_cache_key(n: int, mode: ConflictMode) -> str:
    return hashlib.sha256(f"adcodes-conflict-graph:v1:n={n}:mode={mode.value}".encode()).hexdigest()


def load_or_build_conflict_graph(n: int, mode: ConflictMode = ConflictMode.STRICT,
                                 cache_dir: Optional[Union[str, Path]] = None,
                                 max_n: int = DEFAULT_GRAPH_MAX_N) -> ConflictGraph:
    """Conflict graph with an optional content-addressed on-disk cache"""
    if cache_dir is None:
        return build_conflict_graph(n, mode, max_n)

    check_word_length(n)
    if n > max_n:
        raise ResourceLimitError(f"Conflict graph for n={n} exceeds the configured limit n<={max_n}")

    path = Path(cache_dir) / f"{_graph_cache_key(n, mode)}.json"
    if path.exists():
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
            if data.get("n") == n and data.get("mode") == mode.value:
                graph = nx.Graph()
                internal = set(data["internal"])
                for rep in range(1 << (n - 1)):
                    graph.add_node(rep, internal_conflict=rep in internal)
                graph.add_edges_from(tuple(edge) for edge in data["edges"])
                logger.debug(f"Loaded conflict graph from cache {path}")
                return ConflictGraph(n=n, mode=mode, graph=graph)
            logger.warning(f"Ignoring cache file {path}: parameters do not match")
        except (OSError, ValueError, KeyError) as e:
            logger.warning(f"Ignoring unreadable cache file {path}: {e}")

    conflict_graph = build_conflict_graph(n, mode, max_n)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump({
                "n": n,
                "mode": mode.value,
                "internal": [v for v in conflict_graph.vertices if conflict_graph.is_internally_conflicting(v)],
                "edges": [list(edge) for edge in conflict_graph.edges],
            }, f)
    except OSError as e:
        logger.warning(f"Could not write conflict graph cache {path}: {e}")
    return conflict_graph


def quantum_hamming_bound(n: int, k_qubits: int, t: int, a: int) -> bool:
    """True iff sum_{j<=t} C(n,j) a^j 2^k <= 2^n (exact integer arithmetic)"""
    for name, value in (("n", n), ("k_qubits", k_qubits), ("t", t), ("a", a)):
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")
    if t > n:
        raise ValueError(f"t={t} exceeds n={n}")
    lhs = sum(math.comb(n, j) * a ** j for j in range(t + 1)) << k_qubits
    return lhs <= 1 << n
