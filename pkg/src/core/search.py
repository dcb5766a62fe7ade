"""
Search for large self-complementary code sets free of damping conflicts.

Greedy search walks complement-pair representatives in a fixed order and
keeps every pair compatible with the pairs already taken. Exact search
solves maximum independent set on the conflict graph with branch and bound
(equivalently, maximum clique on the compatibility graph) using a greedy
colouring bound over integer bitsets.
"""

import csv
import logging
import math
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .codeset import (
    DATA_DIR,
    DEFAULT_GRAPH_MAX_N,
    MAX_WORD_LENGTH,
    CodeSet,
    ConflictMode,
    check_word_length,
    conflict_neighbors,
    full_mask,
    load_or_build_conflict_graph,
    popcount,
    words_conflict,
)
from .exceptions import ADCodesError, ResourceLimitError


logger = logging.getLogger("adcodes.search")

REFERENCE_TABLE_FILE = DATA_DIR / "greedy_reference.csv"
DEFAULT_EXACT_MAX_N = 10
DEFAULT_GREEDY_MAX_N = 20
DEFAULT_TABLE_MAX_N = 16


class SearchStrategy(Enum):
    """Search strategies"""
    GREEDY_LEX = "greedy-lex"
    GREEDY_WEIGHT = "greedy-weight"
    EXACT = "exact"

    @classmethod
    def parse(cls, value: Union[str, "SearchStrategy"]) -> "SearchStrategy":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            choices = ", ".join(s.value for s in cls)
            raise ValueError(f"Unknown search strategy {value!r} (expected one of {choices})") from None

    @property
    def is_greedy(self) -> bool:
        return self is not SearchStrategy.EXACT


@dataclass
class SearchConfig:
    """Search configuration data class"""
    n: int
    mode: ConflictMode = ConflictMode.STRICT
    strategy: SearchStrategy = SearchStrategy.GREEDY_LEX
    time_budget: float = 60.0
    random_seed: int = 0  # reserved for randomized strategies
    exact_max_n: int = DEFAULT_EXACT_MAX_N
    greedy_max_n: int = DEFAULT_GREEDY_MAX_N
    graph_max_n: int = DEFAULT_GRAPH_MAX_N
    cache_dir: Optional[Path] = None
    max_word_length: int = MAX_WORD_LENGTH

    def __post_init__(self):
        self.mode = ConflictMode.parse(self.mode)
        self.strategy = SearchStrategy.parse(self.strategy)
        check_word_length(self.n, self.max_word_length)
        if not self.time_budget > 0:
            raise ValueError(f"time_budget must be positive, got {self.time_budget}")
        if self.strategy is SearchStrategy.EXACT and self.n > self.exact_max_n:
            raise ResourceLimitError(
                f"Exact search is limited to n<={self.exact_max_n}, got n={self.n}"
            )
        if self.strategy.is_greedy and self.n > self.greedy_max_n:
            raise ResourceLimitError(
                f"Greedy search is limited to n<={self.greedy_max_n}, got n={self.n}"
            )


@dataclass
class SearchResult:
    """Result of a code search"""
    code: CodeSet
    k: int
    optimal: bool
    elapsed: float
    strategy: SearchStrategy
    nodes: int = 0

    @property
    def log2k(self) -> Optional[float]:
        return math.log2(self.k) if self.k > 0 else None


def greedy_order(n: int, strategy: SearchStrategy) -> List[int]:
    """Order in which greedy search visits pair representatives"""
    reps = range(1 << (n - 1))
    if strategy is SearchStrategy.GREEDY_WEIGHT:
        return sorted(reps, key=lambda rep: (popcount(rep), rep))
    return list(reps)


def _greedy_pairs(n: int, mode: ConflictMode, order: Iterable[int]) -> List[int]:
    mask = full_mask(n)
    blocked = bytearray(1 << n)
    chosen = []
    for rep in order:
        partner = rep ^ mask
        if blocked[rep] or blocked[partner] or words_conflict(rep, partner, mode):
            continue
        chosen.append(rep)
        for word in (rep, partner):
            for other in conflict_neighbors(word, n, mode):
                blocked[other] = 1
    return chosen


def greedy_search(config: SearchConfig) -> SearchResult:
    """Deterministic greedy construction of a maximal code set"""
    if not config.strategy.is_greedy:
        raise ValueError(f"greedy_search needs a greedy strategy, got {config.strategy.value}")
    start = time.perf_counter()
    chosen = _greedy_pairs(config.n, config.mode, greedy_order(config.n, config.strategy))
    code = CodeSet.from_pairs(config.n, chosen, config.mode)
    elapsed = time.perf_counter() - start
    logger.info(
        f"Greedy search n={config.n} mode={config.mode.value} order={config.strategy.value}: "
        f"k={code.k} in {elapsed:.3f}s"
    )
    return SearchResult(code=code, k=code.k, optimal=False, elapsed=elapsed, strategy=config.strategy)


def is_maximal(code: CodeSet) -> bool:
    """True if no further complement pair can be added without creating a conflict"""
    n, mode, mask = code.n, code.mode, code.mask
    blocked = bytearray(1 << n)
    for word in code.words:
        blocked[word] = 1
        for other in conflict_neighbors(word, n, mode):
            blocked[other] = 1
    for rep in range(1 << (n - 1)):
        partner = rep ^ mask
        if not blocked[rep] and not blocked[partner] and not words_conflict(rep, partner, mode):
            return False
    return True


class _BudgetExhausted(Exception):
    pass


class _CliqueSearch:
    """Maximum clique over bitset adjacency with greedy colouring bounds.

    compat[i] has bit j set when vertices i and j may coexist. Cliques of
    the compatibility graph are independent sets of the conflict graph.
    """

    CHECK_EVERY = 512

    def __init__(self, compat: Sequence[int], deadline: float):
        self.compat = compat
        self.deadline = deadline
        self.best: List[int] = []
        self.nodes = 0

    def run(self, incumbent: Sequence[int]) -> bool:
        self.best = list(incumbent)
        everything = (1 << len(self.compat)) - 1
        try:
            self._expand(everything, [])
        except _BudgetExhausted:
            return False
        return True

    def _color_sort(self, candidates: int) -> Tuple[List[int], List[int]]:
        order: List[int] = []
        bounds: List[int] = []
        color = 0
        uncolored = candidates
        while uncolored:
            color += 1
            available = uncolored
            while available:
                low = available & -available
                v = low.bit_length() - 1
                # same colour class only for mutually incompatible vertices
                available &= ~low & ~self.compat[v]
                uncolored &= ~low
                order.append(v)
                bounds.append(color)
        return order, bounds

    def _expand(self, candidates: int, current: List[int]):
        self.nodes += 1
        if self.nodes % self.CHECK_EVERY == 0 and time.monotonic() > self.deadline:
            raise _BudgetExhausted()

        order, bounds = self._color_sort(candidates)
        for idx in range(len(order) - 1, -1, -1):
            if len(current) + bounds[idx] <= len(self.best):
                return
            v = order[idx]
            current.append(v)
            remaining = candidates & self.compat[v]
            if remaining:
                self._expand(remaining, current)
            elif len(current) > len(self.best):
                self.best = list(current)
                logger.debug(f"New incumbent of {len(self.best)} pairs after {self.nodes} nodes")
            current.pop()
            candidates &= ~(1 << v)


def exact_search(config: SearchConfig) -> SearchResult:
    """Maximum code set by branch and bound on the conflict graph"""
    if config.strategy is not SearchStrategy.EXACT:
        raise ValueError(f"exact_search needs the exact strategy, got {config.strategy.value}")
    start = time.perf_counter()
    deadline = time.monotonic() + config.time_budget

    conflict_graph = load_or_build_conflict_graph(
        config.n, config.mode, config.cache_dir, max_n=config.graph_max_n
    )
    graph = conflict_graph.graph
    vertices = sorted(conflict_graph.usable_vertices(), key=lambda v: (graph.degree(v), v))
    position = {v: i for i, v in enumerate(vertices)}

    everything = (1 << len(vertices)) - 1
    compat = []
    for i, v in enumerate(vertices):
        conflicting = 1 << i
        for neighbor in graph.neighbors(v):
            if neighbor in position:
                conflicting |= 1 << position[neighbor]
        compat.append(everything & ~conflicting)

    # Greedy incumbent: best of both visiting orders
    incumbent: List[int] = []
    for strategy in (SearchStrategy.GREEDY_LEX, SearchStrategy.GREEDY_WEIGHT):
        chosen = _greedy_pairs(config.n, config.mode, greedy_order(config.n, strategy))
        if len(chosen) > len(incumbent):
            incumbent = chosen
    incumbent_idx = [position[rep] for rep in incumbent]

    searcher = _CliqueSearch(compat, deadline)
    completed = searcher.run(incumbent_idx)
    if not completed:
        logger.warning(
            f"Exact search n={config.n} hit its {config.time_budget:g}s budget after "
            f"{searcher.nodes} nodes; returning incumbent k={len(searcher.best)}"
        )

    code = CodeSet.from_pairs(config.n, [vertices[i] for i in searcher.best], config.mode)
    elapsed = time.perf_counter() - start
    logger.info(
        f"Exact search n={config.n} mode={config.mode.value}: k={code.k} "
        f"optimal={completed} nodes={searcher.nodes} in {elapsed:.3f}s"
    )
    return SearchResult(code=code, k=code.k, optimal=completed, elapsed=elapsed,
                        strategy=config.strategy, nodes=searcher.nodes)


def search(config: SearchConfig) -> SearchResult:
    """Run the search named by config.strategy"""
    if config.strategy is SearchStrategy.EXACT:
        return exact_search(config)
    return greedy_search(config)


def load_reference_table(path: Union[str, Path] = REFERENCE_TABLE_FILE) -> Dict[int, int]:
    """Bundled reference values of k by n"""
    with open(path, 'r', encoding='utf-8', newline='') as f:
        return {int(row["n"]): int(row["k"]) for row in csv.DictReader(f)}


def regression_slope(points: Iterable[Tuple[float, float]]) -> Optional[float]:
    """Least-squares slope, None when fewer than two distinct abscissae"""
    pts = list(points)
    xs = np.array([p[0] for p in pts], dtype=float)
    ys = np.array([p[1] for p in pts], dtype=float)
    if len(np.unique(xs)) < 2:
        return None
    slope, _intercept = np.polyfit(xs, ys, 1)
    return float(slope)


def reference_slope(reference: Optional[Dict[int, int]] = None) -> float:
    """Slope of log2 k against n over the reference table"""
    reference = reference if reference is not None else load_reference_table()
    return regression_slope((n, math.log2(k)) for n, k in sorted(reference.items()))


@dataclass
class TableRow:
    n: int
    k: Optional[int]
    reference_k: Optional[int]
    optimal: bool = False
    reason: Optional[str] = None
    code: Optional[CodeSet] = None

    @property
    def log2k(self) -> Optional[float]:
        return math.log2(self.k) if self.k else None


@dataclass
class TableReport:
    """Encoded dimensions over a range of n with the regression slope"""
    rows: List[TableRow] = field(default_factory=list)
    slope: Optional[float] = None

    CSV_HEADER = ("n", "k", "log2k", "reference_k")

    @property
    def produced_rows(self) -> List[TableRow]:
        return [row for row in self.rows if row.k]

    @property
    def failed_rows(self) -> List[TableRow]:
        return [row for row in self.rows if not row.k]

    def csv_rows(self) -> List[List[str]]:
        return [
            [str(row.n), str(row.k), f"{row.log2k:.4f}",
             "" if row.reference_k is None else str(row.reference_k)]
            for row in self.produced_rows
        ]


def rate_table(n_min: int, n_max: int, config: SearchConfig,
               table_max_n: int = DEFAULT_TABLE_MAX_N) -> TableReport:
    """Search every n in [n_min, n_max] and regress log2 k on n"""
    if n_min < 2 or n_min > n_max:
        raise ValueError(f"Bad table range {n_min}..{n_max}")
    if n_max > table_max_n:
        raise ResourceLimitError(f"Table is limited to n<={table_max_n}, got {n_max}")

    reference = load_reference_table()
    report = TableReport()
    for n in range(n_min, n_max + 1):
        try:
            result = search(replace(config, n=n))
        except ADCodesError as e:
            logger.warning(f"No table row for n={n}: {e}")
            report.rows.append(TableRow(n=n, k=None, reference_k=reference.get(n), reason=str(e)))
            continue
        if result.k == 0:
            report.rows.append(TableRow(n=n, k=None, reference_k=reference.get(n),
                                        reason="search produced an empty code"))
            continue
        report.rows.append(TableRow(n=n, k=result.k, reference_k=reference.get(n),
                                    optimal=result.optimal, code=result.code))

    report.slope = regression_slope((row.n, row.log2k) for row in report.produced_rows)
    return report
