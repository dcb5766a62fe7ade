"""
Shared fixtures for the ADCodes test suite
"""

import sys
from pathlib import Path

import pytest

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from core.codeset import CodeSet, ConflictMode, bundled_example_code


@pytest.fixture
def code_4_2():
    """The (4,2) code {0000, 1111, 0011, 1100}"""
    return CodeSet.from_words(["0000", "1111", "0011", "1100"], mode=ConflictMode.STRICT)


@pytest.fixture
def literal_six():
    """Six words that are conflict-free only under the literal reading"""
    return CodeSet.from_words(["0000", "1111", "0001", "1110", "0011", "1100"], mode=ConflictMode.LITERAL)


@pytest.fixture
def code_8_12():
    return bundled_example_code()


@pytest.fixture
def single_pair_code():
    return CodeSet.from_words(["000", "111"])
