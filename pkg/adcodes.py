#!/usr/bin/env python3
"""
ADCodes - self-complementary nonadditive codes for the amplitude damping channel

Launcher for the command-line interface in src/main.py.
"""

import sys
from pathlib import Path

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent / "src"))

from main import main


if __name__ == "__main__":
    sys.exit(main())
