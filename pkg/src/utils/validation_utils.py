"""
Validation and parsing helpers for command-line values
"""

import math
from typing import List, Tuple


GRID_TOL = 1e-12


class ValidationUtils:
    """Utility class for argument validation"""

    @staticmethod
    def parse_gamma_grid(text: str) -> List[float]:
        """Parse START:STEP:END into an ascending grid that includes END (within 1e-12)"""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"Grid must look like START:STEP:END, got {text!r}")
        try:
            start, step, end = (float(p) for p in parts)
        except ValueError:
            raise ValueError(f"Grid values must be numbers, got {text!r}") from None
        if not all(math.isfinite(v) for v in (start, step, end)):
            raise ValueError(f"Grid values must be finite, got {text!r}")
        if step <= 0:
            raise ValueError(f"Grid step must be positive, got {step}")
        if end < start:
            raise ValueError(f"Grid end {end} is below its start {start}")

        count = int(math.floor((end - start + GRID_TOL) / step)) + 1
        grid = [round(start + i * step, 12) for i in range(count)]
        if grid[-1] > end:
            grid[-1] = end
        return grid

    @staticmethod
    def parse_gamma_list(text: str) -> List[float]:
        """Parse a comma-separated list of damping probabilities in (0, 1)"""
        values = []
        for item in text.split(","):
            item = item.strip()
            if not item:
                continue
            try:
                value = float(item)
            except ValueError:
                raise ValueError(f"Not a number: {item!r}") from None
            if not 0.0 < value < 1.0:
                raise ValueError(f"Damping probability {value} outside (0, 1)")
            values.append(value)
        if not values:
            raise ValueError("Empty gamma list")
        return values

    @staticmethod
    def validate_range(n_min: int, n_max: int, lower: int, upper: int) -> Tuple[int, int]:
        """Check lower <= n_min <= n_max <= upper"""
        if n_min > n_max:
            raise ValueError(f"Range start {n_min} is above its end {n_max}")
        if n_min < lower or n_max > upper:
            raise ValueError(f"Range {n_min}..{n_max} outside supported {lower}..{upper}")
        return n_min, n_max
