"""
Display utilities for ADCodes terminal output
"""

import sys
from typing import Any, Dict, List, Optional

from colorama import Fore, Style
from tabulate import tabulate


class DisplayUtils:
    """Utility class for consistent display formatting"""

    COLORS = {
        'red': Fore.RED,
        'green': Fore.GREEN,
        'yellow': Fore.YELLOW,
        'blue': Fore.BLUE,
        'cyan': Fore.CYAN,
        'white': Fore.WHITE,
    }

    @classmethod
    def _use_color(cls) -> bool:
        isatty = getattr(sys.stdout, "isatty", None)
        return bool(isatty and isatty())

    @classmethod
    def print_color(cls, text: str, color: str = 'white', bold: bool = False):
        """Print colored text, plain when stdout is not a terminal"""
        if not cls._use_color():
            print(text)
            return
        bold_code = Style.BRIGHT if bold else ''
        print(f"{bold_code}{cls.COLORS.get(color, '')}{text}{Style.RESET_ALL}")

    @classmethod
    def print_header(cls, text: str):
        """Print header with decoration"""
        print("\n" + "=" * 60)
        cls.print_color(f"  {text}", 'cyan', bold=True)
        print("=" * 60)

    @classmethod
    def print_success(cls, text: str):
        cls.print_color(f"✓ {text}", 'green')

    @classmethod
    def print_error(cls, text: str):
        cls.print_color(f"✗ {text}", 'red')

    @classmethod
    def print_warning(cls, text: str):
        cls.print_color(f"⚠ {text}", 'yellow')

    @classmethod
    def print_info(cls, text: str):
        cls.print_color(f"ℹ {text}", 'blue')

    @classmethod
    def print_table(cls, data: List[List[Any]], headers: List[str],
                    title: Optional[str] = None, tablefmt: str = "grid"):
        """Print data in a formatted table"""
        if title:
            cls.print_header(title)
        print(tabulate(data, headers=headers, tablefmt=tablefmt))

    @classmethod
    def print_key_values(cls, values: Dict[str, Any], title: Optional[str] = None):
        """Print name/value pairs as a two-column table"""
        cls.print_table([[key, value] for key, value in values.items()],
                        headers=["Quantity", "Value"], title=title, tablefmt="simple")

    @classmethod
    def print_check(cls, passed: bool, text: str):
        """Print a pass/fail line"""
        if passed:
            cls.print_success(f"PASS {text}")
        else:
            cls.print_error(f"FAIL {text}")
