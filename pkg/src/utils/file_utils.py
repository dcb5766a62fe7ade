"""
File utility functions for ADCodes
"""

import csv
import io
import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Iterable, Sequence


logger = logging.getLogger("adcodes.files")


class FileUtils:
    """Utility class for file operations"""

    @staticmethod
    def ensure_directory(path: str) -> bool:
        """Ensure a directory exists, create if it doesn't"""
        if not path:
            return True
        try:
            Path(path).mkdir(parents=True, exist_ok=True)
            return True
        except OSError as e:
            logger.error(f"Error creating directory {path}: {e}")
            return False

    @staticmethod
    def write_json_file(file_path: str, data: Dict[str, Any], indent: int = 2) -> bool:
        """Write data to a JSON file with a trailing newline"""
        return FileUtils.write_text_file(
            file_path, json.dumps(data, indent=indent, ensure_ascii=False) + "\n"
        )

    @staticmethod
    def write_text_file(file_path: str, content: str) -> bool:
        """Write content to a text file"""
        try:
            FileUtils.ensure_directory(os.path.dirname(str(file_path)))
            with open(file_path, 'w', encoding='utf-8', newline='\n') as f:
                f.write(content)
            return True
        except OSError as e:
            logger.error(f"Error writing file {file_path}: {e}")
            return False

    @staticmethod
    def write_csv_file(file_path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> bool:
        """Write a CSV file with Unix line endings"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return FileUtils.write_text_file(file_path, buffer.getvalue())
