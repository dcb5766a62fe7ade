"""
Run manifests: what a command was asked to do and what it wrote
"""

import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union


def file_digest(path: Union[str, Path]) -> str:
    """sha256 of a file's contents"""
    digest = hashlib.sha256()
    with open(path, 'rb') as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class RunManifest:
    """Parameters, version, timing and output digests of one command"""
    command: str
    parameters: Dict[str, Any]
    version: str
    started: float = field(default_factory=time.perf_counter)
    wall_time: Optional[float] = None
    outputs: Dict[str, str] = field(default_factory=dict)
    system: Dict[str, str] = field(default_factory=dict)

    def record_output(self, path: Union[str, Path]) -> str:
        digest = file_digest(path)
        self.outputs[str(path)] = f"sha256:{digest}"
        return digest

    def finish(self) -> "RunManifest":
        self.wall_time = time.perf_counter() - self.started
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "version": self.version,
            "system": dict(sorted(self.system.items())),
            "wall_time_seconds": self.wall_time,
            "outputs": dict(sorted(self.outputs.items())),
        }

    def write(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        if self.wall_time is None:
            self.finish()
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(self.to_dict(), f, indent=2, sort_keys=False, default=str)
            f.write("\n")
        return path
