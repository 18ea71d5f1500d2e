"""JSON run manifests written next to CLI outputs."""

from __future__ import annotations

import hashlib
import json
import platform
import subprocess
from datetime import datetime, timezone
from pathlib import Path

from . import __version__


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def git_revision(cwd=None) -> str | None:
    """HEAD commit of the enclosing git checkout, if any."""
    try:
        out = subprocess.run(["git", "rev-parse", "HEAD"], cwd=cwd or Path(__file__).parent,
                             capture_output=True, text=True, timeout=5)
    except (OSError, subprocess.SubprocessError):
        return None
    return out.stdout.strip() or None if out.returncode == 0 else None


def manifest_path(output) -> Path:
    output = Path(output)
    return output.with_name(output.name + ".manifest.json")


def build_manifest(subcommand: str, params: dict, *, seed=None, fixtures=(), outputs=()) -> dict:
    return {
        "subcommand": subcommand,
        "params": params,
        "seed": seed,
        "fixtures": {str(p): sha256_file(p) for p in fixtures},
        "outputs": [str(p) for p in outputs],
        "tool_version": __version__,
        "git_revision": git_revision(),
        "python": platform.python_version(),
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }


def write_manifest(path, manifest: dict) -> Path:
    path = Path(path)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return path
