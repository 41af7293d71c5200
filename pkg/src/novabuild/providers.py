"""File providers: the read-only view of the built app's output directory
that the validator and inliner consume.

Paths handed to a provider are root-relative POSIX paths that already passed
normalization; providers enforce containment so a crafted reference can never
read outside the root.
"""

from __future__ import annotations

from pathlib import Path
from typing import Protocol


class ProviderError(Exception):
    """Raised when a path cannot be served (missing or outside the root)."""


class FileProvider(Protocol):
    def exists(self, rel_path: str) -> bool: ...

    def read_bytes(self, rel_path: str) -> bytes: ...


class DirectoryFileProvider:
    """Serves files from a directory on disk, refusing escapes via symlinks
    or residual ``..`` segments."""

    def __init__(self, root: str | Path):
        self.root = Path(root).resolve()

    def _resolve(self, rel_path: str) -> Path:
        candidate = (self.root / rel_path).resolve()
        if candidate != self.root and self.root not in candidate.parents:
            raise ProviderError(f"path escapes root: {rel_path}")
        return candidate

    def exists(self, rel_path: str) -> bool:
        try:
            return self._resolve(rel_path).is_file()
        except (ProviderError, OSError):
            return False

    def read_bytes(self, rel_path: str) -> bytes:
        path = self._resolve(rel_path)
        if not path.is_file():
            raise ProviderError(f"file not found: {rel_path}")
        return path.read_bytes()


class InMemoryFileProvider:
    """Dict-backed provider for tests; keys are root-relative POSIX paths."""

    def __init__(self, files: dict[str, bytes | str]):
        self.files: dict[str, bytes] = {
            path: data.encode("utf-8") if isinstance(data, str) else data
            for path, data in files.items()
        }

    def exists(self, rel_path: str) -> bool:
        return rel_path in self.files

    def read_bytes(self, rel_path: str) -> bytes:
        try:
            return self.files[rel_path]
        except KeyError:
            raise ProviderError(f"file not found: {rel_path}") from None
