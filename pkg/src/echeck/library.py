"""Theorem registry and loading of script files with their imports."""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

from .core import EError, TheoremStatement

PROVED, ASSUMED, FAILED = "proved", "assumed", "failed"


@dataclass(frozen=True)
class LibraryEntry:
    statement: TheoremStatement
    status: str = ASSUMED
    location: str = ""
    note: str = field(default="", compare=False)

    @property
    def name(self) -> str:
        return self.statement.name


class Library:
    """Theorems available for application, in registration order."""

    def __init__(self, entries=()):
        self._entries: dict[str, LibraryEntry] = {}
        for e in entries:
            self.register(e)

    def register(self, entry: LibraryEntry):
        if entry.name in self._entries:
            raise EError(f"duplicate theorem name '{entry.name}'")
        self._entries[entry.name] = entry

    def lookup(self, name: str) -> LibraryEntry:
        try:
            return self._entries[name]
        except KeyError:
            raise EError(f"unknown theorem '{name}'") from None

    def __contains__(self, name) -> bool:
        return name in self._entries

    def __len__(self):
        return len(self._entries)

    def names(self) -> list[str]:
        return list(self._entries)

    def entries(self) -> list[LibraryEntry]:
        return list(self._entries.values())

    def statements(self) -> dict[str, TheoremStatement]:
        return {n: e.statement for n, e in self._entries.items()}

    def copy(self) -> "Library":
        lib = Library()
        lib._entries = dict(self._entries)
        return lib


def search_path(extra=()) -> list[Path]:
    """Library directories: explicit ones first, then E_LIBRARY_PATH."""
    dirs = [Path(d) for d in extra if d]
    env = os.environ.get("E_LIBRARY_PATH", "")
    dirs += [Path(d) for d in env.split(os.pathsep) if d]
    return dirs


def resolve_import(name: str, base: Path, dirs) -> Path:
    cands = [name] if name.endswith(".e") else [name, name + ".e"]
    for d in [base] + list(dirs):
        for c in cands:
            p = Path(d) / c
            if p.is_file():
                return p.resolve()
    raise EError(f"cannot find imported file '{name}'")


class Loader:
    """Loads script files into one library, checking proofs along the way.

    Each file is processed once; its imports are loaded first. Verdicts are
    kept per resolved path.
    """

    def __init__(self, library: Library | None = None, dirs=(), trace=False):
        self.library = library or Library()
        self.dirs = list(dirs)
        self.trace = trace
        self.verdicts: dict[Path, list] = {}
        self._loading: list[Path] = []

    def load(self, path) -> list:
        from .engine import check_script
        from .parser import ParseError, parse, scan_imports

        path = Path(path).resolve()
        if path in self.verdicts:
            return self.verdicts[path]
        if path in self._loading:
            chain = " -> ".join(p.name for p in self._loading + [path])
            raise EError(f"import cycle: {chain}", filename=str(path))
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as e:
            raise EError(f"cannot read file: {e.strerror}", filename=str(path)) from None
        except UnicodeDecodeError:
            raise EError("file is not valid UTF-8", filename=str(path)) from None
        self._loading.append(path)
        try:
            for name in scan_imports(text, str(path)):
                try:
                    dep = resolve_import(name, path.parent, self.dirs)
                except EError as e:
                    raise ParseError(e.message, filename=str(path)) from None
                self.load(dep)
            script = parse(text, str(path), env=self.library.statements())
            verdicts = check_script(script, self.library, trace=self.trace)
        finally:
            self._loading.pop()
        self.verdicts[path] = verdicts
        return verdicts
