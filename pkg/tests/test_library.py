import pytest

from echeck.core import EError, TheoremStatement
from echeck.library import ASSUMED, Library, LibraryEntry, Loader, search_path


def entry(name):
    return LibraryEntry(TheoremStatement(name, (), ()))


def test_register_and_lookup():
    lib = Library([entry("A"), entry("B")])
    assert lib.names() == ["A", "B"] and len(lib) == 2 and "A" in lib
    assert lib.lookup("B").status == ASSUMED
    with pytest.raises(EError, match="duplicate"):
        lib.register(entry("A"))
    with pytest.raises(EError, match="unknown theorem"):
        lib.lookup("C")
    cp = lib.copy()
    cp.register(entry("C"))
    assert "C" not in lib


def test_search_path(monkeypatch, tmp_path):
    monkeypatch.setenv("E_LIBRARY_PATH", str(tmp_path))
    assert search_path(["x"])[0].name == "x"
    assert search_path()[-1] == tmp_path


def test_imports_resolve_through_library_dirs(tmp_path, corpus_dir):
    f = tmp_path / "uses.e"
    f.write_text('import "assumed"\n\ntheorem Z:\n  point a\n  conclude a = a\nproof\n  qed\n')
    loader = Loader(dirs=[corpus_dir])
    (v,) = loader.load(f)
    assert v.ok
    assert "I.4" in loader.library


def test_missing_import_and_cycles(tmp_path):
    (tmp_path / "a.e").write_text('import "b.e"\n')
    (tmp_path / "b.e").write_text('import "a.e"\n')
    with pytest.raises(EError, match="import cycle"):
        Loader().load(tmp_path / "a.e")
    (tmp_path / "c.e").write_text('import "nowhere.e"\n')
    with pytest.raises(EError, match="cannot find"):
        Loader().load(tmp_path / "c.e")
    with pytest.raises(EError, match="cannot read"):
        Loader().load(tmp_path / "missing.e")


def test_files_load_once(corpus_dir):
    loader = Loader()
    loader.load(corpus_dir / "assumed.e")
    first = loader.library.names()
    loader.load(corpus_dir / "assumed.e")
    assert loader.library.names() == first
