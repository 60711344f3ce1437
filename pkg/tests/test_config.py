import pytest

from LatticeAvoid.config import _clamp, get_env


def test_get_env_default(monkeypatch):
    monkeypatch.delenv("AVL_SAMPLE", raising=False)
    assert get_env("AVL_SAMPLE", 7, is_int=True) == 7
    assert get_env("AVL_SAMPLE") is None


def test_get_env_integer_with_separators(monkeypatch):
    monkeypatch.setenv("AVL_SAMPLE", "2_000_000")
    assert get_env("AVL_SAMPLE", 1, is_int=True) == 2_000_000


def test_get_env_bad_integer_falls_back(monkeypatch):
    monkeypatch.setenv("AVL_SAMPLE", "lots")
    assert get_env("AVL_SAMPLE", 60, is_int=True) == 60


def test_get_env_booleans(monkeypatch):
    for text, expected in (("yes", True), ("1", True), ("off", False), ("nope", False)):
        monkeypatch.setenv("AVL_SAMPLE", text)
        assert get_env("AVL_SAMPLE", is_bool=True) is expected


def test_clamp():
    assert _clamp("AVL_SAMPLE", 5, 10, 256) == 10
    assert _clamp("AVL_SAMPLE", 999, 10, 256) == 256
    assert _clamp("AVL_SAMPLE", 60, 10, 256) == 60


def test_get_env_has_no_required_mode():
    # every tunable carries a default, so a missing variable never exits
    assert get_env("AVL_ABSENT", 7, is_int=True) == 7
    with pytest.raises(TypeError):
        get_env("AVL_ABSENT", required=True)
