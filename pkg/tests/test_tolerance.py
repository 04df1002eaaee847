import pytest

from slicedev import tolerance
from slicedev.tolerance import DEFAULT, Tolerance, from_env, override, parse, pinned


def test_defaults():
    assert DEFAULT == Tolerance(angle=1e-9, length=1e-9, orient=1e-12)
    assert tolerance.current() == DEFAULT


def test_override_is_scoped():
    with override(angle=1e-6) as tol:
        assert tol.angle == 1e-6 and tolerance.current().length == 1e-9
        with pinned():
            assert tolerance.current() == DEFAULT
        assert tolerance.current().angle == 1e-6
    assert tolerance.current() == DEFAULT


def test_override_restores_on_error():
    with pytest.raises(RuntimeError):
        with override(length=1.0):
            raise RuntimeError
    assert tolerance.current() == DEFAULT


@pytest.mark.parametrize("text,expected", [
    ("1e-7", Tolerance(angle=1e-7, length=1e-7)),
    ("len=1e-8", Tolerance(length=1e-8)),
    ("len=1e-8,angle=2e-8", Tolerance(angle=2e-8, length=1e-8)),
    ("eps_angle=3e-9, orient=1e-14", Tolerance(angle=3e-9, orient=1e-14)),
    ("", DEFAULT),
])
def test_parse(text, expected):
    assert parse(text) == expected


@pytest.mark.parametrize("text", ["bogus=1", "len=abc", "fast"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse(text)


def test_from_env():
    assert from_env({}) == DEFAULT
    assert from_env({"SLICEDEV_TOLERANCE": "angle=1e-5"}).angle == 1e-5
