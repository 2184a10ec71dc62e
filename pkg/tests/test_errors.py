import pytest

from errors import (
    AmbiguousClassError,
    ArityMismatchError,
    ConfigError,
    KernelError,
    LiftObstructedError,
    ManifestError,
    ParseError,
    SingularMatrixError,
)


@pytest.mark.parametrize("cls", [ArityMismatchError, SingularMatrixError, ConfigError, ParseError])
def test_all_failures_are_kernel_errors(cls):
    assert issubclass(cls, KernelError)


def test_value_error_compatibility():
    assert issubclass(ParseError, ValueError)
    assert issubclass(ArityMismatchError, ValueError)
    assert not issubclass(SingularMatrixError, ValueError)


def test_parse_error_line_prefix():
    err = ParseError("bad token", line=4)
    assert str(err) == "line 4: bad token"
    assert err.line == 4
    assert ParseError("bad token").line is None


def test_manifest_error_is_parse_error():
    err = ManifestError("unknown command", line=2)
    assert isinstance(err, ParseError)
    assert str(err).startswith("line 2:")


def test_structured_payloads():
    assert LiftObstructedError("stuck", step=3).step == 3
    err = AmbiguousClassError("two classes", [(4, "a"), (5, "b")])
    assert err.candidates == [(4, "a"), (5, "b")]
