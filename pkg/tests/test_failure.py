import pytest

from minorkit.failure import EmbeddingFailed, FailureReport, inequality


def test_inequality_rendering():
    assert inequality(3, "<", 5, "kappa") == "kappa = 3 < 5"
    assert inequality(0.5, ">=", 0.25) == "0.5 >= 0.25"


def test_report_roundtrip_and_tagging():
    r = FailureReport("cores", "ran out", ["x = 1 < 2"], 7, {"B": 3})
    assert FailureReport.from_dict(r.to_dict()) == r
    t = r.tagged("sparse")
    assert t.stage == "sparse/cores" and t.violated == r.violated and t.details == r.details
    assert str(r) == "cores: ran out [x = 1 < 2]"
    assert str(FailureReport("s", "why")) == "s: why"


def test_exception_carries_report():
    r = FailureReport("dense/precondition", "too small")
    with pytest.raises(EmbeddingFailed) as info:
        raise EmbeddingFailed(r)
    assert info.value.report is r
    assert "too small" in str(info.value)
