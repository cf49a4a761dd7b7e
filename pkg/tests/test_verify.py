import pytest

from pairspace import verify


def test_registry_ids_unique_and_tagged():
    ids = [c.id for c in verify.REGISTRY]
    assert len(ids) == len(set(ids))
    modules = {c.module for c in verify.REGISTRY}
    assert modules == {"numerics", "cartan", "states", "observables", "density", "measurement",
                       "group", "correlations"}
    assert all(c.paper_eq for c in verify.REGISTRY)


def test_select():
    assert len(verify.select(None)) == len(verify.REGISTRY)
    group = verify.select("group")
    assert group and all(c.module == "group" for _, c in group)
    one = verify.select("group.conversion")
    assert [c.id for _, c in one] == ["group.conversion"]
    assert verify.select("nope") == []


def test_run_checks_shape_and_determinism():
    a = verify.run_checks("cartan", samples=5)
    b = verify.run_checks("cartan", samples=5)
    assert a == b
    for c in a:
        assert set(c) == {"id", "paper_eq", "residual", "pass"}
        assert c["pass"]


def test_exact_checks_are_zero():
    exact = {c.id for c in verify.REGISTRY if c.exact}
    for c in verify.run_checks(None, samples=3):
        if c["id"] in exact:
            assert c["residual"] == 0


def test_corrupt_fails_only_target():
    out = verify.run_checks("measurement", samples=3, corrupt="measurement.completeness")
    assert [c["id"] for c in out if not c["pass"]] == ["measurement.completeness"]


def test_tight_tolerance_can_fail():
    out = verify.run_checks("numerics", tol=1e-30, samples=20)
    assert not all(c["pass"] for c in out)
    with pytest.raises(ValueError):
        verify.run_checks("numerics", tol=-1.0)
