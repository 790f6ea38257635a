import pytest

from wedgelab import suites


def test_run_config_validation():
    with pytest.raises(ValueError):
        suites.RunConfig(n=-1)
    with pytest.raises(ValueError):
        suites.RunConfig(seed=2**64)


def test_report_helpers():
    rep = suites.SuiteReport("x", 1, 0)
    rep.below("a", 0.5, 1.0)
    rep.equal("b", 2, 3)
    rep.holds("c", True)
    assert [c.name for c in rep.failures] == ["b"]
    assert not rep.passed
    d = rep.to_dict()
    assert d["failures"] == 1 and d["checks"][1]["detail"] == {"expected": 3}


@pytest.mark.parametrize("suite", suites.SUITES)
def test_each_suite_passes_small(suite):
    (rep,) = suites.run(suite, suites.RunConfig(n=12, seed=1))
    assert rep.passed, [c.name for c in rep.failures]


def test_regularity_scan_plants_singular_points():
    scan = suites.regularity_scan("sp4", 40, 2)
    assert scan["mismatches"] == {"exp": 0, "polar": 0}
    assert scan["singular"]["exp"] > 0 and scan["singular"]["polar"] > 0


def test_kernel_scan_has_nontrivial_cases():
    scan = suites.kernel_formula_scan(suites.kernel_formula_cases(5, 0, per_plant=1))
    assert scan["nontrivial"] >= len(suites.PLANTED)
    assert scan["dimension_mismatches"] == 0
