import pytest

from wedgelab import catalog


def test_families():
    assert {r.family for r in catalog.ROWS} == set(catalog.FAMILIES)
    assert len(catalog.rows("cayley")) == 5
    with pytest.raises(ValueError):
        catalog.rows("other")


@pytest.mark.parametrize("row, param", [(r, p) for r in catalog.ROWS for p in r.params],
                         ids=lambda v: v.label if isinstance(v, catalog.CatalogRow) else str(v))
def test_realized_rows(row, param):
    c = catalog.check_row(row, param)
    assert c.h_fixed
    assert c.g1_dim == c.g1_expected
    assert c.rank == c.rank_expected


def test_sp4_and_so23_g1_dimensions():
    sp = next(r for r in catalog.ROWS if r.label == "sp(2r)")
    so = next(r for r in catalog.ROWS if r.label == "so(2,d)")
    assert catalog.g1_dimension(sp.build(2)) == 3
    assert catalog.g1_dimension(so.build(3)) == 3


def test_unrealized_rows_are_data_only():
    data_only = [r for r in catalog.ROWS if r.build is None]
    assert any("e_7" in r.g for r in data_only)
    with pytest.raises(ValueError):
        catalog.check_row(data_only[0], 1)
    assert data_only[0].to_dict()["realized_params"] == []
