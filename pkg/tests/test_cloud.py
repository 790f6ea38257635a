import csv
import io

import numpy as np
import pytest

from wedgelab import cloud, models, quadric


def parse(text):
    return list(csv.reader(io.StringIO(text)))


def test_supported_pairs():
    assert cloud.supported(models.get_spec("dS3"), "tube")
    assert cloud.supported(models.get_spec("sl2-cayley"), "kms")
    assert not cloud.supported(models.get_spec("sl2-cayley"), "tube")
    assert cloud.supported(models.get_spec("sp4"), "positivity")
    assert not cloud.supported(models.get_spec("sp4"), "kms")
    assert not cloud.supported(models.get_spec("su22"), "positivity")


def test_unsupported_raises():
    with pytest.raises(cloud.UnsupportedPair):
        cloud.point_cloud("sp4", "kms", 5, 0)


def test_desitter_cloud_is_reproducible_and_prefix_stable():
    h1, r1 = cloud.point_cloud("dS2", "positivity", 100, 7)
    h2, r2 = cloud.point_cloud("dS2", "positivity", 100, 7)
    _, r3 = cloud.point_cloud("dS2", "positivity", 40, 7)
    assert cloud.to_csv(h1, r1) == cloud.to_csv(h2, r2)
    assert len(r1) == 100 and r1[:40] == r3
    assert h1 == ["index", "source", "x0", "x1", "x2", "polar", "positivity", "kms"]


def test_desitter_cloud_columns_agree_off_boundary():
    header, rows = cloud.point_cloud("dS2", "polar", 60, 1)
    for row in rows:
        x = np.array(row[2:5], dtype=float)
        assert row[1] == "polar"
        assert np.isclose(quadric.lorentz(x, x), -1.0)
        if abs(quadric.wedge_slack(x)) > 1e-6:
            assert row[5] == row[6] == row[7] == bool(quadric.in_right_wedge(x))


def test_sl2_kms_routes_through_desitter():
    header, rows = cloud.point_cloud("sl2x2", "kms", 20, 3)
    assert "x1_2" in header and header[-3:] == ["polar", "positivity", "kms"]
    assert all(len(r) == len(header) for r in rows)


def test_tube_cloud():
    header, rows = cloud.point_cloud("dS3", "tube", 80, 2)
    assert header[-3:] == ["tube", "fixed_tube", "wedge_image"]
    for r in rows:
        assert r[-2] == r[-1]
    assert any(r[-2] for r in rows) and any(r[-3] and not r[-2] for r in rows)


def test_positivity_cloud_for_cone_specs():
    header, rows = cloud.point_cloud("sp4", "positivity", 30, 0)
    assert header[0:2] == ["index", "source"]
    assert all(r[-1] for r in rows if r[1] == "chart")


def test_csv_cells():
    text = cloud.to_csv(["a", "b", "c"], [[1, 0.1, True], [2, np.float64(1e-20), np.bool_(False)]])
    assert parse(text) == [["a", "b", "c"], ["1", "0.1", "true"], ["2", "1e-20", "false"]]
