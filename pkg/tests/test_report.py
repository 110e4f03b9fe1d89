import csv
import io
import os

import numpy as np
import pytest

from growthops import report
from growthops.criteria import CriterionReport, RadialTrace
from growthops.sampling import boundary_radii

R = boundary_radii(3, 8)


def _reports():
    t1 = RadialTrace("B^1_0", 0, R, 1.0 / (1 + np.arange(R.size)))
    t2 = RadialTrace("singular_k1", 1, R, 2.0 ** np.arange(R.size))
    return [CriterionReport("A2", [t1, t2], "DivergentEvidence", 3.5, seed=0)]


def test_csv_layout_and_exact_floats():
    text = report.csv_text(_reports())
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == report.CSV_COLUMNS
    assert len(rows) == 1 + 2 * R.size
    assert rows[1][0] == "A2:B^1_0"
    assert float(rows[1][3]) == R[0] and float(rows[2][4]) == 0.5


def test_svg_is_deterministic():
    t = _reports()[0].traces[1]
    a, b = report.trace_svg(t), report.trace_svg(t)
    assert a == b and a.lstrip().startswith("<?xml")
    assert "Date" not in a.split("<svg")[0]


def test_write_report(tmp_path):
    paths = report.write_report(tmp_path / "out", _reports(), ["# header"])
    names = sorted(os.path.basename(p) for p in paths)
    assert "criteria.csv" in names and "summary.txt" in names
    assert "A2_singular_k1_j1.svg" in names
    assert (tmp_path / "out" / "summary.txt").read_text().startswith("# header")
    assert not [p for p in os.listdir(tmp_path / "out") if p.startswith(".tmp-")]


def test_atomic_write_leaves_no_partial_file(tmp_path):
    target = tmp_path / "x.txt"
    report.atomic_write(target, "old")

    class Boom:
        pass

    with pytest.raises(TypeError):
        report.atomic_write(target, Boom())
    assert target.read_text() == "old"
    assert os.listdir(tmp_path) == ["x.txt"]


def test_slug():
    assert report.slug("A2: B^1_0") == "A2_B_1_0"
    assert report.slug("***") == "trace"
