import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from kldesign import Design, DesignFormatError, SeededRng, read_design, uniform_point, validate, write_design
from kldesign.design import design_to_csv, parse_design


def test_boundary_values_are_valid():
    report = validate(Design([[0.0], [1.0]]))
    assert report.ok
    assert report.out_of_range == [] and report.duplicates == []


def test_out_of_range_reported():
    report = validate(Design([[1.5]]))
    assert not report.ok
    assert report.out_of_range == [(0, 0)]


def test_duplicates_are_warnings():
    report = validate(Design([[0.2, 0.3], [0.2, 0.3]]))
    assert report.ok
    assert report.duplicates == [(0, 1)]


def test_duplicate_groups():
    pts = [[0.1], [0.5], [0.1], [0.7], [0.1]]
    assert validate(Design(pts)).duplicates == [(0, 2), (0, 4), (2, 4)]


def test_design_is_immutable():
    d = Design([[0.1, 0.2], [0.3, 0.4]])
    with pytest.raises(ValueError):
        d.points[0, 0] = 0.5
    assert (d.n, d.d) == (2, 2)


def test_design_rejects_non_finite():
    with pytest.raises(ValueError):
        Design([[np.nan, 0.1]])


def test_round_trip(tmp_path):
    design = Design(SeededRng(3).generator().random((30, 3)))
    path = tmp_path / "d.csv"
    write_design(design, path)
    assert read_design(path) == design
    assert path.read_text().splitlines()[0] == "x1,x2,x3"


def test_bad_row_width(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x1,x2,x3\n0.1,0.2,0.3\n0.1,0.2,0.3,0.4\n")
    with pytest.raises(DesignFormatError, match="row 2: expected 3 columns"):
        read_design(path)


def test_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(DesignFormatError, match="no data rows"):
        read_design(path)
    path.write_text("x1,x2\n")
    with pytest.raises(DesignFormatError, match="no data rows"):
        read_design(path)


@pytest.mark.parametrize("body, message", [
    ("x1,x2\n0.1,abc\n", "row 1, column 2: non-numeric"),
    ("x1,x2\n0.1,0.2\n0.3,1.2\n", "row 2, column 2: value 1.2 outside"),
])
def test_parse_errors_name_the_cell(body, message):
    with pytest.raises(DesignFormatError, match=message):
        parse_design(body)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 20), st.integers(1, 6)),
              elements=st.floats(0.0, 1.0, allow_subnormal=True)))
def test_round_trip_property(points):
    design = Design(points)
    again = parse_design(design_to_csv(design))
    assert again == design
    assert design_to_csv(again) == design_to_csv(design)


def test_uniform_point_deterministic():
    a = uniform_point(SeededRng(42), 3)
    b = uniform_point(SeededRng(42), 3)
    assert a.shape == (3,)
    assert np.array_equal(a, b)


def test_uniform_point_mean_and_range():
    gen = SeededRng(7).generator()
    draws = np.array([uniform_point(gen, 1)[0] for _ in range(100_000)])
    assert np.all((draws >= 0) & (draws <= 1))
    assert abs(draws.mean() - 0.5) < 0.01


def test_uniform_point_rejects_bad_dimension():
    with pytest.raises(ValueError):
        uniform_point(SeededRng(1), 0)


def test_streams_are_independent_and_stable():
    base = SeededRng(99)
    a = base.substream(0).generator().random(4)
    b = base.substream(1).generator().random(4)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, SeededRng(99, (0,)).generator().random(4))
    assert SeededRng(99, 0) == SeededRng(99, (0,))


def test_seed_range():
    with pytest.raises(ValueError):
        SeededRng(-1)
    SeededRng(2**64 - 1)


def test_pcg64_stream_is_pinned():
    # frozen first draws; a change here breaks reproducibility of saved runs
    assert SeededRng(0).generator().random(2).tolist() == [0.6369616873214543, 0.2697867137638703]
    assert SeededRng(0, (1,)).generator().random(1).tolist() == [0.6771968569751019]
