import numpy as np

from corrwalk import RegimeLabel, initial_state_symmetric
from corrwalk.io import format_value, write_csv, write_phase_csv, write_state_csv


def test_format_value_round_trips_floats():
    for x in (0.1, 1 / 3, 1e-17, 123456.789, np.float64(2.5000000000000004)):
        assert float(format_value(x)) == float(x)


def test_format_value_kinds():
    assert format_value(3) == "3"
    assert format_value(np.int64(7)) == "7"
    assert format_value(True) == "true"
    assert format_value(RegimeLabel.BALLISTIC) == "ballistic"
    assert format_value("abc") == "abc"


def test_write_csv_lf_and_header(tmp_path):
    path = write_csv(tmp_path / "x.csv", ("a", "b"), [(1, 0.5), (2, 0.25)])
    raw = path.read_bytes()
    assert raw == b"a,b\n1,0.5\n2,0.25\n"


def test_write_state_csv_columns(tmp_path):
    state = initial_state_symmetric(4)
    path = write_state_csv(tmp_path / "state.csv", state)
    lines = path.read_text().splitlines()
    assert lines[0] == "n,re_up,im_up,re_down,im_down"
    assert len(lines) == 5
    center = lines[2].split(",")  # site 2 = 4 // 2
    assert float(center[1]) == 1 / np.sqrt(2)
    assert float(center[4]) == 1 / np.sqrt(2)


def test_write_phase_csv_one_based_index(tmp_path):
    path = write_phase_csv(tmp_path / "t.csv", np.array([0.5, 1.5]), value_label="V")
    assert path.read_text() == "j,V\n1,0.5\n2,1.5\n"
