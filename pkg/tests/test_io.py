import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from reparam import Trajectory
from reparam.io import read_table_csv, write_json, write_table_csv, write_table_json

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(data=arrays(np.float64, st.tuples(st.integers(1, 20), st.just(4)), elements=finite))
def test_csv_round_trip_is_exact(data, tmp_path_factory):
    path = tmp_path_factory.mktemp("csv") / "t.csv"
    write_table_csv(path, ["a", "b", "c", "d"], data)
    header, back = read_table_csv(path)
    assert header == ["a", "b", "c", "d"]
    assert np.array_equal(back, data)


def test_csv_to_stream():
    buf = io.StringIO()
    write_table_csv(buf, ["x", "t", "u"], [(0.1, 0.2, 1 / 3)])
    assert buf.getvalue() == "x,t,u\n0.10000000000000001,0.20000000000000001,0.33333333333333331\n"


def test_json_is_sorted_and_stable(tmp_path):
    p = tmp_path / "r.json"
    write_json(p, {"b": 1, "a": [1.5]})
    first = p.read_text()
    write_json(p, {"a": [1.5], "b": 1})
    assert p.read_text() == first and first.index('"a"') < first.index('"b"')
    write_table_json(tmp_path / "t.json", ["x"], [[1.0]])
    assert '"columns"' in (tmp_path / "t.json").read_text()


class TestTrajectory:
    def test_validation(self):
        with pytest.raises(ValueError):
            Trajectory([0.0, 0.0], [[1.0], [2.0]])
        with pytest.raises(ValueError):
            Trajectory([0.0, 1.0], [[1.0]])

    def test_immutable(self):
        t = np.array([0.0, 1.0])
        tr = Trajectory(t, [[1.0], [2.0]], {"a": 1})
        t[0] = -5.0
        assert tr.times[0] == 0.0
        with pytest.raises(TypeError):
            tr.metadata["a"] = 2
        with pytest.raises(ValueError):
            tr.times[1] = 3.0
        new = tr.with_metadata(b=2)
        assert new.metadata["b"] == 2 and "b" not in tr.metadata
        assert tr.dimension == 1 and len(tr) == 2 and tr.final_state[0] == 2.0
