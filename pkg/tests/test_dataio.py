import numpy as np
import pytest
from hypothesis import given, strategies as st

from puretrees.core import ConfigError, Dataset
from puretrees.dataio import (EmptyFileError, MalformedRowError, MissingColumnError, NonNumericTargetError,
                              TabularSchema, inferred_schema, load_csv, load_table, write_csv)


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_categorical_levels(tmp_path):
    p = write(tmp_path, "sex,length,rings\nM,0.5,10\nF,0.4,8\nI,0.3,5\n")
    t = load_table(p, TabularSchema("rings", ("sex",)))
    assert t.feature_names == ["sex=I", "sex=M", "length"]
    assert t.dataset.d == 3
    np.testing.assert_array_equal(t.dataset.features[:, :2], [[0, 1], [0, 0], [1, 0]])
    assert t.levels == {"sex": ["F", "I", "M"]}


def test_concrete_shaped(tmp_path):
    rng = np.random.default_rng(0)
    names = ["cement", "slag", "ash", "water", "plasticizer", "coarse", "fine", "age", "strength"]
    rows = [",".join(names)] + [",".join(f"{v:.3f}" for v in r) for r in rng.random((1030, 9)) * 100]
    data = load_csv(write(tmp_path, "\n".join(rows) + "\n"), TabularSchema("strength"))
    assert (data.n, data.d) == (1030, 8)


def test_malformed_cell_row_number(tmp_path):
    lines = ["a,b,y"] + [f"{i},{i},{i}" for i in range(5)] + ["1,oops,2"]
    with pytest.raises(MalformedRowError) as err:
        load_csv(write(tmp_path, "\n".join(lines) + "\n"), TabularSchema("y"))
    assert err.value.row == 7 and "row 7" in str(err.value)


def test_wrong_field_count(tmp_path):
    with pytest.raises(MalformedRowError) as err:
        load_csv(write(tmp_path, "a,y\n1,2\n3\n"), TabularSchema("y"))
    assert err.value.row == 3


def test_distinct_errors(tmp_path):
    with pytest.raises(EmptyFileError):
        load_csv(write(tmp_path, ""), TabularSchema("y"))
    with pytest.raises(EmptyFileError):
        load_csv(write(tmp_path, "a,y\n"), TabularSchema("y"))
    with pytest.raises(MissingColumnError):
        load_csv(write(tmp_path, "a,b\n1,2\n"), TabularSchema("y"))
    with pytest.raises(NonNumericTargetError):
        load_csv(write(tmp_path, "a,y\n1,x\n"), TabularSchema("y"))
    with pytest.raises(MissingColumnError):
        load_csv(write(tmp_path, "a,y\n1,2\n"), TabularSchema("y", ("b",)))


def test_unknown_level_with_fixed_levels(tmp_path):
    p = write(tmp_path, "c,y\nA,1\nZ,2\n")
    with pytest.raises(MalformedRowError) as err:
        load_table(p, TabularSchema("y", ("c",)), levels={"c": ["A", "B"]})
    assert err.value.row == 3


def test_schema_file_and_response_scaling(tmp_path):
    p = write(tmp_path, "x,v,z\n1,200000,0\n2,100000,1\n")
    s = write(tmp_path, "target = v\ncolumns = x, v\nresponse_scale = 1e-4\n", "s.cfg")
    schema = TabularSchema.from_file(s)
    t = load_table(p, schema)
    assert t.feature_names == ["x"]
    np.testing.assert_allclose(t.dataset.response, [20.0, 10.0])
    with pytest.raises(ConfigError):
        TabularSchema.from_dict({"target": "v", "colour": "red"})


def test_prediction_input_without_target(tmp_path):
    t = load_table(write(tmp_path, "a,b\n1,2\n"), TabularSchema("y"), require_target=False)
    assert t.dataset.d == 2 and t.dataset.response.tolist() == [0.0]


@given(st.integers(0, 2**31), st.integers(1, 20), st.integers(1, 4))
def test_round_trip_is_bitwise(tmp_path_factory, seed, n, d):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d)) * 10.0 ** rng.integers(-300, 300, size=(n, d))
    data = Dataset.from_arrays(X, rng.normal(size=n) * 1e-7)
    p = tmp_path_factory.mktemp("rt") / "r.csv"
    write_csv(p, data)
    back = load_csv(p, inferred_schema(p))
    assert back.features.tobytes() == data.features.tobytes()
    assert back.response.tobytes() == data.response.tobytes()
