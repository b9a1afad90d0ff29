import io

import numpy as np
import pytest

from itc.data_model import AttributeSpec, DatasetFormatError, load_dataset, \
    write_dataset


def test_load_numeric_csv():
    src = io.StringIO("num:x,num:y\n0,0\n1,2.5\n3,4\n")
    ds = load_dataset(src)
    assert ds.n == 3
    assert ds.schema == (AttributeSpec("num", "x"), AttributeSpec("num", "y"))
    assert ds.truth_labels is None
    assert ds.numeric[1].tolist() == [1.0, 2.5]


def test_load_categorical_with_label():
    src = io.StringIO("cat:odor,cat:cap,label:class\np,x,poison\nn,b,edible\n")
    ds = load_dataset(src)
    assert ds.n == 2
    assert [a.kind for a in ds.schema] == ["cat", "cat"]
    assert ds.truth_labels.tolist() == ["poison", "edible"]
    assert ds.label_name == "class"
    assert ds.categorical[0].tolist() == ["p", "x"]


def test_arity_mismatch_names_row():
    src = io.StringIO("num:x,num:y\n1\n")
    with pytest.raises(DatasetFormatError, match="row 1"):
        load_dataset(src)


def test_missing_value_names_row():
    src = io.StringIO("num:x,num:y\n1,2\n3,\n")
    with pytest.raises(DatasetFormatError, match="row 2"):
        load_dataset(src)


def test_malformed_numeric_names_row():
    src = io.StringIO("num:x\n1\nbogus\n")
    with pytest.raises(DatasetFormatError, match="row 2"):
        load_dataset(src)


def test_empty_file_rejected():
    with pytest.raises(DatasetFormatError, match="empty"):
        load_dataset(io.StringIO(""))
    with pytest.raises(DatasetFormatError, match="empty"):
        load_dataset(io.StringIO("num:x\n"))


def test_two_label_columns_rejected():
    src = io.StringIO("label:a,label:b\n1,2\n")
    with pytest.raises(DatasetFormatError):
        load_dataset(src)


def test_unknown_kind_rejected():
    with pytest.raises(DatasetFormatError, match="unknown attribute kind"):
        load_dataset(io.StringIO("int:x\n1\n"))


def test_round_trip_identical():
    src = "num:x,cat:c,label:y\n0.1,a,L1\n2.25,b,L2\n-3.5,a,L1\n"
    ds = load_dataset(io.StringIO(src))
    buf = io.StringIO()
    write_dataset(ds, buf)
    ds2 = load_dataset(io.StringIO(buf.getvalue()))
    assert ds2.schema == ds.schema
    assert np.array_equal(ds2.numeric, ds.numeric)
    assert np.array_equal(ds2.categorical, ds.categorical)
    assert np.array_equal(ds2.truth_labels, ds.truth_labels)


def test_round_trip_preserves_float_precision():
    rng = np.random.default_rng(7)
    vals = rng.standard_normal(20) * 1e6
    src = "num:x\n" + "\n".join(repr(float(v)) for v in vals) + "\n"
    ds = load_dataset(io.StringIO(src))
    buf = io.StringIO()
    write_dataset(ds, buf)
    ds2 = load_dataset(io.StringIO(buf.getvalue()))
    assert np.array_equal(ds.numeric, ds2.numeric)  # bitwise


def test_permuted_records():
    src = io.StringIO("num:x,label:y\n1,a\n2,b\n3,c\n")
    ds = load_dataset(src)
    perm = np.array([2, 0, 1])
    ds2 = ds.permuted(perm)
    for i in range(3):
        assert ds2.record(i) == ds.record(perm[i])
        assert ds2.truth_labels[i] == ds.truth_labels[perm[i]]
