"""Record container and CSV/binary round trips."""

import numpy as np
import pytest

from peaksync import (
    MultiChannelRecord,
    ParseError,
    ValidationError,
    read_record,
    read_series,
    write_record,
    write_series,
)


def make_record(r=3, n=10, seed=0, fs=256.0):
    rng = np.random.default_rng(seed)
    labels = tuple(f"f{i + 1}" for i in range(r))
    return MultiChannelRecord(labels, rng.standard_normal((r, n)), fs)


def test_read_simple_csv(tmp_path):
    path = tmp_path / "rec.csv"
    path.write_text("f1,f2,f3\n" + "\n".join(
        ",".join(str(float(v)) for v in row) for row in np.arange(30).reshape(10, 3)
    ) + "\n")
    record = read_record(str(path), 256.0)
    assert record.labels == ("f1", "f2", "f3")
    assert record.n_channels == 3
    assert record.n_samples == 10
    assert record.sample_rate_hz == 256.0
    # column order defines channel order
    assert record.channel("f1")[0] == 0.0
    assert record.channel("f3")[0] == 2.0


def test_time_column_ignored(tmp_path):
    path = tmp_path / "rec.csv"
    path.write_text("time,f1,f2\n0,1.0,2.0\n1,3.0,4.0\n")
    record = read_record(str(path), 100.0)
    assert record.labels == ("f1", "f2")
    assert record.n_samples == 2
    np.testing.assert_array_equal(record.channel("f1"), [1.0, 3.0])


def test_csv_roundtrip_bit_exact(tmp_path):
    record = make_record(r=4, n=33, seed=7)
    path = tmp_path / "rec.csv"
    write_record(str(path), record)
    back = read_record(str(path), record.sample_rate_hz)
    assert back.labels == record.labels
    assert np.array_equal(back.samples, record.samples)  # bit exact
    # write -> read -> write again: identical file
    path2 = tmp_path / "rec2.csv"
    write_record(str(path2), back)
    assert path.read_bytes() == path2.read_bytes()


def test_binary_roundtrip_bit_exact(tmp_path):
    record = make_record(r=2, n=257, seed=11)
    path = tmp_path / "rec.psyn"
    write_record(str(path), record, binary=True)
    assert path.read_bytes()[:4] == b"PSYN"
    back = read_record(str(path), record.sample_rate_hz)
    assert np.array_equal(back.samples, record.samples)
    assert back.n_channels == 2 and back.n_samples == 257


def test_ragged_row_names_line(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("f1,f2\n1.0,2.0\n3.0\n")
    with pytest.raises(ParseError, match="line 3"):
        read_record(str(path), 256.0)


def test_non_numeric_cell(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("f1,f2\n1.0,oops\n")
    with pytest.raises(ParseError, match="non-numeric"):
        read_record(str(path), 256.0)


def test_duplicate_labels(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("f1,f1\n1.0,2.0\n")
    with pytest.raises(ValidationError, match="unique"):
        read_record(str(path), 256.0)


def test_zero_samples(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("f1,f2\n")
    with pytest.raises(ValidationError, match="no sample rows"):
        read_record(str(path), 256.0)


def test_non_finite_rejected(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("f1\n1.0\nnan\n")
    with pytest.raises(ValidationError, match="non-finite"):
        read_record(str(path), 256.0)


def test_invalid_sample_rate():
    with pytest.raises(ValidationError, match="sample_rate"):
        MultiChannelRecord(("a",), np.zeros((1, 4)), 0.0)


def test_empty_label():
    with pytest.raises(ValidationError, match="non-empty"):
        MultiChannelRecord(("a", ""), np.zeros((2, 4)), 1.0)


def test_select_and_unknown_label():
    record = make_record()
    sub = record.select(["f3", "f1"])
    assert sub.labels == ("f3", "f1")
    np.testing.assert_array_equal(sub.samples[0], record.channel("f3"))
    with pytest.raises(ValidationError, match="unknown channel"):
        record.channel("nope")


def test_write_series_and_roundtrip(tmp_path):
    path = tmp_path / "series.csv"
    write_series(str(path), [1, 2, 3], [0.0, 0.5, 0.0])
    lines = path.read_text().strip().split("\n")
    assert len(lines) == 4
    assert lines[0] == "t,value"

    # relative round-trip error below 1e-12 (17g is in fact bit exact)
    rng = np.random.default_rng(5)
    values = rng.standard_normal(50) * 1e6
    write_series(str(path), range(50), values)
    _, back = read_series(str(path))
    np.testing.assert_allclose(back, values, rtol=1e-12, atol=0.0)
    assert np.array_equal(back, values)


def test_write_series_empty(tmp_path):
    path = tmp_path / "empty.csv"
    write_series(str(path), [], [])
    assert path.read_text() == "t,value\r\n" or path.read_text() == "t,value\n"


def test_write_series_length_mismatch(tmp_path):
    with pytest.raises(ValidationError, match="entries"):
        write_series(str(tmp_path / "x.csv"), [1, 2], [1.0])
