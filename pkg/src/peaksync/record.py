"""Multichannel record container and its CSV / binary file formats.

CSV layout: one column per channel, one row per time sample, mandatory
header row of channel labels.  A leading ``time`` column (case-insensitive
header) is ignored for computation.  The binary layout is a 16-byte header
(magic ``PSYN``, u32 channel count, u32 sample count, u32 reserved, all
little-endian) followed by the sample matrix as row-major little-endian
float64.

Time indices are 0-based everywhere in this package; a series value at
index ``t`` is the sample taken at ``t / sample_rate_hz`` seconds.
"""

from __future__ import annotations

import csv
import struct
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from .validation import ParseError, ValidationError

BINARY_MAGIC = b"PSYN"
_HEADER = struct.Struct("<4sIII")

# 17 significant digits: float64 round-trips bit-exactly through text.
FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True)
class MultiChannelRecord:
    """Raw sampled signals: ``r`` channels by ``n_samples`` time points.

    Parameters
    ----------
    labels : tuple of str
        Unique, non-empty channel names, one per row of ``samples``.
    samples : ndarray, shape (r, n_samples)
        Finite sample amplitudes in arbitrary units.
    sample_rate_hz : float
        Sampling rate, strictly positive.
    """

    labels: tuple[str, ...]
    samples: NDArray[np.float64] = field(repr=False)
    sample_rate_hz: float

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 2:
            raise ValidationError("samples must be a 2-D (channels x time) array")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "sample_rate_hz", float(self.sample_rate_hz))
        r, n = samples.shape
        if r == 0 or n == 0:
            raise ValidationError("record must have at least one channel and one sample")
        if len(self.labels) != r:
            raise ValidationError(
                f"got {len(self.labels)} labels for {r} channel rows"
            )
        if any(label == "" for label in self.labels):
            raise ValidationError("channel labels must be non-empty")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("channel labels must be unique")
        if not self.sample_rate_hz > 0:
            raise ValidationError("sample_rate_hz must be positive")
        if not np.all(np.isfinite(samples)):
            raise ValidationError("samples contain non-finite values")
        samples.setflags(write=False)

    @property
    def n_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]

    def channel(self, label: str) -> NDArray[np.float64]:
        """Return the sample row for ``label``."""
        try:
            idx = self.labels.index(label)
        except ValueError:
            raise ValidationError(f"unknown channel label {label!r}") from None
        return self.samples[idx]

    def select(self, labels: list[str] | tuple[str, ...]) -> "MultiChannelRecord":
        """Sub-record restricted to ``labels``, in the order given."""
        rows = np.stack([self.channel(label) for label in labels])
        return MultiChannelRecord(tuple(labels), rows, self.sample_rate_hz)


def _is_binary(path: str) -> bool:
    with open(path, "rb") as fh:
        return fh.read(4) == BINARY_MAGIC


def read_record(path: str, sample_rate_hz: float) -> MultiChannelRecord:
    """Read a multichannel record from a CSV or binary file.

    The format is sniffed from the leading magic bytes; anything that does
    not start with ``PSYN`` is parsed as CSV.  The sample rate is supplied
    by the caller, it is not stored in either format.
    """
    if _is_binary(path):
        return _read_binary(path, sample_rate_hz)
    return _read_csv(path, sample_rate_hz)


def _read_csv(path: str, sample_rate_hz: float) -> MultiChannelRecord:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        header = [cell.strip() for cell in header]
        drop_first = bool(header) and header[0].lower() == "time"
        labels = header[1:] if drop_first else header
        if len(labels) == 0:
            raise ValidationError(f"{path}: header defines zero channels")
        columns: list[list[float]] = [[] for _ in labels]
        width = len(header)
        for line_no, row in enumerate(reader, start=2):
            if len(row) != width:
                raise ParseError(
                    f"{path}: ragged row at line {line_no}: "
                    f"expected {width} cells, got {len(row)}"
                )
            cells = row[1:] if drop_first else row
            for col, cell in zip(columns, cells):
                try:
                    col.append(float(cell))
                except ValueError:
                    raise ParseError(
                        f"{path}: non-numeric cell {cell!r} at line {line_no}"
                    ) from None
    if not columns[0]:
        raise ValidationError(f"{path}: no sample rows")
    samples = np.array(columns, dtype=np.float64)
    return MultiChannelRecord(tuple(labels), samples, sample_rate_hz)


def _read_binary(path: str, sample_rate_hz: float) -> MultiChannelRecord:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise ParseError(f"{path}: truncated binary header")
        magic, r, n, _reserved = _HEADER.unpack(head)
        if magic != BINARY_MAGIC:
            raise ParseError(f"{path}: bad magic {magic!r}")
        if r == 0 or n == 0:
            raise ValidationError(f"{path}: zero channels or zero samples")
        payload = fh.read(8 * r * n)
        if len(payload) != 8 * r * n:
            raise ParseError(f"{path}: truncated payload, expected {r}x{n} float64")
    samples = np.frombuffer(payload, dtype="<f8").reshape(r, n)
    labels = tuple(f"ch{i + 1}" for i in range(r))
    return MultiChannelRecord(labels, samples.astype(np.float64), sample_rate_hz)


def write_record(path: str, record: MultiChannelRecord, binary: bool = False) -> None:
    """Write ``record`` as CSV, or as the ``PSYN`` binary format.

    CSV values are printed with 17 significant digits so a read-back
    reproduces every float64 bit-exactly.  Binary drops the labels
    (read_record regenerates ch1..chr).
    """
    if binary:
        with open(path, "wb") as fh:
            fh.write(_HEADER.pack(BINARY_MAGIC, record.n_channels, record.n_samples, 0))
            fh.write(np.ascontiguousarray(record.samples, dtype="<f8").tobytes())
        return
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(record.labels)
        for t in range(record.n_samples):
            writer.writerow(FLOAT_FORMAT % v for v in record.samples[:, t])


def write_series(path: str, t_index, values) -> None:
    """Write an index/value series as CSV with header ``t,value``.

    Values are printed with 17 significant digits.  The two sequences must
    have equal length; empty sequences produce a header-only file.
    """
    t_index = list(t_index)
    values = list(values)
    if len(t_index) != len(values):
        raise ValidationError(
            f"t_index has {len(t_index)} entries but values has {len(values)}"
        )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "value"])
        for t, v in zip(t_index, values):
            writer.writerow([str(int(t)), FLOAT_FORMAT % float(v)])


def read_series(path: str) -> tuple[NDArray[np.int64], NDArray[np.float64]]:
    """Read back a series written by :func:`write_series`."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [c.strip() for c in header] != ["t", "value"]:
            raise ParseError(f"{path}: expected header 't,value'")
        ts: list[int] = []
        vs: list[float] = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise ParseError(f"{path}: ragged row at line {line_no}")
            try:
                ts.append(int(row[0]))
                vs.append(float(row[1]))
            except ValueError:
                raise ParseError(f"{path}: non-numeric cell at line {line_no}") from None
    return np.asarray(ts, dtype=np.int64), np.asarray(vs, dtype=np.float64)
