"""On-disk formats: binary/CSV time series, metadata-prefixed CSV tables, JSON.

The binary record format is little-endian throughout: a fixed 44-byte header
(magic ``HNTS``, format version, sample rate, length, seed, units tag,
metadata length) followed by a UTF-8 JSON metadata blob and then float64
samples.  All writers are deterministic functions of their inputs so reruns
with the same config and seed are byte-identical.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .synthesis import TimeSeries

MAGIC = b"HNTS"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIdQQ8sI")  # magic, version, fs, n, seed, units, meta length


def _canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_timeseries_bin(path, ts: TimeSeries, seed: int = 0,
                         metadata: dict | None = None) -> None:
    """Write a record in the HNTS binary format.

    The fixed header stores the low 64 bits of the seed; the metadata blob
    keeps the exact value when one is supplied there.
    """
    meta_dict = dict(metadata or {})
    meta_dict.setdefault("seed", int(seed))
    meta = _canonical_json(meta_dict).encode("utf-8")
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, ts.sample_rate, ts.n,
                          int(seed) & 0xFFFFFFFFFFFFFFFF,
                          b"m".ljust(8, b"\0"), len(meta))
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(meta)
        fh.write(ts.values.astype("<f8").tobytes())


def read_timeseries_bin(path) -> tuple[TimeSeries, dict]:
    """Read an HNTS file; returns (series, metadata)."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, version, fs, n, seed, units, meta_len = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise ValueError(f"{path}: not an HNTS file (magic {magic!r})")
        if version != FORMAT_VERSION:
            raise ValueError(f"{path}: unsupported format version {version}")
        meta = json.loads(fh.read(meta_len).decode("utf-8"))
        meta.setdefault("seed", seed)
        meta.setdefault("units", units.rstrip(b"\0").decode("ascii"))
        values = np.frombuffer(fh.read(8 * n), dtype="<f8")
        if values.size != n:
            raise ValueError(f"{path}: expected {n} samples, found {values.size}")
    return TimeSeries(sample_rate=fs, values=values.copy()), meta


def write_timeseries_csv(path, ts: TimeSeries, seed: int = 0,
                         metadata: dict | None = None) -> None:
    """CSV alternative for small records: metadata preamble plus one column."""
    meta = dict(metadata or {})
    meta.update(sample_rate_hz=ts.sample_rate, n_samples=ts.n, seed=int(seed),
                units="m")
    with open(path, "w", encoding="utf-8") as fh:
        _write_preamble(fh, meta)
        fh.write("displacement_m\n")
        for v in ts.values:
            fh.write(f"{v:.17e}\n")


def read_timeseries_csv(path) -> tuple[TimeSeries, dict]:
    meta: dict = {}
    values = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                meta[key.strip()] = json.loads(val.strip())
            elif line[0].isalpha():
                continue  # column header
            else:
                values.append(float(line.split(",")[0]))
    if "sample_rate_hz" not in meta:
        raise ValueError(f"{path}: missing sample_rate_hz metadata")
    return TimeSeries(sample_rate=float(meta["sample_rate_hz"]),
                      values=np.array(values)), meta


def _write_preamble(fh, metadata: dict) -> None:
    for key in sorted(metadata):
        fh.write(f"# {key} = {_canonical_json(metadata[key])}\n")



def format_table_csv(columns: dict, metadata: dict | None = None) -> str:
    """Render a CSV table with a '#'-prefixed metadata preamble.

    `columns` maps column name to a 1-d array; all columns must be equally
    long.  Complex columns are split into `<name>_re` and `<name>_im`.
    """
    cols: dict[str, np.ndarray] = {}
    for name, values in columns.items():
        arr = np.asarray(values)
        if np.iscomplexobj(arr):
            cols[f"{name}_re"] = arr.real
            cols[f"{name}_im"] = arr.imag
        else:
            cols[name] = arr
    lengths = {c.size for c in cols.values()}
    if len(lengths) != 1:
        raise ValueError(f"columns have unequal lengths: {sorted(lengths)}")
    (n,) = lengths
    lines = []
    for key in sorted(metadata or {}):
        lines.append(f"# {key} = {_canonical_json(metadata[key])}")
    lines.append(",".join(cols))
    arrays = list(cols.values())
    for i in range(n):
        lines.append(",".join(_format_cell(a[i]) for a in arrays))
    return "\n".join(lines) + "\n"


def write_table_csv(path, columns: dict, metadata: dict | None = None) -> None:
    """Write `format_table_csv` output to a file."""
    Path(path).write_text(format_table_csv(columns, metadata), encoding="utf-8")


def _format_cell(v) -> str:
    if isinstance(v, (np.floating, float)):
        return "" if np.isnan(v) else f"{v:.12e}"
    return str(v)


def read_table_csv(path) -> tuple[dict, dict]:
    """Read a metadata-prefixed CSV table; returns (columns, metadata)."""
    meta: dict = {}
    header: list[str] | None = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                meta[key.strip()] = json.loads(val.strip())
            elif header is None:
                header = line.split(",")
            else:
                rows.append([float(x) if x else np.nan for x in line.split(",")])
    if header is None:
        raise ValueError(f"{path}: no column header found")
    data = np.array(rows) if rows else np.empty((0, len(header)))
    return {name: data[:, i] for i, name in enumerate(header)}, meta


def write_summary_json(path, summary: dict) -> None:
    Path(path).write_text(
        json.dumps(summary, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
