"""Serialization of :class:`GridFunction2D`.

Binary layout (little endian)::

    offset  size  field
    0       4     magic b"BEGF"
    4       4     uint32 version (1)
    8       8     uint32 n_x, uint32 n_y
    16      48    float64 dx, dy, x0, y0, xi0, eta0
    64      1     uint8 side (0 = Space, 1 = Frequency)
    65      7     zero padding
    72      ...   n_x * n_y complex samples as interleaved float64 (re, im),
                  row-major with x the slow index

The CSV form has a ``# key=value`` header line per field and then rows
``i,j,re,im``; it is meant for small grids.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import SizeMismatch
from .witness.grid import GridFunction2D, Side

MAGIC = b"BEGF"
VERSION = 1
_HEADER = struct.Struct("<4sIII6dB7x")
CSV_MAX = 1 << 16
_FIELDS = ("dx", "dy", "x0", "y0", "xi0", "eta0")


def to_bytes(f: GridFunction2D) -> bytes:
    side = 0 if f.side is Side.SPACE else 1
    head = _HEADER.pack(MAGIC, VERSION, f.n_x, f.n_y, *(getattr(f, k) for k in _FIELDS), side)
    return head + np.ascontiguousarray(f.samples, dtype="<c16").tobytes()


def from_bytes(buf: bytes) -> GridFunction2D:
    if len(buf) < _HEADER.size:
        raise SizeMismatch("buffer shorter than header")
    magic, version, n_x, n_y, *rest = _HEADER.unpack_from(buf)
    if magic != MAGIC or version != VERSION:
        raise SizeMismatch("not a grid-function container")
    vals, side = rest[:6], rest[6]
    payload = buf[_HEADER.size:]
    if len(payload) != 16 * n_x * n_y:
        raise SizeMismatch("payload size does not match header")
    samples = np.frombuffer(payload, dtype="<c16").reshape(n_x, n_y)
    return GridFunction2D(samples, vals[0], vals[1], Side.SPACE if side == 0 else Side.FREQUENCY, *vals[2:])


def save(f: GridFunction2D, path) -> None:
    with open(path, "wb") as fh:
        fh.write(to_bytes(f))


def load(path) -> GridFunction2D:
    with open(path, "rb") as fh:
        return from_bytes(fh.read())


def write_csv(f: GridFunction2D, fh) -> None:
    if f.n_x * f.n_y > CSV_MAX:
        raise SizeMismatch(f"grid too large for CSV ({f.n_x}x{f.n_y})")
    fh.write(f"# n_x={f.n_x}\n# n_y={f.n_y}\n# side={f.side.value}\n")
    for k in _FIELDS:
        fh.write(f"# {k}={float(getattr(f, k))!r}\n")
    fh.write("i,j,re,im\n")
    for i in range(f.n_x):
        for j in range(f.n_y):
            z = f.samples[i, j]
            fh.write(f"{i},{j},{float(z.real)!r},{float(z.imag)!r}\n")


def read_csv(fh) -> GridFunction2D:
    meta = {}
    rows = []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            meta[key] = val
        elif line[0].isdigit() or line[0] == "-":
            i, j, re, im = line.split(",")
            rows.append((int(i), int(j), float(re), float(im)))
    n_x, n_y = int(meta["n_x"]), int(meta["n_y"])
    samples = np.zeros((n_x, n_y), dtype=complex)
    for i, j, re, im in rows:
        samples[i, j] = complex(re, im)
    return GridFunction2D(samples, *(float(meta[k]) for k in _FIELDS[:2]), Side(meta["side"]),
                          *(float(meta[k]) for k in _FIELDS[2:]))
