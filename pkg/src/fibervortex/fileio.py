"""Binary grid files, checkpoints, CSV emission, and provenance.

Grid file layout (all little-endian, no padding):

    magic      4 bytes   b"EVF1" field grids | b"GAU1" gauge grids
                         | b"PSI1" wavefunction checkpoints
    nx ny nz   3 x u32
    dx dy dz   3 x f64   metres
    ncomp      u32       number of components
    iscomplex  u32       0 real, 1 complex (complex stored as f64 pairs)
    step       u64       checkpoint step index (0 when unused)
    meta_len   u32       length of the UTF-8 JSON metadata block
    meta       bytes     JSON object (provenance, labels, run parameters)
    payload    f64[]     component-major, x-fastest within a component;
                         complex values interleaved (re, im)

Reading writes back bit-identically, and identical configurations produce
bit-identical observable CSVs (floats are serialized with repr, the
shortest round-trip form).
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

MAGIC_FIELD = b"EVF1"
MAGIC_GAUGE = b"GAU1"
MAGIC_PSI = b"PSI1"
KNOWN_MAGICS = (MAGIC_FIELD, MAGIC_GAUGE, MAGIC_PSI)

_HEADER = struct.Struct("<4s3I3dIIQI")

#: Column order of the observables CSV.
OBSERVABLE_COLUMNS = ["step", "t", "norm", "E_total", "E_kin", "E_gauge",
                      "E_trap", "E_int", "mu", "lz_pol", "r2z2", "rz", "angle"]


class BadMagic(ValueError):
    """File is not a recognized grid format (or a newer version)."""


class TruncatedPayload(ValueError):
    """Payload shorter than the header promises."""


class DimMismatch(ValueError):
    """Header fields are inconsistent with the payload or each other."""


@dataclass
class GridFile:
    """In-memory image of a grid file."""

    magic: bytes
    data: np.ndarray          # (ncomp, nx, ny, nz), real or complex
    spacing: tuple            # (dx, dy, dz)
    step: int = 0
    meta: dict = field(default_factory=dict)

    @property
    def dims(self):
        return self.data.shape[1:]


def write_grid(path, magic: bytes, data: np.ndarray, spacing, step: int = 0,
               meta: Optional[dict] = None) -> None:
    """Write components to ``path`` in the binary grid format.

    ``data`` is (ncomp, nx, ny, nz) or (nx, ny, nz); float64 or
    complex128 (anything else is cast).
    """
    if magic not in KNOWN_MAGICS:
        raise BadMagic(f"refusing to write unknown magic {magic!r}")
    arr = np.asarray(data)
    if arr.ndim == 3:
        arr = arr[None, ...]
    if arr.ndim != 4:
        raise DimMismatch(f"expected 3 or 4 dims, got {arr.ndim}")
    iscomplex = np.iscomplexobj(arr)
    arr = arr.astype(np.complex128 if iscomplex else np.float64, copy=False)
    ncomp, nx, ny, nz = arr.shape
    meta_bytes = json.dumps(meta or {}, sort_keys=True).encode("utf-8")
    header = _HEADER.pack(magic, nx, ny, nz, float(spacing[0]),
                          float(spacing[1]), float(spacing[2]), ncomp,
                          1 if iscomplex else 0, int(step), len(meta_bytes))
    # x-fastest: transpose each component to (nz, ny, nx) C order
    payload = np.ascontiguousarray(arr.transpose(0, 3, 2, 1))
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(meta_bytes)
        fh.write(payload.tobytes())


def read_grid(path, expect_magic: Optional[bytes] = None) -> GridFile:
    """Read a grid file back; bit-exact inverse of :func:`write_grid`."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise TruncatedPayload(f"file holds {len(raw)} bytes < header size {_HEADER.size}")
    (magic, nx, ny, nz, dx, dy, dz, ncomp, iscomplex, step,
     meta_len) = _HEADER.unpack_from(raw)
    if magic not in KNOWN_MAGICS:
        hint = ""
        if magic[:3] in (m[:3] for m in KNOWN_MAGICS):
            hint = (f"; looks like a version {magic[3:4].decode(errors='replace')} "
                    f"file, this reader handles version 1")
        raise BadMagic(f"unknown magic {magic!r}{hint}")
    if expect_magic is not None and magic != expect_magic:
        raise BadMagic(f"expected {expect_magic!r} file, found {magic!r}")
    if ncomp < 1 or min(nx, ny, nz) < 1:
        raise DimMismatch(f"nonsense header dims {(nx, ny, nz)} x {ncomp}")
    off = _HEADER.size
    if len(raw) < off + meta_len:
        raise TruncatedPayload("metadata block truncated")
    meta = json.loads(raw[off:off + meta_len].decode("utf-8")) if meta_len else {}
    off += meta_len
    words = ncomp * nx * ny * nz * (2 if iscomplex else 1)
    expected = off + 8 * words
    if len(raw) < expected:
        raise TruncatedPayload(
            f"payload truncated: expected {expected} bytes total, found {len(raw)}"
        )
    if len(raw) > expected:
        raise DimMismatch(
            f"trailing bytes: expected {expected} bytes total, found {len(raw)}"
        )
    flat = np.frombuffer(raw, dtype="<f8", count=words, offset=off)
    if iscomplex:
        flat = flat.view(np.complex128)
    data = flat.reshape(ncomp, nz, ny, nx).transpose(0, 3, 2, 1).copy()
    return GridFile(magic=magic, data=data, spacing=(dx, dy, dz),
                    step=int(step), meta=meta)


def config_hash(text: str) -> str:
    """sha256 of the configuration text, for provenance headers."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def format_float(x) -> str:
    """Shortest round-trip decimal form; deterministic across runs."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def write_observables_csv(path, rows: List[dict], append: bool = False) -> None:
    """Write observable rows with the canonical column order."""
    mode = "a" if append else "w"
    with open(path, mode) as fh:
        if not append:
            fh.write(",".join(OBSERVABLE_COLUMNS) + "\n")
        for row in rows:
            fh.write(",".join(format_float(row.get(c, 0.0))
                              for c in OBSERVABLE_COLUMNS) + "\n")


def write_csv(path, columns: List[str], rows: List[dict]) -> None:
    """Generic deterministic CSV writer."""
    with open(path, "w") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(
                format_float(row[c]) if isinstance(row[c], (int, float, np.floating, np.integer))
                else str(row[c]) for c in columns) + "\n")


def write_mesh(path, vertices: np.ndarray, faces: np.ndarray) -> None:
    """Plain-text face-vertex mesh: counts, vertex lines, then face lines."""
    with open(path, "w") as fh:
        fh.write(f"{len(vertices)} {len(faces)}\n")
        for v in vertices:
            fh.write(f"v {format_float(v[0])} {format_float(v[1])} {format_float(v[2])}\n")
        for f in faces:
            fh.write(f"f {int(f[0])} {int(f[1])} {int(f[2])}\n")


__all__ = [
    "MAGIC_FIELD",
    "MAGIC_GAUGE",
    "MAGIC_PSI",
    "OBSERVABLE_COLUMNS",
    "BadMagic",
    "TruncatedPayload",
    "DimMismatch",
    "GridFile",
    "write_grid",
    "read_grid",
    "config_hash",
    "format_float",
    "write_observables_csv",
    "write_csv",
    "write_mesh",
]
