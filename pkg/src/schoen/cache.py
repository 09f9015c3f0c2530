"""On-disk cache for transition matrices.

Keyed by (system hash, path vertices, precision). Binary format,
versioned, little-endian: midpoints stored as sign/exponent/limb arrays,
radii as (mantissa, exponent) pairs. Writes are atomic (temp file +
rename), so concurrent insertion is last-write-wins with identical values
by determinism.
"""

import hashlib
import os
import struct
import tempfile

from .ball import BallMatrix, ComplexBall

MAGIC = b"SCHN"
VERSION = 1


class TransitionCache:
    def __init__(self, directory):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    def key_for(self, operator, path, precision_bits):
        h = hashlib.sha256()
        h.update(repr(operator.coeffs).encode())
        for p in path:
            h.update(("%s,%s;" % (p.re, p.im)).encode())
        h.update(str(precision_bits).encode())
        return h.hexdigest()

    def _path(self, key):
        return os.path.join(self.directory, key + ".tm")

    def store(self, key, matrix: BallMatrix, precision_bits):
        payload = _encode_matrix(matrix, precision_bits)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(payload)
            os.replace(tmp, self._path(key))
        except OSError:
            try:
                os.unlink(tmp)
            except OSError:
                pass

    def load(self, key, precision_bits):
        path = self._path(key)
        if not os.path.exists(path):
            return None
        try:
            with open(path, "rb") as fh:
                data = fh.read()
            return _decode_matrix(data, precision_bits)
        except (OSError, ValueError, struct.error):
            return None


def _encode_int(n):
    sign = 0 if n >= 0 else 1
    mag = abs(n)
    limbs = mag.to_bytes((mag.bit_length() + 7) // 8 or 1, "little")
    return struct.pack("<BI", sign, len(limbs)) + limbs


def _decode_int(buf, off):
    sign, ln = struct.unpack_from("<BI", buf, off)
    off += 5
    mag = int.from_bytes(buf[off:off + ln], "little")
    off += ln
    return (-mag if sign else mag), off


def _encode_matrix(m: BallMatrix, precision_bits):
    out = [MAGIC, struct.pack("<HII", VERSION, m.rows, m.cols),
           struct.pack("<I", precision_bits)]
    for row in m.entries:
        for e in row:
            out.append(_encode_int(e.ar))
            out.append(_encode_int(e.ai))
            out.append(struct.pack("<q", e.ex))
            out.append(struct.pack("<Iq", e.rm, e.re))
    return b"".join(out)


def _decode_matrix(buf, precision_bits):
    if buf[:4] != MAGIC:
        raise ValueError("bad cache magic")
    version, rows, cols = struct.unpack_from("<HII", buf, 4)
    if version != VERSION:
        raise ValueError("cache version mismatch")
    (prec,) = struct.unpack_from("<I", buf, 14)
    if prec != precision_bits:
        return None
    off = 18
    entries = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            ar, off = _decode_int(buf, off)
            ai, off = _decode_int(buf, off)
            (ex,) = struct.unpack_from("<q", buf, off)
            off += 8
            rm, re = struct.unpack_from("<Iq", buf, off)
            off += 12
            row.append(ComplexBall(ar, ai, ex, rm, re, precision_bits))
        entries.append(row)
    return BallMatrix(entries)
