"""Binary PGM (P5) reading and writing, 8- or 16-bit.

16-bit samples are big-endian, per the netpbm format description. Header
comments are preserved on read so callers can stash metadata in them.
"""

from __future__ import annotations

import numpy as np


class PGMError(ValueError):
    pass


def _tokens(buf: bytes):
    """Yield (token, end_offset) for the 4 header fields, collecting comments."""
    pos = 0
    n = len(buf)
    comments = []
    out = []
    while len(out) < 4:
        while pos < n and buf[pos:pos + 1].isspace():
            pos += 1
        if pos >= n:
            raise PGMError("malformed PGM: truncated header")
        if buf[pos:pos + 1] == b"#":
            end = buf.find(b"\n", pos)
            if end < 0:
                raise PGMError("malformed PGM: truncated header")
            comments.append(buf[pos + 1:end].decode("ascii", "replace").strip())
            pos = end + 1
            continue
        start = pos
        while pos < n and not buf[pos:pos + 1].isspace() and buf[pos:pos + 1] != b"#":
            pos += 1
        out.append(buf[start:pos])
    # exactly one whitespace byte separates maxval from the raster
    if pos >= n or not buf[pos:pos + 1].isspace():
        raise PGMError("malformed PGM: truncated header")
    return out, pos + 1, comments


def read_pgm(path) -> tuple[np.ndarray, int, list[str]]:
    """Return ``(image, maxval, comments)``; image is uint16 of shape (h, w)."""
    with open(path, "rb") as fh:
        buf = fh.read()
    if buf[:2] != b"P5":
        raise PGMError("malformed PGM: not a binary P5 file")
    (magic, w, h, maxval), offset, comments = _tokens(buf)
    try:
        width, height, maxval = int(w), int(h), int(maxval)
    except ValueError:
        raise PGMError("malformed PGM: non-numeric header field") from None
    if width <= 0 or height <= 0 or not 0 < maxval < 65536:
        raise PGMError("malformed PGM: bad dimensions or maxval")
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height
    if len(buf) - offset < count * dtype.itemsize:
        raise PGMError("malformed PGM: raster shorter than header declares")
    img = np.frombuffer(buf, dtype=dtype, count=count, offset=offset)
    img = img.reshape(height, width).astype(np.uint16)
    if img.max(initial=0) > maxval:
        raise PGMError("malformed PGM: sample exceeds maxval")
    return img, maxval, comments


def write_pgm(path, img, maxval: int = 65535, comments=()) -> None:
    img = np.asarray(img)
    if img.ndim != 2:
        raise ValueError("PGM image must be 2-D")
    if img.min(initial=0) < 0 or img.max(initial=0) > maxval:
        raise ValueError("sample outside [0, maxval]")
    dtype = ">u2" if maxval > 255 else "u1"
    header = b"P5\n"
    for c in comments:
        header += b"# " + str(c).encode("ascii") + b"\n"
    header += f"{img.shape[1]} {img.shape[0]}\n{maxval}\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(img.astype(dtype).tobytes())


def render_intensity(values: np.ndarray) -> np.ndarray:
    """|psi|^2 scaled so the brightest pixel is 65535."""
    inten = np.abs(values) ** 2
    peak = inten.max(initial=0.0)
    if peak <= 0:
        return np.zeros(inten.shape, dtype=np.uint16)
    return np.rint(inten / peak * 65535).astype(np.uint16)
