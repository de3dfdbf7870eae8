"""Sampled complex scalar fields on uniform grids.

Arrays are stored row-major with shape ``(ny, nx)``: row index runs along y,
column index along x. Pixel ``(iy, ix)`` sits at
``(origin_x + ix * pitch, origin_y + iy * pitch)``. The default origin puts
pixel ``(ny // 2, nx // 2)`` on the optical axis, which is also the zero bin of
the centered transforms used in :mod:`evbholo.propagation`.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import ndimage

CFLD_MAGIC = b"CFLD1\0\0\0"
_CFLD_HEADER = struct.Struct("<8sIIdddB")


class PlaneTag(enum.IntEnum):
    HOLOGRAM_EXIT = 0
    FRESNEL = 1
    FRAUNHOFER = 2


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny: int
    pitch: float
    origin: tuple[float, float] | None = None

    def __post_init__(self):
        if int(self.nx) < 2 or int(self.ny) < 2:
            raise ValueError("grid needs at least 2 samples per axis")
        if not (self.pitch > 0 and np.isfinite(self.pitch)):
            raise ValueError("pitch must be positive")
        object.__setattr__(self, "nx", int(self.nx))
        object.__setattr__(self, "ny", int(self.ny))
        object.__setattr__(self, "pitch", float(self.pitch))
        if self.origin is None:
            origin = (-(self.nx // 2) * self.pitch, -(self.ny // 2) * self.pitch)
        else:
            origin = (float(self.origin[0]), float(self.origin[1]))
        object.__setattr__(self, "origin", origin)

    @classmethod
    def square(cls, n: int, pitch: float) -> GridSpec:
        return cls(n, n, pitch)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def extent(self) -> tuple[float, float]:
        return (self.nx * self.pitch, self.ny * self.pitch)

    @property
    def center(self) -> tuple[float, float]:
        """Physical position of the axis pixel ``(ny // 2, nx // 2)``."""
        return (
            self.origin[0] + (self.nx // 2) * self.pitch,
            self.origin[1] + (self.ny // 2) * self.pitch,
        )

    def x(self) -> np.ndarray:
        return self.origin[0] + self.pitch * np.arange(self.nx)

    def y(self) -> np.ndarray:
        return self.origin[1] + self.pitch * np.arange(self.ny)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x(), self.y(), indexing="xy")

    def polar(self, center=(0.0, 0.0)) -> tuple[np.ndarray, np.ndarray]:
        """Radius and azimuth of every pixel about ``center``."""
        X, Y = self.meshgrid()
        dx = X - center[0]
        dy = Y - center[1]
        return np.hypot(dx, dy), np.arctan2(dy, dx)

    def to_index(self, point) -> tuple[float, float]:
        """Fractional (column, row) index of a physical point."""
        return (
            (point[0] - self.origin[0]) / self.pitch,
            (point[1] - self.origin[1]) / self.pitch,
        )


@dataclass(frozen=True, eq=False)
class ComplexField:
    grid: GridSpec
    values: np.ndarray
    plane_tag: PlaneTag = PlaneTag.HOLOGRAM_EXIT
    z: float | None = field(default=None, compare=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != self.grid.shape:
            if values.size != self.grid.nx * self.grid.ny:
                raise ValueError(
                    f"values has {values.size} samples, grid needs "
                    f"{self.grid.nx * self.grid.ny}"
                )
            values = values.reshape(self.grid.shape)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "plane_tag", PlaneTag(self.plane_tag))

    def with_values(self, values, **changes) -> ComplexField:
        return replace(self, values=values, **changes)

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def conj(self) -> ComplexField:
        return self.with_values(np.conj(self.values))


@dataclass(frozen=True, eq=False)
class PolarField:
    values: np.ndarray  # (n_r, n_phi)
    r: np.ndarray
    phi: np.ndarray
    r_max: float
    center: tuple[float, float]

    @property
    def n_r(self) -> int:
        return self.values.shape[0]

    @property
    def n_phi(self) -> int:
        return self.values.shape[1]

    @property
    def dr(self) -> float:
        return self.r_max / self.n_r


def total_power(f: ComplexField) -> float:
    """Sum of |psi|^2 times pixel area."""
    # fixed pairwise order inside numpy's sum keeps this deterministic
    return float(np.sum(f.values.real**2 + f.values.imag**2) * f.grid.pitch**2)


def normalize(f: ComplexField) -> ComplexField:
    p = total_power(f)
    if not (p > 0) or not np.isfinite(p):
        raise ValueError("degenerate field")
    return f.with_values(f.values / np.sqrt(p))


def resample_polar(f: ComplexField, center, n_r: int, n_phi: int, r_max: float) -> PolarField:
    """Bilinear resampling onto a uniform (r, phi) lattice around ``center``.

    Real and imaginary parts are interpolated separately; amplitude/phase
    interpolation breaks down at the field zeros this is meant to analyse.
    Radii are ``r_max * (k + 1) / n_r`` so the undefined-azimuth point r=0 is
    never sampled.
    """
    n_r = int(n_r)
    n_phi = int(n_phi)
    if n_r < 1:
        raise ValueError("n_r must be positive")
    if n_phi < 2 or n_phi & (n_phi - 1):
        raise ValueError("n_phi must be a power of two")
    if not r_max > 0:
        raise ValueError("r_max must be positive")
    g = f.grid
    cx, cy = g.to_index(center)
    if not (0 <= cx <= g.nx - 1 and 0 <= cy <= g.ny - 1):
        raise ValueError("center outside grid")
    edge = min(cx, g.nx - 1 - cx, cy, g.ny - 1 - cy) * g.pitch
    if r_max > edge * (1 + 1e-12):
        raise ValueError("polar window exceeds grid")

    r = r_max * np.arange(1, n_r + 1) / n_r
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    R, P = np.meshgrid(r, phi, indexing="ij")
    cols = cx + R * np.cos(P) / g.pitch
    rows = cy + R * np.sin(P) / g.pitch
    coords = np.array([rows.ravel(), cols.ravel()])
    re = ndimage.map_coordinates(f.values.real, coords, order=1, mode="nearest")
    im = ndimage.map_coordinates(f.values.imag, coords, order=1, mode="nearest")
    vals = (re + 1j * im).reshape(n_r, n_phi)
    return PolarField(vals, r, phi, float(r_max), (float(center[0]), float(center[1])))


def write_cfld(path, f: ComplexField) -> None:
    g = f.grid
    header = _CFLD_HEADER.pack(
        CFLD_MAGIC, g.nx, g.ny, g.pitch, g.origin[0], g.origin[1], int(f.plane_tag)
    )
    data = np.empty((g.ny, g.nx, 2), dtype="<f8")
    data[..., 0] = f.values.real
    data[..., 1] = f.values.imag
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(data.tobytes())


def read_cfld(path) -> ComplexField:
    with open(path, "rb") as fh:
        buf = fh.read()
    if len(buf) < _CFLD_HEADER.size or buf[:8] != CFLD_MAGIC:
        raise ValueError("not a CFLD1 file (bad magic)")
    magic, nx, ny, pitch, ox, oy, tag = _CFLD_HEADER.unpack_from(buf)
    n = nx * ny
    body = buf[_CFLD_HEADER.size:]
    if len(body) != 16 * n:
        raise ValueError(f"CFLD1 payload is {len(body)} bytes, expected {16 * n}")
    try:
        tag = PlaneTag(tag)
    except ValueError:
        raise ValueError(f"unknown plane tag {tag}") from None
    data = np.frombuffer(body, dtype="<f8").reshape(ny, nx, 2)
    grid = GridSpec(nx, ny, pitch, (ox, oy))
    return ComplexField(grid, data[..., 0] + 1j * data[..., 1], tag)
