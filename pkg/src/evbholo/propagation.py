"""Fraunhofer and Fresnel propagation of sampled fields.

Transforms are DC-centered: for an axis of n samples, array index k holds
frequency bin ``k - n // 2`` both before and after transforming (the
``ifftshift -> fft -> fftshift`` mapping). All propagators are scaled so
that :func:`evbholo.field.total_power` is preserved.

Two Fresnel routes are provided. The single-transform route applies a chirp,
one FFT and an output chirp, and changes the pixel pitch to
``lambda |z| / (n pitch)``; it needs ``|z| >= n pitch^2 / lambda`` for the
input chirp to be sampled. Below that distance the angular-spectrum route
(transfer function on the same grid) is the well-sampled one, so the
crossover ``n pitch^2 / lambda`` selects between them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .field import ComplexField, GridSpec, PlaneTag

_WORKERS = 1


def set_workers(n: int) -> None:
    """Threads used by the FFTs. Output does not depend on this."""
    global _WORKERS
    _WORKERS = max(1, int(n))


def _cfft2(a: np.ndarray, inverse: bool = False) -> np.ndarray:
    a = sfft.ifftshift(a)
    a = sfft.ifft2(a, workers=_WORKERS) if inverse else sfft.fft2(a, workers=_WORKERS)
    return sfft.fftshift(a)


def _centered_coords(n: int) -> np.ndarray:
    return np.arange(n) - n // 2


def _require_square(g: GridSpec, what: str) -> None:
    if g.nx != g.ny:
        raise ValueError(f"{what} needs a square grid (got {g.nx}x{g.ny})")


@dataclass(frozen=True)
class PropagationPlan:
    mode: str  # "fraunhofer" | "fresnel"
    wavelength: float
    z: float | None = None

    def __post_init__(self):
        if self.mode not in ("fraunhofer", "fresnel"):
            raise ValueError(f"unknown propagation mode {self.mode!r}")
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")
        if self.mode == "fresnel" and (self.z is None or self.z == 0):
            raise ValueError("fresnel propagation needs z != 0")

    def apply(self, f: ComplexField) -> ComplexField:
        if self.mode == "fraunhofer":
            return fraunhofer(f, self.wavelength)
        return fresnel(f, self.z, self.wavelength)


def fraunhofer(f: ComplexField, wavelength: float) -> ComplexField:
    """Far field as a function of scattering angle; pitch = lambda / (n pitch) rad."""
    g = f.grid
    _require_square(g, "fraunhofer")
    n = g.nx
    pitch_out = wavelength / (n * g.pitch)
    # unitary DFT times pitch_in / pitch_out keeps sum |psi|^2 pitch^2 fixed
    vals = _cfft2(f.values) * (g.pitch / (n * pitch_out))
    out = GridSpec(n, n, pitch_out)
    return ComplexField(out, vals, PlaneTag.FRAUNHOFER)


def fresnel_crossover(grid: GridSpec, wavelength: float) -> float:
    """Distance n pitch^2 / lambda separating the two Fresnel routes."""
    return max(grid.nx, grid.ny) * grid.pitch**2 / wavelength


def fresnel(f: ComplexField, z: float, wavelength: float, method: str = "auto") -> ComplexField:
    """Fresnel propagation by distance ``z``.

    ``method`` is "auto", "single-fft" or "angular-spectrum". "auto" uses the
    single transform at or beyond the crossover distance. Forcing
    "single-fft" below it raises, since the input chirp would alias.
    """
    if z == 0:
        raise ValueError("fresnel propagation needs z != 0")
    zc = fresnel_crossover(f.grid, wavelength)
    if method == "auto":
        method = "single-fft" if abs(z) >= zc else "angular-spectrum"
    if method == "single-fft":
        if abs(z) < zc * (1 - 1e-12):
            raise ValueError("use angular-spectrum regime")
        return _fresnel_single(f, z, wavelength)
    if method == "angular-spectrum":
        return angular_spectrum(f, z, wavelength)
    raise ValueError(f"unknown fresnel method {method!r}")


def _fresnel_single(f: ComplexField, z: float, wavelength: float) -> ComplexField:
    g = f.grid
    _require_square(g, "single-transform fresnel")
    n = g.nx
    lz = wavelength * z
    pitch_out = wavelength * abs(z) / (n * g.pitch)
    u = _centered_coords(n)
    x1 = u * g.pitch
    chirp_in = np.exp(1j * math.pi * x1**2 / lz)
    x2 = u * pitch_out
    chirp_out = np.exp(1j * math.pi * x2**2 / lz)
    a = f.values * chirp_in[None, :] * chirp_in[:, None]
    # kernel exp(-2 pi i x1 x2 / (lambda z)); for z < 0 this is the inverse DFT
    if z > 0:
        a = _cfft2(a)
    else:
        a = _cfft2(a, inverse=True) * (n * n)
    a *= chirp_out[None, :] * chirp_out[:, None]
    a *= g.pitch**2 / (1j * lz)
    return ComplexField(GridSpec(n, n, pitch_out), a, PlaneTag.FRESNEL, z=z)


def angular_spectrum(f: ComplexField, z: float, wavelength: float) -> ComplexField:
    """Paraxial transfer function exp(-i pi lambda z (fx^2 + fy^2)) on the same grid.

    Sign matches the single-transform route (exp(+i pi r^2 / (lambda z)) kernel).
    """
    g = f.grid
    fx = _centered_coords(g.nx) / (g.nx * g.pitch)
    fy = _centered_coords(g.ny) / (g.ny * g.pitch)
    hx = np.exp(-1j * math.pi * wavelength * z * fx**2)
    hy = np.exp(-1j * math.pi * wavelength * z * fy**2)
    spec = _cfft2(f.values)
    spec *= hy[:, None] * hx[None, :]
    vals = _cfft2(spec, inverse=True)
    return ComplexField(g, vals, PlaneTag.FRESNEL, z=z)


def order_angle(n: int, period: float, wavelength: float) -> float:
    """Small-angle grating equation n lambda / period."""
    if not (period > 0 and wavelength > 0):
        raise ValueError("period and wavelength must be positive")
    return n * wavelength / period


def order_position(far: ComplexField, n: int, period: float, wavelength: float) -> tuple[float, float]:
    """Far-field coordinates of the n-th order; the carrier runs along +x."""
    cx, cy = far.grid.center
    return (cx + order_angle(n, period, wavelength), cy)


def disk_mask(grid: GridSpec, center, radius: float) -> np.ndarray:
    X, Y = grid.meshgrid()
    return (X - center[0]) ** 2 + (Y - center[1]) ** 2 <= radius**2


def select_order(far: ComplexField, n: int, period: float, radius: float, wavelength: float) -> ComplexField:
    """Zero everything outside a disk of ``radius`` (rad) around the n-th order."""
    if far.plane_tag != PlaneTag.FRAUNHOFER:
        raise ValueError("select_order needs a fraunhofer-plane field")
    g = far.grid
    c = order_position(far, n, period, wavelength)
    x0, y0 = g.x()[0], g.y()[0]
    x1, y1 = g.x()[-1], g.y()[-1]
    grid_covers_all = radius >= math.hypot(max(c[0] - x0, x1 - c[0]), max(c[1] - y0, y1 - c[1]))
    if not grid_covers_all and (
        c[0] - radius < x0 or c[0] + radius > x1 or c[1] - radius < y0 or c[1] + radius > y1
    ):
        raise ValueError("order disk exits grid")
    vals = np.where(disk_mask(g, c, radius), far.values, 0.0)
    return far.with_values(vals)


def order_powers(far: ComplexField, orders, period: float, radius: float, wavelength: float) -> dict[int, float]:
    """Power inside each order's selection disk."""
    out = {}
    for n in orders:
        sel = select_order(far, n, period, radius, wavelength)
        out[n] = float(np.sum(np.abs(sel.values) ** 2) * far.grid.pitch**2)
    return out
