"""Fork-hologram synthesis and thickness-to-phase conversion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants as C

from .field import ComplexField, GridSpec, PlaneTag, normalize
from .pgm import PGMError, read_pgm, write_pgm

ELECTRON_REST_ENERGY_EV = C.physical_constants["electron mass energy equivalent in MeV"][0] * 1e6


def electron_wavelength(kinetic_energy_ev: float, rest_energy_ev: float = ELECTRON_REST_ENERGY_EV) -> float:
    """Relativistic de Broglie wavelength in meters."""
    E = kinetic_energy_ev * C.e
    E0 = rest_energy_ev * C.e
    m_e = E0 / C.c**2
    return C.h / math.sqrt(2 * m_e * E * (1 + E / (2 * E0)))


@dataclass(frozen=True)
class BeamParams:
    kinetic_energy: float  # eV
    waist: float  # m, illumination exp(-r^2 / waist^2)
    rest_energy: float = ELECTRON_REST_ENERGY_EV  # eV
    wavelength: float = field(init=False)

    def __post_init__(self):
        if not self.kinetic_energy > 0:
            raise ValueError("kinetic_energy must be positive")
        if not self.rest_energy > 0:
            raise ValueError("rest_energy must be positive")
        if not self.waist > 0:
            raise ValueError("waist must be positive")
        object.__setattr__(
            self, "wavelength", electron_wavelength(self.kinetic_energy, self.rest_energy)
        )


@dataclass(frozen=True)
class HologramSpec:
    m: int
    period: float  # m
    depth: float  # modulation depth t0, m
    v_mip: float  # V
    base: float = 0.0  # constant thickness offset, m
    aperture_radius: float = math.inf  # m
    dead_zone_radius: float = 0.0  # m

    def __post_init__(self):
        if int(self.m) != self.m:
            raise ValueError("m must be an integer")
        object.__setattr__(self, "m", int(self.m))
        if not self.period > 0:
            raise ValueError("period must be positive")
        if not self.depth >= 0:
            raise ValueError("depth must be non-negative")
        if not self.base >= 0:
            raise ValueError("base thickness must be non-negative")
        if not self.aperture_radius > 0:
            raise ValueError("aperture_radius must be positive")
        if not 0 <= self.dead_zone_radius < self.aperture_radius:
            raise ValueError("dead_zone_radius must lie in [0, aperture_radius)")


@dataclass(frozen=True, eq=False)
class ThicknessMap:
    grid: GridSpec
    t: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=np.float64).reshape(self.grid.shape)
        if np.any(t < 0) or not np.all(np.isfinite(t)):
            raise ValueError("thickness must be finite and non-negative")
        t.setflags(write=False)
        object.__setattr__(self, "t", t)


def interaction_constant(beam: BeamParams) -> float:
    """Phase per volt per meter of material, rad / (V m).

    With energies in eV the elementary charge cancels out of the
    relativistic energy factor.
    """
    E = beam.kinetic_energy
    E0 = beam.rest_energy
    return 2 * math.pi / beam.wavelength * (E + E0) / (E * (E + 2 * E0))


def synthesize_thickness(spec: HologramSpec, grid: GridSpec) -> ThicknessMap:
    """Sinusoidal fork-grating thickness about the physical origin.

    Stops (aperture, dead zone) are not encoded in the map; they are applied
    by :func:`transmission` from the HologramSpec geometry.
    """
    if grid.pitch > spec.period / 4 * (1 + 1e-12):
        raise ValueError("carrier undersampled")
    X, Y = grid.meshgrid()
    alpha = spec.m * np.arctan2(Y, X) + 2 * np.pi * X / spec.period
    t = spec.base + spec.depth * (1 + np.cos(alpha)) / 2
    return ThicknessMap(grid, t)


def stop_mask(grid: GridSpec, spec: HologramSpec) -> np.ndarray:
    """True where the membrane transmits: dead_zone_radius < r <= aperture_radius."""
    X, Y = grid.meshgrid()
    r = np.hypot(X, Y)
    mask = r <= spec.aperture_radius
    if spec.dead_zone_radius > 0:
        mask &= r > spec.dead_zone_radius
    return mask


def phase_shift(t: ThicknessMap, beam: BeamParams, v_mip: float) -> np.ndarray:
    return interaction_constant(beam) * v_mip * t.t


def transmission(t: ThicknessMap, beam: BeamParams, spec: HologramSpec) -> ComplexField:
    """Phase-only transmission exp(i dchi), zeroed by the aperture and dead-zone stops."""
    chi = phase_shift(t, beam, spec.v_mip)
    vals = np.where(stop_mask(t.grid, spec), np.exp(1j * chi), 0.0)
    return ComplexField(t.grid, vals, PlaneTag.HOLOGRAM_EXIT)


def gaussian_illumination(grid: GridSpec, waist: float) -> ComplexField:
    """Normalized exp(-r^2/w0^2) centered on the grid axis pixel."""
    if not waist > 0:
        raise ValueError("waist must be positive")
    cx, cy = grid.center
    X, Y = grid.meshgrid()
    vals = np.exp(-((X - cx) ** 2 + (Y - cy) ** 2) / waist**2)
    return normalize(ComplexField(grid, vals, PlaneTag.HOLOGRAM_EXIT))


def exit_wave(illum: ComplexField, trans: ComplexField) -> ComplexField:
    if illum.grid != trans.grid:
        raise ValueError("grid mismatch between illumination and transmission")
    return ComplexField(illum.grid, illum.values * trans.values, PlaneTag.HOLOGRAM_EXIT)


def load_thickness_map(path, pitch: float, scale: float, origin=None) -> ThicknessMap:
    """Read a PGM thickness map; ``scale`` is meters per gray level."""
    if not pitch > 0:
        raise ValueError("pitch must be positive")
    if not scale > 0:
        raise ValueError("scale must be positive")
    img, _, _ = read_pgm(path)
    h, w = img.shape
    if h < 2 or w < 2:
        raise PGMError("malformed PGM: map needs at least 2x2 samples")
    grid = GridSpec(w, h, pitch, origin)
    return ThicknessMap(grid, img.astype(np.float64) * scale)


def save_thickness_map(path, tmap: ThicknessMap, scale: float) -> None:
    """Write the map as 16-bit PGM with gray = round(t / scale)."""
    levels = np.rint(tmap.t / scale)
    if levels.max(initial=0) > 65535:
        raise ValueError("thickness exceeds 16-bit range at this scale")
    write_pgm(
        path,
        levels.astype(np.uint16),
        comments=[f"scale {scale!r} m/level", f"pitch {tmap.grid.pitch!r} m"],
    )
