"""OAM spectra, phase-singularity maps and radial profiles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import ComplexField, resample_polar

DEFAULT_THRESHOLD = 1e-4


@dataclass(frozen=True, eq=False)
class OAMSpectrum:
    m_values: np.ndarray
    weights: np.ndarray
    mean: float
    sem: float
    ring_power: np.ndarray  # per-ring power r |a(r)|^2 dr summed over m, before normalization

    @property
    def peak(self) -> int:
        return int(self.m_values[np.argmax(self.weights)])

    @property
    def std(self) -> float:
        return float(np.sqrt(np.sum(self.weights * (self.m_values - self.mean) ** 2)))

    def weight(self, m: int) -> float:
        i = m - int(self.m_values[0])
        if 0 <= i < len(self.weights):
            return float(self.weights[i])
        return 0.0


@dataclass(frozen=True, eq=False)
class SingularityMap:
    ix: np.ndarray
    iy: np.ndarray
    q: np.ndarray
    x: np.ndarray  # plaquette-center coordinates
    y: np.ndarray

    def __len__(self):
        return len(self.q)

    @property
    def total_charge(self) -> int:
        return int(np.sum(self.q))


def centroid(f: ComplexField) -> tuple[float, float]:
    """Intensity-weighted center of mass in physical coordinates."""
    inten = f.intensity
    tot = inten.sum()
    if not tot > 0:
        raise ValueError("degenerate field")
    g = f.grid
    cx = float(inten.sum(axis=0) @ g.x() / tot)
    cy = float(inten.sum(axis=1) @ g.y() / tot)
    return (cx, cy)


def oam_spectrum(f: ComplexField, center, n_r: int, n_phi: int, r_max: float) -> OAMSpectrum:
    """Azimuthal-harmonic power spectrum about ``center``.

    Each ring's samples are Fourier transformed along phi; ring powers are
    combined with the area weight r dr. ``sem`` is the weighted standard
    deviation of m divided by the square root of the effective number of
    rings, (sum P_r)^2 / sum P_r^2.
    """
    pol = resample_polar(f, center, n_r, n_phi, r_max)
    a = np.fft.fft(pol.values, axis=1) / pol.n_phi
    a = np.fft.fftshift(a, axes=1)
    m_values = np.arange(pol.n_phi) - pol.n_phi // 2
    ring_w = pol.r * pol.dr
    per_ring = np.abs(a) ** 2 * ring_w[:, None]
    weights = per_ring.sum(axis=0)
    tot = weights.sum()
    if not tot > 0:
        raise ValueError("degenerate field")
    weights = weights / tot
    mean = float(np.dot(m_values, weights))
    std = float(np.sqrt(np.dot(weights, (m_values - mean) ** 2)))
    ring_power = per_ring.sum(axis=1)
    n_eff = ring_power.sum() ** 2 / np.sum(ring_power**2)
    return OAMSpectrum(m_values, weights, mean, std / np.sqrt(n_eff), ring_power)


def _wrap(d: np.ndarray) -> np.ndarray:
    """Wrap to (-pi, pi]."""
    w = np.mod(d + np.pi, 2 * np.pi) - np.pi
    w[w == -np.pi] = np.pi
    return w


def plaquette_charges(f: ComplexField) -> np.ndarray:
    """Winding number of every 2x2 plaquette, shape (ny-1, nx-1).

    Corners are visited counter-clockwise in (x, y): (ix,iy) -> (ix+1,iy) ->
    (ix+1,iy+1) -> (ix,iy+1).
    """
    ph = np.angle(f.values)
    dx = _wrap(np.diff(ph, axis=1))  # (ny, nx-1): (ix,iy)->(ix+1,iy)
    dy = _wrap(np.diff(ph, axis=0))  # (ny-1, nx): (ix,iy)->(ix,iy+1)
    circ = dx[:-1, :] + dy[:, 1:] - dx[1:, :] - dy[:, :-1]
    return np.rint(circ / (2 * np.pi)).astype(np.int64)


def singularity_map(f: ComplexField, threshold: float = DEFAULT_THRESHOLD) -> SingularityMap:
    """Plaquettes with nonzero winding; dark plaquettes are skipped.

    A plaquette is skipped when its dimmest corner is below
    ``threshold * max(|psi|^2)``. ``threshold=0`` keeps every plaquette.
    """
    q = plaquette_charges(f)
    if threshold > 0:
        inten = f.intensity
        dim = np.minimum.reduce(
            [inten[:-1, :-1], inten[:-1, 1:], inten[1:, :-1], inten[1:, 1:]]
        )
        q = np.where(dim >= threshold * inten.max(), q, 0)
    iy, ix = np.nonzero(q)
    g = f.grid
    return SingularityMap(
        ix=ix,
        iy=iy,
        q=q[iy, ix],
        x=g.origin[0] + (ix + 0.5) * g.pitch,
        y=g.origin[1] + (iy + 0.5) * g.pitch,
    )


def enclosed_charge(smap: SingularityMap, center, radius: float) -> int:
    """Net charge of plaquettes whose centers lie within the disk."""
    if len(smap) == 0:
        return 0
    inside = (smap.x - center[0]) ** 2 + (smap.y - center[1]) ** 2 <= radius**2
    return int(np.sum(smap.q[inside]))


def radial_profile(f: ComplexField, center, n_bins: int, r_max: float | None = None):
    """Azimuthally averaged |psi|^2 in equal-width radius bins.

    Returns ``(r, intensity)`` with ``r`` the bin centers. ``r_max`` defaults
    to the distance from ``center`` to the nearest grid edge. Empty bins
    (possible for very fine binning near r=0) are reported as NaN.
    """
    g = f.grid
    if r_max is None:
        x, y = g.x(), g.y()
        r_max = min(center[0] - x[0], x[-1] - center[0], center[1] - y[0], y[-1] - center[1])
    if not r_max > 0:
        raise ValueError("r_max must be positive")
    r, _ = g.polar(center)
    edges = np.linspace(0.0, r_max, int(n_bins) + 1)
    idx = np.searchsorted(edges, r.ravel(), side="right") - 1
    keep = (idx >= 0) & (idx < n_bins)
    sums = np.bincount(idx[keep], weights=f.intensity.ravel()[keep], minlength=n_bins)
    counts = np.bincount(idx[keep], minlength=n_bins)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = np.where(counts > 0, sums / counts, np.nan)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return centers, mean
