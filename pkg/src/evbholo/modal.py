"""Laguerre-Gauss content of a Gaussian vortex, the HyGG radial integral,
Landau levels and the orbital magnetic moment.

The input beam is ``sqrt(2/pi) exp(-rho^2) exp(i m phi)`` with ``rho = r/w0``
(unit norm). Its LG coefficients have the closed form

    c_p = |m|/2 * Gamma(p + |m|/2) / sqrt(p! (p + |m|)!),

which is evaluated in the log domain throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import constants as C
from scipy import integrate
from scipy.special import eval_genlaguerre, jv

from .specfun import laguerre_scaled, log_gamma_ratio


def lg_radial(p: int, m: int, rho) -> np.ndarray:
    """Radial factor of LG_{p,m}, normalized so that int |LG|^2 rho drho dphi = 1."""
    if p < 0:
        raise ValueError("p must be non-negative")
    am = abs(int(m))
    rho = np.asarray(rho, dtype=np.float64)
    log_norm = 0.5 * (
        (am + 1) * math.log(2.0) - math.log(math.pi) + log_gamma_ratio(float(p), 1.0, am + 1.0)
    )
    sign, log_lag = laguerre_scaled(int(p), am, 2 * rho**2)
    with np.errstate(divide="ignore"):
        log_rho = am * np.log(rho) if am else np.zeros_like(rho)
    out = sign * np.exp(log_norm + log_rho - rho**2 + log_lag)
    return np.where(np.isfinite(out), out, 0.0)


def log_cp_squared(p, m: int):
    """ln |c_p|^2 for real p >= 0 (non-integer p is used by the tail integral)."""
    am = abs(int(m))
    if am == 0:
        raise ValueError("formula undefined for m=0")
    a = am / 2.0
    p = np.asarray(p, dtype=np.float64)
    return 2 * math.log(a) + log_gamma_ratio(p, a, 1.0) + log_gamma_ratio(p, a, am + 1.0)


def cp_coefficient(p, m: int):
    """LG expansion coefficient c_p of the Gaussian vortex with winding m."""
    if np.any(np.asarray(p) < 0):
        raise ValueError("p must be non-negative")
    return np.exp(0.5 * log_cp_squared(p, m))


def peak_index(m: int) -> int:
    """argmax_p |c_p|^2.

    |c_{p+1}/c_p|^2 = (p + |m|/2)^2 / ((p + 1)(p + |m| + 1)) exceeds 1
    exactly while p < (m^2/4 - |m| - 1) / 2.
    """
    am = abs(int(m))
    if am == 0:
        raise ValueError("formula undefined for m=0")
    crit = (am * am / 4.0 - am - 1) / 2.0
    return math.ceil(crit) if crit > 0 else 0


@dataclass(frozen=True, eq=False)
class RadialSpectrum:
    m: int
    p_max: int
    weights: np.ndarray
    tail_bound: float

    @property
    def p(self) -> np.ndarray:
        return np.arange(self.p_max + 1)

    @property
    def peak(self) -> int:
        return int(np.argmax(self.weights))


_GL_NODES, _GL_WEIGHTS = leggauss(64)
_MAX_PANELS = 1 << 16


def _tail_integral(m: int, start: float) -> float:
    """int_start^inf |c(x)|^2 dx with |c(x)|^2 the continuous-p extension."""
    f = lambda x: np.exp(log_cp_squared(x, m))
    # past ~20 peak widths the integrand is a smooth series in a^2/x ~ x^-2
    split = max(start, 20.0 * peak_index(m) + 50.0 * abs(m) + 100.0)
    total = 0.0
    if split > start:
        pk = float(peak_index(m))
        pts = [pk] if start < pk < split else None
        val, err = integrate.quad(
            f, start, split, points=pts, limit=500, epsabs=1e-15, epsrel=1e-13
        )
        if err > 1e-10:
            raise RuntimeError("tail quadrature did not converge")
        total += val
    # x = split / s, s in (0, 1]: integrand f(split/s) split/s^2 tends to (m/2)^2/split
    s = 0.5 * (_GL_NODES + 1.0)
    w = 0.5 * _GL_WEIGHTS
    x = split / s
    total += float(np.sum(w * f(x) * split / s**2))
    return total


def radial_spectrum(m: int, p_max: int | None = None) -> RadialSpectrum:
    """|c_p|^2 for p = 0..p_max plus a bound on the remainder.

    |c_p|^2 decays like (m/2)^2 p^-2, so the remainder is far from negligible
    for any practical p_max. It is bounded by the midpoint-rule comparison
        sum_{p > P} f(p) <= int_{P + 1/2}^inf f(x) dx,
    which holds for convex f (true past the inflection of the peak). Below
    the inflection the same integral is still accurate to |f'(P)|/24.
    """
    am = abs(int(m))
    if am == 0:
        raise ValueError("formula undefined for m=0")
    if p_max is None:
        p_max = 10 * peak_index(m) + 1000
    p_max = int(p_max)
    if p_max < 0:
        raise ValueError("p_max must be non-negative")
    weights = np.exp(log_cp_squared(np.arange(p_max + 1), m))
    tail = _tail_integral(m, p_max + 0.5)
    return RadialSpectrum(int(m), p_max, weights, tail)


def overlap_oracle(m: int, p: int) -> float:
    """<LG_{p,m} | sqrt(2/pi) exp(-rho^2) exp(i m phi)> by adaptive quadrature.

    Built from scipy's Laguerre polynomials and exact factorials, sharing no
    code with :func:`cp_coefficient` or :func:`lg_radial`.
    """
    am = abs(int(m))
    norm = math.sqrt(2 ** (am + 1) * math.factorial(p) / (math.pi * math.factorial(p + am)))

    def integrand(rho):
        lg = norm * rho**am * math.exp(-(rho**2)) * eval_genlaguerre(p, am, 2 * rho**2)
        return math.sqrt(2 / math.pi) * math.exp(-(rho**2)) * lg * rho

    # exp(-2 rho^2) is below 1e-150 past rho = 13
    val, err = integrate.quad(integrand, 0.0, 13.0, limit=400, epsabs=1e-14, epsrel=1e-13)
    if err > 1e-11:
        raise RuntimeError(f"overlap quadrature did not converge (err={err:.2e})")
    return 2 * math.pi * val


def hygg_radial(
    r, z: float, m: int, w0: float, wavelength: float,
    r_min: float = 0.0, r_max: float = math.inf,
    nodes: int = 8, rtol: float = 1e-9,
) -> np.ndarray:
    """Radial profile f(r, z) of a Gaussian vortex launched from the annulus
    r_min <= r' <= r_max, unnormalized:

        exp(-i pi r^2/(z lam)) / (z lam)
            * int J_m(2 pi r r'/(z lam)) exp(-(1 + i pi w0^2/(z lam)) (r'/w0)^2) r' dr'

    Composite Gauss-Legendre with panels no wider than a quarter period of
    both the Bessel kernel and the Gaussian chirp; the panel count doubles
    until two successive results agree to ``rtol`` of the peak magnitude.
    """
    if z == 0:
        raise ValueError("z must be nonzero")
    if not r_min < r_max:
        raise ValueError("need r_min < r_max")
    if not (w0 > 0 and wavelength > 0):
        raise ValueError("w0 and wavelength must be positive")
    r = np.atleast_1d(np.asarray(r, dtype=np.float64))
    lz = z * wavelength
    hi = min(r_max, w0 * math.sqrt(46.0))  # Gaussian below e^-46 beyond
    if hi <= r_min:
        return np.zeros(r.shape, dtype=np.complex128)
    gamma = (1 + 1j * math.pi * w0**2 / lz) / w0**2
    x0, wts0 = leggauss(nodes)

    def integrate_once(n_panels: np.ndarray) -> np.ndarray:
        out = np.empty(r.shape, dtype=np.complex128)
        for i, (ri, npan) in enumerate(zip(r, n_panels)):
            edges = np.linspace(r_min, hi, int(npan) + 1)
            half = 0.5 * np.diff(edges)
            mid = 0.5 * (edges[1:] + edges[:-1])
            rp = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
            w = (half[:, None] * wts0[None, :]).ravel()
            kern = jv(m, 2 * math.pi * ri * rp / lz)
            out[i] = np.sum(w * kern * np.exp(-gamma * rp**2) * rp)
        return out

    # quarter period of J_m(2 pi r r'/(z lam)) in r' is |z lam| / (4 r); of the chirp, |z lam| / (4 hi)
    width = np.minimum(abs(lz) / (4 * np.maximum(r, hi)), w0 / 4)
    n_panels = np.maximum(4, np.ceil((hi - r_min) / width)).astype(np.int64)
    if n_panels.max() > _MAX_PANELS:
        raise ValueError(
            f"integrand too oscillatory ({int(n_panels.max())} panels); "
            "z is far inside the near field of the source"
        )
    prev = integrate_once(n_panels)
    for _ in range(6):
        n_panels = 2 * n_panels
        cur = integrate_once(n_panels)
        scale = max(np.max(np.abs(cur)), 1e-300)
        if np.max(np.abs(cur - prev)) <= rtol * scale:
            return np.exp(-1j * math.pi * r**2 / lz) / lz * cur
        prev = cur
    raise RuntimeError("hygg_radial: panel refinement did not converge")


@dataclass(frozen=True)
class LandauParams:
    B: float  # tesla
    omega: float = field(init=False)  # Larmor frequency, rad/s

    def __post_init__(self):
        object.__setattr__(self, "omega", C.e * self.B / (2 * C.m_e))


def landau_energy(p: int, m: int, lp: LandauParams) -> float:
    """Transverse Landau-level energy hbar Omega (2p + m + |m| + 1), joules."""
    if p < 0:
        raise ValueError("p must be non-negative")
    return C.hbar * lp.omega * (2 * p + m + abs(m) + 1)


def magnetic_moment(m: int) -> float:
    """Orbital magnetic moment along the beam axis, in Bohr magnetons."""
    return float(m)
