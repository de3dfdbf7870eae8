"""Acceptance gate. Each test prints one PASS/FAIL line, then asserts."""

import math
import time

import numpy as np
import pytest
from scipy import constants as C
from scipy.special import jv

from evbholo.cli import main
from evbholo.field import ComplexField, GridSpec, normalize, total_power
from evbholo.hologram import (
    BeamParams,
    HologramSpec,
    exit_wave,
    gaussian_illumination,
    interaction_constant,
    synthesize_thickness,
    transmission,
)
from evbholo.modal import cp_coefficient, hygg_radial, overlap_oracle, radial_spectrum
from evbholo.oam import centroid, enclosed_charge, oam_spectrum, radial_profile, singularity_map
from evbholo.propagation import (
    fraunhofer,
    fresnel,
    fresnel_crossover,
    order_position,
    order_powers,
    select_order,
)

PITCH = 1e-9
BEAM = BeamParams(200e3, 1.0)
LAM = BEAM.wavelength
SIGMA = interaction_constant(BEAM)
T0 = 30e-9


@pytest.fixture
def report(capsys):
    def _report(name, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, detail

    return _report


def fork_far_field(m, n, period_px, waist_px, dead_px, aperture_px, dchi):
    g = GridSpec.square(n, PITCH)
    beam = BeamParams(200e3, waist_px * PITCH)
    spec = HologramSpec(
        m, period_px * PITCH, T0, dchi / (SIGMA * T0), base=120e-9,
        aperture_radius=aperture_px * PITCH, dead_zone_radius=dead_px * PITCH,
    )
    trans = transmission(synthesize_thickness(spec, g), beam, spec)
    return fraunhofer(exit_wave(gaussian_illumination(g, beam.waist), trans), LAM), spec


# 1: order efficiencies of a plain sinusoidal phase grating

JA_DCHI = [0.5, 1.84 * 2, 3.68]


def test_c1_jacobi_anger(report):
    t_start = time.perf_counter()
    n, period = 2048, 8 * PITCH
    g = GridSpec.square(n, PITCH)
    worst = 0.0
    for dchi in JA_DCHI:
        spec = HologramSpec(0, period, T0, dchi / (SIGMA * T0))
        # uniform illumination: the grid window is the aperture
        far = fraunhofer(normalize(transmission(synthesize_thickness(spec, g), BEAM, spec)), LAM)
        pw = order_powers(far, range(-2, 3), period, 0.5 * LAM / period, LAM)
        total = total_power(far)
        for k in range(-2, 3):
            want = jv(k, dchi / 2) ** 2  # sum_k J_k^2 = 1
            worst = max(worst, abs(pw[k] / total - want))
    dt = time.perf_counter() - t_start
    report("C1 Jacobi-Anger order powers", worst < 0.01 and dt < 30,
           f"max |P(n)/sum P - J_n^2| = {worst:.2e} (tol 1e-2), {dt:.1f} s")


# 2: OAM purity of the isolated first order

def _purity(m, n, waist_px, dead_px, aperture_px):
    far, spec = fork_far_field(m, n, 8, waist_px, dead_px, aperture_px, 1.0)
    radius = 0.5 * LAM / spec.period
    sel = select_order(far, 1, spec.period, radius, LAM)
    sp = oam_spectrum(sel, centroid(sel), 256, 1 << max(3, math.ceil(math.log2(4 * m + 4))), 0.98 * radius)
    q = enclosed_charge(singularity_map(sel, threshold=0.0), order_position(far, 1, spec.period, LAM), 0.7 * radius)
    return sp.weight(m), q


@pytest.mark.parametrize("m,dead_px", [(3, 8), (20, 30)])
def test_c2_purity_small(report, m, dead_px):
    w, q = _purity(m, 2048, 300, dead_px, 950)
    report(f"C2 OAM purity m={m}", w > 0.99 and q == m, f"weight {w:.5f} (> 0.99), enclosed charge {q}")


@pytest.mark.slow
def test_c2_purity_m200(report):
    t_start = time.perf_counter()
    w, q = _purity(200, 4096, 1000, 150, 1950)
    dt = time.perf_counter() - t_start
    report("C2 OAM purity m=200", w > 0.95 and dt < 300, f"weight {w:.5f} (> 0.95), enclosed charge {q}, {dt:.1f} s")


# 3: unfiltered spectrum with the second order inside the window

@pytest.mark.slow
def test_c3_second_order_bias(report):
    m, n, sep_px = 200, 4096, 512  # sep = lam / period in far-field pixels for an 8 px carrier
    # zero order extinguished (J0 = 0) so that +2 dominates the contaminating light
    far, spec = fork_far_field(m, n, 8, 1000, 250, 0.475 * n, 4.81)
    oc = order_position(far, 1, spec.period, LAM)
    assert far.grid.pitch * sep_px == pytest.approx(LAM / spec.period)
    pw = order_powers(far, [0, 2], spec.period, 0.45 * LAM / spec.period, LAM)
    sp = oam_spectrum(far, oc, 512, 2048, 1.7 * sep_px * far.grid.pitch)
    report("C3 second-order OAM bias", sp.mean > m,
           f"mean {sp.mean:.2f} +/- {sp.sem:.2f} vs m = {m}, P0 {pw[0]:.3f} P2 {pw[2]:.3f}")


# 4: radial LG spectrum

def test_c4_radial_spectrum(report):
    t_start = time.perf_counter()
    err = max(abs(cp_coefficient(p, m) - overlap_oracle(m, p))
              for m in range(-5, 6) if m != 0 for p in range(21))
    norm = {m: radial_spectrum(m) for m in [1, 2, 3, 5, 10, 50, 200]}
    closure = max(abs(s.weights.sum() + s.tail_bound - 1) for s in norm.values())
    peak = norm[200].peak
    dt = time.perf_counter() - t_start
    ok = err < 1e-8 and closure < 1e-6 and abs(peak - 4900) <= 0.05 * 4900 and dt < 10
    report("C4 radial spectrum", ok,
           f"oracle err {err:.1e}, closure err {closure:.1e}, m=200 peak p={peak}, {dt:.1f} s")


# 5: HyGG profile against 2-D Fresnel propagation

def test_c5_hygg_vs_fresnel(report):
    t_start = time.perf_counter()
    n, w0 = 2048, 32 * PITCH
    g = GridSpec.square(n, PITCH)
    X, Y = g.meshgrid()
    zr = math.pi * w0**2 / LAM
    worst = 0.0
    for m in (1, 3):
        v = np.exp(-(X**2 + Y**2) / w0**2) * np.exp(1j * m * np.arctan2(Y, X))
        v[n // 2, n // 2] = 0  # phase undefined on the axis pixel
        f = ComplexField(g, v)
        for z in (zr, 3 * zr):
            out = fresnel(f, z, LAM)
            r_max = 4 * w0 * math.hypot(1, z / zr)
            n_bins = int(r_max / (1.5 * out.grid.pitch))
            r, prof = radial_profile(out, (0.0, 0.0), n_bins, r_max)
            ref = np.abs(hygg_radial(r, z, m, w0, LAM)) ** 2
            prof, ref = prof / np.nanmax(prof), ref / ref.max()
            worst = max(worst, np.nansum(np.abs(prof - ref)) / np.nansum(ref))
    dt = time.perf_counter() - t_start
    report("C5 HyGG vs Fresnel", worst < 0.02 and dt < 120, f"max L1 {worst:.4f} (tol 0.02), {dt:.1f} s")


# 6: power conservation and thread determinism

def test_c6_power(report):
    n = 512
    g = GridSpec.square(n, PITCH)
    spec = HologramSpec(20, 8 * PITCH, T0, 1.0 / (SIGMA * T0))
    beam = BeamParams(200e3, 100 * PITCH)
    illum = gaussian_illumination(g, beam.waist)
    ex = exit_wave(illum, transmission(synthesize_thickness(spec, g), beam, spec))
    p0 = total_power(illum)
    zc = fresnel_crossover(g, LAM)
    checks = {
        "transmission": total_power(ex),
        "fraunhofer": total_power(fraunhofer(ex, LAM)),
        "fresnel single-fft": total_power(fresnel(ex, 3 * zc, LAM, method="single-fft")),
        "fresnel angular-spectrum": total_power(fresnel(ex, 0.3 * zc, LAM, method="angular-spectrum")),
    }
    worst = max(abs(v / p0 - 1) for v in checks.values())
    report("C6 power conservation", worst < 1e-10, f"max relative drift {worst:.1e} over {', '.join(checks)}")


CFG = """\
[beam]
energy = 200e3 eV
waist = 80e-9 m
[grid]
n = 256
pitch = 1e-9 m
[hologram]
m = 3
period = 8e-9 m
depth = 30e-9 m
v_mip = 4.5 V
base = 120e-9 m
aperture_radius = 115e-9 m
dead_zone_radius = 6e-9 m
[modal]
z = 0.05 m
profile_points = 16
"""


@pytest.mark.parametrize("mode", ["fraunhofer", "fresnel"])
def test_c6_thread_determinism(report, tmp_path, mode):
    cfg = tmp_path / "c.cfg"
    extra = "[propagation]\nmode = fresnel\nz = 2e-6 m\n[analysis]\nselect_order = false\n" if mode == "fresnel" else ""
    cfg.write_text(CFG + extra)
    outs = []
    for threads in ("1", "4"):
        out = tmp_path / f"t{threads}"
        assert main(["pipeline", "--config", str(cfg), "--out", str(out), "--threads", threads]) == 0
        outs.append(out)
    names = sorted(p.name for p in outs[0].iterdir())
    same = names == sorted(p.name for p in outs[1].iterdir()) and all(
        (outs[0] / nm).read_bytes() == (outs[1] / nm).read_bytes() for nm in names)
    report(f"C6 thread determinism ({mode})", same, f"{len(names)} files compared byte for byte, --threads 1 vs 4")


# 7: wavelength at 200 keV

def test_c7_wavelength(report):
    e = 200e3 * C.e
    mc2 = C.m_e * C.c**2
    exact = C.h * C.c / math.sqrt(e * (e + 2 * mc2))
    lam = BeamParams(200e3, 1.0).wavelength
    # tabulated rest energy in MeV carries 11 digits; 1e-10 covers its rounding
    ok = abs(lam / exact - 1) < 1e-10 and abs(lam / 2.5e-12 - 1) < 0.005
    report("C7 wavelength", ok, f"lambda {lam * 1e12:.5f} pm, exact {exact * 1e12:.5f} pm, "
           f"{100 * (lam / 2.5e-12 - 1):+.2f}% from 2.5 pm")
