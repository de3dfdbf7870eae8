"""evbholo command-line driver.

    evbholo synthesize --config run.cfg --out DIR
    evbholo propagate  --config run.cfg --input DIR/transmission.cfld --out DIR
    evbholo analyze    --config run.cfg --input DIR/farfield.cfld --out DIR
    evbholo modal      --config run.cfg --out DIR
    evbholo pipeline   --config run.cfg --out DIR

Failures print one line ``error: <field>: <message>`` to stderr. Config and
precondition errors exit with status 2, I/O and numerical failures with 1.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .field import ComplexField, PlaneTag, read_cfld, total_power, write_cfld
from .hologram import (
    exit_wave,
    gaussian_illumination,
    save_thickness_map,
    synthesize_thickness,
    transmission,
)
from .modal import hygg_radial, radial_spectrum
from .oam import centroid, enclosed_charge, oam_spectrum, radial_profile, singularity_map
from .pgm import PGMError, render_intensity, write_pgm
from .propagation import (
    disk_mask,
    fraunhofer,
    fresnel,
    order_angle,
    order_position,
    select_order,
    set_workers,
)

FMT = "{:.12e}"


class CLIError(Exception):
    def __init__(self, field: str, message: str, code: int = 1):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
        self.code = code


def _fmt(x) -> str:
    return FMT.format(float(x))


def _write_csv(path: Path, header: str, rows) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


# ---- subcommands ----

def cmd_synthesize(cfg: RunConfig, out: Path) -> dict:
    grid = cfg.grid()
    spec = cfg.hologram()
    beam = cfg.beam()
    try:
        tmap = synthesize_thickness(spec, grid)
    except ValueError as e:
        raise CLIError("hologram.period", str(e), code=2) from None
    try:
        save_thickness_map(out / "thickness.pgm", tmap, cfg.get("hologram", "map_scale"))
    except ValueError as e:
        raise CLIError("hologram.map_scale", str(e), code=2) from None
    trans = transmission(tmap, beam, spec)
    write_cfld(out / "transmission.cfld", trans)
    return {"transmission": trans}


def _order_separation(cfg: RunConfig, beam) -> float:
    return order_angle(1, cfg.get("hologram", "period"), beam.wavelength)


def cmd_propagate(cfg: RunConfig, field: ComplexField, out: Path) -> ComplexField:
    beam = cfg.beam()
    if cfg.get("propagation", "illuminate"):
        illum = gaussian_illumination(field.grid, beam.waist)
        try:
            field = exit_wave(illum, field)
        except ValueError as e:
            raise CLIError("input", str(e)) from None
    mode = cfg.get("propagation", "mode")
    try:
        if mode == "fraunhofer":
            res = fraunhofer(field, beam.wavelength)
            stem = "farfield"
        else:
            z = cfg.get("propagation", "z")
            res = fresnel(field, z, beam.wavelength, cfg.get("propagation", "method"))
            stem = "fresnel"
    except ConfigError:
        raise
    except ValueError as e:
        raise CLIError("propagation", str(e), code=2) from None
    write_cfld(out / f"{stem}.cfld", res)
    shown = res.values
    if cfg.get("render", "beam_stop") and res.plane_tag == PlaneTag.FRAUNHOFER:
        # rendering only: the saved field keeps the zero order
        r = cfg.get("render", "beam_stop_radius") * _order_separation(cfg, beam)
        shown = np.where(disk_mask(res.grid, res.grid.center, r), 0.0, shown)
    write_pgm(out / f"{stem}.pgm", render_intensity(shown), comments=[f"plane {res.plane_tag.name}"])
    return res


def _n_phi_for(m: int) -> int:
    return 1 << max(3, math.ceil(math.log2(4 * abs(m) + 4)))


def cmd_analyze(cfg: RunConfig, field: ComplexField, out: Path) -> dict:
    m_design = cfg.get_optional("hologram", "m")
    m_design = 0 if m_design is None else m_design
    g = field.grid
    if cfg.get("analysis", "select_order") and field.plane_tag == PlaneTag.FRAUNHOFER:
        beam = cfg.beam()
        n = cfg.get("analysis", "order")
        period = cfg.get("hologram", "period")
        radius = cfg.get("analysis", "order_radius") * _order_separation(cfg, beam)
        try:
            field = select_order(field, n, period, radius, beam.wavelength)
        except ValueError as e:
            raise CLIError("analysis.order_radius", str(e), code=2) from None
        axis = order_position(field, n, period, beam.wavelength)
        if cfg.get("analysis", "axis") == "centroid":
            axis = centroid(field)
        m_expect = n * m_design
    else:
        axis = centroid(field) if cfg.get("analysis", "axis") == "centroid" else g.center
        x, y = g.x(), g.y()
        radius = min(axis[0] - x[0], x[-1] - axis[0], axis[1] - y[0], y[-1] - axis[1])
        m_expect = m_design
        if not radius > 0:
            raise CLIError("analysis.axis", "beam axis lies outside the grid")
    n_phi = cfg.get("analysis", "n_phi") or _n_phi_for(m_expect)
    r_max = cfg.get("analysis", "r_max") * radius
    try:
        spec = oam_spectrum(field, axis, cfg.get("analysis", "n_r"), n_phi, r_max)
    except ValueError as e:
        raise CLIError("analysis", str(e), code=2) from None
    smap = singularity_map(field, cfg.get("analysis", "threshold"))
    cmap = smap
    if cfg.get("analysis", "charge_threshold") != cfg.get("analysis", "threshold"):
        cmap = singularity_map(field, cfg.get("analysis", "charge_threshold"))
    charge = enclosed_charge(cmap, axis, cfg.get("analysis", "charge_radius") * radius)
    r, inten = radial_profile(field, axis, cfg.get("analysis", "profile_bins"), r_max)

    _write_csv(out / "oam_spectrum.csv", "m,weight",
               ((str(int(m)), _fmt(w)) for m, w in zip(spec.m_values, spec.weights)))
    _write_csv(out / "singularities.csv", "ix,iy,q",
               ((str(int(a)), str(int(b)), str(int(q))) for a, b, q in zip(smap.ix, smap.iy, smap.q)))
    _write_csv(out / "radial_profile.csv", "r_meters,intensity",
               ((_fmt(a), "nan" if np.isnan(b) else _fmt(b)) for a, b in zip(r, inten)))
    lines = [
        f"plane = {field.plane_tag.name}",
        f"axis_x = {_fmt(axis[0])}",
        f"axis_y = {_fmt(axis[1])}",
        f"peak_m = {spec.peak}",
        f"mean_m = {spec.mean:.6f}",
        f"sem_m = {spec.sem:.6f}",
        f"std_m = {spec.std:.6f}",
        f"weight_at_design_m = {spec.weight(m_expect):.6f}",
        f"enclosed_charge = {charge}",
        f"singularities = {len(smap)}",
        f"analyzed_power = {_fmt(total_power(field))}",
    ]
    (out / "summary.txt").write_text("\n".join(lines) + "\n", encoding="ascii")
    return {"spectrum": spec, "charge": charge}


def cmd_modal(cfg: RunConfig, out: Path) -> dict:
    m = cfg.get_optional("modal", "m")
    if m is None:
        m = cfg.get("hologram", "m")
    try:
        rs = radial_spectrum(m, cfg.get_optional("modal", "p_max"))
    except ValueError as e:
        raise CLIError("modal.m", str(e), code=2) from None
    _write_csv(out / "radial_spectrum.csv", "p,weight",
               ((str(p), _fmt(w)) for p, w in zip(rs.p, rs.weights)))
    beam = cfg.beam()
    if cfg.has("modal", "z"):
        z = cfg.get("modal", "z")
        r_hi = cfg.get_optional("modal", "profile_r_max")
        if r_hi is None:
            # a few far-field ring radii: sqrt(|m|) w(z) with w(z) ~ lambda z / (pi w0)
            wz = math.hypot(beam.waist, beam.wavelength * z / (math.pi * beam.waist))
            r_hi = 3.0 * max(1.0, math.sqrt(abs(m))) * wz
        r = np.linspace(0.0, r_hi, cfg.get("modal", "profile_points"))
        try:
            f = hygg_radial(r, z, m, beam.waist, beam.wavelength,
                            cfg.get("modal", "r_min"), cfg.get("modal", "r_max"))
        except ValueError as e:
            raise CLIError("modal", str(e), code=2) from None
        _write_csv(out / "hygg_profile.csv", "r_meters,re,im",
                   ((_fmt(a), _fmt(v.real), _fmt(v.imag)) for a, v in zip(r, f)))
    return {"radial": rs}


def cmd_pipeline(cfg: RunConfig, out: Path) -> None:
    res = cmd_synthesize(cfg, out)
    far = cmd_propagate(cfg, res["transmission"], out)
    cmd_analyze(cfg, far, out)
    if "modal" in cfg.sections:
        cmd_modal(cfg, out)


# ---- entry point ----

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="evbholo", description="Electron vortex hologram simulation")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("synthesize", "propagate", "analyze", "modal", "pipeline"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="run configuration file")
        p.add_argument("--out", default=".", help="output directory")
        if name in ("propagate", "analyze"):
            p.add_argument("--input", required=True, help="input CFLD1 field")
        p.add_argument("--seed", type=int, default=None, help="reserved; the pipeline has no randomness")
        p.add_argument("--threads", type=int, default=1, help="FFT worker threads (outputs do not depend on it)")
    return ap


def _run(args) -> None:
    if args.threads < 1:
        raise CLIError("threads", "must be at least 1", code=2)
    set_workers(args.threads)
    try:
        cfg = load_config(args.config)
    except OSError as e:
        raise CLIError("config", e.strerror or str(e), code=2) from None
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise CLIError("out", e.strerror or str(e)) from None

    field = None
    if args.command in ("propagate", "analyze"):
        try:
            field = read_cfld(args.input)
        except OSError as e:
            raise CLIError("input", e.strerror or str(e)) from None
        except ValueError as e:
            raise CLIError("input", str(e)) from None

    if args.command == "synthesize":
        cmd_synthesize(cfg, out)
    elif args.command == "propagate":
        cmd_propagate(cfg, field, out)
    elif args.command == "analyze":
        cmd_analyze(cfg, field, out)
    elif args.command == "modal":
        cmd_modal(cfg, out)
    else:
        cmd_pipeline(cfg, out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _run(args)
    except ConfigError as e:
        where = f"line {e.line}: " if e.line is not None else ""
        print(f"error: {e.field}: {where}{e.message}", file=sys.stderr)
        return 2
    except CLIError as e:
        print(f"error: {e.field}: {e.message}", file=sys.stderr)
        return e.code
    except PGMError as e:
        print(f"error: pgm: {e}", file=sys.stderr)
        return 1
    except (RuntimeError, ValueError, OSError) as e:
        print(f"error: {args.command}: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
