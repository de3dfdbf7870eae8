import math

import pytest

from evbholo.config import ConfigError, parse_config

GOOD = """\
# desk-scale run
[beam]
energy = 200e3 eV
waist = 300e-9 m

[grid]
n = 256
pitch = 1e-9 m

[hologram]
m = 20
period = 8e-9 m   # carrier
depth = 30e-9 m
v_mip = 4.5 V

[analysis]
select_order = false
axis = order
"""


def err(text):
    with pytest.raises(ConfigError) as ei:
        parse_config(text)
    return ei.value


def test_parse_good():
    cfg = parse_config(GOOD)
    assert cfg.get("beam", "energy") == 200e3
    assert cfg.get("grid", "n") == 256
    assert cfg.get("hologram", "period") == 8e-9
    assert cfg.get("analysis", "select_order") is False
    assert cfg.get("analysis", "axis") == "order"
    assert cfg.line("hologram", "period") == 12


def test_defaults():
    cfg = parse_config(GOOD)
    assert cfg.get("hologram", "base") == 0.0
    assert cfg.get("hologram", "aperture_radius") == math.inf
    assert cfg.get("propagation", "mode") == "fraunhofer"
    assert cfg.get("analysis", "threshold") == 1e-4


def test_builders():
    cfg = parse_config(GOOD)
    assert cfg.beam().wavelength == pytest.approx(2.5079e-12, rel=1e-4)
    assert cfg.grid().nx == 256
    assert cfg.hologram().m == 20


def test_missing_unit():
    e = err("[beam]\nenergy = 200e3\n")
    assert (e.field, e.line) == ("beam.energy", 2)
    assert "missing unit" in e.message


def test_wrong_unit():
    e = err("[grid]\npitch = 1 nm\n")
    assert e.field == "grid.pitch" and "expected unit 'm'" in e.message


def test_unit_on_dimensionless():
    e = err("[grid]\nn = 256 m\n")
    assert e.field == "grid.n"


def test_unknown_key():
    e = err("[hologram]\nperiod = 8e-9 m\nperoid = 8e-9 m\n")
    assert (e.field, e.line, e.message) == ("hologram.peroid", 3, "unknown key")


def test_unknown_section():
    assert err("[optics]\n").message == "unknown section"


def test_duplicate():
    e = err("[grid]\nn = 4\nn = 8\n")
    assert e.line == 3 and "duplicate" in e.message


def test_key_outside_section():
    assert err("n = 4\n").message == "key outside any section"


def test_malformed_lines():
    assert "malformed section" in err("[grid\n").message
    assert "key = value" in err("[grid]\njunk\n").message


def test_bad_values():
    assert err("[analysis]\nselect_order = yes\n").field == "analysis.select_order"
    assert err("[propagation]\nmode = sideways\n").field == "propagation.mode"
    assert err("[grid]\nn = 2.5\n").field == "grid.n"
    assert err("[grid]\npitch = abc m\n").field == "grid.pitch"
    assert err("[grid]\npitch = nan m\n").field == "grid.pitch"
    assert err("[grid]\npitch = \n").message == "empty value"


def test_missing_required():
    cfg = parse_config("[beam]\nenergy = 1e3 eV\n")
    with pytest.raises(ConfigError) as ei:
        cfg.beam()
    assert ei.value.field == "beam.waist" and ei.value.message == "missing required key"


def test_builder_maps_field():
    cfg = parse_config(GOOD.replace("period = 8e-9 m", "period = -8e-9 m"))
    with pytest.raises(ConfigError) as ei:
        cfg.hologram()
    assert ei.value.field == "hologram.period"
    assert ei.value.line == 12


def test_grid_validation():
    cfg = parse_config("[grid]\nn = 1\npitch = 1e-9 m\n")
    with pytest.raises(ConfigError, match="grid.n"):
        cfg.grid()
