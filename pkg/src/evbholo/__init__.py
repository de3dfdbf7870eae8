"""Electron vortex beams from fork holograms: synthesis, propagation, OAM analysis
and Laguerre-Gauss modal decomposition."""

__version__ = "0.1.0"

from .field import ComplexField, GridSpec, PlaneTag, PolarField, normalize, read_cfld, total_power, write_cfld
from .hologram import BeamParams, HologramSpec, ThicknessMap, electron_wavelength, interaction_constant
from .modal import RadialSpectrum, cp_coefficient, hygg_radial, radial_spectrum
from .oam import OAMSpectrum, oam_spectrum, singularity_map
from .propagation import fraunhofer, fresnel, select_order

__all__ = [
    "BeamParams", "ComplexField", "GridSpec", "HologramSpec", "OAMSpectrum", "PlaneTag",
    "PolarField", "RadialSpectrum", "ThicknessMap", "cp_coefficient", "electron_wavelength",
    "fraunhofer", "fresnel", "hygg_radial", "interaction_constant", "normalize",
    "oam_spectrum", "radial_spectrum", "read_cfld", "select_order", "singularity_map",
    "total_power", "write_cfld",
]
