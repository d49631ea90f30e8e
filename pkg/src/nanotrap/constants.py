"""Physical constants and unit conversions, taken from CODATA via scipy."""

import math

import scipy.constants as _const

C = _const.c
EPS0 = _const.epsilon_0
HBAR = _const.hbar
H_PLANCK = _const.h
KB = _const.k
E_CHARGE = _const.e
BOHR_RADIUS = _const.physical_constants["Bohr radius"][0]
HARTREE = _const.physical_constants["Hartree energy"][0]

TWO_PI = 2.0 * math.pi

# Polarizability, atomic units -> SI (C^2 m^2 / J).  Equal to 4*pi*eps0*a0^3.
ALPHA_AU = E_CHARGE**2 * BOHR_RADIUS**2 / HARTREE

# One atomic unit of energy as an angular frequency (rad/s).
AU_FREQUENCY = HARTREE / HBAR

# Level energy in wavenumbers (cm^-1) -> angular frequency (rad/s).
CM_INV_TO_RADS = TWO_PI * C * 100.0


def field_sq_from_intensity(intensity):
    """Squared envelope amplitude |E|^2 (V^2/m^2) of a running wave of
    time-averaged intensity ``intensity`` (W/m^2)."""
    return 2.0 * intensity / (EPS0 * C)


def wavelength_to_omega(wavelength):
    """Vacuum wavelength (m) -> angular frequency (rad/s)."""
    return TWO_PI * C / wavelength


def omega_to_wavelength(omega):
    """Angular frequency (rad/s) -> vacuum wavelength (m)."""
    return TWO_PI * C / omega


def hz_to_mk(shift_hz):
    """Frequency shift (Hz) -> equivalent temperature (mK)."""
    return shift_hz * H_PLANCK / KB * 1e3
