"""Dynamic scalar and tensor polarizabilities of fine-structure states.

Both polarizabilities are sums over the dipole-coupled partner states
recorded in the database, with a damped dispersive line factor

    f(w) = w_t (w_t^2 - w^2 + g^2/4) / [(w_t^2 - w^2 + g^2/4)^2 + g^2 w^2]

where w_t is the signed transition frequency (negative for partners below
the state) and g the transition linewidth.  Everything is evaluated in
atomic units internally; results are atomic units of polarizability.
"""

import math

import numpy as np

from .atomdata import AtomDatabase, FineState
from .constants import (
    ALPHA_AU,
    AU_FREQUENCY,
    H_PLANCK,
    field_sq_from_intensity,
)
from .wigner import six_j

__all__ = [
    "Polarizability",
    "NoCouplingsError",
    "scalar_polarizability",
    "tensor_polarizability",
    "polarizability",
    "stretched_combinations",
    "shift_from_field_sq",
    "shift_from_intensity",
]

from dataclasses import dataclass


class NoCouplingsError(ValueError):
    """State has no transitions in the database; the sum would be empty."""


@dataclass(frozen=True)
class Polarizability:
    """Scalar/tensor polarizability pair of one state at one frequency."""

    alpha0: float  # a.u.
    alpha2: float  # a.u.
    omega: float   # rad/s
    state: FineState


def _line_factor(omega_t, gamma, omega):
    d = omega_t * omega_t - omega * omega + 0.25 * gamma * gamma
    return omega_t * d / (d * d + gamma * gamma * omega * omega)


def _partner_sum(state, omega, db, weight, include_damping):
    partners = db.partners_of(state)
    if not partners:
        raise NoCouplingsError(f"{state.label} has no transitions in database")
    omega_au = np.asarray(omega, dtype=float) / AU_FREQUENCY
    total = np.zeros_like(omega_au)
    for partner, omega_t, d_sq, gamma in partners:
        w = weight(partner)
        if w == 0.0:
            continue
        g_au = gamma / AU_FREQUENCY if include_damping else 0.0
        total += w * d_sq * _line_factor(omega_t / AU_FREQUENCY, g_au, omega_au)
    if np.ndim(omega) == 0:
        return float(total)
    return total


def scalar_polarizability(state, omega, db, include_damping=True):
    """Dynamic scalar polarizability alpha_0 (a.u.) at angular frequency
    ``omega`` (rad/s, scalar or array)."""
    if isinstance(state, str):
        state = db.state(state)
    pref = 2.0 / (3.0 * (state.J.twice + 1))
    return pref * _partner_sum(
        state, omega, db, lambda partner: 1.0, include_damping
    )


def tensor_polarizability(state, omega, db, include_damping=True):
    """Dynamic tensor polarizability alpha_2 (a.u.); exactly 0 for J = 1/2."""
    if isinstance(state, str):
        state = db.state(state)
    j = state.J
    if j.twice < 2:
        # no quadrupole moment available for J = 1/2
        out = np.zeros_like(np.asarray(omega, dtype=float))
        if np.ndim(omega) == 0:
            # keep an empty-coupling state an error here too
            if not db.partners_of(state):
                raise NoCouplingsError(
                    f"{state.label} has no transitions in database"
                )
            return 0.0
        return out
    jj = j.value
    pref = 4.0 * math.sqrt(
        5.0 * jj * (2 * jj - 1) / (6.0 * (jj + 1) * (2 * jj + 1) * (2 * jj + 3))
    )

    def weight(partner):
        jp = partner.J
        phase = -1.0 if ((j.twice + jp.twice) // 2) % 2 else 1.0
        return phase * six_j(j, 1, jp, 1, j, 2)

    return pref * _partner_sum(state, omega, db, weight, include_damping)


def polarizability(state, omega, db, include_damping=True):
    """Both polarizabilities bundled for a single frequency."""
    if isinstance(state, str):
        state = db.state(state)
    return Polarizability(
        alpha0=scalar_polarizability(state, omega, db, include_damping),
        alpha2=tensor_polarizability(state, omega, db, include_damping),
        omega=float(omega),
        state=state,
    )


def stretched_combinations(state, omega, db, include_damping=True):
    """The boundary polarizabilities (alpha0 + alpha2, alpha0 - alpha2).

    For J = 3/2 these are the |M_J| = 3/2 and 1/2 sublevel polarizabilities
    of a z-linear field; for J = 1/2 both reduce to alpha0.
    """
    a0 = scalar_polarizability(state, omega, db, include_damping)
    a2 = tensor_polarizability(state, omega, db, include_damping)
    return a0 + a2, a0 - a2


def shift_from_field_sq(alpha_au, field_sq):
    """Light shift (Hz) of a level with polarizability ``alpha_au`` (a.u.)
    in a field of squared envelope amplitude ``field_sq`` (V^2/m^2)."""
    return -0.25 * alpha_au * ALPHA_AU * field_sq / H_PLANCK


def shift_from_intensity(alpha_au, intensity):
    """Light shift (Hz) for a running wave of the given intensity (W/m^2)."""
    return shift_from_field_sq(alpha_au, field_sq_from_intensity(intensity))
