"""Two-color evanescent trap potentials around a subwavelength fiber.

A red-detuned and a blue-detuned beam propagate in the fundamental mode of
the same fiber; their evanescent tails produce an attractive plus a
repulsive optical potential outside the core.  The ground-state potential
is the scalar light shift; excited-manifold potentials come from the full
hfs + Stark diagonalization at each radius.  Shift spectra are invariant
under rotations about the fiber axis, so evaluating at phi = 0 describes
every azimuth.
"""

from dataclasses import dataclass, field

import numpy as np

from . import fibermode, stark
from .constants import hz_to_mk
from .polarizability import polarizability, shift_from_field_sq
from .wigner import HalfInt

__all__ = [
    "BeamConfig",
    "TrapProfile",
    "TrapSummary",
    "default_grid",
    "two_color_profile",
    "characterize",
]


@dataclass(frozen=True)
class BeamConfig:
    """One trapping beam: wavelength (m), power (W), and role."""

    wavelength: float
    power: float
    role: str  # "red" or "blue"

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("beam power must be >= 0")
        if self.role not in ("red", "blue"):
            raise ValueError("beam role must be 'red' or 'blue'")


@dataclass
class TrapProfile:
    """Radial potentials (Hz) of ground and excited sublevels."""

    r: np.ndarray                 # m, strictly increasing, r > a
    ground: np.ndarray            # Hz
    excited: np.ndarray           # Hz, shape (n_r, n_labels)
    transition: np.ndarray        # Hz, excited minus ground
    labels: tuple                 # ((F, M_F), ...) for the excited columns
    meta: dict = field(default_factory=dict)

    @property
    def ground_mk(self):
        return hz_to_mk(self.ground)

    @property
    def excited_mk(self):
        return hz_to_mk(self.excited)


@dataclass(frozen=True)
class TrapSummary:
    """Ground-potential trap figures; ``trapped`` is False when the profile
    has no interior minimum."""

    trapped: bool
    r_min: float | None = None    # m
    depth_hz: float | None = None
    barrier_hz: float | None = None

    @property
    def depth_mk(self):
        return None if self.depth_hz is None else hz_to_mk(self.depth_hz)


def default_grid(radius, n_points=400, span=2e-6):
    """Log-spaced radial grid from just outside the surface to the far
    field; resolves both the surface barrier and the exponential tail."""
    return np.geomspace(1.02 * radius, radius + span, n_points)


def _solve_beam(fiber_template, beam):
    spec = fibermode.FiberSpec(
        radius=fiber_template.radius,
        wavelength=beam.wavelength,
        n_core=fiber_template.n_core,
        n_clad=fiber_template.n_clad,
    )
    mode = fibermode.solve_fundamental_mode(spec)
    return fibermode.normalize_power(mode, beam.power)


def two_color_profile(fiber, red, blue, db, grid=None,
                      upper="6P3/2", lower="6S1/2", upper_f=None):
    """Compose the two-color trap profile on a radial grid.

    Parameters
    ----------
    fiber : FiberSpec
        Template fixing the radius and indices; each beam resolves its own
        wavelength (and, with ``n_core=None``, its own silica index).
    red, blue : BeamConfig
        red.wavelength must exceed blue.wavelength.
    db : AtomDatabase
    grid : array of radii (m), default ``default_grid(fiber.radius)``
    upper_f : F family recorded for the excited manifold (default F_max).

    Returns a TrapProfile; raises CutoffError when either beam is unguided.
    """
    if red.wavelength <= blue.wavelength:
        raise ValueError("red beam must have the longer wavelength")
    if grid is None:
        grid = default_grid(fiber.radius)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    if grid[0] <= fiber.radius:
        raise ValueError("grid must start outside the fiber surface")

    modes = [_solve_beam(fiber, beam) for beam in (red, blue)]
    upper_state = db.state(upper) if isinstance(upper, str) else upper
    lower_state = db.state(lower) if isinstance(lower, str) else lower
    manifold = db.manifold(upper_state)
    if upper_f is None:
        upper_f = HalfInt(upper_state.J.twice + manifold.nuclear_spin.twice)
    else:
        upper_f = HalfInt.of(upper_f)

    pols_upper = [polarizability(upper_state, m.spec.omega, db) for m in modes]
    alpha_lower = [
        polarizability(lower_state, m.spec.omega, db).alpha0 for m in modes
    ]

    labels = tuple(
        (f, mf) for (f, mf) in manifold.sublevels if f == upper_f
    )
    column = {lab: i for i, lab in enumerate(labels)}

    ground = np.empty(len(grid))
    excited = np.empty((len(grid), len(labels)))
    for ir, r in enumerate(grid):
        fields = [fibermode.field_envelope(m, r) for m in modes]
        ground[ir] = sum(
            shift_from_field_sq(a0, f.amplitude_sq)
            for a0, f in zip(alpha_lower, fields)
        )
        spectrum = stark.light_shifts(manifold, fields, db, pols=pols_upper)
        for i, lab in enumerate(spectrum.labels):
            if lab in column:
                excited[ir, column[lab]] = spectrum.shifts[i]

    transition = excited - ground[:, None]
    meta = {
        "radius_m": fiber.radius,
        "red_wavelength_m": red.wavelength,
        "red_power_w": red.power,
        "blue_wavelength_m": blue.wavelength,
        "blue_power_w": blue.power,
        "red_beta": modes[0].beta,
        "blue_beta": modes[1].beta,
        "red_q": modes[0].q,
        "blue_q": modes[1].q,
        "upper": upper_state.label,
        "lower": lower_state.label,
        "upper_f": str(upper_f),
        "cylindrically_symmetric": True,
    }
    return TrapProfile(
        r=grid, ground=ground, excited=excited, transition=transition,
        labels=labels, meta=meta,
    )


def _refine_minimum(r, u, i):
    """Quadratic fit through three points around the grid minimum."""
    if i == 0 or i == len(r) - 1:
        return r[i], u[i]
    x0, x1, x2 = r[i - 1], r[i], r[i + 1]
    y0, y1, y2 = u[i - 1], u[i], u[i + 1]
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2**2 * (y0 - y1) + x1**2 * (y2 - y0) + x0**2 * (y1 - y2)) / denom
    if a <= 0:
        return x1, y1
    xv = -b / (2 * a)
    if not x0 <= xv <= x2:
        return x1, y1
    c = y1 - a * x1**2 - b * x1
    return xv, a * xv**2 + b * xv + c


def characterize(profile):
    """Locate the ground-state trap minimum and its figures of merit.

    depth = -U(r_min) (far field pinned at 0); barrier = the highest point
    of U between the surface and r_min, measured from the minimum.  Returns
    a TrapSummary with ``trapped=False`` when there is no interior minimum.
    """
    u = profile.ground
    i = int(np.argmin(u))
    if i == 0 or i == len(u) - 1 or u[i] >= 0:
        return TrapSummary(trapped=False)
    r_min, u_min = _refine_minimum(profile.r, u, i)
    barrier = float(np.max(u[:i + 1]) - u_min)
    return TrapSummary(
        trapped=True,
        r_min=float(r_min),
        depth_hz=float(-u_min),
        barrier_hz=barrier,
    )
