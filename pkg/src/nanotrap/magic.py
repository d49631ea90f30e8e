"""Magic-wavelength search: crossings of the ground-state polarizability
with the excited-state boundary polarizabilities alpha0 +/- alpha2.

Crossings are located as sign changes of the polarizability difference on a
dense wavelength grid and refined by bracketed root finding.  Guard bands
around every transition resonance are excluded: inside them the damped
polarizability swings violently and crossings are not usable trap points.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .constants import wavelength_to_omega
from .polarizability import (
    scalar_polarizability,
    tensor_polarizability,
)

__all__ = ["Crossing", "find_crossings", "central_magic", "cluster_crossings"]

GUARD_HALF_WIDTH = 0.5e-9  # m, half-width of the resonance guard bands
DEFAULT_GRID_STEP = 0.02e-9  # m
CLUSTER_WIDTH = 10e-9  # m, max branch separation inside one magic cluster

BRANCH_SUM = "sum"
BRANCH_DIFFERENCE = "difference"


@dataclass(frozen=True)
class Crossing:
    """One magic-wavelength candidate where the branch difference vanishes."""

    wavelength: float      # m
    branch: str            # "sum" (alpha0+alpha2) or "difference"
    slope_sign: int        # sign of d(delta alpha)/d(lambda)
    detuning_side: str     # "red" or "blue" relative to the principal lines
    delta_alpha: float     # residual branch difference at the root, a.u.

    @property
    def wavelength_nm(self):
        return self.wavelength * 1e9


def _pole_wavelengths(upper, lower, db):
    poles = set()
    for state in (upper, lower):
        for _, omega_t, _, _ in db.partners_of(state):
            poles.add(abs(wavelength_to_omega(1.0) / omega_t))
    return sorted(poles)


def _principal_band(lower, db):
    # The two longest-wavelength resonances of the lower state bound the
    # region between the principal lines (D1/D2 for cesium).
    poles = sorted(
        abs(wavelength_to_omega(1.0) / omega_t)
        for _, omega_t, _, _ in db.partners_of(lower)
    )
    if len(poles) >= 2:
        return poles[-2], poles[-1]
    return poles[-1], poles[-1]


def _segments(window, poles, guard):
    """Sub-intervals of ``window`` that avoid every pole guard band."""
    lo, hi = window
    if not lo < hi:
        raise ValueError("empty wavelength window")
    bands = []
    for p in sorted(poles):
        a, b = p - guard, p + guard
        if b <= lo or a >= hi:
            continue
        if bands and a <= bands[-1][1]:
            bands[-1] = (bands[-1][0], max(b, bands[-1][1]))
        else:
            bands.append((a, b))
    segs = []
    cursor = lo
    for a, b in bands:
        if a > cursor:
            segs.append((cursor, a))
        cursor = max(cursor, b)
    if hi > cursor:
        segs.append((cursor, hi))
    if not segs:
        raise ValueError("wavelength window lies entirely inside guard bands")
    return segs


def find_crossings(upper, lower, window, db, grid_step=DEFAULT_GRID_STEP,
                   guard=GUARD_HALF_WIDTH):
    """Locate all magic crossings of ``upper`` vs ``lower`` inside ``window``.

    Parameters
    ----------
    upper, lower : FineState or label
        Excited and ground states.  Both branch differences
        (alpha0+alpha2) - alpha0' and (alpha0-alpha2) - alpha0' are scanned.
    window : (float, float)
        Wavelength interval in meters.
    db : AtomDatabase

    Returns a list of Crossing, ordered by wavelength.
    """
    if isinstance(upper, str):
        upper = db.state(upper)
    if isinstance(lower, str):
        lower = db.state(lower)

    poles = _pole_wavelengths(upper, lower, db)
    band_lo, band_hi = _principal_band(lower, db)
    segments = _segments(window, poles, guard)

    def branch_delta(branch):
        sign = 1.0 if branch == BRANCH_SUM else -1.0

        def delta(lam):
            omega = wavelength_to_omega(np.asarray(lam, dtype=float))
            a0 = scalar_polarizability(upper, omega, db)
            a2 = tensor_polarizability(upper, omega, db)
            ag = scalar_polarizability(lower, omega, db)
            return a0 + sign * a2 - ag

        return delta

    crossings = []
    for branch in (BRANCH_SUM, BRANCH_DIFFERENCE):
        delta = branch_delta(branch)
        for a, b in segments:
            n = max(int(np.ceil((b - a) / grid_step)) + 1, 8)
            grid = np.linspace(a, b, n)
            values = delta(grid)
            flips = np.nonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)[0]
            for i in flips:
                root = brentq(delta, grid[i], grid[i + 1],
                              xtol=1e-18, rtol=8.9e-16)
                residual = float(delta(root))
                if abs(residual) > 1e-6:
                    # sign flip without a zero: numerical pole remnant
                    continue
                span = grid[i + 1] - grid[i]
                slope = (delta(root + 0.01 * span) - delta(root - 0.01 * span))
                if root > band_hi:
                    side = "red"
                elif root < band_lo:
                    side = "blue"
                else:
                    side = "red" if (root - band_lo) > (band_hi - root) else "blue"
                crossings.append(Crossing(
                    wavelength=float(root),
                    branch=branch,
                    slope_sign=1 if slope > 0 else -1,
                    detuning_side=side,
                    delta_alpha=residual,
                ))
    crossings.sort(key=lambda c: c.wavelength)
    return crossings


def cluster_crossings(crossings, width=CLUSTER_WIDTH):
    """Group crossings into magic clusters of nearby branch pairs."""
    clusters = []
    current = []
    for c in sorted(crossings, key=lambda c: c.wavelength):
        if current and c.wavelength - current[-1].wavelength > width:
            clusters.append(current)
            current = []
        current.append(c)
    if current:
        clusters.append(current)
    return clusters


def central_magic(crossings):
    """Central magic wavelength (m) of one cluster: the arithmetic mean of
    its sum-branch and difference-branch crossings."""
    if len(crossings) != 2:
        raise ValueError(
            f"expected one sum and one difference crossing, got {len(crossings)}"
        )
    branches = {c.branch for c in crossings}
    if branches != {BRANCH_SUM, BRANCH_DIFFERENCE}:
        raise ValueError("cluster must pair a sum and a difference crossing")
    return 0.5 * (crossings[0].wavelength + crossings[1].wavelength)
