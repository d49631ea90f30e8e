"""Hyperfine + dynamic Stark Hamiltonian in the |F, M_F> basis.

The Stark operator of a monochromatic field splits into a scalar part,
-(1/4) alpha0 |E|^2 times the identity, and a tensor part built from the
rank-2 coupling of the field's spherical components E_mu E*_{-mu'}.  The
tensor part connects M_F' = M_F + q with |q| <= 2 and is not diagonal in F,
so sublevel shifts come from diagonalizing hfs + Stark.  For several colors
the operators add; cross-frequency interference time-averages to zero.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .atomdata import HfsManifold
from .constants import ALPHA_AU, HBAR, TWO_PI, field_sq_from_intensity
from .polarizability import Polarizability, polarizability
from .wigner import HalfInt, six_j, three_j

__all__ = [
    "FieldEnvelope",
    "ShiftSpectrum",
    "EigensolveError",
    "hfs_hamiltonian",
    "hfs_shift",
    "stark_operator",
    "light_shifts",
    "transition_shifts",
]


class EigensolveError(RuntimeError):
    """Dense Hermitian eigen-decomposition did not converge."""


@dataclass(frozen=True)
class FieldEnvelope:
    """Spherical tensor components of one monochromatic field envelope."""

    e_minus1: complex  # V/m
    e_0: complex
    e_plus1: complex
    omega: float       # rad/s

    @classmethod
    def linear_z(cls, e0, omega):
        """A field linearly polarized along the quantization axis z."""
        return cls(0j, complex(e0), 0j, omega)

    @classmethod
    def linear_z_intensity(cls, intensity, omega):
        """z-linear field of given running-wave intensity (W/m^2)."""
        return cls.linear_z(math.sqrt(field_sq_from_intensity(intensity)), omega)

    def component(self, q):
        return (self.e_minus1, self.e_0, self.e_plus1)[q + 1]

    @property
    def amplitude_sq(self):
        """|E|^2 = |E_-1|^2 + |E_0|^2 + |E_1|^2 (V^2/m^2)."""
        return (
            abs(self.e_minus1) ** 2 + abs(self.e_0) ** 2 + abs(self.e_plus1) ** 2
        )

    def rotated(self, phi0):
        """The same field in a frame rotated by phi0 about z:
        e_q -> e_q * exp(-i q phi0)."""
        return FieldEnvelope(
            e_minus1=self.e_minus1 * np.exp(1j * phi0),
            e_0=self.e_0,
            e_plus1=self.e_plus1 * np.exp(-1j * phi0),
            omega=self.omega,
        )


@dataclass(frozen=True)
class ShiftSpectrum:
    """Light shifts of one manifold, labeled by adiabatic (F, M_F)."""

    manifold: HfsManifold
    shifts: np.ndarray          # Hz, aligned with manifold.sublevels
    labels: tuple               # ((F, M_F), ...) == manifold.sublevels

    def shift(self, f, m_f):
        key = (HalfInt.of(f), HalfInt.of(m_f))
        for i, lab in enumerate(self.labels):
            if lab == key:
                return float(self.shifts[i])
        raise KeyError(f"no sublevel F={f}, M_F={m_f}")

    def family(self, f):
        """Shifts of all sublevels with the given F, ordered by M_F."""
        f = HalfInt.of(f)
        return [
            (mf, float(self.shifts[i]))
            for i, (ff, mf) in enumerate(self.labels)
            if ff == f
        ]


def hfs_shift(manifold, f):
    """Diagonal hyperfine energy (rad/s) of the F level of a manifold."""
    f = HalfInt.of(f)
    jj = manifold.state.J.value
    ii = manifold.nuclear_spin.value
    k = f.value * (f.value + 1) - ii * (ii + 1) - jj * (jj + 1)
    energy = 0.5 * manifold.a_hfs * k
    if manifold.state.J.twice >= 2 and manifold.nuclear_spin.twice >= 2:
        num = 1.5 * k * (k + 1) - 2.0 * ii * (ii + 1) * jj * (jj + 1)
        den = 2.0 * ii * (2 * ii - 1) * 2.0 * jj * (2 * jj - 1)
        energy += manifold.b_hfs * num / den
    return energy


def hfs_hamiltonian(manifold):
    """Hyperfine Hamiltonian (rad/s) in the |F, M_F> basis: diagonal, with
    no M_F dependence inside each F block."""
    diag = np.array([hfs_shift(manifold, f) for f, _ in manifold.sublevels])
    return np.diag(diag.astype(complex))


@lru_cache(maxsize=16)
def _tensor_blocks(manifold):
    """The five q-components of the rank-2 Stark coupling matrix, i.e. the
    matrix factors multiplying E_mu E*_{-mu'} combinations of each q."""
    n = len(manifold.sublevels)
    j = manifold.state.J
    i_spin = manifold.nuclear_spin
    blocks = {q: np.zeros((n, n)) for q in range(-2, 3)}
    if j.twice < 2:
        return blocks
    jj = j.value
    r_j = math.sqrt((jj + 1) * (2 * jj + 1) * (2 * jj + 3) / (jj * (2 * jj - 1)))
    pref = math.sqrt(15.0 / 2.0) * r_j
    subs = manifold.sublevels
    for a, (f, mf) in enumerate(subs):
        for b, (fp, mfp) in enumerate(subs):
            tq = mfp.twice - mf.twice
            if tq % 2 or abs(tq) > 4:
                continue
            q = tq // 2
            w6 = six_j(f, 2, fp, j, i_spin, j)
            if w6 == 0.0:
                continue
            w3 = three_j(f, 2, fp, mf, q, -mfp)
            if w3 == 0.0:
                continue
            texp = (
                i_spin.twice + j.twice + f.twice - fp.twice - mf.twice
            ) // 2
            phase = -1.0 if texp % 2 else 1.0
            norm = math.sqrt((f.twice + 1) * (fp.twice + 1))
            blocks[q][a, b] = pref * phase * norm * w3 * w6
    return blocks


# 3-j factors (1 2 1; mu -q mu') entering the field quadratic form.
@lru_cache(maxsize=None)
def _field_3j(mu, q, mup):
    return three_j(1, 2, 1, mu, -q, mup)


def _field_coefficients(field):
    """C_q = sum_{mu+mu'=q} (-1)^mu' E_mu E*_{-mu'} (1 2 1; mu -q mu')."""
    comps = (field.e_minus1, field.e_0, field.e_plus1)
    coeff = {}
    for q in range(-2, 3):
        total = 0j
        for mu in (-1, 0, 1):
            mup = q - mu
            if abs(mup) > 1:
                continue
            w = _field_3j(mu, q, mup)
            if w == 0.0:
                continue
            sign = -1.0 if mup % 2 else 1.0
            total += sign * comps[mu + 1] * np.conj(comps[-mup + 1]) * w
        coeff[q] = total
    return coeff


def stark_operator(manifold, field, pol):
    """Dynamic Stark operator (rad/s) of one field in the |F, M_F> basis.

    ``pol`` must be a Polarizability evaluated at the field frequency for
    the manifold's fine-structure state.
    """
    if not isinstance(pol, Polarizability):
        raise TypeError("pol must be a Polarizability")
    if not math.isclose(pol.omega, field.omega, rel_tol=1e-12, abs_tol=0.0):
        raise ValueError(
            f"polarizability frequency {pol.omega} does not match field "
            f"frequency {field.omega}"
        )
    n = len(manifold.sublevels)
    scale = 0.25 * ALPHA_AU / HBAR  # a.u. * (V/m)^2 -> rad/s
    h = -scale * pol.alpha0 * field.amplitude_sq * np.eye(n, dtype=complex)
    if manifold.state.J.twice >= 2 and pol.alpha2 != 0.0:
        blocks = _tensor_blocks(manifold)
        coeff = _field_coefficients(field)
        tensor = sum(coeff[q] * blocks[q] for q in range(-2, 3))
        h = h - scale * pol.alpha2 * tensor
    return h


def _assign_labels(manifold, vectors):
    """Greedy maximum-overlap assignment of zero-field labels to
    eigenvectors.  Ties break toward lower F, then lower M_F."""
    n = vectors.shape[1]
    overlap = np.abs(vectors) ** 2  # overlap[i, k] = |<basis_i | v_k>|^2
    order = sorted(
        ((i, k) for i in range(n) for k in range(n)),
        key=lambda ik: (
            -overlap[ik[0], ik[1]],
            manifold.sublevels[ik[0]][0].twice,
            manifold.sublevels[ik[0]][1].twice,
            ik[1],
        ),
    )
    label_of = {}
    used_basis = set()
    used_vec = set()
    for i, k in order:
        if i in used_basis or k in used_vec:
            continue
        label_of[i] = k
        used_basis.add(i)
        used_vec.add(k)
        if len(used_basis) == n:
            break
    return label_of


def light_shifts(manifold, fields, db, pols=None):
    """Diagonalize hfs + sum of Stark operators and report sublevel shifts.

    Shifts (Hz) are eigenvalues minus the zero-field hyperfine energy of the
    adiabatically connected |F, M_F> sublevel.  ``pols`` may carry
    pre-evaluated polarizabilities matching ``fields``.
    """
    if pols is None:
        pols = [polarizability(manifold.state, f.omega, db) for f in fields]
    h = hfs_hamiltonian(manifold)
    for field, pol in zip(fields, pols):
        h = h + stark_operator(manifold, field, pol)
    try:
        eigvals, eigvecs = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        herm = float(np.max(np.abs(h - h.conj().T)))
        raise EigensolveError(
            f"eigen-decomposition failed: {exc}; dim={h.shape[0]}, "
            f"norm={np.linalg.norm(h):.3e}, hermiticity residual={herm:.3e}"
        ) from exc
    label_of = _assign_labels(manifold, eigvecs)
    shifts = np.empty(len(manifold.sublevels))
    for i, (f, _) in enumerate(manifold.sublevels):
        shifts[i] = (eigvals[label_of[i]] - hfs_shift(manifold, f)) / TWO_PI
    return ShiftSpectrum(
        manifold=manifold, shifts=shifts, labels=manifold.sublevels
    )


def transition_shifts(upper, lower, fields, db, upper_f=None, pols_upper=None,
                      pols_lower=None):
    """Light shifts of the upper sublevels relative to the (common) shift of
    a J = 1/2 lower manifold.

    Returns [(F, M_F, shift_hz), ...] over the upper manifold, restricted to
    the ``upper_f`` family when given.
    """
    up = light_shifts(upper, fields, db, pols=pols_upper)
    low = light_shifts(lower, fields, db, pols=pols_lower)
    common = float(np.mean(low.shifts))
    if upper_f is not None:
        upper_f = HalfInt.of(upper_f)
    out = []
    for i, (f, mf) in enumerate(up.labels):
        if upper_f is not None and f != upper_f:
            continue
        out.append((f, mf, float(up.shifts[i]) - common))
    return out
