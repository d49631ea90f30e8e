"""Atomic level / transition database backing the polarizability sums.

The database is a plain-text file, one record per line, ``#`` comments,
whitespace-separated fields, UTF-8, decimal point ``.``:

    LEVEL <label> <n> <L> <2J> <energy_cm-1> <gamma_MHz>
    TRANS <upper_label> <lower_label> <reduced_dipole_au>
    HFS   <label> <2I> <A_MHz> <B_MHz>

``gamma_MHz`` is the population decay rate of the level as gamma/2pi in MHz;
``A_MHz``/``B_MHz`` are the hyperfine constants as A/2pi, B/2pi in MHz.
Energies are wavenumbers above the ground state, which must sit at exactly 0.
The bundled file covers the 133Cs valence transitions used by the light-shift
calculations; the format itself is species-agnostic.
"""

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .constants import CM_INV_TO_RADS, TWO_PI
from .wigner import HalfInt

__all__ = [
    "FineState",
    "Transition",
    "HfsManifold",
    "AtomDatabase",
    "DataFileError",
    "UnknownStateError",
    "load_database",
    "default_database_path",
]

_L_LETTERS = "SPDFGHIK"


class DataFileError(ValueError):
    """Malformed database file (message carries the offending line number)."""


class UnknownStateError(KeyError):
    """A state label that is not present in the database."""


@dataclass(frozen=True)
class FineState:
    """A fine-structure level |n L_J> with energy and population decay rate."""

    label: str
    n: int
    L: int
    J: HalfInt
    energy_cm: float  # wavenumber above ground, cm^-1
    gamma: float      # population decay rate, rad/s

    def __post_init__(self):
        if self.energy_cm < 0:
            raise ValueError(f"{self.label}: energy must be >= 0")
        if abs(2 * self.L - self.J.twice) != 1:
            raise ValueError(
                f"{self.label}: J={self.J} incompatible with L={self.L}"
            )

    @property
    def energy(self):
        """Level energy as an angular frequency (rad/s)."""
        return self.energy_cm * CM_INV_TO_RADS


@dataclass(frozen=True)
class Transition:
    """A dipole-coupled pair of fine-structure levels."""

    upper: FineState
    lower: FineState
    reduced_dipole: float  # <n'||D||n>, atomic units

    def __post_init__(self):
        if self.reduced_dipole < 0:
            raise ValueError("reduced dipole matrix element must be >= 0")
        if abs(self.upper.J.twice - self.lower.J.twice) > 2:
            raise ValueError(
                f"{self.upper.label}-{self.lower.label}: |dJ| must be <= 1"
            )
        if abs(self.upper.L - self.lower.L) != 1:
            raise ValueError(
                f"{self.upper.label}-{self.lower.label}: |dL| must be 1"
            )

    @property
    def omega(self):
        """Transition angular frequency (rad/s), upper minus lower."""
        return self.upper.energy - self.lower.energy

    @property
    def linewidth(self):
        """Transition linewidth gamma_upper + gamma_lower (rad/s)."""
        return self.upper.gamma + self.lower.gamma

    @property
    def wavelength(self):
        """Vacuum wavelength (m)."""
        return 1e-2 / (self.upper.energy_cm - self.lower.energy_cm)


@dataclass(frozen=True)
class HfsManifold:
    """The |F, M_F> sublevels of one fine-structure level."""

    state: FineState
    nuclear_spin: HalfInt
    a_hfs: float  # rad/s
    b_hfs: float  # rad/s
    sublevels: tuple  # ordered ((F, M_F), ...) as HalfInt pairs

    def __len__(self):
        return len(self.sublevels)

    @property
    def f_values(self):
        seen = []
        for f, _ in self.sublevels:
            if f not in seen:
                seen.append(f)
        return tuple(seen)


def _sublevels(j, i):
    out = []
    tf_min = abs(j.twice - i.twice)
    tf_max = j.twice + i.twice
    for tf in range(tf_min, tf_max + 2, 2):
        for tm in range(-tf, tf + 2, 2):
            out.append((HalfInt(tf), HalfInt(tm)))
    return tuple(out)


class AtomDatabase:
    """Validated, immutable set of levels, transitions, and hfs constants."""

    def __init__(self, levels, transitions, hfs, records):
        self._levels = dict(levels)
        self._transitions = tuple(transitions)
        self._hfs = dict(hfs)
        self._records = tuple(records)
        self._couplings = {}

    @property
    def levels(self):
        return self._levels

    @property
    def transitions(self):
        return self._transitions

    def state(self, label):
        try:
            return self._levels[label]
        except KeyError:
            raise UnknownStateError(label) from None

    def transitions_of(self, state):
        """All transitions touching ``state`` (label or FineState)."""
        if isinstance(state, str):
            state = self.state(state)
        key = state.label
        if key not in self._couplings:
            self._couplings[key] = tuple(
                t for t in self._transitions
                if t.upper.label == key or t.lower.label == key
            )
        return self._couplings[key]

    def partners_of(self, state):
        """(partner, signed omega_partner-state, D^2, linewidth) per coupling."""
        if isinstance(state, str):
            state = self.state(state)
        out = []
        for t in self.transitions_of(state):
            partner = t.lower if t.upper.label == state.label else t.upper
            out.append((
                partner,
                partner.energy - state.energy,
                t.reduced_dipole**2,
                t.linewidth,
            ))
        return out

    def hfs_constants(self, state):
        """Hyperfine constants (A, B, I); A, B in rad/s, I as HalfInt."""
        if isinstance(state, str):
            state = self.state(state)
        try:
            return self._hfs[state.label]
        except KeyError:
            raise UnknownStateError(
                f"no hfs record for {state.label}"
            ) from None

    def manifold(self, state):
        if isinstance(state, str):
            state = self.state(state)
        a, b, i = self.hfs_constants(state)
        return HfsManifold(
            state=state,
            nuclear_spin=i,
            a_hfs=a,
            b_hfs=b,
            sublevels=_sublevels(state.J, i),
        )

    def serialize(self):
        """Re-emit the loaded records in file order, normalized whitespace."""
        return "\n".join(" ".join(rec) for rec in self._records) + "\n"


def _parse_level(tokens, lineno):
    if len(tokens) != 7:
        raise DataFileError(f"line {lineno}: LEVEL expects 6 fields")
    _, label, n, l_, tj, energy, gamma = tokens
    try:
        return FineState(
            label=label,
            n=int(n),
            L=int(l_),
            J=HalfInt(int(tj)),
            energy_cm=float(energy),
            gamma=float(gamma) * TWO_PI * 1e6,
        )
    except ValueError as exc:
        raise DataFileError(f"line {lineno}: {exc}") from None


def load_database(path):
    """Load and validate a level/transition database file.

    Raises DataFileError (with the offending line number) on parse problems,
    dangling level references, or duplicate transitions.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    levels = {}
    transitions = []
    hfs = {}
    records = []
    seen_pairs = set()
    pending_trans = []  # resolved after all levels are known
    pending_hfs = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "LEVEL":
            state = _parse_level(tokens, lineno)
            if state.label in levels:
                raise DataFileError(
                    f"line {lineno}: duplicate level {state.label}"
                )
            levels[state.label] = state
        elif kind == "TRANS":
            if len(tokens) != 4:
                raise DataFileError(f"line {lineno}: TRANS expects 3 fields")
            pending_trans.append((lineno, tokens[1], tokens[2], tokens[3]))
        elif kind == "HFS":
            if len(tokens) != 5:
                raise DataFileError(f"line {lineno}: HFS expects 4 fields")
            pending_hfs.append((lineno, *tokens[1:]))
        else:
            raise DataFileError(f"line {lineno}: unknown record type {kind!r}")
        records.append(tuple(tokens))

    if not levels:
        raise DataFileError(f"{path}: no levels found (empty database)")
    if min(s.energy_cm for s in levels.values()) != 0.0:
        raise DataFileError(f"{path}: ground level must sit at 0 cm^-1")

    for lineno, up, lo, dipole in pending_trans:
        for lab in (up, lo):
            if lab not in levels:
                raise DataFileError(
                    f"line {lineno}: transition references unknown level {lab}"
                )
        pair = frozenset((up, lo))
        if pair in seen_pairs:
            raise DataFileError(f"line {lineno}: duplicate transition {up}-{lo}")
        seen_pairs.add(pair)
        try:
            tr = Transition(levels[up], levels[lo], float(dipole))
        except ValueError as exc:
            raise DataFileError(f"line {lineno}: {exc}") from None
        if tr.omega <= 0:
            raise DataFileError(
                f"line {lineno}: upper level {up} is not above {lo}"
            )
        transitions.append(tr)

    for lineno, label, ti, a_mhz, b_mhz in pending_hfs:
        if label not in levels:
            raise DataFileError(
                f"line {lineno}: hfs record references unknown level {label}"
            )
        try:
            hfs[label] = (
                float(a_mhz) * TWO_PI * 1e6,
                float(b_mhz) * TWO_PI * 1e6,
                HalfInt(int(ti)),
            )
        except ValueError as exc:
            raise DataFileError(f"line {lineno}: {exc}") from None

    return AtomDatabase(levels, transitions, hfs, records)


def default_database_path():
    """Path of the bundled cesium data file."""
    return Path(resources.files("nanotrap").joinpath("data/cs133.txt"))
