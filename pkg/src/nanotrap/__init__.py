"""Light shifts of cesium hyperfine sublevels in arbitrary optical fields,
fundamental-mode evanescent fields of vacuum-clad nanofibers, and the
two-color trap potentials built from them."""

__version__ = "0.1.0"

from .atomdata import (
    AtomDatabase,
    FineState,
    HfsManifold,
    Transition,
    default_database_path,
    load_database,
)
from .fibermode import (
    FiberMode,
    FiberSpec,
    field_envelope,
    normalize_power,
    silica_index,
    solve_fundamental_mode,
)
from .magic import Crossing, central_magic, cluster_crossings, find_crossings
from .polarizability import (
    Polarizability,
    polarizability,
    scalar_polarizability,
    shift_from_intensity,
    stretched_combinations,
    tensor_polarizability,
)
from .stark import (
    FieldEnvelope,
    ShiftSpectrum,
    hfs_hamiltonian,
    light_shifts,
    stark_operator,
    transition_shifts,
)
from .trap import (
    BeamConfig,
    TrapProfile,
    TrapSummary,
    characterize,
    default_grid,
    two_color_profile,
)
from .wigner import HalfInt, six_j, three_j

__all__ = [
    "AtomDatabase",
    "BeamConfig",
    "Crossing",
    "FieldEnvelope",
    "FiberMode",
    "FiberSpec",
    "FineState",
    "HalfInt",
    "HfsManifold",
    "Polarizability",
    "ShiftSpectrum",
    "Transition",
    "TrapProfile",
    "TrapSummary",
    "central_magic",
    "characterize",
    "cluster_crossings",
    "default_database_path",
    "default_grid",
    "field_envelope",
    "find_crossings",
    "hfs_hamiltonian",
    "light_shifts",
    "load_database",
    "normalize_power",
    "polarizability",
    "scalar_polarizability",
    "shift_from_intensity",
    "silica_index",
    "solve_fundamental_mode",
    "stark_operator",
    "stretched_combinations",
    "tensor_polarizability",
    "three_j",
    "six_j",
    "transition_shifts",
    "two_color_profile",
]
