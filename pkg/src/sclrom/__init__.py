"""Reduced-order modeling of discrete-time systems through orthonormal
snapshot frames, unitary circular shifts, and circulant transition
coefficients."""

from .circulant import (
    CirculantElement,
    ControlTuple,
    check_commuting_diagram,
    circulant_to_matrix,
    compress,
    cyclic_shift_matrix,
    lift,
    monomial_element,
    project_span,
)
from .cyclic import (
    CyclicPair,
    IdentityReport,
    OrthReport,
    VectorSystem,
    check_orthogonal_system,
    cyclic_operator,
    orthogonal_projector,
    verify_cyclic_identities,
)
from .datagen import (
    AlmostPeriodicPair,
    GaussianBump,
    SineMode,
    WaveConfig,
    almost_periodic_history,
    periodic_history,
    random_orthonormal_columns,
    simulate_wave_1d,
    wave_energy,
)
from .errors import (
    BadMagic,
    ConfigInvalid,
    DegenerateHistory,
    DimensionMismatch,
    DimensionTooSmall,
    EmptySystem,
    InsufficientData,
    InvariantViolation,
    IoFailure,
    NotOrthogonal,
    NumericalFailure,
    ParseError,
    SclRomError,
    VersionUnsupported,
    ZeroVector,
)
from .model import (
    FitOptions,
    FitReport,
    MimeticReport,
    PeriodReport,
    SclRomModel,
    detect_period,
    fit,
    predict,
    transition_matrix,
    verify_mimetic,
)
from .ohf import (
    OhfFactorization,
    OhfReport,
    SnapshotHistory,
    SvdTriple,
    build_ohf,
    complement_basis,
    thin_svd,
    verify_ohf,
)
from .persistence import read_model, read_snapshots, write_model, write_snapshots

__version__ = "0.1.0"

__all__ = [
    "AlmostPeriodicPair",
    "BadMagic",
    "CirculantElement",
    "ConfigInvalid",
    "ControlTuple",
    "CyclicPair",
    "DegenerateHistory",
    "DimensionMismatch",
    "DimensionTooSmall",
    "EmptySystem",
    "FitOptions",
    "FitReport",
    "GaussianBump",
    "InsufficientData",
    "InvariantViolation",
    "IoFailure",
    "IdentityReport",
    "MimeticReport",
    "NotOrthogonal",
    "NumericalFailure",
    "OhfFactorization",
    "OhfReport",
    "OrthReport",
    "ParseError",
    "PeriodReport",
    "SclRomError",
    "SclRomModel",
    "SineMode",
    "SnapshotHistory",
    "SvdTriple",
    "VectorSystem",
    "VersionUnsupported",
    "WaveConfig",
    "ZeroVector",
    "almost_periodic_history",
    "build_ohf",
    "check_commuting_diagram",
    "check_orthogonal_system",
    "circulant_to_matrix",
    "complement_basis",
    "compress",
    "cyclic_operator",
    "cyclic_shift_matrix",
    "detect_period",
    "fit",
    "lift",
    "monomial_element",
    "orthogonal_projector",
    "periodic_history",
    "predict",
    "project_span",
    "random_orthonormal_columns",
    "read_model",
    "read_snapshots",
    "simulate_wave_1d",
    "thin_svd",
    "transition_matrix",
    "verify_cyclic_identities",
    "verify_mimetic",
    "verify_ohf",
    "wave_energy",
    "write_model",
    "write_snapshots",
]
