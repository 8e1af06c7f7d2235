"""Cavity-decay teleportation simulator: python surface over the C++ core."""

from ._qteleport import (  # noqa: F401
    AuditRow,
    CgTable,
    Config,
    ConfigError,
    DetectionModel,
    DrivePulse,
    MixingAngleTrack,
    PhotonMode,
    ProtocolConfig,
    ProtocolMode,
    ProtocolReport,
    SystemParams,
    TimeGrid,
    TrajectoryStats,
    __version__,
    bloch_grid8,
    fidelity_formula,
    gaussian_pulse,
    mixing_angle_alice,
    mixing_angle_bob,
    normalize_mode,
    overlap,
    paper_formula_audit,
    photon_pulse_shape,
    run_teleportation,
    scale_pulse,
)
