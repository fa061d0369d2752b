"""Cognitive radar tracking/scanning time allocation."""

from ._core import (
    CheckpointError,
    ConfigError,
    DimensionError,
    Environment,
    RunConfig,
    TrainingSession,
    detection_probability,
    dual_update,
    ekf_update,
    episode_seed,
    fixed_policy,
    jacobian,
    meas_noise_cov,
    measure,
    process_noise_cov,
    reward,
    run_baseline,
    snr_track,
    tracking_cost,
    transition_matrix,
    utility,
    wrap_angle,
)

__all__ = [
    "CheckpointError",
    "ConfigError",
    "DimensionError",
    "Environment",
    "RunConfig",
    "TrainingSession",
    "detection_probability",
    "dual_update",
    "ekf_update",
    "episode_seed",
    "fixed_policy",
    "jacobian",
    "meas_noise_cov",
    "measure",
    "process_noise_cov",
    "reward",
    "run_baseline",
    "snr_track",
    "tracking_cost",
    "transition_matrix",
    "utility",
    "wrap_angle",
]
