"""Acoustic source seeking simulator."""

from ._core import (
    Config,
    ConfigError,
    DegenerateFormation,
    ExploredAreaRegistry,
    GaussianEstimate,
    Rng,
    VonMisesEstimate,
    array_doa,
    array_intensities,
    array_step,
    bearing,
    derive_seed,
    formation_doa,
    formation_step,
    intensity_at,
    microphone_positions,
    omni_intensity,
    orthogonal_projector,
    reset_gaussian,
    reset_vonmises,
    run,
    score_detections,
    sweep_convergence,
    sweep_detections,
    vonmises_concentration_magnitude_form,
)

__all__ = [
    "Config",
    "ConfigError",
    "DegenerateFormation",
    "ExploredAreaRegistry",
    "GaussianEstimate",
    "Rng",
    "VonMisesEstimate",
    "array_doa",
    "array_intensities",
    "array_step",
    "bearing",
    "derive_seed",
    "formation_doa",
    "formation_step",
    "intensity_at",
    "microphone_positions",
    "omni_intensity",
    "orthogonal_projector",
    "reset_gaussian",
    "reset_vonmises",
    "run",
    "score_detections",
    "sweep_convergence",
    "sweep_detections",
    "vonmises_concentration_magnitude_form",
]
