"""Least-squares vs regular GAN laboratory.

Thin wrapper over the compiled core: divergence identities on discrete
distributions, the gradient saturation probe, ring-mixture sampling, kernel
density estimation, mode-coverage statistics, and full training runs.
"""

from lsgan_lab._core import (
    ConfigError,
    IoError,
    ShapeError,
    default_config_json,
    gan_value_at_optimum,
    js_divergence,
    kde2d,
    lsgan_value_at_optimum,
    mode_stats,
    optimal_discriminator,
    pearson_chi2_mix,
    rng_algorithm,
    sample_latent,
    sample_mixture,
    saturation_probe,
    train,
    true_density,
    validate_coding,
)

__all__ = [
    "ConfigError",
    "IoError",
    "ShapeError",
    "default_config_json",
    "gan_value_at_optimum",
    "js_divergence",
    "kde2d",
    "lsgan_value_at_optimum",
    "mode_stats",
    "optimal_discriminator",
    "pearson_chi2_mix",
    "rng_algorithm",
    "sample_latent",
    "sample_mixture",
    "saturation_probe",
    "train",
    "true_density",
    "validate_coding",
]
