"""Contaminated Gibbs-type priors: partition probabilities, predictives and samplers."""

from ._core import (
    DataError,
    eppf_log,
    ess,
    expected_kn,
    expected_mnr,
    fit_mixture,
    fit_species,
    gen_discrete_scenario,
    gen_mixture_with_outliers,
    geweke_z,
    mbar_posterior,
    predictive,
    prior_covariance,
    probability_of_new,
    sample_sequence,
    species_statistics,
    vi_distance,
    vi_point_estimate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
