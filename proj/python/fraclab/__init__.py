"""Fractional-process simulation and limit-theorem laboratory."""

from ._core import (  # noqa: F401
    GridPath,
    ProcessSpec,
    SeedSpec,
    TimeGrid,
    a_h,
    brownian_sup_smallball_exact,
    chung_constant,
    compose_weighted,
    estimate_prob,
    fbm_cov,
    integrate,
    kappa_known,
    lil_constant,
    normalize_self_similar,
    r_lambda,
    r_rec,
    riemann_liouville,
    rl_cov,
    rpw_params,
    sample_fbm,
    sample_process,
    sample_rl,
    sample_stationary,
    sample_zh,
    sigma2_b0,
    sigma2_general,
    sigma2_w,
    sigma_tilde2_b,
    sigma_tilde2_w,
    stationary_transform,
    urn_simulate,
    weighted_integral,
)
from ._core import __version__  # noqa: F401
