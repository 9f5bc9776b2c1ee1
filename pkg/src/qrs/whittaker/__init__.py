"""q-Whittaker functions, the kernels K, M, K-hat, M-hat and identity checks."""

from .core import (
    NonProbabilityContextError,
    WhittakerContext,
    a_power,
    conditional_P,
    conditional_type,
    f_lambda_enumerate,
    f_lambda_q,
    k_lambda_mu,
    kappa_hat,
    nu,
    prop1_limit,
    psi,
    psi_enumerate,
    transition_p,
)
from .kernels import K_entry, M_entry, M_row, hatK_entry, hatM_entry, hatM_row
from .verify import (
    Report,
    cauchy_check,
    compositions,
    corollary3_check,
    eigen_check,
    eq3_check,
    kernel_mutation,
    proposition1_check,
    stochastic_check,
    verify_hat_intertwining,
    verify_intertwining,
    verify_theorem2,
)
