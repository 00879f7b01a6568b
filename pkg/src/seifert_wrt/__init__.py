"""Homological blocks, false theta functions and WRT asymptotics of Seifert homology spheres."""

from .asymptotics import (
    AsymptoticExpansion,
    PeriodicFn,
    alpha_coeff,
    asymptotic_expansion,
    beta_coeff,
    cs_grouped_leading,
    eta_tilde_limit,
    l_value,
    leading_term,
    periodic_C,
    periodic_C_tilde,
    tetra_membership,
    wrt_exact,
    wrt_extrapolate,
)
from .combinatorics import bernoulli_periodic, bernoulli_poly, c_coeff, d_coeff, ep_sum_vanishes, stirling1
from .hblock import (
    PsiHatEvaluator,
    RationalQSeries,
    eval_phi,
    eval_psi_hat,
    p_polynomial,
    psi_decomposed_series,
    psi_hat_s_rhs,
    psi_series,
)
from .kernels import BACKEND
from .numerics import PrecisionCtx
from .seifert import (
    FlatConnectionLabel,
    SectorData,
    SeifertData,
    cs_invariant,
    dedekind_sum,
    flat_connections,
    nonzero_cs_spectrum,
    sector_data,
    solve_surgery,
    validate_seifert,
)
from .theta import (
    ThetaClass,
    ThetaCombo,
    eichler_integral,
    false_theta_eval,
    s_transform_residual,
    theta_eval,
    theta_hat_eval,
)

__version__ = "0.1.0"
