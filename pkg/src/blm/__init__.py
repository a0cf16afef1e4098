"""Bivariate lack-of-memory (BLM) distributions.

Construction and validation of BLM laws from two marginals and a rate
``theta``, named families, transforms and moments with quadrature oracles,
total-positivity and stochastic-order checks, and exact samplers.
"""

from .core import (
    BlmDecomposition,
    BlmDistribution,
    from_hazards,
    hazard_checks,
    make_blm,
    validate_blm,
)
from .dependence import (
    Grid,
    Kernel,
    cdf_kernel,
    density_kernel,
    iff_verdict,
    local_dependence,
    pqd_check,
    product_kernel,
    rr2_check,
    survival_copula,
    survival_copula_kernel,
    survival_kernel,
    symmetric_kernel,
    theorem6_condition,
    theorem7_density_condition,
    tp2_check,
    tp_order_check,
)
from .errors import (
    ArgumentError,
    BlmError,
    ConsistencyError,
    DomainError,
    OracleError,
    PreconditionError,
    SamplerError,
    UnsupportedRegimeError,
    ValidationError,
)
from .families import (
    FreundParams,
    GmoDistribution,
    MoParams,
    block_basu,
    freund,
    freund_to_block_basu,
    generalized_marshall_olkin,
    marshall_olkin,
)
from .kernels import BACKEND
from .modelspec import ModelSpec, SpecError, from_spec, to_spec
from .moments import (
    MomentRequest,
    TransformPoint,
    exy,
    exy_bounds,
    lst,
    mgf,
    mttf,
    pearson_correlation,
    product_moment,
    quadrature_oracle,
)
from .orders import (
    bivariate_ifra_check,
    compare_blm,
    marginal_hazard_bound,
    slepian_check,
    theorem5_marginal_dominance,
    univariate_order,
)
from .reports import GridReport, OrderVerdict, ValidationCheck, ValidationReport
from .simulate import (
    RngStream,
    SampleBatch,
    chi2_independence,
    estimate,
    ks_statistic,
    ks_two_sample,
    sample_blm,
    sample_gmo,
    sample_mo,
)
from .univariate import (
    ExponentialMarginal,
    HazardDefinedMarginal,
    LomaxMarginal,
    MarginalDistribution,
    MinimumMarginal,
    SignedErlangMixture,
    SignedExponentialMixture,
    aging_class,
    hazard,
    quantile,
)

__version__ = "0.1.0"
