"""qtorus: growth diagnostics for sparse Fourier series on the n-torus.

Coefficient-driven throughout: sparse multi-index series, L2 derivative-norm
profiles, log-domain associated functions with divergence witnesses and
integral-trend verdicts, and folded roots-of-unity interpolation with
growth-bound audits.
"""

from .series import (
    DEFAULT_GRID_CAP,
    PRUNE_THRESHOLD,
    FourierSeries,
    GridCapError,
    PolyPoint,
    SamplingAnnulus,
    TorusPoint,
    eval_batch,
    eval_laurent,
    eval_torus,
    grid_array,
    grid_points,
    read_coefficients,
    truncate,
    write_coefficients,
)
from .norms import (
    CoefficientBoundReport,
    DerivativeNormProfile,
    build_profile,
    coefficient_bound_audit,
    compositions,
    derivative_l2_norm,
    fit_class_r,
    m_j,
    shift_profile,
    write_profile_csv,
)
from .associated import (
    AssociatedTable,
    CarlemanReport,
    DegenerateProfileError,
    LemmaReport,
    TrendConfig,
    WitnessSeries,
    build_table,
    carleman_diagnostic,
    classify_witness_trend,
    find_r0,
    lemma_check,
    log_tau,
    log_tau_shifted,
    t_m,
    theta,
    witness,
)
from .interpolate import (
    AugmentedInterpolant,
    BoundAuditReport,
    FoldResult,
    InterpolantPoly,
    InterpolationAudit,
    alias_fold,
    augmented_interpolant,
    bound_audit,
    diagonal_fold,
    eval_diagonal_poly,
    interpolation_audit,
    sample_annulus,
)
from .families import (
    FamilySpec,
    RescaleResult,
    gen_profile,
    gen_series,
    parse_family_spec,
    rescale_to_class,
)

__version__ = "0.1.0"
