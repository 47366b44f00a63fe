"""L2 norms of partial derivatives and coefficient-decay audits.

For a multi-index alpha the squared L2 norm of the alpha-derivative is
sum_k k^{2 alpha} |c_k|^2, where the sum skips modes with k_p = 0 at a
differentiated position (alpha_p != 0) and uses the convention
k_p^{2 alpha_p} = 1 when k_p = alpha_p = 0.  The order-j constant M_j is the
max of these norms over |alpha| = j: the tightest constant that bounds every
order-j derivative, which makes every downstream inequality as strong as
possible.  Everything is kept as ln M_j; -inf marks a vanishing norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .logspace import NEG_INF, log_sum_exp
from .series import FourierSeries


def compositions(total: int, parts: int):
    """Yield all tuples of ``parts`` nonnegative integers summing to ``total``.

    Lexicographic order; there are C(total + parts - 1, parts - 1) of them.
    """
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in compositions(total - head, parts - 1):
            yield (head,) + rest


@dataclass(frozen=True)
class DerivativeNormProfile:
    """Cached sequence ln M_j, j = 0..j_max, for one series.

    ``class_r`` optionally records a fitted growth-rate constant against a
    comparison sequence; it is informational only.
    """

    dim: int
    ln_m: tuple
    j_max: int
    class_r: float | None = None

    def __post_init__(self):
        if self.j_max < 0:
            raise ValueError("j_max must be >= 0")
        vals = tuple(float(v) for v in self.ln_m)
        if len(vals) != self.j_max + 1:
            raise ValueError("ln_m must have length j_max + 1")
        for v in vals:
            if math.isnan(v) or v == math.inf:
                raise ValueError("ln_m entries must be finite or -inf")
        object.__setattr__(self, "ln_m", vals)

    def ln_m_array(self) -> np.ndarray:
        return np.asarray(self.ln_m, dtype=float)

    def is_degenerate(self) -> bool:
        """True when some ln M_j = -inf (the inf calculus collapses)."""
        return any(v == NEG_INF for v in self.ln_m)


def derivative_l2_norm(series: FourierSeries, alpha) -> float:
    """ln of the L2 norm of the alpha-derivative; -inf when the sum is empty."""
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != series.dim:
        raise ValueError(f"alpha has length {len(alpha)}, expected {series.dim}")
    if any(a < 0 for a in alpha):
        raise ValueError("alpha entries must be >= 0")
    if not series.coeffs:
        return NEG_INF

    K = series._exponents
    ln_c = series._log_abs_values
    active = [p for p in range(series.dim) if alpha[p] > 0]
    if active:
        mask = np.all(K[:, active] != 0, axis=1)
        if not mask.any():
            return NEG_INF
        with np.errstate(divide="ignore"):
            ln_k = np.log(np.abs(K[np.ix_(mask.nonzero()[0], active)]).astype(float))
        weights = np.array([alpha[p] for p in active], dtype=float)
        expo = ln_k @ weights
        terms = 2.0 * expo + 2.0 * ln_c[mask]
    else:
        terms = 2.0 * ln_c
    return 0.5 * log_sum_exp(terms)


def m_j(series: FourierSeries, j: int) -> float:
    """ln M_j: max over all alpha with |alpha| = j of the derivative L2 norm."""
    if j < 0:
        raise ValueError("j must be >= 0")
    best = NEG_INF
    for alpha in compositions(j, series.dim):
        best = max(best, derivative_l2_norm(series, alpha))
    return best


def build_profile(series: FourierSeries, j_max: int) -> DerivativeNormProfile:
    """Cache ln M_j for j = 0..j_max."""
    if j_max < 0:
        raise ValueError("j_max must be >= 0")
    vals = tuple(m_j(series, j) for j in range(j_max + 1))
    return DerivativeNormProfile(dim=series.dim, ln_m=vals, j_max=j_max)


def shift_profile(profile: DerivativeNormProfile, delta: float) -> DerivativeNormProfile:
    """The profile of the rescaled function e^delta * f: every ln M_j shifts by delta."""
    shifted = tuple(v + delta if v != NEG_INF else NEG_INF for v in profile.ln_m)
    return DerivativeNormProfile(
        dim=profile.dim, ln_m=shifted, j_max=profile.j_max, class_r=profile.class_r
    )


def fit_class_r(profile: DerivativeNormProfile, reference_ln_m) -> float:
    """Smallest R with M_j <= R^j * ref_j over the profile's finite range.

    ``reference_ln_m`` supplies the comparison sequence (ln ref_j) for
    j = 0..j_max.  The fit says nothing beyond the truncated range; it is a
    reported constant, not a class-membership certificate.
    """
    ref = tuple(float(v) for v in reference_ln_m)
    if len(ref) < profile.j_max + 1:
        raise ValueError("reference sequence shorter than the profile")
    ln_r = 0.0
    for j in range(1, profile.j_max + 1):
        v = profile.ln_m[j]
        if v == NEG_INF:
            continue
        ln_r = max(ln_r, (v - ref[j]) / j)
    return math.exp(ln_r)


@dataclass(frozen=True)
class BoundViolation:
    index: tuple
    alpha: tuple
    ln_coeff: float
    ln_bound: float

    @property
    def excess(self) -> float:
        return self.ln_coeff - self.ln_bound


@dataclass(frozen=True)
class CoefficientBoundReport:
    """Result of checking |c_k| <= M_j / prod |k_p|^{alpha_p} over the support."""

    j: int
    n_checked: int
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def _audit_alpha(k: tuple, j: int) -> tuple:
    # Distribute j over the nonzero components as evenly as possible,
    # floor 2 per component (guaranteed by j >= 2n >= 2 * #nonzero).
    nonzero = [p for p, kp in enumerate(k) if kp != 0]
    base, rem = divmod(j, len(nonzero))
    alpha = [0] * len(k)
    for i, p in enumerate(nonzero):
        alpha[p] = base + (1 if i < rem else 0)
    return tuple(alpha)


def coefficient_bound_audit(
    series: FourierSeries,
    profile: DerivativeNormProfile,
    j: int,
    tol: float = 1e-9,
) -> CoefficientBoundReport:
    """Check the decay bound ln|c_k| <= ln M_j - sum_p alpha_p ln|k_p|.

    Requires j >= 2 * dim so the chosen alpha can put weight >= 2 on every
    nonzero component (alpha_p = 0 exactly where k_p = 0).  The zero mode is
    outside the bound's scope and is skipped.
    """
    n = series.dim
    if j < 2 * n:
        raise ValueError(f"j must be >= 2n = {2 * n}")
    if j > profile.j_max:
        raise ValueError("profile too shallow: need j_max >= j")
    ln_mj = profile.ln_m[j]
    violations = []
    checked = 0
    for k, c in series.coeffs.items():
        if all(x == 0 for x in k):
            continue
        checked += 1
        alpha = _audit_alpha(k, j)
        denom = sum(a * math.log(abs(kp)) for a, kp in zip(alpha, k) if a > 0)
        ln_bound = ln_mj - denom
        ln_coeff = math.log(abs(c))
        if ln_coeff > ln_bound + tol:
            violations.append(
                BoundViolation(index=k, alpha=alpha, ln_coeff=ln_coeff, ln_bound=ln_bound)
            )
    return CoefficientBoundReport(j=j, n_checked=checked, violations=tuple(violations))


def write_profile_csv(profile: DerivativeNormProfile, path, header_lines=()) -> None:
    """CSV export with columns j, lnM_j (-inf serialized as ``-inf``)."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("j,lnM\n")
        for j, v in enumerate(profile.ln_m):
            fh.write(f"{j},{'-inf' if v == NEG_INF else repr(v)}\n")
