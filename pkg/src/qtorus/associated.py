"""Associated functions, growth witnesses and integral diagnostics.

The associated function tau(r) = inf_j M_j / r^j encodes the growth of a
derivative-norm profile.  From it this module derives, all in log-domain:

* the shifted variant  tau~(r) = inf_{s>=0} M_{s+3} / r^s,
* the sequence  ln t_m = min_{1<=r<=m} -ln(r^3 tau(r)) / (n r)  and its
  shifted companion ln theta(m) = min_{1<=r<=m} -ln(tau~(r)) / (n r),
* the divergence witness d_m = m^{1/(n+1)} ln t_m with a trend label,
* partial integrals of -ln(tau(r)) / r^2 with a trend verdict, and
* the decay-implies-integrability check for tabulated envelopes.

Every infimum over j is truncated at the profile's j_max.  A truncated scan
whose minimizer lands exactly on j_max is flagged "saturated": its value is
only an upper bound for tau (so a lower bound for the -ln quantities) and
verdicts discount it.  A min over r whose argmin scan is unsaturated is exact
despite truncation, because saturated entries can only pull the min down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .norms import DerivativeNormProfile, shift_profile

LN_HALF = math.log(0.5)

#: Relative margin used when rescaling into the normalization M_3 < 1/2.
CLASS_MARGIN = 1e-6


class DegenerateProfileError(ValueError):
    """Some ln M_j = -inf: tau vanishes identically and t_m is meaningless."""


@dataclass(frozen=True)
class TrendConfig:
    """Thresholds for the asymptotic-trend classifiers.

    The statements being checked are asymptotic; these cutoffs make them
    decidable at desk scale and are deliberately configuration, not math.
    """

    slope_threshold: float = 0.05      # least-squares slope of d_m vs ln m
    residual_threshold: float = 0.1    # log-linear fit residual gate
    tail_threshold: float = 1e-3       # Cauchy increment per decade
    fit_margin: float = 0.9            # rmse ratio for a growth model to win
    saturation_fraction: float = 0.5   # grid fraction above which verdicts abstain


DEFAULT_TREND = TrendConfig()


def _require_nondegenerate(profile: DerivativeNormProfile) -> None:
    if profile.is_degenerate():
        raise DegenerateProfileError("degenerate profile: some ln M_j = -inf")


def tau_minimizer(profile: DerivativeNormProfile, r: float) -> tuple[float, int]:
    """(ln tau(r), argmin j) for the truncated inf over 0 <= j <= j_max."""
    if r < 1.0:
        raise ValueError("r must be >= 1")
    ln_r = math.log(r)
    best = math.inf
    best_j = 0
    for j, v in enumerate(profile.ln_m):
        term = v - j * ln_r
        if term < best:
            best = term
            best_j = j
    return best, best_j


def log_tau(profile: DerivativeNormProfile, r: float) -> float:
    """ln tau(r) = min_{0<=j<=j_max} (ln M_j - j ln r).

    An upper bound for the true inf over all j >= 0: truncation can only
    miss smaller terms.
    """
    return tau_minimizer(profile, r)[0]


def log_tau_shifted(profile: DerivativeNormProfile, r: float) -> float:
    """ln tau~(r) = min_{0<=s<=j_max-3} (ln M_{s+3} - s ln r)."""
    if profile.j_max < 3:
        raise ValueError("shifted associated function needs j_max >= 3")
    if r < 1.0:
        raise ValueError("r must be >= 1")
    ln_r = math.log(r)
    return min(
        profile.ln_m[s + 3] - s * ln_r for s in range(profile.j_max - 2)
    )


def _tau_grid(profile: DerivativeNormProfile, ln_r: np.ndarray, chunk: int = 1 << 16):
    """Vectorized (ln tau, argmin j) over a grid of ln r values."""
    ln_m = profile.ln_m_array()
    j = np.arange(profile.j_max + 1, dtype=float)
    values = np.empty(ln_r.shape, dtype=float)
    argmin = np.empty(ln_r.shape, dtype=np.int64)
    for start in range(0, ln_r.size, chunk):
        block = ln_r[start : start + chunk]
        terms = ln_m[None, :] - block[:, None] * j[None, :]
        argmin[start : start + chunk] = np.argmin(terms, axis=1)
        values[start : start + chunk] = np.min(terms, axis=1)
    return values, argmin


def _fold_weights(profile: DerivativeNormProfile, r_max: int, chunk: int = 1 << 15):
    """Shared-term growth weights on the integer grid r = 1..r_max.

    Returns (w_full, w_shifted, sat_full, sat_shifted) where

        w_full(r)    = max_{0<=j<=J} ((j-3) ln r - ln M_j) = -ln(r^3 tau(r))
        w_shifted(r) = max_{3<=j<=J} ((j-3) ln r - ln M_j) = -ln(tau~(r))

    Both maxima are taken over the same float terms, so
    w_full >= w_shifted holds exactly in floating point; dividing by n*r and
    taking prefix minima preserves the inequality, which keeps the chain
    ln t_m >= ln theta(m) exact.  sat_* flags an argmax landing on j_max.
    """
    j_max = profile.j_max
    ln_m = profile.ln_m_array()
    weights = np.arange(j_max + 1, dtype=float) - 3.0
    w_full = np.empty(r_max, dtype=float)
    w_shift = np.empty(r_max, dtype=float)
    arg_full = np.empty(r_max, dtype=np.int64)
    arg_shift = np.empty(r_max, dtype=np.int64)
    r_all = np.arange(1, r_max + 1, dtype=float)
    for start in range(0, r_max, chunk):
        ln_r = np.log(r_all[start : start + chunk])
        terms = weights[None, :] * ln_r[:, None] - ln_m[None, :]
        w_full[start : start + len(ln_r)] = terms.max(axis=1)
        arg_full[start : start + len(ln_r)] = terms.argmax(axis=1)
        if j_max >= 3:
            tail = terms[:, 3:]
            w_shift[start : start + len(ln_r)] = tail.max(axis=1)
            arg_shift[start : start + len(ln_r)] = tail.argmax(axis=1) + 3
        else:
            # No shifted sequence to minimize over; callers needing it
            # (theta, witness) reject j_max < 3 before getting here.
            w_shift[start : start + len(ln_r)] = -np.inf
            arg_shift[start : start + len(ln_r)] = 0
    return w_full, w_shift, arg_full == j_max, arg_shift == j_max


def t_m(profile: DerivativeNormProfile, m: int, n: int) -> float:
    """ln t_m = min over integer r in [1, m] of -ln(r^3 tau(r)) / (n r)."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    _require_nondegenerate(profile)
    w_full, _, _, _ = _fold_weights(profile, m)
    r = np.arange(1, m + 1, dtype=float)
    return float(np.min(w_full / (n * r)))


def theta(profile: DerivativeNormProfile, m: int, n: int) -> float:
    """ln theta(m) = min over integer r in [1, m] of -ln(tau~(r)) / (n r)."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    if profile.j_max < 3:
        raise ValueError("theta needs j_max >= 3")
    _require_nondegenerate(profile)
    _, w_shift, _, _ = _fold_weights(profile, m)
    r = np.arange(1, m + 1, dtype=float)
    return float(np.min(w_shift / (n * r)))


# ---------------------------------------------------------------------------
# Associated-function table and the threshold where r^3 tau = tau~
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AssociatedTable:
    """ln tau and ln tau~ tabulated on an increasing grid of r >= 1."""

    r_grid: tuple
    ln_tau: tuple
    ln_tau_shifted: tuple
    j_max: int
    r0_estimate: float


def build_table(profile: DerivativeNormProfile, r_grid) -> AssociatedTable:
    """Tabulate ln tau(r) and ln tau~(r) and estimate the identity threshold."""
    grid = tuple(float(r) for r in r_grid)
    if not grid or any(r < 1 for r in grid):
        raise ValueError("r grid must be nonempty with r >= 1")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("r grid must be strictly increasing")
    ln_tau = tuple(log_tau(profile, r) for r in grid)
    ln_shift = tuple(log_tau_shifted(profile, r) for r in grid)
    table = AssociatedTable(
        r_grid=grid,
        ln_tau=ln_tau,
        ln_tau_shifted=ln_shift,
        j_max=profile.j_max,
        r0_estimate=math.inf,
    )
    object.__setattr__(table, "r0_estimate", find_r0(table))
    return table


def find_r0(table: AssociatedTable, tol: float = 1e-9) -> float:
    """Smallest grid r from which ln(r^3 tau(r)) = ln tau~(r) holds onward.

    Returns +inf when the identity never holds through the end of the grid.
    """
    threshold = math.inf
    for r, lt, ls in zip(
        reversed(table.r_grid), reversed(table.ln_tau), reversed(table.ln_tau_shifted)
    ):
        diff = 3.0 * math.log(r) + lt - ls
        if math.isnan(diff) or abs(diff) > tol:
            break
        threshold = r
    return threshold


def write_tau_csv(table: AssociatedTable, path, header_lines=()) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("r,ln_tau,ln_tau_shifted\n")
        for r, lt, ls in zip(table.r_grid, table.ln_tau, table.ln_tau_shifted):
            fh.write(f"{repr(r)},{repr(lt)},{repr(ls)}\n")


# ---------------------------------------------------------------------------
# Growth-model fitting shared by the witness and integral diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrendFit:
    slope: float
    intercept: float
    rmse: float


def _fit_line(x: np.ndarray, y: np.ndarray) -> TrendFit:
    design = np.column_stack([x, np.ones_like(x)])
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    rmse = float(np.sqrt(np.mean(resid * resid)))
    return TrendFit(slope=float(coef[0]), intercept=float(coef[1]), rmse=rmse)


def _pick_growth_model(r: np.ndarray, w: np.ndarray, margin: float):
    """Compare w ~ a*r + b against w ~ a*sqrt(r) + b.

    Returns (fit_linear, fit_sqrt, winner) with winner in
    {"linear", "sqrt", None}; None when neither model beats the other by the
    rmse margin or a winning slope is not positive.
    """
    fit_lin = _fit_line(r, w)
    fit_sqrt = _fit_line(np.sqrt(r), w)
    winner = None
    if fit_lin.rmse < margin * fit_sqrt.rmse and fit_lin.slope > 0:
        winner = "linear"
    elif fit_sqrt.rmse < margin * fit_lin.rmse and fit_sqrt.slope > 0:
        winner = "sqrt"
    return fit_lin, fit_sqrt, winner


def _lstsq_slope(x: np.ndarray, y: np.ndarray) -> float:
    return _fit_line(x, y).slope


# ---------------------------------------------------------------------------
# Divergence witness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessSeries:
    """The sequences t_m, theta(m) and the divergence witness d_m.

    ``witness`` holds d_m = m^{1/(n+1)} ln t_m.  ``argmin_r`` records which r
    realized each min and ``argmin_saturated`` whether that scan hit j_max
    (in which case the value is only a lower bound).  ``theta_positive``
    records ln theta(m) > 0 per m; the strict positivity is meaningful only
    under the normalization M_3 < 1/2, so it is recorded, never asserted.
    ``normalization_shift`` is the ln-scale applied before computing
    (0.0 when ``normalize=False`` was requested or nothing had to move).
    """

    dim: int
    m_grid: tuple
    ln_t: tuple
    ln_theta: tuple
    witness: tuple
    theta_positive: tuple
    argmin_r: tuple
    argmin_saturated: tuple
    chain_violations: int
    normalization_shift: float
    classification: str
    slope: float
    fit_linear: TrendFit | None
    fit_sqrt: TrendFit | None


def _running_min_with_argmin(values: np.ndarray):
    best = np.minimum.accumulate(values)
    prev = np.concatenate(([math.inf], best[:-1]))
    fresh = values < prev  # strict: ties keep the earlier index
    arg = np.where(fresh, np.arange(values.size), -1)
    arg = np.maximum.accumulate(arg)
    arg[0] = 0
    return best, arg


def classify_witness_trend(
    m_grid, ln_t, n: int, config: TrendConfig = DEFAULT_TREND
) -> tuple[str, float]:
    """Trend label for a witness sequence alone (no profile context).

    Uses the decay rate of ln t_m over the top half of the grid: a positive
    sequence decaying slower than m^{-1/(2(n+1))} leaves d_m growing, anything
    at or beyond the critical rate m^{-1/(n+1)} pins d_m.  Falls back to the
    plain least-squares slope of d_m vs ln m when ln t_m is not positive.
    Returns (label, slope of d_m vs ln m).
    """
    m = np.asarray(m_grid, dtype=float)
    lt = np.asarray(ln_t, dtype=float)
    top = slice(m.size // 2, None)
    d = m ** (1.0 / (n + 1)) * lt
    if m[top].size < 3:
        return "inconclusive", math.nan
    slope_d = _lstsq_slope(np.log(m[top]), d[top])
    if np.all(lt[top] > 0):
        decay = _lstsq_slope(np.log(m[top]), np.log(lt[top]))
        label = "bounded-trend" if decay < -0.5 / (n + 1) else "divergent-trend"
        return label, slope_d
    label = "divergent-trend" if slope_d > config.slope_threshold else "bounded-trend"
    return label, slope_d


def witness(
    profile: DerivativeNormProfile,
    n: int,
    m_grid,
    normalize: bool = True,
    config: TrendConfig = DEFAULT_TREND,
) -> WitnessSeries:
    """Compute ln t_m, ln theta(m) and classify the divergence of d_m.

    With ``normalize=True`` (default) the profile is first shifted so that
    M_3 = (1/2)(1 - 1e-6): the inequality chain t_m >= theta(m) > 1 and the
    divergence hypothesis presume that normalization, and applying it here
    makes the classification invariant under rescaling the input function.

    The label is structural: a min that froze at an interior r stays frozen
    (d_m grows like m^{1/(n+1)}), while a min still riding the boundary
    r = m is classified by whether -ln(r^3 tau(r)) grows linearly (t_m
    bounded away from 1) or like sqrt(r) (t_m -> 1).  Saturated argmin scans
    in the top half of the grid make the label "inconclusive".
    """
    m_vals = [int(m) for m in m_grid]
    if not m_vals or any(m < 1 for m in m_vals):
        raise ValueError("m grid must be nonempty with m >= 1")
    if any(b <= a for a, b in zip(m_vals, m_vals[1:])):
        raise ValueError("m grid must be strictly increasing")
    if profile.j_max < 3:
        raise ValueError("witness needs j_max >= 3")
    _require_nondegenerate(profile)

    shift = 0.0
    if normalize:
        shift = LN_HALF + math.log1p(-CLASS_MARGIN) - profile.ln_m[3]
    work = shift_profile(profile, shift) if shift != 0.0 else profile

    r_max = m_vals[-1]
    w_full, w_shift, sat_full, _ = _fold_weights(work, r_max)
    r = np.arange(1, r_max + 1, dtype=float)
    g_full = w_full / (n * r)
    g_shift = w_shift / (n * r)
    run_t, arg_t = _running_min_with_argmin(g_full)
    run_theta, _ = _running_min_with_argmin(g_shift)

    idx = np.asarray(m_vals, dtype=np.int64) - 1
    ln_t = run_t[idx]
    ln_theta = run_theta[idx]
    argmin_r = arg_t[idx] + 1
    arg_sat = sat_full[arg_t[idx]]
    m_arr = np.asarray(m_vals, dtype=float)
    d = m_arr ** (1.0 / (n + 1)) * ln_t
    chain_violations = int(np.sum(ln_t < ln_theta))

    label, slope_d, fit_lin, fit_sqrt = _classify_structural(
        m_arr, ln_t, argmin_r, arg_sat, r, w_full, sat_full, n, config
    )

    return WitnessSeries(
        dim=n,
        m_grid=tuple(m_vals),
        ln_t=tuple(float(v) for v in ln_t),
        ln_theta=tuple(float(v) for v in ln_theta),
        witness=tuple(float(v) for v in d),
        theta_positive=tuple(bool(v > 0) for v in ln_theta),
        argmin_r=tuple(int(v) for v in argmin_r),
        argmin_saturated=tuple(bool(v) for v in arg_sat),
        chain_violations=chain_violations,
        normalization_shift=shift,
        classification=label,
        slope=slope_d,
        fit_linear=fit_lin,
        fit_sqrt=fit_sqrt,
    )


def _classify_structural(
    m_arr, ln_t, argmin_r, arg_sat, r, w_full, sat_full, n, config
):
    top = slice(m_arr.size // 2, None)
    d = m_arr ** (1.0 / (n + 1)) * ln_t
    if m_arr[top].size < 3:
        return "inconclusive", math.nan, None, None
    slope_d = _lstsq_slope(np.log(m_arr[top]), d[top])
    if np.any(arg_sat[top]):
        return "inconclusive", slope_d, None, None

    # Primary rule: the growth model of -ln tau(r) over the unsaturated grid.
    # Linear growth keeps w(r)/r bounded away from zero (t_m stays away from
    # 1, the witness grows like m^{1/(n+1)}); sqrt-type growth sends t_m -> 1
    # fast enough to pin the witness.  On this scale the r^3 weight and the
    # normalization shift land in the intercept, so transients cannot flip
    # the fit the way they bend ln t_m itself at desk scale.
    keep = ~sat_full
    if int(np.sum(keep)) >= 8:
        neg_ln_tau = w_full[keep] + 3.0 * np.log(r[keep])
        fit_lin, fit_sqrt, best = _pick_growth_model(
            r[keep], neg_ln_tau, config.fit_margin
        )
        if best == "linear":
            return "divergent-trend", slope_d, fit_lin, fit_sqrt
        if best == "sqrt":
            return "bounded-trend", slope_d, fit_lin, fit_sqrt
    else:
        fit_lin = fit_sqrt = None

    # No clear growth model: a min frozen at an interior r with a positive
    # frozen value leaves d_m growing like m^{1/(n+1)} from here on.
    interior = np.all(argmin_r[top] <= m_arr[top] // 2)
    if interior and np.all(ln_t[top] > 0):
        return "divergent-trend", slope_d, fit_lin, fit_sqrt

    label = "divergent-trend" if slope_d > config.slope_threshold else "bounded-trend"
    return label, slope_d, fit_lin, fit_sqrt


def write_witness_csv(series: WitnessSeries, path, header_lines=()) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("m,ln_t,ln_theta,d,theta_positive\n")
        rows = zip(
            series.m_grid,
            series.ln_t,
            series.ln_theta,
            series.witness,
            series.theta_positive,
        )
        for m, lt, lth, d, pos in rows:
            fh.write(f"{m},{repr(lt)},{repr(lth)},{repr(d)},{1 if pos else 0}\n")


# ---------------------------------------------------------------------------
# Integral criterion diagnostic
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CarlemanReport:
    """Partial integrals of -ln tau(r) / r^2 plus growth-model fits.

    ``verdict`` is one of {"quasianalytic-trend", "non-quasianalytic-trend",
    "inconclusive"}.  Saturated grid points (tau minimizer at j_max) carry a
    truncation artifact -ln tau ~ j_max ln r; they are excluded from the fits
    and a saturated fraction beyond the configured cutoff forces the verdict
    to "inconclusive".  Trend verdicts therefore require j_max comfortably
    above the tau minimizer at r_max.
    """

    r_grid: tuple
    neg_ln_tau: tuple
    saturated: tuple
    partial_integral: tuple
    fit_linear: TrendFit
    fit_sqrt: TrendFit
    saturated_fraction: float
    last_decade_increment: float
    verdict: str
    j_max: int


def _cumulative_trapezoid(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    steps = 0.5 * (y[1:] + y[:-1]) * np.diff(x)
    return np.concatenate(([0.0], np.cumsum(steps)))


def carleman_diagnostic(
    profile: DerivativeNormProfile,
    r_max: float,
    points_per_decade: int = 64,
    config: TrendConfig = DEFAULT_TREND,
) -> CarlemanReport:
    """Integrate -ln tau(r) / r^2 on [1, r_max] and classify the trend.

    Quasianalytic-type profiles show -ln tau growing linearly in r (the
    partial integrals grow like ln R); profiles with stretched-exponential
    coefficient decay show sqrt-type growth (the integrals Cauchy-converge).
    """
    if r_max < 2:
        raise ValueError("r_max must be >= 2")
    _require_nondegenerate(profile)
    n_points = max(2, int(math.ceil(points_per_decade * math.log10(r_max))) + 1)
    grid = np.logspace(0.0, math.log10(r_max), n_points)
    grid[0] = 1.0
    ln_tau, arg = _tau_grid(profile, np.log(grid))
    saturated = arg == profile.j_max
    neg = -ln_tau
    partial = _cumulative_trapezoid(neg / grid**2, grid)
    sat_fraction = float(np.mean(saturated))

    cut = np.searchsorted(grid, grid[-1] / 10.0)
    last_decade = float(partial[-1] - partial[min(cut, len(partial) - 1)])

    keep = ~saturated
    fit_lin, fit_sqrt, best = _pick_growth_model(
        grid[keep], neg[keep], config.fit_margin
    )

    if sat_fraction > config.saturation_fraction or int(np.sum(keep)) < 8:
        verdict = "inconclusive"
    elif best == "linear":
        verdict = "quasianalytic-trend"
    elif best == "sqrt":
        verdict = "non-quasianalytic-trend"
    else:
        verdict = "inconclusive"

    return CarlemanReport(
        r_grid=tuple(float(v) for v in grid),
        neg_ln_tau=tuple(float(v) for v in neg),
        saturated=tuple(bool(v) for v in saturated),
        partial_integral=tuple(float(v) for v in partial),
        fit_linear=fit_lin,
        fit_sqrt=fit_sqrt,
        saturated_fraction=sat_fraction,
        last_decade_increment=last_decade,
        verdict=verdict,
        j_max=profile.j_max,
    )


# ---------------------------------------------------------------------------
# Decay-implies-integrability check for a tabulated envelope h
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaReport:
    """Numerical check that exponential decay of the envelope minimum forces
    integrability of h(t) / t^2.

    With s = ln t the quantity min_{0<=s<=x} h(e^s) e^{-s} is fitted to
    C e^{-alpha x}; when the fit succeeds with 0 < alpha < 1 the partial
    integrals must be Cauchy.  Both sides are reported so the implication can
    be asserted by callers.
    """

    alpha_fit: float
    c_fit: float
    residual: float
    fit_ok: bool
    hypothesis_ok: bool
    partial_integrals: tuple
    last_decade_increment: float
    previous_decade_increment: float
    verdict: str
    implication_holds: bool


def lemma_check(t_grid, h_values, config: TrendConfig = DEFAULT_TREND) -> LemmaReport:
    """Run the decay/integrability check on a tabulated function h(t).

    ``t_grid`` must be increasing with t >= 1; ``h_values`` must be positive.
    """
    t = np.asarray(t_grid, dtype=float)
    h = np.asarray(h_values, dtype=float)
    if t.ndim != 1 or t.shape != h.shape or t.size < 4:
        raise ValueError("need matching 1-d grids with at least 4 points")
    if np.any(h <= 0):
        raise ValueError("h must be positive on the grid")
    if np.any(np.diff(t) <= 0) or t[0] < 1.0:
        raise ValueError("t grid must be increasing with t >= 1")

    s = np.log(t)
    envelope = h / t                      # h~(s) e^{-s} evaluated on the grid
    h_min = np.minimum.accumulate(envelope)

    fit = _fit_line(s, np.log(h_min))
    alpha = -fit.slope
    c_fit = math.exp(fit.intercept)
    fit_ok = (fit.rmse < config.residual_threshold) and (0.0 < alpha < 1.0)

    # Hypothesis: h~(s) = h(e^s) positive, increasing, convex.
    scale = np.maximum(1.0, np.abs(h))
    increasing = bool(np.all(np.diff(h) >= -1e-12 * scale[1:]))
    second = h[2:] - 2.0 * h[1:-1] + h[:-2]
    convex = bool(np.all(second >= -1e-9 * scale[1:-1]))
    hypothesis_ok = increasing and convex

    partial = _cumulative_trapezoid(envelope, s)  # = integral of h/t^2 dt
    ln10 = math.log(10.0)
    last_cut = np.searchsorted(s, s[-1] - ln10)
    prev_cut = np.searchsorted(s, s[-1] - 2.0 * ln10)
    last_inc = float(partial[-1] - partial[min(last_cut, len(partial) - 1)])
    prev_inc = float(
        partial[min(last_cut, len(partial) - 1)] - partial[min(prev_cut, len(partial) - 1)]
    )

    if s[-1] - s[0] < 2.0 * ln10:
        verdict = "inconclusive"
    elif last_inc < config.tail_threshold:
        verdict = "convergent"
    elif prev_inc > 0 and last_inc >= 0.9 * prev_inc:
        verdict = "divergent"
    else:
        verdict = "inconclusive"

    implication = (not fit_ok) or (last_inc < config.tail_threshold)

    return LemmaReport(
        alpha_fit=float(alpha),
        c_fit=float(c_fit),
        residual=fit.rmse,
        fit_ok=fit_ok,
        hypothesis_ok=hypothesis_ok,
        partial_integrals=tuple(float(v) for v in partial),
        last_decade_increment=last_inc,
        previous_decade_increment=prev_inc,
        verdict=verdict,
        implication_holds=implication,
    )
