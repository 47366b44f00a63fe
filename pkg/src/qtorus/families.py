"""Test-function families with known growth behavior.

Series generators use |k|_1 (sum of absolute components) as the decay
argument, which keeps the coefficients symmetric and the estimates uniform
in the dimension.  Profile generators bypass the spectrum entirely for
large-order studies.  ``rescale_to_class`` multiplies a series by a constant
so that M_3 < 1/2, the normalization the inequality chain presumes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .logspace import NEG_INF
from .norms import DerivativeNormProfile, build_profile, m_j
from .series import FourierSeries, read_coefficients

_KINDS = ("analytic", "gevrey", "profile", "file")
_RULES = ("factorial", "constant")


@dataclass(frozen=True)
class FamilySpec:
    """Description of one generated family member.

    kind "analytic": c_k = exp(-a |k|_1), needs decay a > 0 and radius.
    kind "gevrey":   c_k = exp(-|k|_1^{1/s}), needs exponent s >= 1 and radius.
    kind "profile":  synthetic ln M_j rule ("factorial" scaled by exponent s,
                     or "constant"), needs rule and j_max.
    kind "file":     JSONL coefficients at ``path``.
    """

    kind: str
    dim: int = 1
    radius: int | None = None
    decay: float | None = None
    exponent: float | None = None
    rule: str | None = None
    j_max: int | None = None
    path: str | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.kind == "analytic":
            if self.decay is None or self.decay <= 0:
                raise ValueError("analytic family needs decay a > 0")
            if self.radius is None or self.radius < 0:
                raise ValueError("analytic family needs a truncation radius")
        elif self.kind == "gevrey":
            if self.exponent is None or self.exponent < 1:
                raise ValueError("gevrey family needs exponent s >= 1")
            if self.radius is None or self.radius < 0:
                raise ValueError("gevrey family needs a truncation radius")
        elif self.kind == "profile":
            if self.rule not in _RULES:
                raise ValueError(f"profile rule must be one of {_RULES}")
            if self.j_max is None or self.j_max < 0:
                raise ValueError("profile family needs j_max >= 0")
        elif self.kind == "file":
            if not self.path:
                raise ValueError("file family needs a path")


def _l1_ball(dim: int, radius: int):
    # Iterate the sup-norm box; the coefficient depends on |k|_1 only.
    import itertools

    return itertools.product(range(-radius, radius + 1), repeat=dim)


def gen_series(spec: FamilySpec) -> FourierSeries:
    """Deterministically generate the family's coefficient spectrum."""
    if spec.kind == "file":
        return read_coefficients(spec.path)
    if spec.kind == "profile":
        raise ValueError("profile families have no spectrum; use gen_profile")
    coeffs = {}
    for k in _l1_ball(spec.dim, spec.radius):
        l1 = sum(abs(x) for x in k)
        if spec.kind == "analytic":
            value = math.exp(-spec.decay * l1)
        else:  # gevrey
            value = math.exp(-float(l1) ** (1.0 / spec.exponent))
        coeffs[k] = value
    return FourierSeries(spec.dim, coeffs)


def gen_profile(spec: FamilySpec) -> DerivativeNormProfile:
    """Fill ln M_j from a closed-form rule up to j_max."""
    if spec.kind != "profile":
        raise ValueError("gen_profile needs a synthetic-profile spec")
    s = 1.0 if spec.exponent is None else float(spec.exponent)
    if spec.rule == "factorial":
        vals = tuple(s * math.lgamma(j + 1) for j in range(spec.j_max + 1))
    else:  # constant
        vals = tuple(0.0 for _ in range(spec.j_max + 1))
    return DerivativeNormProfile(dim=spec.dim, ln_m=vals, j_max=spec.j_max)


@dataclass(frozen=True)
class RescaleResult:
    series: FourierSeries
    scale: float
    normalized: bool


def rescale_to_class(series: FourierSeries) -> RescaleResult:
    """Multiply by a constant c <= 1 so that M_3(c f) < 1/2.

    c = min(1, (1/2) e^{-ln M_3} (1 - 1e-6)).  A series whose third-order
    derivatives vanish identically (ln M_3 = -inf, e.g. constants) has
    nothing to normalize and is returned unchanged with ``normalized=False``.
    """
    if not series.coeffs:
        raise ValueError("cannot rescale the zero series")
    ln_m3 = m_j(series, 3)
    if ln_m3 == NEG_INF:
        return RescaleResult(series=series, scale=1.0, normalized=False)
    scale = min(1.0, 0.5 * math.exp(-ln_m3) * (1.0 - 1e-6))
    if scale == 1.0:
        return RescaleResult(series=series, scale=1.0, normalized=True)
    return RescaleResult(series=series * scale, scale=scale, normalized=True)


def parse_family_spec(text: str, dim: int = 1) -> FamilySpec:
    """Parse the CLI family syntax, e.g. ``analytic:a=1.0:K=100``.

    Recognized keys: a (decay), s (exponent), K (radius), rule, Jmax, path.
    """
    parts = text.split(":")
    kind = parts[0].strip()
    kwargs: dict = {}
    for part in parts[1:]:
        if not part:
            continue
        if "=" not in part:
            raise ValueError(f"malformed family parameter {part!r}")
        key, value = part.split("=", 1)
        key = key.strip()
        value = value.strip()
        if key == "a":
            kwargs["decay"] = float(value)
        elif key == "s":
            kwargs["exponent"] = float(value)
        elif key == "K":
            kwargs["radius"] = int(value)
        elif key == "rule":
            kwargs["rule"] = value
        elif key == "Jmax":
            kwargs["j_max"] = int(value)
        elif key == "path":
            kwargs["path"] = value
        else:
            raise ValueError(f"unknown family parameter {key!r}")
    return FamilySpec(kind=kind, dim=dim, **kwargs)


def profile_for(spec: FamilySpec, j_max: int) -> DerivativeNormProfile:
    """Profile of a family member: synthetic rule or built from its series."""
    if spec.kind == "profile":
        return gen_profile(spec)
    return build_profile(gen_series(spec), j_max)
