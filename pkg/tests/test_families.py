import math

import pytest

from qtorus import (
    FamilySpec,
    FourierSeries,
    build_profile,
    gen_profile,
    gen_series,
    m_j,
    parse_family_spec,
    rescale_to_class,
)
from qtorus.families import profile_for
from qtorus.logspace import NEG_INF


class TestGenSeries:
    def test_analytic_small_instance(self):
        spec = FamilySpec(kind="analytic", dim=1, radius=2, decay=1.0)
        s = gen_series(spec)
        expected = {
            (0,): 1.0,
            (1,): math.exp(-1),
            (-1,): math.exp(-1),
            (2,): math.exp(-2),
            (-2,): math.exp(-2),
        }
        assert set(s.coeffs) == set(expected)
        for k, v in expected.items():
            assert s.coeffs[k] == pytest.approx(v)

    def test_gevrey_one_matches_analytic(self):
        a = gen_series(FamilySpec(kind="analytic", dim=2, radius=3, decay=1.0))
        g = gen_series(FamilySpec(kind="gevrey", dim=2, radius=3, exponent=1.0))
        assert set(a.coeffs) == set(g.coeffs)
        for k in a.coeffs:
            assert a.coeffs[k] == pytest.approx(g.coeffs[k])

    def test_symmetry_in_l1_norm(self):
        s = gen_series(FamilySpec(kind="gevrey", dim=2, radius=4, exponent=2.0))
        for k, c in s.coeffs.items():
            mirrored = tuple(-x for x in k)
            assert s.coeffs[mirrored] == pytest.approx(c)
            l1 = sum(abs(x) for x in k)
            assert c == pytest.approx(math.exp(-math.sqrt(l1)) if l1 else 1.0)

    def test_deterministic(self):
        spec = FamilySpec(kind="gevrey", dim=1, radius=50, exponent=2.0)
        assert gen_series(spec).coeffs == gen_series(spec).coeffs

    def test_profile_kind_has_no_spectrum(self):
        spec = FamilySpec(kind="profile", rule="factorial", j_max=10)
        with pytest.raises(ValueError):
            gen_series(spec)

    def test_invalid_params(self):
        with pytest.raises(ValueError):
            FamilySpec(kind="analytic", dim=1, radius=5, decay=-1.0)
        with pytest.raises(ValueError):
            FamilySpec(kind="gevrey", dim=1, radius=5, exponent=0.5)
        with pytest.raises(ValueError):
            FamilySpec(kind="profile", rule="mystery", j_max=5)


class TestGenProfile:
    def test_factorial_rule(self):
        spec = FamilySpec(kind="profile", rule="factorial", j_max=100)
        prof = gen_profile(spec)
        assert prof.ln_m[5] == pytest.approx(math.log(120))

    def test_gevrey_two_rule(self):
        spec = FamilySpec(kind="profile", rule="factorial", exponent=2.0, j_max=50)
        prof = gen_profile(spec)
        assert prof.ln_m[4] == pytest.approx(2 * math.log(24))

    def test_constant_rule(self):
        spec = FamilySpec(kind="profile", rule="constant", j_max=20)
        assert all(v == 0.0 for v in gen_profile(spec).ln_m)


class TestRescaleToClass:
    def test_scale_for_m3_of_four(self):
        # Single mode at k=2 with c=1/2: M_3 = |c| * 2^3 = 4.
        s = FourierSeries(1, {(2,): 0.5})
        assert m_j(s, 3) == pytest.approx(math.log(4))
        result = rescale_to_class(s)
        assert result.normalized
        assert result.scale == pytest.approx(0.125 * (1 - 1e-6))
        assert m_j(result.series, 3) < math.log(0.5)

    def test_already_small_unchanged(self):
        s = FourierSeries(1, {(1,): 0.1})
        result = rescale_to_class(s)
        assert result.scale == 1.0
        assert result.series.coeffs == s.coeffs

    def test_constant_series_flagged(self):
        s = FourierSeries(1, {(0,): 5.0})
        result = rescale_to_class(s)
        assert not result.normalized
        assert result.scale == 1.0
        assert result.series.coeffs == s.coeffs

    def test_preserves_support_and_shifts_profile_uniformly(self):
        spec = FamilySpec(kind="analytic", dim=1, radius=20, decay=1.0)
        s = gen_series(spec)
        result = rescale_to_class(s)
        assert set(result.series.coeffs) == set(s.coeffs)
        before = build_profile(s, 6)
        after = build_profile(result.series, 6)
        for a, b in zip(before.ln_m, after.ln_m):
            if a == NEG_INF:
                assert b == NEG_INF
            else:
                assert b - a == pytest.approx(math.log(result.scale), abs=1e-12)

    def test_zero_series_rejected(self):
        with pytest.raises(ValueError):
            rescale_to_class(FourierSeries(1, {}))


class TestParseFamilySpec:
    def test_analytic_syntax(self):
        spec = parse_family_spec("analytic:a=1.0:K=100", dim=2)
        assert spec.kind == "analytic" and spec.decay == 1.0
        assert spec.radius == 100 and spec.dim == 2

    def test_profile_syntax(self):
        spec = parse_family_spec("profile:rule=factorial:s=2:Jmax=200")
        assert spec.rule == "factorial" and spec.exponent == 2.0
        assert spec.j_max == 200

    def test_unknown_key_rejected(self):
        with pytest.raises(ValueError):
            parse_family_spec("analytic:a=1:qqq=3")

    def test_profile_for_series_kinds_builds(self):
        spec = parse_family_spec("gevrey:s=2:K=30")
        prof = profile_for(spec, 8)
        assert prof.j_max == 8 and prof.dim == 1
