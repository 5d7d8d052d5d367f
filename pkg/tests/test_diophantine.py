import math
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from qpr.diophantine import (
    DiophantineWitness,
    RealValue,
    chi,
    convergents,
    default_rho,
    fixture_irrationals,
    floor_frac,
    joint_witness_search,
    liouville_truncated,
    orbit,
    parse_real,
    witness_search,
)
from qpr.numerics import DomainError


class TestFloorFrac:
    @pytest.mark.parametrize("x,f,r", [
        (2.25, 2, 0.25),
        (-1.25, -2, 0.75),
        (3.0, 3, 0.0),
        (-0.0, 0, 0.0),
    ])
    def test_examples(self, x, f, r):
        got_f, got_r = floor_frac(x)
        assert got_f == f and math.isclose(got_r, r, abs_tol=1e-15)

    @given(st.floats(min_value=-1e12, max_value=1e12, allow_nan=False))
    def test_reconstruction(self, x):
        f, r = floor_frac(x)
        assert 0.0 <= r < 1.0
        # 1 ulp at the scale of max(1, |x|): the frac may round at tiny |x|
        assert abs((f + r) - x) <= max(1e-15, abs(x) * 1e-15)


class TestChi:
    def test_even(self):
        assert chi(4) == 0

    def test_odd(self):
        assert chi(7) == 1

    @given(st.integers(min_value=-10**9, max_value=10**9))
    def test_identity_with_half_fraction(self, n):
        assert chi(n) == n - 2 * math.floor(n / 2) or abs(n) > 2 ** 52
        assert chi(n) in (0, 1)
        assert chi(n) == (2 * F(n, 2)) % 2


class TestRealValue:
    def test_surd_fractional_parts_match_float_at_small_n(self):
        s2 = fixture_irrationals()["sqrt2"].value
        for n in (1, 7, 100, 12345):
            f, r = s2.mul_floor_frac(n)
            assert f == math.floor(n * math.sqrt(2))
            assert abs(r - (n * math.sqrt(2) - f)) < 1e-9

    def test_surd_large_n_precision(self):
        # {n*sqrt(2)} at a convergent denominator: residual ~ 1/(2 sqrt(2) n)
        s2 = fixture_irrationals()["sqrt2"].value
        n = 470832
        f, r = s2.mul_floor_frac(n)
        resid = min(r, 1.0 - r)
        assert abs(resid - 1.0 / ((math.sqrt(2) * n + f) )) < 1e-12

    def test_golden_ratio_descriptor(self):
        g = fixture_irrationals()["golden"].value
        assert math.isclose(g.value, (1 + math.sqrt(5)) / 2, rel_tol=1e-15)
        f, r = g.mul_floor_frac(10)
        assert f == 16 and math.isclose(r, 10 * (1 + math.sqrt(5)) / 2 - 16, abs_tol=1e-12)

    def test_perfect_square_folds_to_rational(self):
        v = RealValue.from_surd(1, 2, 3, 4)  # (1 + 2*sqrt(4))/3 = 5/3
        assert v.kind == "rational" and v.fraction == F(5, 3)

    def test_neg_roundtrip(self):
        s3 = fixture_irrationals()["sqrt3"].value
        assert math.isclose(s3.neg().value, -math.sqrt(3), rel_tol=1e-15)
        n, r = s3.neg().mul_floor_frac(5)
        assert n + r == pytest.approx(-5 * math.sqrt(3), abs=1e-12)

    def test_float_requires_declaration(self):
        v = RealValue.from_float(0.123)
        with pytest.raises(DomainError):
            v.declared_rational()

    def test_parse_tokens(self):
        assert parse_real("-3/4").fraction == F(-3, 4)
        assert parse_real("2").fraction == 2
        assert parse_real("sqrt2").kind == "surd"
        assert parse_real("-sqrt2").value == pytest.approx(-math.sqrt(2))
        assert parse_real("0.25", assume="rational").fraction == F(1, 4)
        assert parse_real("0.25", assume="irrational").assumed_rational is False
        with pytest.raises(DomainError):
            parse_real("twelve")


class TestOrbit:
    def test_one_third_cycle(self):
        got = [r for _, r in orbit(F(1, 3), 6)]
        assert got == pytest.approx([1 / 3, 2 / 3, 0.0, 1 / 3, 2 / 3, 0.0])

    def test_zero_angle(self):
        assert all(r == 0.0 for _, r in orbit(0, 10))

    def test_rational_orbit_size(self):
        distinct = {r for _, r in orbit(F(3, 7), 100)}
        assert len(distinct) == 7
        assert distinct == {k / 7 for k in range(7)}

    def test_sqrt2_density(self):
        vals = sorted({r for _, r in orbit(fixture_irrationals()["sqrt2"].value, 10_000)})
        gaps = [b - a for a, b in zip(vals, vals[1:])]
        assert max(gaps) < 1e-3


class TestConvergents:
    def test_sqrt2_prefix(self):
        got = convergents(fixture_irrationals()["sqrt2"].value, 5)
        assert got == [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29)]

    def test_golden_is_fibonacci(self):
        got = convergents(fixture_irrationals()["golden"].value, 8)
        fib = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
        want = [(fib[i + 1], fib[i]) for i in range(8)]
        assert got == want

    def test_rational_terminates_exactly(self):
        got = convergents(F(3, 7), 10)
        assert got[-1] == (3, 7)
        assert len(got) == 3

    def test_quality_bound_for_fixtures(self):
        for name, fx in fixture_irrationals().items():
            th = fx.value.value
            for p, q in convergents(fx.value, 8):
                assert abs(th - p / q) < 1.0 / q ** 2, (name, p, q)

    def test_float_path_tracks_value(self):
        got = convergents(math.e, 6)
        for p, q in got:
            assert abs(math.e - p / q) < 1.0 / q ** 2


class TestWitnessSearch:
    def test_sqrt2_includes_convergent_row(self):
        wits = witness_search(fixture_irrationals()["sqrt2"].value, 0.0, 1.0, 100)
        by_n = {w.n: w for w in wits}
        assert 12 in by_n
        w = by_n[12]
        assert w.m == 17
        assert abs(abs(w.residual) - 0.029437) < 1e-5
        assert abs(w.residual) <= 1.0 / 12

    def test_all_convergent_denominators_appear(self):
        s2 = fixture_irrationals()["sqrt2"].value
        wits = {w.n for w in witness_search(s2, 0.0, 1.0, 100)}
        for _, q in convergents(s2, 6):
            if q <= 100:
                assert q in wits

    def test_inhomogeneous_target_nonempty(self):
        wits = witness_search(fixture_irrationals()["sqrt2"].value, 0.3, 1.0, 100_000)
        assert wits
        for w in wits:
            assert abs(w.residual) < w.n ** -1.0

    def test_rational_progression_zero_residual(self):
        wits = witness_search(F(1, 3), F(1, 3), 9.0, 30)
        assert [w.n for w in wits] == [1, 4, 7, 10, 13, 16, 19, 22, 25, 28]
        assert all(w.residual == 0.0 for w in wits)

    def test_witness_identity(self):
        th = fixture_irrationals()["sqrt3"].value
        for w in witness_search(th, 0.25, 0.8, 5000):
            assert abs(w.n * math.sqrt(3) - w.m - 0.25 - w.residual) < 1e-9

    def test_threshold_filters_beyond_trivial_n1(self):
        # n = 1 always passes (threshold 1^-rho = 1); nothing else can at rho = 9
        wits = witness_search(F(1, 3), 0.1, 9.0, 50)
        assert [w.n for w in wits] == [1]


class TestJointSearch:
    def test_sqrt2_sqrt3_dirichlet_regime(self):
        fx = fixture_irrationals()
        wits = joint_witness_search(fx["sqrt2"].value, fx["sqrt3"].value,
                                    0.0, 0.0, 0.4, 10_000)
        assert wits
        for w in wits:
            thr = w.n ** -0.4
            assert abs(w.residual) < thr and abs(w.residual2) < thr

    def test_degenerates_to_single_search(self):
        s2 = fixture_irrationals()["sqrt2"].value
        single = witness_search(s2, 0.0, 1.0, 500)
        joint = joint_witness_search(s2, s2, 0.0, 0.0, 1.0, 500)
        assert [w.n for w in joint] == [w.n for w in single]

    def test_rho_zero_accepts_every_n(self):
        fx = fixture_irrationals()
        wits = joint_witness_search(fx["sqrt2"].value, fx["sqrt3"].value,
                                    0.0, 0.0, 0.0, 40)
        assert [w.n for w in wits] == list(range(1, 41))


class TestFixtures:
    def test_sqrt2_declared_measure(self):
        assert fixture_irrationals()["sqrt2"].irrationality_measure == 2.0

    def test_liouville_truncation_decimal(self):
        x = liouville_truncated(4)
        assert x == F(110001000000000000000001, 10 ** 24)
        assert f"{float(x):.24f}".startswith("0.110001")

    def test_liouville_records_depth(self):
        fx = fixture_irrationals()["liouville"]
        assert fx.truncation_depth == 4
        assert math.isinf(fx.irrationality_measure)

    def test_default_rho(self):
        fx = fixture_irrationals()
        assert default_rho(fx["sqrt2"].value, 0.0) == 1.0
        assert default_rho(fx["sqrt2"].value, 0.3) == 0.5
        assert default_rho(fx["sqrt2"].value, 0.0, joint=True) == 0.4


class TestTrust:
    def test_exact_kinds_always_trusted(self):
        wits = witness_search(fixture_irrationals()["sqrt2"].value, 0.0, 1.0, 10_000)
        assert all(w.trusted for w in wits)

    def test_float_kind_flags_tiny_residuals(self):
        # a float "irrational" that is secretly rational produces residuals
        # at representation-noise scale, which must not be trusted
        th = RealValue.from_float(0.5, assumed_rational=False)
        wits = witness_search(th, 0.0, 2.0, 50)
        assert any(not w.trusted for w in wits)
