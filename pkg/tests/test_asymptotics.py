import cmath
import math
from fractions import Fraction as F

import pytest

from qpr.asymptotics import (
    NOISE_FLOOR,
    classify_case,
    eval_case1,
    eval_case_aq,
    eval_case_theta,
    fit_decay_slope,
    nu_n,
    run_verify,
    scaling_range_advisory,
)
from qpr.diophantine import DiophantineWitness, RealValue, fixture_irrationals, witness_search
from qpr.numerics import DomainError
from qpr.qlaguerre import ScalingParameter
from qpr.qseries import QContext, b_function, ramanujan_a, theta


FX = fixture_irrationals()
SQRT2 = FX["sqrt2"].value
SQRT3 = FX["sqrt3"].value


def sp_rat(tau, theta) -> ScalingParameter:
    return ScalingParameter(RealValue.from_rational(F(tau)),
                            RealValue.from_rational(F(theta)))


class TestNu:
    def test_case4_symmetric(self):
        assert nu_n(4, 80, -1.0, 0.5) == 10

    def test_case3_formula_point(self):
        # q=1/2, n = round(e^10): floor(q^4 * 100 / (1 + log 2)) = 3
        assert nu_n(3, 22026, 0.0, 0.5) == 3

    def test_case4_asymmetric(self):
        assert nu_n(4, 40, -1.5, 0.5) == 2

    def test_rejects_other_cases(self):
        with pytest.raises(DomainError):
            nu_n(1, 10, 1.0, 0.5)
        with pytest.raises(DomainError):
            nu_n(4, 10, 0.5, 0.5)


class TestDispatch:
    def test_totality(self):
        cases = {
            (RealValue.from_rational(1), RealValue.from_rational(0)): 1,
            (SQRT2, RealValue.from_rational(0)): 1,
            (RealValue.from_rational(0), RealValue.from_rational(F(1, 3))): 2,
            (RealValue.from_rational(0), SQRT2): 3,
            (RealValue.from_rational(-1), RealValue.from_rational(0)): 4,
            (RealValue.from_rational(-1), SQRT2): 5,
            (SQRT2.neg(), RealValue.from_rational(F(1, 2))): 6,
            (SQRT2.neg(), SQRT3): 7,
        }
        for (tau, theta_v), want in cases.items():
            assert classify_case(ScalingParameter(tau, theta_v)) == want

    def test_out_of_range(self):
        assert scaling_range_advisory(-2.5) is not None
        assert scaling_range_advisory(-1.0) is None
        assert scaling_range_advisory(0.0) is None
        with pytest.raises(DomainError):
            classify_case(sp_rat(-3, 0))

    def test_undeclared_float_rejected(self):
        sp = ScalingParameter(RealValue.from_rational(0), RealValue.from_float(0.123))
        with pytest.raises(DomainError):
            classify_case(sp)


class TestCase1:
    CTX = QContext(0.5, 0.0, 1.0)

    def test_reference_point(self):
        r = eval_case1(self.CTX, sp_rat(1, 0), 3)
        assert math.isclose(r.bound, 0.15756373330989039, rel_tol=1e-12)
        assert r.observed_error <= r.bound
        assert r.eligible

    def test_bound_holds_across_grid(self):
        rs = [eval_case1(self.CTX, sp_rat(1, 0), n) for n in range(5, 41)]
        assert all(r.bound_holds for r in rs)

    def test_decay_slope(self):
        rs = [eval_case1(self.CTX, sp_rat(1, 0), n) for n in range(10, 41)]
        slope = fit_decay_slope([r.n for r in rs], [r.observed_error for r in rs])
        want = 1.0 * math.log(0.5)
        assert abs(slope - want) <= 0.05 * abs(want)

    def test_bound_scales_inversely_with_z(self):
        r1 = eval_case1(self.CTX, sp_rat(1, 0), 10)
        r10 = eval_case1(QContext(0.5, 0.0, 10.0), sp_rat(1, 0), 10)
        # 1/|z| prefactor, softened by the smaller B_q argument
        assert r10.bound < r1.bound / 9.0

    def test_rejects_nonpositive_tau(self):
        with pytest.raises(DomainError):
            eval_case1(self.CTX, sp_rat(0, 0), 5)

    def test_noise_floor_marks_ineligible(self):
        r = eval_case1(self.CTX, sp_rat(1, 0), 2000)
        assert r.bound < NOISE_FLOOR
        assert not r.eligible


class TestCase2:
    CTX = QContext(0.5, 0.0, 2.0)

    def test_half_theta_odd_degree_is_b_function(self):
        # lam = 1/2 gives main A_q(-1/(z q^a)) = B_q(1/(z q^a)) for real z > 0
        sp = sp_rat(0, F(1, 2))
        r = eval_case_aq(self.CTX, sp, 7, 2)
        want = b_function(0.5, 1 / 2.0)
        assert abs(r.main - want) < 1e-13

    def test_third_theta_reference_run(self):
        sp = sp_rat(0, F(1, 3))
        r = eval_case_aq(self.CTX, sp, 13, 2)
        lam = (13 * F(1, 3)) % 1
        assert lam == F(1, 3)
        want = ramanujan_a(0.5, cmath.exp(2j * math.pi / 3) / 2.0)
        assert abs(r.main - want) < 1e-13
        assert r.bound_holds and r.eligible

    def test_theta_zero_reduces_to_plain_argument(self):
        sp = sp_rat(0, 0)
        r = eval_case_aq(self.CTX, sp, 9, 2)
        want = ramanujan_a(0.5, 1 / 2.0)
        assert abs(r.main - want) < 1e-14

    def test_witness_is_exact(self):
        r = eval_case_aq(self.CTX, sp_rat(0, F(1, 3)), 13, 2)
        assert r.witness.residual == 0.0

    def test_rejects_nonzero_tau(self):
        with pytest.raises(DomainError):
            eval_case_aq(self.CTX, sp_rat(1, 0), 5, 2)

    def test_rejects_irrational_theta(self):
        sp = ScalingParameter(RealValue.from_rational(0), SQRT2)
        with pytest.raises(DomainError):
            eval_case_aq(self.CTX, sp, 5, 2)


class TestCase3:
    CTX = QContext(0.5, 0.0, 2.0)

    def test_convergent_witnesses_respect_bound(self):
        sp = ScalingParameter(RealValue.from_rational(0), SQRT2)
        rows = run_verify(self.CTX, sp, case_id=3, beta=0.0, rho=1.0, n_max=10_000)
        eligible = [r for r in rows if r.eligible]
        assert eligible, "expected eligible witnesses below 10^4"
        assert all(r.bound_holds for r in eligible)
        assert {2378, 5741} <= {r.n for r in eligible}

    def test_witness_mismatch_rejected(self):
        sp = ScalingParameter(RealValue.from_rational(0), SQRT2)
        fake = DiophantineWitness(n=12, m=20, m1=None, target_beta=0.0,
                                  residual=0.001, rho=1.0)
        with pytest.raises(DomainError):
            eval_case_aq(self.CTX, sp, 12, 3, witness=fake)


class TestCase4:
    CTX = QContext(0.5, 0.0, 1.0)

    def test_reference_row_n40(self):
        sp = sp_rat(-1, 0)
        r = eval_case_theta(self.CTX, sp, 40, 4)
        assert r.m == 40 and r.nu == 5
        # chi(40) = 0, lam = lam1 = 0: main term is Theta(-z q^a | q)
        want = theta(-1.0, 0.5)
        assert abs(r.main - want) < 1e-13
        assert r.observed_error <= r.bound

    def test_parity_enters_theta_argument(self):
        sp = sp_rat(-1, 0)
        r_even = eval_case_theta(self.CTX, sp, 40, 4)
        r_odd = eval_case_theta(self.CTX, sp, 41, 4)
        assert abs(r_even.main - theta(-1.0, 0.5)) < 1e-13
        assert abs(r_odd.main - theta(-0.5, 0.5)) < 1e-13

    def test_grid_bounds_hold_when_observable(self):
        sp = sp_rat(-1, 0)
        rows = [eval_case_theta(self.CTX, sp, n, 4) for n in range(8, 65)]
        observable = [r for r in rows if r.nu >= 2]
        assert observable
        assert all(r.bound_holds for r in observable)
        strict = [r for r in rows if r.eligible]
        assert {r.n for r in strict} == {64}
        assert all(r.bound_holds for r in strict)

    def test_exact_equals_split_total(self):
        from qpr.qlaguerre import split_sums
        sp = sp_rat(-1, F(1, 4))
        r = eval_case_theta(self.CTX, sp, 12, 4)
        res = split_sums(self.CTX, sp, 12)
        assert abs(r.exact_complex - res.total.to_complex()) < 1e-12

    def test_constant_discrepancy_recorded(self):
        r = eval_case_theta(self.CTX, sp_rat(-1, 0), 16, 4)
        assert "30" in r.meta and "15" in r.meta

    def test_domain(self):
        with pytest.raises(DomainError):
            eval_case_theta(self.CTX, sp_rat(1, 0), 8, 4)
        sp5 = ScalingParameter(RealValue.from_rational(-1), SQRT2)
        with pytest.raises(DomainError):
            eval_case_theta(self.CTX, sp5, 8, 4)


class TestThetaIrrationalCases:
    CTX = QContext(0.5, 0.0, 1.0)

    def test_case5_rows(self):
        sp = ScalingParameter(RealValue.from_rational(-1), SQRT2)
        rows = run_verify(self.CTX, sp, case_id=5, beta=0.0, rho=1.0, n_max=6000)
        observable = [r for r in rows if r.nu >= 2]
        assert observable
        assert all(r.bound_holds for r in observable)
        # tau-side fractional part is exactly zero here: u = c_n = 0
        assert all(r.m == r.n for r in rows)

    def test_case6_rows_include_wrapped_witness(self):
        sp = ScalingParameter(SQRT2.neg(), RealValue.from_rational(F(1, 2)))
        rows = run_verify(self.CTX, sp, case_id=6, beta=0.0, rho=1.0, n_max=6000)
        observable = [r for r in rows if r.nu >= 2]
        assert observable
        assert all(r.bound_holds for r in observable)
        # n = 2378: 2378*sqrt(2) = 3362.9998: the witness rounds up past the floor
        w = {r.n: r for r in rows}
        assert w[2378].m == 3363

    def test_case7_rows(self):
        sp = ScalingParameter(SQRT2.neg(), SQRT3)
        rows = run_verify(self.CTX, sp, case_id=7, beta=0.0, beta2=0.0,
                          rho=0.4, n_max=10_000)
        observable = [r for r in rows if r.nu >= 2]
        assert len(observable) > 5
        assert all(r.bound_holds for r in observable)

    def test_nonzero_beta_targets_hold(self):
        ctx = self.CTX
        sp5 = ScalingParameter(RealValue.from_rational(-1), SQRT2)
        rows = run_verify(ctx, sp5, case_id=5, beta=0.3, rho=0.5, n_max=4000)
        obs = [r for r in rows if r.nu >= 2]
        assert obs and all(r.bound_holds for r in obs)
        sp7 = ScalingParameter(SQRT2.neg(), SQRT3)
        rows7 = run_verify(ctx, sp7, case_id=7, beta=0.2, beta2=0.4,
                           rho=0.3, n_max=4000)
        obs7 = [r for r in rows7 if r.nu >= 2]
        assert obs7 and all(r.bound_holds for r in obs7)

    def test_case3_nonzero_beta_eligible(self):
        # rho = 0.5 makes the nu <= n^rho/32 condition bind until n >= 4096
        ctx = QContext(0.5, 0.0, 2.0)
        sp = ScalingParameter(RealValue.from_rational(0), SQRT2)
        rows = run_verify(ctx, sp, case_id=3, beta=0.3, rho=0.5, n_max=10_000)
        eligible = [r for r in rows if r.eligible]
        assert eligible and all(r.bound_holds for r in eligible)
        assert all(r.n >= 4096 for r in eligible)

    def test_case5_weaker_rho_widens_witness_set(self):
        sp = ScalingParameter(RealValue.from_rational(-1), SQRT2)
        strict = run_verify(self.CTX, sp, case_id=5, beta=0.0, rho=1.0, n_max=2000)
        loose = run_verify(self.CTX, sp, case_id=5, beta=0.0, rho=0.5, n_max=2000)
        assert {r.n for r in strict} <= {r.n for r in loose}


class TestErrorOrderTracksIrrationality:
    def test_case3_error_decays_like_inverse_n(self):
        # for a quadratic irrational with beta = 0 the witness residuals are
        # ~1/n, and the observed error inherits that power law (up to log^2
        # factors): fitted exponent close to -rho = -1
        ctx = QContext(0.5, 0.0, 2.0)
        sp = ScalingParameter(RealValue.from_rational(0), SQRT2)
        rows = run_verify(ctx, sp, case_id=3, beta=0.0, rho=1.0, n_max=10_000)
        rows = [r for r in rows if r.n >= 10]
        slope = fit_decay_slope([r.n for r in rows],
                                [r.observed_error for r in rows],
                                log_abscissa=True)
        assert abs(slope - (-1.0)) < 0.15


class TestMainTermConsistency:
    def test_case2_theta_zero_vs_series(self):
        ctx = QContext(0.5, 0.0, 2.0)
        r = eval_case_aq(ctx, sp_rat(0, 0), 30, 2)
        # independent series evaluation of A_q(1/(z q^a))
        s = sum((0.5 ** (k * k)) * (-0.5) ** k /
                math.prod(1 - 0.5 ** j for j in range(1, k + 1)) for k in range(40))
        assert abs(r.main - s) < 1e-12

    def test_case4_theta_zero_vs_series(self):
        ctx = QContext(0.5, 0.0, 1.0)
        r = eval_case_theta(ctx, sp_rat(-1, 0), 24, 4)
        s = sum((0.5 ** (k * k)) * (-1.0) ** k for k in range(-30, 31))
        assert abs(r.main - s) < 1e-12


class TestVerifyDriver:
    def test_case_mismatch_rejected(self):
        ctx = QContext(0.5, 0.0, 1.0)
        with pytest.raises(DomainError):
            run_verify(ctx, sp_rat(1, 0), case_id=4, n_values=[10])

    def test_grid_required_for_dense_cases(self):
        ctx = QContext(0.5, 0.0, 1.0)
        with pytest.raises(DomainError):
            run_verify(ctx, sp_rat(1, 0), case_id=1)

    def test_reports_sorted_by_n(self):
        ctx = QContext(0.5, 0.0, 1.0)
        rows = run_verify(ctx, sp_rat(1, 0), n_values=[9, 5, 7])
        assert [r.n for r in rows] == [5, 7, 9]
