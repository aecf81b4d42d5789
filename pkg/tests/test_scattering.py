import cmath
import csv
import json
import math

import numpy as np
import pytest

from camscat import fields as fl
from camscat import scattering as sc
from camscat.errors import BetaZero

from oracles import step_oracle


class TestFreeClosedForms:
    def test_alpha0_closed_form(self):
        # alpha0 = i e^{-i(nu_R + 1/2) pi/2} sqrt(pi r0/2) H2_{nu_R}(r0)
        from camscat.specfun import bessel_h
        nu, flux, r0 = 2.7, 0.0, 0.5
        a0, b0 = sc.jost_functions_free(nu, flux, r0)
        h = bessel_h(nu, r0)
        want = 1j * cmath.exp(-1j * (nu + 0.5) * math.pi / 2) \
            * math.sqrt(math.pi * r0 / 2) * h.H2
        assert abs(a0 - want) <= 1e-13 * abs(want)

    def test_half_order_values(self):
        # F0+- = e^{+-ir}: alpha0 = i e^{-i r0}, beta0 = -i e^{i r0}
        r0 = 0.5
        a0, b0 = sc.jost_functions_free(0.5, 0.0, r0)
        assert abs(a0 - 1j * cmath.exp(-1j * r0)) <= 1e-13
        assert abs(b0 + 1j * cmath.exp(1j * r0)) <= 1e-13

    def test_sigma_free_integer_form(self):
        # sigma0(l) = -H2_l(r0)/H1_l(r0) at zero flux
        from camscat.specfun import bessel_h
        for l in (0, 1, 3):
            h = bessel_h(float(l), 0.5)
            assert sc.sigma_free(l, 0.0, 0.5) == pytest.approx(-h.H2 / h.H1, rel=1e-12)

    def test_sigma_free_half_order(self):
        assert sc.sigma_free(0.5, 0.0, 0.5) == pytest.approx(cmath.exp(-1j), rel=1e-13)


class TestJostFunctions:
    def test_two_routes_agree_random_complex(self, q_bump_step):
        rng = np.random.default_rng(31)
        nus = [complex(rng.uniform(-6, 8), rng.uniform(-6, 6)) for _ in range(100)]
        for jf in sc.jost_functions_many(q_bump_step, nus, rtol=1e-11):
            assert jf.agreement <= 1e-8

    def test_conjugation_alpha_beta(self, q_bump_step):
        # conj(alpha(nu)) = beta(conj(nu))
        for nu in (1.5 + 0.8j, 3.0 - 2j):
            a = sc.jost_functions(q_bump_step, nu)
            b = sc.jost_functions(q_bump_step, np.conj(nu))
            assert abs(np.conj(a.alpha) - b.beta) <= 1e-9 * max(1.0, abs(a.alpha))

    def test_modulus_equality_real_axis(self, q_bump_step):
        for nu in (0.0, 2.0, 6.0):
            jf = sc.jost_functions(q_bump_step, nu)
            assert abs(abs(jf.alpha) - abs(jf.beta)) <= 1e-9 * abs(jf.beta)

    def test_step_medium_against_matching_oracle(self, q_step):
        for l in (0, 2, 7):
            jf = sc.jost_functions(q_step, l)
            a_o, b_o, _ = step_oracle(l, 0.3, 0.5, 2.0)
            assert abs(jf.alpha - a_o) <= 1e-7 * max(1.0, abs(a_o))
            assert abs(jf.beta - b_o) <= 1e-7 * max(1.0, abs(b_o))


class TestSigma:
    def test_matches_free_closed_form_on_zero_medium(self, q_zero):
        for nu in (0.5, 1.0, 5.0):
            got = sc.regge_sigma(q_zero, nu)
            assert abs(got - sc.sigma_free(nu, 0.0, 0.5)) <= 1e-8

    def test_unimodular_on_real_axis(self, q_bump_step):
        for nu in (0.0, 1.0, 3.5, 11.0):
            s = sc.regge_sigma(q_bump_step, nu)
            assert abs(abs(s) - 1.0) <= 1e-8

    def test_ab_medium_is_shifted_free(self, q_ab):
        got = sc.regge_sigma(q_ab, 3.0)
        want = sc.sigma_free(3.0, q_ab.flux_over_2pi, 0.5)
        assert abs(got - want) <= 1e-10

    def test_positive_tail_limit(self, q_bump_field):
        # sigma(l) -> e^{+i pi gamma(R)} as l -> +infinity
        lim = cmath.exp(1j * math.pi * 0.3)
        sig = sc.sigma_many(q_bump_field, [30, 40], rtol=1e-10)
        assert abs(sig[-1] - lim) <= 0.05
        assert abs(sig[-1] - lim) <= abs(sig[0] - lim) + 1e-12

    def test_negative_tail_limit(self, q_bump_field):
        lim = cmath.exp(-1j * math.pi * 0.3)
        sig = sc.sigma_tail_negative(q_bump_field, [-40, -30], rtol=1e-10)
        assert abs(sig[0] - lim) <= 0.05

    def test_flux_shift_covariance(self):
        # sigma_{gamma+2}(nu) = sigma_gamma(nu - 2) on a flux-only medium
        ab1 = fl.effective_potential(
            fl.Medium(fl.zero_profile(), fl.bump_field(0.5, 0.1, 0.4), 0.5, 0.45))
        ab2 = fl.effective_potential(
            fl.Medium(fl.zero_profile(), fl.bump_field(2.5, 0.1, 0.4), 0.5, 0.45))
        for nu in (3.0, 5.5, 4 + 1j):
            assert abs(sc.regge_sigma(ab2, nu) - sc.regge_sigma(ab1, nu - 2)) <= 1e-8

    def test_conjugate_pair_flux_only(self, q_ab):
        # sigma(-l) ~ conj(sigma(l)), asymptotically in l
        devs = []
        for l in (4, 8):
            s_pos = sc.regge_sigma(q_ab, float(l))
            s_neg = sc.sigma_tail_negative(q_ab, [-l])[0]
            devs.append(abs(s_neg - np.conj(s_pos)))
        assert devs[0] <= 1e-3
        assert devs[1] < devs[0]

    def test_aharonov_bohm_invariance(self):
        # equal flux inside the obstacle: identical scattering data
        m1 = fl.effective_potential(
            fl.Medium(fl.zero_profile(), fl.bump_field(0.5, 0.1, 0.4), 0.5, 0.45))
        m2 = fl.effective_potential(
            fl.Medium(fl.zero_profile(), fl.bump_field(0.5, 0.05, 0.45), 0.5, 0.45))
        d1 = sc.phase_shifts(m1, (0, 10))
        d2 = sc.phase_shifts(m2, (0, 10))
        for r1, r2 in zip(d1.records, d2.records):
            assert abs(r1.sigma - r2.sigma) <= 1e-9
            assert abs(r1.delta - r2.delta) <= 1e-9

    def test_beta_asymptotics(self, q_bump_step):
        # |beta(nu)| ~ C |beta0(nu)|: the ratio settles
        flux = q_bump_step.flux_over_2pi
        ratios = []
        for nu_R in (30.0, 35.0, 40.0):
            jf = sc.jost_functions(q_bump_step, flux + nu_R)
            _, b0 = sc.jost_functions_free(flux + nu_R, flux, 0.5)
            ratios.append(abs(jf.beta) / abs(b0))
        extrap = ratios[1] + (ratios[1] - ratios[0])
        assert abs(ratios[2] - extrap) <= 0.05 * ratios[2]


class TestPhaseShifts:
    def test_free_hard_disk_value_at_l0(self, q_zero):
        # delta_0 against direct Hankel evaluation of sigma0
        from camscat.specfun import bessel_h
        data = sc.phase_shifts(q_zero, (0, 10))
        h = bessel_h(0.0, 0.5)
        want = cmath.phase(-h.H2 / h.H1) / 2.0
        got = data.delta(0)
        assert abs((got - want + math.pi / 2) % math.pi - math.pi / 2) <= 1e-8

    def test_interpolation_point_half_order(self, q_zero):
        # at nu_R = 1/2 the shift is -r0 mod pi
        s = sc.regge_sigma(q_zero, 0.5)
        delta = cmath.phase(s) / 2.0
        assert abs((delta + 0.5 + math.pi / 2) % math.pi - math.pi / 2) <= 1e-10

    def test_tail_anchor_and_continuity(self, q_bump_field):
        data = sc.phase_shifts(q_bump_field, (-12, 12), rtol=1e-10)
        # 2 delta -> pi gamma mod 2pi at the anchor end
        assert abs(2 * data.delta(12) - math.pi * 0.3) % (2 * math.pi) <= 0.05
        ls = data.l_values
        deltas = [data.delta(l) for l in ls]
        jumps = np.abs(np.diff(deltas))
        i5 = ls.index(5)
        assert np.all(jumps[i5:] <= math.pi / 2 + 1e-12)

    def test_zero_medium_negative_positive_symmetry(self, q_zero):
        data = sc.phase_shifts(q_zero, (-8, 8))
        for l in range(1, 9):
            assert abs(data.sigma(l) - data.sigma(-l)) <= 1e-9


class TestCamScan:
    def test_real_axis_consistency(self, q_bump_step):
        scan = sc.cam_scan(q_bump_step, [1.0, 2.0, 3.0])
        data = sc.phase_shifts(q_bump_step, (1, 3))
        for nu, s in zip(scan.nu_grid, scan.sigma):
            assert abs(s - data.sigma(int(nu.real))) <= 1e-10

    def test_critical_line_finite(self, q_bump_step):
        flux = q_bump_step.flux_over_2pi
        scan = sc.cam_scan(q_bump_step, [flux + 1j * y for y in (-10, -3, 3, 10)])
        assert not scan.excluded
        assert all(np.isfinite(abs(s)) for s in scan.sigma)

    def test_free_case_matches_closed_form(self, q_zero):
        nus = [0.7, 1.3 + 0.4j, 2.0 - 1j]
        scan = sc.cam_scan(q_zero, nus)
        for nu, s in zip(scan.nu_grid, scan.sigma):
            assert abs(s - sc.sigma_free(nu, 0.0, 0.5)) <= 1e-8

    def test_json_round_trip(self, q_zero, tmp_path):
        scan = sc.cam_scan(q_zero, [1.0, 1j])
        path = tmp_path / "scan.json"
        scan.to_json(path)
        doc = json.loads(path.read_text())
        assert doc["schema_version"] == 1
        assert len(doc["points"]) == 2


class TestSerialization:
    def test_csv_schema(self, q_zero, tmp_path):
        data = sc.phase_shifts(q_zero, (-2, 2))
        path = tmp_path / "table.csv"
        data.to_csv(path)
        with open(path) as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["l", "re_sigma", "im_sigma", "delta"]
        assert len(rows) == 6
        assert [int(r[0]) for r in rows[1:]] == [-2, -1, 0, 1, 2]

    def test_json_schema(self, q_zero, tmp_path):
        data = sc.phase_shifts(q_zero, (0, 2))
        path = tmp_path / "table.json"
        data.to_json(path)
        doc = json.loads(path.read_text())
        assert doc["schema_version"] == 1
        assert doc["flux_over_2pi"] == 0.0
        assert "branch_anchor" in doc

    def test_threads_do_not_change_results(self, q_bump_step):
        a = sc.phase_shifts(q_bump_step, (0, 20), rtol=1e-10, threads=1)
        b = sc.phase_shifts(q_bump_step, (0, 20), rtol=1e-10, threads=4)
        for ra, rb in zip(a.records, b.records):
            assert ra.sigma == rb.sigma and ra.delta == rb.delta


class TestErrors:
    def test_beta_zero_reported_not_fatal_in_scan(self, q_zero, monkeypatch):
        import camscat.scattering as mod
        monkeypatch.setattr(mod, "_BETA_FLOOR", 1e300)
        scan = sc.cam_scan(q_zero, [1.0, 2.0])
        assert len(scan.excluded) == 2

    def test_beta_zero_raises_in_regge(self, q_zero, monkeypatch):
        import camscat.scattering as mod
        monkeypatch.setattr(mod, "_BETA_FLOOR", 1e300)
        with pytest.raises(BetaZero):
            sc.regge_sigma(q_zero, 1.0)
