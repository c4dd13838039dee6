# See LICENSE for details.

import math

from scipy import special
from twisted.trial.unittest import TestCase

from ..analytic import (
    AppendixMoments,
    Method,
    OutageValue,
    appendix_moments,
    diversity_fit,
    diversity_order,
    outage,
    outage_asymptotic,
    outage_eps,
    outage_eps_quadrature,
    outage_eps_series,
    outage_ops_closed,
    outage_ops_quadrature,
    outage_tps_quadrature,
    series_convergence_map,
)
from ..model import SystemParams, db_to_linear
from ..schemes import EHB_AF, EHB_DF, EPS, OPS, Scheme, tps
from ..specfun import SeriesControl


def _params(gamma_db=15.0, **kwargs):
    return SystemParams.from_db(gamma_db=gamma_db, **kwargs)


class ClosedFormTests(TestCase):
    def test_single_relay_ops_by_hand(self):
        """
        One relay with unit means: 1 - x K1(x) exp(-delta eta).
        """
        params = SystemParams.symmetric(gamma=10.0, n_relays=1)
        delta = 3.0 / (10.0 * 0.5)
        x = 2.0 * math.sqrt(delta)
        expected = 1.0 - x * special.k1(x) * math.exp(-delta * 0.5)
        self.assertAlmostEqual(outage_ops_closed(params).p_out, expected, places=12)

    def test_ops_closed_matches_quadrature(self):
        for gamma_db in (0.0, 10.0, 20.0):
            for n in (1, 3, 6):
                params = _params(gamma_db, n_relays=n)
                closed = outage_ops_closed(params)
                check = outage_ops_quadrature(params)
                self.assertEqual(closed.method, Method.BESSEL)
                self.assertAlmostEqual(closed.p_out, check.p_out, places=8)

    def test_eps_series_matches_quadrature(self):
        params = _params(20.0, n_relays=2)
        series = outage_eps_series(params)
        quad = outage_eps_quadrature(params)
        self.assertTrue(series.converged)
        self.assertEqual(series.method, Method.SERIES)
        self.assertAlmostEqual(series.p_out, quad.p_out, places=8)

    def test_eps_falls_back_to_quadrature(self):
        params = _params(0.0, n_relays=2)
        series = outage_eps_series(params, SeriesControl(max_terms=3))
        self.assertFalse(series.converged)
        value = outage_eps(params, SeriesControl(max_terms=3))
        self.assertEqual(value.method, Method.QUADRATURE)
        self.assertTrue(0.0 < value.p_out < 1.0)

    def test_tps_endpoints(self):
        params = _params()
        self.assertEqual(outage_tps_quadrature(params, 0.0).p_out, 1.0)
        self.assertEqual(outage_tps_quadrature(params, 1.0).p_out, 1.0)
        with self.assertRaises(ValueError):
            outage_tps_quadrature(params, 1.5)

    def test_tps_half_is_eps(self):
        params = _params(10.0, n_relays=3)
        self.assertAlmostEqual(
            outage_tps_quadrature(params, 0.5).p_out,
            outage_eps_quadrature(params).p_out,
            places=12,
        )

    def test_tps_interior_minimum(self):
        params = _params()
        curve = [outage_tps_quadrature(params, 0.05 * i).p_out for i in range(1, 20)]
        best = curve.index(min(curve))
        self.assertTrue(0 < best < len(curve) - 1)

    def test_ordering(self):
        """
        Optimal splitting beats equal splitting at every SNR.
        """
        for gamma_db in (0.0, 10.0, 20.0):
            params = _params(gamma_db)
            self.assertLess(
                outage_ops_closed(params).p_out, outage_eps(params).p_out
            )

    def test_more_relays_help(self):
        values = [outage_ops_closed(_params(n_relays=n)).p_out for n in (1, 2, 4, 8)]
        self.assertEqual(values, sorted(values, reverse=True))

    def test_zero_rate(self):
        params = _params(rate=0.0)
        for kind in (EPS, OPS, tps(0.3)):
            self.assertEqual(outage(kind, params).p_out, 0.0)

    def test_asymmetric_product(self):
        """
        Outage over unequal relays is the product of single-relay outages.
        """
        params = SystemParams.from_db(
            n_relays=2, sigma_si2=[1.0, 2.0], sigma_id2=[0.5, 1.0]
        )
        first = SystemParams.from_db(n_relays=1, sigma_si2=1.0, sigma_id2=0.5)
        second = SystemParams.from_db(n_relays=1, sigma_si2=2.0, sigma_id2=1.0)
        self.assertAlmostEqual(
            outage_ops_closed(params).p_out,
            outage_ops_closed(first).p_out * outage_ops_closed(second).p_out,
            places=14,
        )

    def test_battery_schemes_have_no_closed_form(self):
        self.assertIsNone(outage(EHB_DF, _params()))
        self.assertIsNone(outage(EHB_AF, _params()))

    def test_outage_value_range(self):
        with self.assertRaises(ValueError):
            OutageValue(1.5, Method.SERIES)
        # Unconverged values are carried as they are.
        OutageValue(1.5, Method.SERIES, converged=False)


class AsymptoticTests(TestCase):
    def test_plain_ratio(self):
        params = _params(40.0, n_relays=3)
        eps = outage_asymptotic(EPS, params).p_out
        ops = outage_asymptotic(Scheme.OPS, params).p_out
        self.assertAlmostEqual(eps / ops, 8.0)

    def test_log_corrected_close_at_high_snr(self):
        for kind, exact in ((EPS, outage_eps_quadrature), (OPS, outage_ops_closed)):
            params = _params(60.0, n_relays=2)
            approx = outage_asymptotic(kind, params, log_corrected=True).p_out
            self.assertLess(abs(approx / exact(params).p_out - 1.0), 0.05, kind.label)

    def test_rejects_other_schemes(self):
        with self.assertRaises(ValueError):
            outage_asymptotic(EHB_AF, _params())


class DiversityTests(TestCase):
    def test_fit_of_power_law(self):
        curve = [(g, 5.0 * g**-2.0) for g in (10.0, 100.0, 1000.0)]
        self.assertAlmostEqual(diversity_fit(curve), 2.0)

    def test_fit_validation(self):
        with self.assertRaises(ValueError):
            diversity_fit([(10.0, 0.1)])
        with self.assertRaises(ValueError):
            diversity_fit([(10.0, 0.1), (100.0, 0.0)])
        with self.assertRaises(ValueError):
            diversity_fit([(10.0, 0.1), (10.0, 0.01)])

    def test_order_equals_relay_count(self):
        base = _params()
        for n in (1, 2, 3):
            for kind in (EPS, OPS):
                order = diversity_order(kind, base.with_relays(n))
                self.assertLess(abs(order - n), 0.15, (kind.label, n))

    def test_custom_window(self):
        order = diversity_order(OPS, _params(n_relays=2), window_db=(40.0, 50.0))
        self.assertTrue(1.5 < order < 2.0)


class MomentsTests(TestCase):
    def test_vanish_with_snr(self):
        base = _params()
        moments = [
            appendix_moments(base.replace(gamma=db_to_linear(db)))
            for db in (30.0, 45.0, 60.0)
        ]
        for earlier, later in zip(moments, moments[1:]):
            self.assertLess(later.e_z, earlier.e_z)
            self.assertLess(later.e_z2, earlier.e_z2)
        self.assertIsInstance(moments[0], AppendixMoments)
        self.assertGreater(moments[0].var_z, 0.0)

    def test_zero_rate(self):
        with self.assertRaises(ValueError):
            appendix_moments(_params(rate=0.0))


class ConvergenceMapTests(TestCase):
    def test_grid(self):
        points = series_convergence_map([10.0, 20.0], [0.5, 1.0], [0.5], n_relays=2)
        self.assertEqual(len(points), 4)
        self.assertEqual(points[0].gamma_db, 10.0)
        self.assertTrue(all(p.terms >= 1 for p in points))
        # Convergence is easiest at high SNR and low rate.
        self.assertTrue(points[2].converged)
