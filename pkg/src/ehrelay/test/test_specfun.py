# See LICENSE for details.

import math

import numpy as np

from scipy import special
from twisted.trial.unittest import TestCase

from ..specfun import (
    DomainError,
    SeriesControl,
    bessel_k1,
    bessel_k1_deficit,
    exp_integral_E1,
    exp_integral_En,
    phi_series,
    quad_tail_complement,
    quad_tail_product,
)


POINTS = [float(x) for x in np.logspace(-4, math.log10(20.0), 40)]


class ExponentialIntegralTests(TestCase):
    def test_known_values(self):
        self.assertAlmostEqual(exp_integral_E1(1.0), 0.21938393439552029, places=14)
        self.assertAlmostEqual(
            exp_integral_En(2, 1.0), 0.14849550677592205, places=14
        )

    def test_against_scipy(self):
        """
        E1 matches scipy over both the series and the continued fraction
        branches.
        """
        for x in POINTS:
            expected = special.exp1(x)
            self.assertLess(abs(exp_integral_E1(x) - expected) / expected, 1e-10, x)

    def test_higher_orders(self):
        for n in (2, 3, 5):
            for x in (0.01, 0.5, 3.0, 30.0):
                expected = special.expn(n, x)
                self.assertLess(
                    abs(exp_integral_En(n, x) - expected) / expected, 1e-10, (n, x)
                )

    def test_recurrence(self):
        """
        n E_{n+1}(x) = exp(-x) - x E_n(x).
        """
        for x in (0.1, 1.0, 4.0):
            left = 2 * exp_integral_En(3, x)
            right = math.exp(-x) - x * exp_integral_En(2, x)
            self.assertAlmostEqual(left, right, places=13)

    def test_en_at_zero(self):
        self.assertEqual(exp_integral_En(3, 0.0), 0.5)

    def test_underflow(self):
        self.assertEqual(exp_integral_E1(1000.0), 0.0)

    def test_domain(self):
        for bad in (0.0, -1.0, math.nan):
            with self.assertRaises(DomainError):
                exp_integral_E1(bad)
        with self.assertRaises(DomainError):
            exp_integral_En(1, 0.0)
        with self.assertRaises(ValueError):
            exp_integral_En(-1, 1.0)


class BesselTests(TestCase):
    def test_known_values(self):
        self.assertAlmostEqual(bessel_k1(1.0), 0.6019072301972346, places=14)
        self.assertAlmostEqual(bessel_k1(5.0), 0.004044613445452164, places=15)

    def test_against_scipy(self):
        for x in POINTS:
            expected = special.k1(x)
            self.assertLess(abs(bessel_k1(x) - expected) / expected, 1e-10, x)

    def test_deficit(self):
        """
        1 - x K1(x) agrees with the direct difference where that is safe and
        stays accurate where it is not.
        """
        for x in (0.5, 1.0, 2.0, 3.0, 8.0):
            self.assertAlmostEqual(
                bessel_k1_deficit(x), 1.0 - x * special.k1(x), places=12
            )
        # Leading term (x^2 / 2) ln(2 / x) for tiny x.
        x = 1e-9
        deficit = bessel_k1_deficit(x)
        self.assertGreater(deficit, 0.0)
        self.assertAlmostEqual(
            deficit / (0.5 * x * x * math.log(2.0 / x)), 1.0, places=1
        )

    def test_domain(self):
        with self.assertRaises(DomainError):
            bessel_k1(0.0)
        with self.assertRaises(DomainError):
            bessel_k1_deficit(-2.0)


class TailIntegralTests(TestCase):
    def test_product_and_complement_add_to_one(self):
        for beta, s, w in ((0.1, 1.0, 0.2), (0.01, 2.0, 0.05), (1.5, 0.5, 3.0)):
            total = quad_tail_product(beta, s, w) + quad_tail_complement(beta, s, w)
            self.assertAlmostEqual(total, 1.0, places=10)

    def test_no_coupling(self):
        """
        Without the second hop the tail is a plain exponential.
        """
        self.assertAlmostEqual(quad_tail_product(0.3, 1.5, 0.0), math.exp(-0.2))
        self.assertAlmostEqual(quad_tail_complement(0.3, 1.5, 0.0), -math.expm1(-0.2))

    def test_zero_threshold_closed_form(self):
        """
        (1/s) int_0^inf exp(-x/s - w/x) dx = 2 sqrt(w/s) K1(2 sqrt(w/s)).
        """
        s, w = 1.0, 0.04
        x = 2.0 * math.sqrt(w / s)
        self.assertAlmostEqual(
            quad_tail_product(0.0, s, w), x * special.k1(x), places=10
        )
        self.assertAlmostEqual(
            quad_tail_complement(0.0, s, w), 1.0 - x * special.k1(x), places=10
        )

    def test_deep_tail_keeps_precision(self):
        beta = 1e-12
        value = quad_tail_complement(beta, 1.0, beta)
        self.assertGreater(value, beta)
        self.assertLess(value, 1e-9)

    def test_domain(self):
        with self.assertRaises(DomainError):
            quad_tail_product(-1.0, 1.0, 1.0)
        with self.assertRaises(DomainError):
            quad_tail_complement(1.0, 0.0, 1.0)


class PhiSeriesTests(TestCase):
    def test_matches_quadrature(self):
        for beta, s, t, alpha in ((0.2, 1.0, 1.0, 0.1), (0.05, 1.0, 2.0, 0.04)):
            value = phi_series(beta, s, t, alpha, SeriesControl())
            self.assertTrue(value.converged)
            expected = quad_tail_product(beta, s, alpha / t)
            self.assertAlmostEqual(value.value, expected, places=9)

    def test_zero_alpha(self):
        value = phi_series(0.5, 1.0, 1.0, 0.0, SeriesControl())
        self.assertEqual(value.terms, 1)
        self.assertAlmostEqual(value.value, math.exp(-0.5))

    def test_divergence_reported(self):
        """
        A large coupling ratio makes the terms grow and the series is given up.
        """
        value = phi_series(0.01, 1.0, 1.0, 5.0, SeriesControl(max_terms=40))
        self.assertFalse(value.converged)

    def test_term_cap(self):
        value = phi_series(0.2, 1.0, 1.0, 0.1, SeriesControl(max_terms=2))
        self.assertFalse(value.converged)
        self.assertEqual(value.terms, 2)

    def test_control_validation(self):
        with self.assertRaises(ValueError):
            SeriesControl(max_terms=1)
        with self.assertRaises(ValueError):
            SeriesControl(rel_tol=0.0)
