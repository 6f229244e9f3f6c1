#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


import math
import unittest

import numpy as np
from scipy import stats

from crossings_lab import rice, numeric


class TestClassical(unittest.TestCase):
	def test_mean_abs_derivative(self):
		both, pos = rice.mean_abs_derivative(1.0)
		self.assertAlmostEqual(both, math.sqrt(2 / math.pi), places=15)
		self.assertAlmostEqual(pos, 1 / math.sqrt(2 * math.pi), places=15)
		with self.assertRaises(ValueError):
			rice.mean_abs_derivative(0.0)

	def test_classical(self):
		self.assertAlmostEqual(rice.classical_upcrossings(1.25, 0.0), 0.1591549430918953 * math.sqrt(1.25), places=14)
		self.assertAlmostEqual(rice.classical_upcrossings(1.0, 1.0, 3.0),
		                       3 * math.exp(-0.5) / (2 * math.pi), places=14)
		# variance 2 rescales the level
		self.assertAlmostEqual(rice.classical_upcrossings(2.0, 0.0, variance=2.0),
		                       1 / (2 * math.pi), places=14)

	def test_const_var(self):
		self.assertAlmostEqual(rice.rice_const_var_continuous(1.0, 0.3, 2.0, 'both'),
		                       2 * rice.rice_const_var_continuous(1.0, 0.3, 2.0, 'up'), places=15)
		with self.assertRaises(ValueError):
			rice.rice_const_var_continuous(1.0, -0.1, 1.0)
		with self.assertRaises(ValueError):
			rice.rice_const_var_continuous(1.0, 0.1, 1.0, 'left')


class TestPoissonAr(unittest.TestCase):
	P = rice.PoissonArParams(1.25, 1.0, 0.5)
	LEVELS = (0.0, 1.0, 2.0, 3.0, 4.0, 5.0)

	def test_params(self):
		for kw in ({'rho': 1.0}, {'rho': -1.5}, {'lam': 0.0}, {'lambda2': -1.0}, {'horizon': math.inf},
		           {'smooth_variance': 0.0}, {'smooth_variance': 1.0}):
			args = {'lambda2': 1.25, 'lam': 1.0, 'rho': 0.5, **kw}
			with self.subTest(**kw):
				with self.assertRaises(ValueError):
					rice.PoissonArParams(**args)
		self.assertEqual(self.P.jump_corr, 0.75)
		self.assertAlmostEqual(rice.PoissonArParams(1.25, 1.0, 0.5, smooth_variance=0.64).jump_corr, 0.82, places=15)

	def test_unequal_split(self):
		alpha, lambda2 = 0.8, 0.64 * 1.25
		p = rice.PoissonArParams(lambda2, 1.0, 0.5, 2.0, alpha**2)
		for u in (0.0, 1.0, 2.5):
			t = rice.poisson_ar_upcrossings(p, u)
			with self.subTest(u=u):
				# Z = αZ̃ crosses like Z̃, scaled by α
				self.assertAlmostEqual(t.continuous, alpha * rice.classical_upcrossings(lambda2 / alpha**2, u, 2.0), places=14)
				self.assertAlmostEqual(t.discontinuous, 2.0 * numeric.bvn_rect_upper(u, 0.82), delta=1e-12)
		self.assertAlmostEqual(rice.poisson_ar_upcrossings(p, 0.0).discontinuous,
		                       2.0 * (0.25 - math.asin(0.82) / (2 * math.pi)), delta=1e-9)

	def test_level_zero(self):
		t = rice.poisson_ar_upcrossings(self.P, 0.0)
		self.assertAlmostEqual(t.continuous, math.sqrt(1.25) / (2 * math.pi), delta=1e-14)
		self.assertAlmostEqual(t.discontinuous, 0.25 - math.asin(0.75) / (2 * math.pi), delta=1e-10)
		self.assertEqual(t.total, t.continuous + t.discontinuous)

	def test_symmetry(self):
		for u in self.LEVELS:
			with self.subTest(u=u):
				up = rice.poisson_ar_upcrossings(self.P, u)
				down = rice.poisson_ar_downcrossings(self.P, u)
				self.assertAlmostEqual(up.continuous, down.continuous, places=14)
				self.assertAlmostEqual(up.discontinuous, down.discontinuous, delta=1e-10)

	def test_disc_bounds(self):
		ratios = []
		for u in self.LEVELS:
			t = rice.poisson_ar_upcrossings(self.P, u)
			sf = float(numeric.std_normal_sf(u))
			with self.subTest(u=u):
				self.assertLessEqual(t.discontinuous, self.P.lam * self.P.horizon * sf + 1e-12)
				self.assertGreater(t.discontinuous, 0.0)
				bound = self.P.lam * sf / (math.sqrt(self.P.lambda2 / (2 * math.pi)) * float(numeric.std_normal_pdf(u)))
				self.assertLessEqual(t.discontinuous / t.continuous, bound * (1 + 1e-12))
			ratios.append(t.discontinuous / t.continuous)
		self.assertTrue(all(b < a for a, b in zip(ratios, ratios[1:])))

	def test_horizon(self):
		a = rice.poisson_ar_upcrossings(rice.PoissonArParams(1.25, 1.0, 0.5, 3.0), 1.0)
		b = rice.poisson_ar_upcrossings(self.P, 1.0)
		self.assertAlmostEqual(a.total, 3 * b.total, places=12)

	def test_tail_bound(self):
		c = math.sqrt(self.P.lambda2 / (2 * math.pi))
		prev = math.inf
		for u in (2.0, 3.0, 4.0, 5.0):
			cont = rice.poisson_ar_upcrossings(self.P, u).continuous
			excess = rice.max_tail_upper_bound(self.P, u) / cont - 1
			with self.subTest(u=u):
				self.assertGreaterEqual(excess, 0.0)
				self.assertLessEqual(excess, (1 + self.P.lam * self.P.horizon) / (u * self.P.horizon * c))
				self.assertLess(excess, prev)
			prev = excess
		self.assertEqual(rice.max_tail_upper_bound(rice.PoissonArParams(1e4, 50.0, 0.5), 0.0), 1.0)


class TestCppMixture(unittest.TestCase):
	MEANS = (0.5, 1.0, 4.0)

	def _moment(self, m, k):
		w = rice.cpp_mixture_weights(m, 1.0)
		def f(x):
			return x**k * float(rice.cpp_mixture_density(x, m, 1.0))
		return numeric.quad_adaptive(f, -math.inf, math.inf, scale=math.sqrt(w.size))

	def test_weights(self):
		for m in self.MEANS:
			w = rice.cpp_mixture_weights(m, 1.0)
			with self.subTest(m=m):
				self.assertAlmostEqual(float(w.sum()), 1.0, delta=1e-12)
				self.assertTrue(np.all(np.diff(w) <= 0))
				self.assertFalse(w.flags.writeable)
		with self.assertRaises(ValueError):
			rice.cpp_mixture_weights(0.0, 1.0)

	def test_mass(self):
		for m in self.MEANS:
			with self.subTest(m=m):
				self.assertAlmostEqual(self._moment(m, 0), 1.0, delta=1e-8)

	def test_second_moment(self):
		for m in self.MEANS:
			with self.subTest(m=m):
				self.assertAlmostEqual(self._moment(m, 2), 1 + m / 2, delta=1e-6)

	def test_shape(self):
		x = np.linspace(0.0, 6.0, 25)
		p = rice.cpp_mixture_density(x, 1.0, 1.0)
		self.assertTrue(np.allclose(p, rice.cpp_mixture_density(-x, 1.0, 1.0), rtol=0, atol=1e-15))
		self.assertTrue(np.all(np.diff(p) < 0))
		self.assertEqual(p.shape, x.shape)

	def test_value_at_zero(self):
		# Σ P(ν ≥ n)·ϕ(0)/√n for ν ~ Poisson(1)
		n = np.arange(1, 40)
		exp = float(np.sum(stats.poisson.sf(n - 1, 1.0) / np.sqrt(n))) * float(numeric.std_normal_pdf(0.0))
		val = float(rice.cpp_mixture_density(0.0, 1.0, 1.0))
		self.assertAlmostEqual(val, exp, delta=1e-11)
		self.assertAlmostEqual(val, 0.3498, delta=1e-4)

	def test_rare_jumps(self):
		# one jump at most as λT → 0, so p → ϕ
		x = np.linspace(-4.0, 4.0, 17)
		p = rice.cpp_mixture_density(x, 1e-6, 1.0)
		self.assertTrue(np.allclose(p, numeric.std_normal_pdf(x), rtol=0, atol=1e-6))


class TestCpp(unittest.TestCase):
	C = rice.CppParams(2.5, 1.0)

	def test_params(self):
		for tol in (0.0, 1e-5):
			with self.subTest(tol=tol):
				with self.assertRaises(ValueError):
					rice.CppParams(2.5, 1.0, tol=tol)

	def test_continuous(self):
		for u in (0.0, 1.0, 2.0):
			with self.subTest(u=u):
				t = rice.cpp_upcrossings(self.C, u)
				p = float(rice.cpp_mixture_density(u, 1.0, 1.0))
				self.assertAlmostEqual(t.continuous, math.sqrt(2.5 / (2 * math.pi)) * p, places=14)

	def test_disc_bounds(self):
		for u in (-1.0, 0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0):
			with self.subTest(u=u):
				disc = rice.cpp_upcrossings(self.C, u).discontinuous
				lo, hi = rice.cpp_disc_bounds(self.C, u)
				self.assertLessEqual(lo, disc + 1e-12)
				self.assertLessEqual(disc, hi + 1e-12)
				if u <= 0:
					self.assertEqual(lo, 0.0)

	def test_same_order(self):
		for u in (3.0, 4.0, 5.0):
			with self.subTest(u=u):
				disc = rice.cpp_upcrossings(self.C, u).discontinuous
				p = float(rice.cpp_mixture_density(u, 1.0, 1.0))
				self.assertGreaterEqual(disc / (self.C.lam * self.C.horizon * p), 1 / math.sqrt(2 * math.pi) - 0.05)

	def test_up_down(self):
		# E U^d − E D^d = λT(P(X + ξ > u) − P(X > u)) with X ~ p and ξ ~ N(0, 1)
		w = rice.cpp_mixture_weights(1.0, 1.0)
		n = np.arange(1, w.size + 1)
		for u in (-1.0, 0.5, 1.5):
			with self.subTest(u=u):
				up = rice.cpp_upcrossings(self.C, u)
				down = rice.cpp_downcrossings(self.C, u)
				self.assertAlmostEqual(up.continuous, down.continuous, places=14)
				exp = float((numeric.std_normal_sf(u / np.sqrt(n + 1)) - numeric.std_normal_sf(u / np.sqrt(n))) @ w)
				self.assertAlmostEqual(up.discontinuous - down.discontinuous, exp, delta=1e-9)

	def test_tail_bound(self):
		for u in (1.0, 2.0, 3.0):
			with self.subTest(u=u):
				b = rice.cpp_max_tail_upper_bound(self.C, u)
				self.assertAlmostEqual(b, float(numeric.std_normal_sf(u)) + rice.cpp_upcrossings(self.C, u).total, places=14)


class TestConvolution(unittest.TestCase):
	def test_independent_gaussians(self):
		a, b, lambda2, T = 0.7, 0.3, 2.0, 1.5
		cond = lambda t, v: math.sqrt(2 * lambda2 / math.pi)
		pz = lambda t, v: float(numeric.gauss_density_var(v, a))
		pj = lambda t, x: float(numeric.gauss_density_var(x, b))
		for u in (0.0, 1.0, 2.5):
			with self.subTest(u=u):
				val = rice.general_rice_convolution(cond, pz, pj, u, T, z_scale=1.0)
				exp = T * math.sqrt(2 * lambda2 / math.pi) * float(numeric.gauss_density_var(u, a + b))
				self.assertAlmostEqual(val, exp, delta=1e-8)

	def test_narrow_jump_density(self):
		cond = lambda t, v: 1.0
		pz = lambda t, v: float(numeric.gauss_density_var(v, 1.0))
		pj = lambda t, x: float(numeric.gauss_density_var(x, 0.01))
		val = rice.general_rice_convolution(cond, pz, pj, 0.5, 1.0, points=(0.5,))
		self.assertAlmostEqual(val, float(numeric.gauss_density_var(0.5, 1.01)), delta=1e-8)

	def test_very_narrow_jump_density(self):
		# J(t) ~ N(0, 1e-8) is nearly degenerate; the result tends to cond·ϕ(u)
		cond_val = math.sqrt(2 / math.pi)
		cond = lambda t, v: cond_val
		pz = lambda t, v: float(numeric.std_normal_pdf(v))
		pj = lambda t, x: float(numeric.gauss_density_var(x, 1e-8))
		val = rice.general_rice_convolution(cond, pz, pj, 0.5, 1.0, j_scale=1e-4)
		self.assertAlmostEqual(val, cond_val * float(numeric.gauss_density_var(0.5, 1 + 1e-8)), delta=1e-8)
		self.assertAlmostEqual(val, cond_val * float(numeric.std_normal_pdf(0.5)), delta=1e-4)
		self.assertAlmostEqual(val, 0.2809075, delta=1e-6)

	def test_zero_conditional_mean(self):
		pz = lambda t, v: float(numeric.std_normal_pdf(v))
		val = rice.general_rice_convolution(lambda t, v: 0.0, pz, pz, 0.5, 2.0)
		self.assertEqual(val, 0.0)

	def test_j_scale(self):
		pz = lambda t, v: float(numeric.std_normal_pdf(v))
		for s in (0.0, -1e-4):
			with self.subTest(j_scale=s):
				with self.assertRaises(ValueError):
					rice.general_rice_convolution(lambda t, v: 1.0, pz, pz, 0.5, 1.0, j_scale=s)
