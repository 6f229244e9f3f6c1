#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


import math
import unittest

import numpy as np

from crossings_lab.process import gaussian


class TestSpectralModel(unittest.TestCase):
	TWO_ATOMS = ((0.25, 1.0), (0.25, 2.0))
	BAD = (
		((), None),
		(((0.5, 1.0), (0.5,)), None),
		(((-0.5, 1.0),), None),
		(((0.5, 0.0),), None),
		(((0.0, 1.0),), None),
		(((0.5, math.inf),), None),
		(((0.25, 1.0), (0.25, 2.0)), 1.0),
	)

	def test_moments(self):
		m = gaussian.SpectralModel.from_atoms(self.TWO_ATOMS, 0.5)
		self.assertAlmostEqual(m.variance, 0.5, places=15)
		self.assertAlmostEqual(m.lambda2, 1.25, places=15)
		self.assertEqual(m.second_spectral_moment(), m.lambda2)
		self.assertEqual(m.atoms, list(self.TWO_ATOMS))
		self.assertAlmostEqual(float(m.covariance(0.0)), 0.5, places=15)
		self.assertAlmostEqual(float(m.covariance(1.0)), 0.25 * (math.cos(1) + math.cos(2)), places=15)

	def test_invalid(self):
		for atoms, var in self.BAD:
			with self.subTest(atoms=atoms, variance=var):
				with self.assertRaises(ValueError):
					gaussian.SpectralModel.from_atoms(atoms, var)

	def test_validate(self):
		single = gaussian.SpectralModel.from_atoms([(0.5, math.sqrt(2))])
		d = single.validate(3.0)
		self.assertFalse(d.passed)
		self.assertAlmostEqual(d.tau, math.pi / math.sqrt(2), delta=1e-4)
		self.assertAlmostEqual(abs(d.gamma), 0.5, delta=1e-9)
		self.assertTrue(d.geman)
		self.assertTrue(str(d).startswith('FAIL'))
		self.assertIn('2.2214', str(d))

		for atoms, T in (([(0.5, math.sqrt(2))], 2.0), (self.TWO_ATOMS, 1.0), (((0.5, 1.0), (0.5, 2.0)), 1.0)):
			with self.subTest(atoms=atoms, T=T):
				d = gaussian.SpectralModel.from_atoms(atoms).validate(T)
				self.assertTrue(d.passed)
				self.assertIsNone(d.tau)
				self.assertLess(d.max_ratio, 1.0)
				self.assertTrue(str(d).startswith('pass'))
		with self.assertRaises(ValueError):
			single.validate(0.0)


class TestSampling(unittest.TestCase):
	MODEL = gaussian.SpectralModel.from_atoms(((0.5, 1.0), (0.5, 2.0)))

	def test_grid(self):
		s = gaussian.sample_gaussian_path(self.MODEL, 1.0, 1e-3, np.random.default_rng(1))
		self.assertEqual(s.times.shape, (1001,))
		self.assertEqual(s.values.shape, (1001,))
		self.assertEqual(s.derivatives.shape, (1001,))
		self.assertEqual(s.times[-1], 1.0)
		with self.assertRaises(ValueError):
			self.MODEL.sample(1.0, 0.3, np.random.default_rng(1))

	def test_deterministic(self):
		a = self.MODEL.sample(1.0, 0.01, np.random.default_rng(42))
		b = self.MODEL.sample(1.0, 0.01, np.random.default_rng(42))
		self.assertTrue(np.array_equal(a.values, b.values))
		self.assertTrue(np.array_equal(a.derivatives, b.derivatives))

	def test_derivative(self):
		h = 1e-3
		for seed in range(5):
			path = self.MODEL.sample_path(np.random.default_rng(seed))
			t = np.linspace(0.0, 1.0, 11)
			fd = (path(t + h) - path(t - h)) / (2 * h)
			with self.subTest(seed=seed):
				self.assertLess(float(np.max(np.abs(fd - path.derivative(t)))), 1e-5)

	def test_moments(self):
		n = 4000
		z0 = np.empty(n)
		dz0 = np.empty(n)
		zh = np.empty(n)
		for i in range(n):
			path = self.MODEL.sample_path(np.random.default_rng([7, i]))
			z0[i] = path(0.0)
			dz0[i] = path.derivative(0.0)
			zh[i] = path(0.5)
		self.assertAlmostEqual(float(z0.var()), self.MODEL.variance, delta=0.1)
		self.assertAlmostEqual(float(dz0.var()), self.MODEL.lambda2, delta=0.25)
		self.assertLess(abs(float(np.mean(z0 * dz0))), 0.15)
		# E|Ż(0)| = √(2λ2/π), standard error about 0.015
		self.assertAlmostEqual(float(np.mean(np.abs(dz0))), math.sqrt(2 * self.MODEL.lambda2 / math.pi), delta=0.07)
		# Cov(Z(0), Z(1/2)) = Γ(1/2), standard error about 0.02
		self.assertAlmostEqual(float(np.mean(z0 * zh)), float(self.MODEL.covariance(0.5)), delta=0.08)
