#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


import os
import json
import tempfile
import unittest

from crossings_lab import config, pdmp
from crossings_lab.process import jumps


MINIMAL_PAR = {'lambda': 1, 'rho': 0.5, 'atoms': [[0.25, 1], [0.25, 2]], 'levels': [0, 1, 2], 'seed': 7}


def parse(**doc):
	return config.parse_config(json.dumps(doc))


class TestParse(unittest.TestCase):
	def test_minimal(self):
		cfg = parse(**MINIMAL_PAR)
		self.assertEqual(cfg.kind, 'poisson_ar')
		self.assertEqual(cfg.family, 'poisson_ar')
		self.assertEqual(cfg.name, 'experiment')
		self.assertEqual((cfg.lam, cfg.rho, cfg.variance), (1.0, 0.5, 0.5))
		self.assertEqual(cfg.levels, (0.0, 1.0, 2.0))
		self.assertEqual((cfg.T, cfg.h, cfg.tol, cfg.reps, cfg.seed), (1.0, 1e-3, 1e-10, 100_000, 7))
		self.assertEqual(cfg.output, 'crossings-out')
		self.assertEqual(cfg.model().lambda2, 1.25)
		self.assertEqual(cfg.quadrature().abs_tol, 1e-10)

	def test_kind_inference(self):
		CASES = (
			({'lambda': 1, 'atoms': [[1, 1]], 'levels': [0]}, 'cpp'),
			({'atoms': [[2, 1]], 'levels': [0]}, 'none'),
			({'kernel': 'empty', 'atoms': [[2, 1]], 'levels': [0]}, 'kernel'),
			({'mu': 'linear -1 1', 'lambda': 1, 'levels': [0.5]}, 'pdmp'),
			(MINIMAL_PAR, 'poisson_ar'),
		)
		for doc, kind in CASES:
			with self.subTest(kind=kind):
				self.assertEqual(parse(**doc).kind, kind)

	def test_rejections(self):
		CASES = (
			({**MINIMAL_PAR, 'rho': 1.5}, 'rho'),
			({**MINIMAL_PAR, 'lambda': 0}, 'lambda'),
			({**MINIMAL_PAR, 'lambda': True}, 'lambda'),
			({**MINIMAL_PAR, 'colour': 'red'}, 'colour'),
			({**MINIMAL_PAR, 'levels': [0, 6]}, 'levels'),
			({**MINIMAL_PAR, 'levels': []}, 'levels'),
			({**MINIMAL_PAR, 'levels': ['a']}, 'levels'),
			({**MINIMAL_PAR, 'h': 0.3}, 'h'),
			({**MINIMAL_PAR, 'reps': 99}, 'reps'),
			({**MINIMAL_PAR, 'seed': -1}, 'seed'),
			({**MINIMAL_PAR, 'seed': 1.5}, 'seed'),
			({**MINIMAL_PAR, 'tol': 0}, 'tol'),
			({**MINIMAL_PAR, 'variance': 1}, 'variance'),
			({**MINIMAL_PAR, 'atoms': [[0.5, 1]], 'kind': 'cpp', 'rho': None}, 'rho'),
			({**MINIMAL_PAR, 'atoms': [[0.5, 1, 2]]}, 'atoms'),
			({**MINIMAL_PAR, 'atoms': [[1, 1]]}, 'atoms'),
			({**MINIMAL_PAR, 'kind': 'levy'}, 'kind'),
			({**MINIMAL_PAR, 'mu': 'linear 1 1'}, 'rho'),
			({'lambda': 1, 'atoms': [[0.5, 1]], 'levels': [0]}, 'atoms'),
			({'atoms': [[1, 1]], 'levels': [0], 'mark': 'normal 0 1'}, 'mark'),
			({'kernel': 'hawkes', 'atoms': [[1, 1]], 'levels': [0]}, 'kernel'),
			({'kernel': 'poisson_ar', 'lambda': 1, 'atoms': [[0.5, 1]], 'levels': [0]}, 'rho'),
			({'mu': 'quadratic 1', 'lambda': 1, 'levels': [0]}, 'mu'),
			({'mu': 'linear -1 1', 'levels': [0]}, 'lambda'),
			({'mu': 'linear -1 1', 'lambda': -1, 'levels': [0]}, 'lambda'),
			({'mu': 'linear -1 1', 'lambda': 1, 'levels': [1]}, 'levels'),
			({'mu': 'linear -1 1', 'lambda': 1, 'levels': [0], 'mark': 'normal 0 0'}, 'mark'),
			({'mu': 'linear -1 1', 'lambda': 1, 'levels': [0], 'mark': 'point 1'}, 'mark'),
			({'mu': 'linear -1 1', 'lambda': 1, 'levels': [0], 'x0': 'uniform 0 1'}, 'x0'),
			({'mu': 'linear -1 1', 'lambda': 1, 'levels': [0], 'h_ode': 0.3}, 'h_ode'),
			({'mu': 'linear -1 1', 'lambda': 1, 'levels': [0], 'atoms': [[1, 1]]}, 'atoms'),
		)
		for doc, field in CASES:
			with self.subTest(doc=doc):
				with self.assertRaises(config.ConfigError) as cm:
					parse(**doc)
				self.assertEqual(cm.exception.field, field)
				self.assertIn(repr(field), str(cm.exception))

	def test_duplicate(self):
		text = '{"lambda": 1, "rho": 0.5, "atoms": [[0.25, 1], [0.25, 2]], "levels": [0], "rho": 0.2}'
		with self.assertRaises(config.ConfigError) as cm:
			config.parse_config(text)
		self.assertEqual(cm.exception.field, 'rho')
		self.assertIn('duplicate', str(cm.exception))

	def test_malformed(self):
		for text, line in (('{\n "lambda": 1,\n}', 3), ('[1, 2]', None), ('', 1)):
			with self.subTest(text=text):
				with self.assertRaises(config.ConfigError) as cm:
					config.parse_config(text)
				self.assertEqual(cm.exception.line, line)
		with self.assertRaises(config.ConfigError) as cm:
			config.parse_config('{\n "lambda": 1,\n}')
		self.assertIn('line 3', str(cm.exception))


class TestBuild(unittest.TestCase):
	def test_processes(self):
		CASES = (
			(MINIMAL_PAR, jumps.PoissonAR),
			({'lambda': 2, 'atoms': [[1, 1]], 'levels': [0]}, jumps.CompoundPoisson),
			({'atoms': [[2, 1]], 'levels': [0]}, jumps.NoJumps),
			({'kernel': 'cpp', 'lambda': 2, 'atoms': [[1, 1]], 'levels': [0]}, jumps.KernelJumps),
		)
		for doc, cls in CASES:
			with self.subTest(cls=cls.__name__):
				proc = parse(**doc).process()
				self.assertIsInstance(proc, jumps.JumpDiffusion)
				self.assertIsInstance(proc.jumps, cls)

	def test_kernel_family(self):
		self.assertEqual(parse(kernel='cpp', atoms=[[1, 1]], levels=[0], **{'lambda': 2}).family, 'cpp')
		self.assertEqual(parse(kernel='empty', atoms=[[3, 1]], levels=[0]).family, 'classical')
		cfg = parse(kernel='poisson_ar', rho=0.2, atoms=[[0.5, 1]], levels=[0], **{'lambda': 2})
		self.assertEqual((cfg.family, cfg.variance), ('poisson_ar', 0.5))
		self.assertEqual(cfg.process().jumps.kernel.mark.coef, 0.2 - 1)

	def test_alpha(self):
		doc = {**MINIMAL_PAR, 'alpha': 0.8, 'atoms': [[0.32, 1], [0.32, 2]]}
		cfg = parse(**doc)
		self.assertEqual(cfg.alpha, 0.8)
		self.assertAlmostEqual(cfg.variance, 0.64, places=15)
		jmp = cfg.process().jumps
		self.assertIsInstance(jmp, jumps.PoissonAR)
		self.assertAlmostEqual(jmp.variance, 0.36, places=15)
		self.assertEqual(cfg.asdict()['alpha'], 0.8)
		self.assertNotIn('alpha', parse(**MINIMAL_PAR).asdict())
		kern = parse(**{**doc, 'kernel': 'poisson_ar'}).process().jumps.kernel
		self.assertAlmostEqual(kern.initial.sd, 0.6, places=15)
		BAD = (
			{**doc, 'alpha': 1.0},
			{**doc, 'alpha': 0},
			{**doc, 'alpha': 'big'},
			{**MINIMAL_PAR, 'alpha': 0.8},
			{**doc, 'variance': 0.5},
			{'lambda': 2, 'atoms': [[1, 1]], 'levels': [0], 'alpha': 0.5},
			{'mu': 'linear -1 1', 'levels': [0.5], 'lambda': 1, 'alpha': 0.5},
		)
		for bad in BAD:
			with self.subTest(doc=bad):
				with self.assertRaises(config.ConfigError) as cm:
					parse(**bad)
				self.assertIn(cm.exception.field, ('alpha', 'variance', 'atoms'))

	def test_pdmp(self):
		cfg = parse(mu='linear -1 1', levels=[0.5], x0='point 0.25', T=2, h=0.01, **{'lambda': 1})
		self.assertEqual(cfg.family, 'pdmp')
		self.assertEqual(cfg.mu, pdmp.Linear(-1.0, 1.0))
		self.assertEqual(cfg.mark, pdmp.NormalLaw(0.0, 1.0))
		self.assertEqual(cfg.x0, pdmp.PointLaw(0.25))
		self.assertEqual(cfg.h_ode, 0.01)
		proc = cfg.process()
		self.assertIsInstance(proc, pdmp.PdmpProcess)
		self.assertEqual(proc.spec.horizon, 2.0)
		exp = cfg.experiment()
		self.assertEqual((exp.step, exp.horizon, exp.levels), (0.01, 2.0, (0.5,)))
		d = cfg.asdict()
		self.assertEqual(d['mu'], 'linear -1.0 1.0')
		self.assertNotIn('atoms', d)

	def test_overrides(self):
		cfg = parse(**MINIMAL_PAR)
		new = cfg.with_overrides(output='elsewhere', seed=3, reps=500)
		self.assertEqual((new.output, new.seed, new.reps), ('elsewhere', 3, 500))
		self.assertEqual(cfg.with_overrides(), cfg)
		self.assertEqual(cfg.seed, 7)
		for kw in ({'reps': 10}, {'seed': -2}):
			with self.subTest(**kw):
				with self.assertRaises(config.ConfigError):
					cfg.with_overrides(**kw)

	def test_asdict(self):
		d = parse(**MINIMAL_PAR).asdict()
		self.assertEqual(json.loads(json.dumps(d)), d)
		self.assertEqual((d['lambda'], d['rho'], d['h']), (1.0, 0.5, 1e-3))
		self.assertEqual(d['atoms'], [[0.25, 1.0], [0.25, 2.0]])

	def test_load(self):
		with tempfile.TemporaryDirectory() as d:
			path = os.path.join(d, 'exp.json')
			with open(path, 'w') as f:
				json.dump({**MINIMAL_PAR, 'name': 'par'}, f)
			self.assertEqual(config.load_config(path).name, 'par')
			with self.assertRaises(OSError):
				config.load_config(os.path.join(d, 'missing.json'))
