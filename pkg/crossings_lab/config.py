#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


"""
Experiment configuration.

An experiment is a single JSON object; see :data:`KEYS` for the accepted keys.
Every key is validated before any computation, unknown and duplicate keys are rejected.
"""

import math
import json
import dataclasses

from . import numeric
from .process import make_grid, default_jumps
from .process.gaussian import SpectralModel
from .process.jumps import JumpDiffusion, KernelMPP
from . import pdmp
from . import montecarlo


KINDS = ('poisson_ar', 'cpp', 'kernel', 'none', 'pdmp')

KEYS = ('name', 'kind', 'atoms', 'variance', 'lambda', 'rho', 'alpha', 'kernel', 'mu', 'mark', 'x0', 'h_ode',
        'levels', 'T', 'h', 'reps', 'seed', 'output', 'tol', 'delta')
"""Accepted configuration keys."""

MAX_LEVEL = 5.0

# Γ(0) each model's closed forms are stated for; poisson_ar uses alpha² when alpha is given
CONVENTIONS = {'poisson_ar': 0.5, 'cpp': 1.0}


class ConfigError(Exception):
	"""Invalid configuration; names the offending field and, if known, the line."""
	def __init__(self, field, message, line=None):
		super().__init__(field, message, line)
		self.field = field
		self.line = line

	def __str__(self):
		field, msg, line = self.args
		loc = f' (line {line})' if line is not None else ''
		return f'config error in {field!r}{loc}: {msg}'


def _no_duplicates(pairs):
	d = {}
	for k, v in pairs:
		if k in d:
			raise ConfigError(k, 'duplicate key')
		d[k] = v
	return d


def _number(field, v):
	if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
		raise ConfigError(field, f'expected a finite number, got {v!r}')
	return float(v)


def _positive(field, v):
	v = _number(field, v)
	if not v > 0:
		raise ConfigError(field, f'must be positive, got {v!r}')
	return v


def _integer(field, v, minimum):
	if isinstance(v, bool) or not isinstance(v, (int, float)) or v != int(v) or v < minimum:
		raise ConfigError(field, f'expected an integer >= {minimum}, got {v!r}')
	return int(v)


def _string(field, v):
	if not isinstance(v, str):
		raise ConfigError(field, f'expected a string, got {v!r}')
	return v


def _words(field, v, head, n):
	w = _string(field, v).split()
	if not w or w[0] != head or len(w) != n + 1:
		raise ConfigError(field, f'expected "{head}" followed by {n} number(s), got {v!r}')
	try:
		return [float(x) for x in w[1:]]
	except ValueError:
		raise ConfigError(field, f'expected numbers in {v!r}') from None


def parse_drift(v, field='mu'):
	"""Parse ``"linear a b"`` into :class:`crossings_lab.pdmp.Linear`."""
	return pdmp.Linear(*_words(field, v, 'linear', 2))


def parse_law(v, field, *, point=True):
	"""Parse ``"normal mean sd"`` or, if `point`, ``"point v"``."""
	s = _string(field, v).split()
	if point and s and s[0] == 'point':
		return pdmp.PointLaw(*_words(field, v, 'point', 1))
	mean, sd = _words(field, v, 'normal', 2)
	if not sd > 0:
		raise ConfigError(field, f'standard deviation must be positive, got {sd!r}')
	return pdmp.NormalLaw(mean, sd)


@dataclasses.dataclass(frozen=True)
class Config:
	"""
	A validated experiment configuration.

	Use :func:`parse_config` to build one from a JSON document.
	"""
	name: str = 'experiment'
	kind: str = 'none'
	atoms: tuple = ()
	variance: float = None
	lam: float = None
	rho: float = None
	alpha: float = None
	kernel: str = None
	mu: object = None
	mark: object = pdmp.NormalLaw()
	x0: object = pdmp.NormalLaw()
	h_ode: float = None
	levels: tuple = ()
	T: float = 1.0
	h: float = None
	reps: int = 100_000
	seed: int = 0
	output: str = 'crossings-out'
	tol: float = 1e-10
	delta: float = 0.01

	@property
	def family(self):
		"""
		The model family whose closed forms apply.

		One of ``'poisson_ar'``, ``'cpp'``, ``'classical'``, or ``'pdmp'``.
		"""
		if self.kind == 'kernel':
			return {'empty': 'classical'}.get(self.kernel, self.kernel)
		return {'none': 'classical'}.get(self.kind, self.kind)

	def model(self):
		"""The :class:`crossings_lab.process.gaussian.SpectralModel` of the smooth part."""
		return SpectralModel.from_atoms(self.atoms, self.variance)

	def quadrature(self):
		return numeric.Quadrature(abs_tol=self.tol, rel_tol=self.tol)

	def pdmp_spec(self):
		return pdmp.PdmpSpec(self.mu, self.x0, self.lam, self.mark, self.h_ode, self.T)

	def process(self):
		"""Build the :class:`crossings_lab.process.Process` to simulate."""
		if self.kind == 'pdmp':
			return pdmp.PdmpProcess(self.pdmp_spec())
		cls = default_jumps(self.kind)
		if self.kind == 'poisson_ar':
			jumps = cls(self.lam, self.rho, 1 - self.variance)
		elif self.kind == 'cpp':
			jumps = cls(self.lam)
		elif self.kind == 'kernel':
			params = {'variance': 1 - self.variance} if self.family == 'poisson_ar' else {}
			jumps = cls(KernelMPP.builtin(self.kernel, lam=self.lam, rho=self.rho, **params))
		else:
			jumps = cls()
		return JumpDiffusion(self.model(), jumps)

	def experiment(self):
		"""Build the :class:`crossings_lab.montecarlo.ExperimentSpec`."""
		step = self.h_ode if self.kind == 'pdmp' else self.h
		return montecarlo.ExperimentSpec(self.process(), self.levels, self.T, step, self.reps, self.seed, self.delta)

	def with_overrides(self, *, output=None, seed=None, reps=None):
		"""
		Return a copy with command-line overrides applied.

		:raises ConfigError: if an override is invalid
		"""
		changes = {}
		if output is not None:
			changes['output'] = _string('output', output)
		if seed is not None:
			changes['seed'] = _integer('seed', seed, 0)
		if reps is not None:
			changes['reps'] = _integer('reps', reps, 100)
		return dataclasses.replace(self, **changes)

	def asdict(self):
		"""JSON-serializable form using the configuration keys."""
		d = {
			'name': self.name, 'kind': self.kind, 'levels': list(self.levels),
			'T': self.T, 'h': self.h, 'reps': self.reps, 'seed': self.seed,
			'output': self.output, 'tol': self.tol, 'delta': self.delta,
		}
		if self.kind != 'pdmp':
			d['atoms'] = [list(a) for a in self.atoms]
			d['variance'] = self.variance
		else:
			d.update({'mu': str(self.mu), 'mark': str(self.mark), 'x0': str(self.x0), 'h_ode': self.h_ode})
		for key, val in (('lambda', self.lam), ('rho', self.rho), ('alpha', self.alpha), ('kernel', self.kernel)):
			if val is not None:
				d[key] = val
		return d


def _infer_kind(doc):
	if 'mu' in doc:
		return 'pdmp'
	elif 'kernel' in doc:
		return 'kernel'
	elif 'rho' in doc:
		return 'poisson_ar'
	elif 'lambda' in doc:
		return 'cpp'
	return 'none'


def _check_keys(doc):
	for k in doc:
		if k not in KEYS:
			raise ConfigError(k, 'unknown key')


def parse_config(text):
	"""
	Parse and validate a JSON configuration document.

	:param text: the document
	:returns: :class:`Config` with defaults filled in
	:raises ConfigError: for malformed documents, unknown or duplicate keys, and invalid values
	"""
	try:
		doc = json.loads(text, object_pairs_hook=_no_duplicates)
	except json.JSONDecodeError as e:
		raise ConfigError('<document>', e.msg, e.lineno) from None
	if not isinstance(doc, dict):
		raise ConfigError('<document>', 'expected a JSON object')
	_check_keys(doc)

	kw = {}
	kw['name'] = _string('name', doc.get('name', 'experiment'))
	kind = _string('kind', doc.get('kind', _infer_kind(doc)))
	if kind not in KINDS:
		raise ConfigError('kind', f'expected one of {", ".join(KINDS)}, got {kind!r}')
	kw['kind'] = kind

	T = kw['T'] = _positive('T', doc.get('T', 1.0))
	h = kw['h'] = _positive('h', doc.get('h', 1e-3 * T))
	try:
		make_grid(T, h)
	except ValueError as e:
		raise ConfigError('h', str(e)) from None
	kw['reps'] = _integer('reps', doc.get('reps', 100_000), 100)
	kw['seed'] = _integer('seed', doc.get('seed', 0), 0)
	kw['output'] = _string('output', doc.get('output', 'crossings-out'))
	kw['tol'] = _positive('tol', doc.get('tol', 1e-10))
	kw['delta'] = _positive('delta', doc.get('delta', 0.01))

	levels = doc.get('levels')
	if not isinstance(levels, list) or not levels:
		raise ConfigError('levels', 'expected a nonempty list of numbers')
	levels = tuple(_number('levels', u) for u in levels)
	if any(abs(u) > MAX_LEVEL for u in levels):
		raise ConfigError('levels', f'levels must satisfy |u| <= {MAX_LEVEL:g}')
	kw['levels'] = levels

	if kind == 'kernel':
		kname = _string('kernel', doc.get('kernel'))
		if kname not in KernelMPP.BUILTINS:
			raise ConfigError('kernel', f'expected one of {", ".join(KernelMPP.BUILTINS)}, got {kname!r}')
		kw['kernel'] = kname
	elif 'kernel' in doc:
		raise ConfigError('kernel', f'not used by kind {kind!r}')
	family = kw.get('kernel', kind)

	if family in ('poisson_ar', 'cpp', 'pdmp'):
		if 'lambda' not in doc:
			raise ConfigError('lambda', f'required by {family!r}')
		lam = _number('lambda', doc['lambda'])
		if kind == 'pdmp' and lam < 0 or kind != 'pdmp' and not lam > 0:
			raise ConfigError('lambda', f'out of range: {lam!r}')
		kw['lam'] = lam
	elif 'lambda' in doc:
		raise ConfigError('lambda', f'not used by {family!r}')
	if family == 'poisson_ar':
		if 'rho' not in doc:
			raise ConfigError('rho', 'required by \'poisson_ar\'')
		rho = _number('rho', doc['rho'])
		if not -1 < rho < 1:
			raise ConfigError('rho', f'must satisfy |rho| < 1, got {rho!r}')
		kw['rho'] = rho
	elif 'rho' in doc:
		raise ConfigError('rho', f'not used by {family!r}')
	if 'alpha' in doc:
		if family != 'poisson_ar':
			raise ConfigError('alpha', f'not used by {family!r}')
		alpha = _number('alpha', doc['alpha'])
		if not 0 < alpha < 1:
			raise ConfigError('alpha', f'must lie in (0, 1), got {alpha!r}')
		kw['alpha'] = alpha

	if kind == 'pdmp':
		for k in ('atoms', 'variance'):
			if k in doc:
				raise ConfigError(k, 'not used by \'pdmp\'')
		if 'mu' not in doc:
			raise ConfigError('mu', 'required by \'pdmp\'')
		kw['mu'] = parse_drift(doc['mu'])
		kw['mark'] = parse_law(doc.get('mark', 'normal 0 1'), 'mark', point=False)
		kw['x0'] = parse_law(doc.get('x0', 'normal 0 1'), 'x0')
		h_ode = kw['h_ode'] = _positive('h_ode', doc.get('h_ode', h))
		try:
			make_grid(T, h_ode)
		except ValueError as e:
			raise ConfigError('h_ode', str(e)) from None
		for u in levels:
			if kw['mu'](u) == 0:
				raise ConfigError('levels', f'drift vanishes at level {u!r}')
	else:
		for k in ('mu', 'mark', 'x0', 'h_ode'):
			if k in doc:
				raise ConfigError(k, f'only used by \'pdmp\'')
		atoms = doc.get('atoms')
		if not isinstance(atoms, list) or not atoms:
			raise ConfigError('atoms', 'expected a nonempty list of [weight, frequency] pairs')
		for a in atoms:
			if not isinstance(a, list) or len(a) != 2:
				raise ConfigError('atoms', f'expected a [weight, frequency] pair, got {a!r}')
		kw['atoms'] = tuple((_number('atoms', w), _number('atoms', f)) for w, f in atoms)
		conv = CONVENTIONS.get(family)
		if 'alpha' in kw:
			conv = kw['alpha'] ** 2
		var = doc.get('variance', conv)
		if var is not None:
			var = _positive('variance', var)
			if conv is not None and abs(var - conv) > 1e-12:
				raise ConfigError('variance', f'{family!r} requires variance {conv!r}')
		kw['variance'] = var
		try:
			SpectralModel.from_atoms(kw['atoms'], var)
		except ValueError as e:
			raise ConfigError('atoms', str(e)) from None
	return Config(**kw)


def load_config(path):
	"""Read and parse the configuration file at `path`."""
	with open(path) as f:
		return parse_config(f.read())
