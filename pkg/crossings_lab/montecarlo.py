#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


"""
Replication harness.

Replication ``i`` of an experiment with master seed ``s`` is driven by
``SeedSequence(s, spawn_key=(i,))``. Replications are processed in chunks of fixed size
and results are concatenated in index order, so estimates do not depend on the number of workers.
"""

import math
import asyncio
import logging
import functools
import dataclasses
import concurrent.futures
from collections import namedtuple

import numpy as np

from .process import SimulationError, make_grid
from .crossings import count_crossings_levels, path_max, occupation_time


log = logging.getLogger(__name__)

FIELDS = (
	'cont_up', 'cont_down', 'disc_up', 'disc_down',
	'up_fact2', 'max_exceed',
	'start_above', 'start_below', 'start_below_up', 'up_start_above', 'end_below',
	'compensator_up', 'compensator_down', 'occupation',
)
"""Per-replication, per-level quantities recorded by the harness."""

CHUNK = 500
MAX_FAILURE_FRACTION = 1e-3


class MonteCarloError(Exception):
	"""An experiment could not be completed."""


@dataclasses.dataclass(frozen=True)
class MCEstimate:
	"""Monte Carlo mean with its standard error."""
	mean: float
	se: float
	n: int
	seed: int = None

	@classmethod
	def from_samples(cls, samples, seed=None):
		"""
		Estimate the mean of `samples` with standard error ``sd/√n``.

		:raises ValueError: if fewer than two samples are given
		"""
		x = np.asarray(samples, dtype=float).ravel()
		if x.size < 2:
			raise ValueError(f'need at least two samples, got {x.size}')
		return cls(float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size)), int(x.size), seed)

	def agrees(self, value, se=0.0, k=3.0):
		"""Return whether `value` (with standard error `se`) lies within `k` combined standard errors."""
		return abs(self.mean - value) <= k * math.hypot(self.se, se)

	def __str__(self):
		return f'{self.mean:.6g} ± {self.se:.2g}'


@dataclasses.dataclass(frozen=True)
class ExperimentSpec:
	"""
	A Monte Carlo experiment.

	:param process: :class:`crossings_lab.process.Process` to simulate
	:param levels: crossing levels
	:param horizon: time horizon T
	:param step: grid step, defaults to ``1e-3·horizon``
	:param reps: number of replications, at least 100
	:param seed: master seed
	:param delta: half-width of the occupation window
	"""
	process: object
	levels: tuple
	horizon: float = 1.0
	step: float = None
	reps: int = 100_000
	seed: int = 0
	delta: float = 0.01

	def __post_init__(self):
		levels = tuple(float(u) for u in self.levels)
		object.__setattr__(self, 'levels', levels)
		if not levels or not all(math.isfinite(u) for u in levels):
			raise ValueError('levels must be a nonempty list of finite numbers')
		if self.step is None:
			object.__setattr__(self, 'step', 1e-3 * self.horizon)
		make_grid(self.horizon, self.step)
		if int(self.reps) != self.reps or self.reps < 100:
			raise ValueError(f'reps must be an integer >= 100, got {self.reps}')
		if int(self.seed) != self.seed or self.seed < 0:
			raise ValueError(f'seed must be a nonnegative integer, got {self.seed}')
		if not self.delta > 0:
			raise ValueError(f'delta must be positive, got {self.delta}')


def replication_seeds(seed, start, stop):
	"""Return the seed sequences of replications ``start, ..., stop − 1``."""
	return [np.random.SeedSequence(seed, spawn_key=(i,)) for i in range(start, stop)]


def replication_stats(real, levels, delta):
	"""Compute every quantity of :data:`FIELDS` for one :class:`crossings_lab.process.Realization`."""
	path = real.path
	levels = np.asarray(levels, dtype=float)
	c = count_crossings_levels(path, levels)
	up = c[0] + c[2]
	x0, xt = path.initial, path.final
	if real.disc_rate is not None:
		comp_up = [real.disc_rate(u, 'up') for u in levels]
		comp_down = [real.disc_rate(u, 'down') for u in levels]
	else:
		comp_up = comp_down = np.full(levels.size, math.nan)
	occ = [occupation_time(path, u, delta) / (2 * delta) for u in levels]
	return np.vstack((
		c,
		up * (up - 1),
		path_max(path) > levels,
		x0 > levels,
		x0 < levels,
		(x0 < levels) & (up >= 1),
		(x0 > levels) & (up >= 1),
		xt < levels,
		comp_up,
		comp_down,
		occ,
	)).astype(float)


def _run_chunk(process, horizon, step, levels, delta, seed, start, stop):
	data = np.full((stop - start, len(FIELDS), len(levels)), math.nan)
	failures = []
	reals = process.simulate_batch(replication_seeds(seed, start, stop), horizon, step)
	for k, r in enumerate(reals):
		if isinstance(r, SimulationError):
			failures.append((start + k, str(r)))
			continue
		data[k] = replication_stats(r, levels, delta)
	return data, failures


class ReplicationResults:
	"""
	Per-replication statistics of an experiment.

	:param levels: the crossing levels
	:param seed: the master seed
	:param data: array of shape ``(reps, len(FIELDS), len(levels))``
	:param failures: list of ``(index, message)`` for failed replications, whose rows are excluded
	"""
	def __init__(self, levels, seed, data, failures=()):
		self.levels = tuple(levels)
		self.seed = seed
		self.data = data
		self.failures = list(failures)
		ok = np.ones(data.shape[0], dtype=bool)
		ok[np.array([i for i, _ in self.failures], dtype=int)] = False
		self._ok = ok

	@property
	def reps(self):
		"""Number of successful replications."""
		return int(self._ok.sum())

	def level_index(self, u):
		"""
		Return the position of `u` in :attr:`levels`.

		:raises ValueError: if `u` is not one of the levels
		"""
		try:
			return self.levels.index(float(u))
		except ValueError:
			raise ValueError(f'level {u} was not simulated') from None

	def samples(self, field, u):
		"""
		Per-replication values of `field` at level `u`.

		Besides :data:`FIELDS`, ``'up'`` and ``'down'`` give total up- and down-crossings.
		"""
		k = self.level_index(u)
		if field == 'up':
			return self.samples('cont_up', u) + self.samples('disc_up', u)
		elif field == 'down':
			return self.samples('cont_down', u) + self.samples('disc_down', u)
		return self.data[self._ok, FIELDS.index(field), k]

	def estimate(self, field, u):
		"""Return the :class:`MCEstimate` of `field` at level `u`."""
		return MCEstimate.from_samples(self.samples(field, u), self.seed)

	def estimates(self):
		"""Return a mapping from field to the list of per-level :class:`MCEstimate`."""
		return {f: [self.estimate(f, u) for u in self.levels] for f in FIELDS}


def _collect(parts, reps, levels, seed):
	data = np.concatenate([p[0] for p in parts])
	failures = [f for p in parts for f in p[1]]
	if len(failures) > MAX_FAILURE_FRACTION * reps:
		raise MonteCarloError(f'{len(failures)} of {reps} replications failed, first: {failures[0][1]}')
	if failures:
		log.warning('%d of %d replications failed and were excluded', len(failures), reps)
	return ReplicationResults(levels, seed, data, failures)


def _chunks(reps, chunk):
	return [(s, min(s + chunk, reps)) for s in range(0, reps, chunk)]


def simulate_stats(process, levels, horizon, step, reps, seed, delta=0.01, *, chunk=CHUNK):
	"""
	Run `reps` replications of `process` in the calling thread.

	:returns: :class:`ReplicationResults`
	:raises MonteCarloError: if more than 0.1% of replications failed
	"""
	levels = tuple(float(u) for u in levels)
	parts = [_run_chunk(process, horizon, step, levels, delta, seed, a, b) for a, b in _chunks(reps, chunk)]
	return _collect(parts, reps, levels, seed)


async def replicate(spec, workers=1, *, chunk=CHUNK):
	"""
	Run the experiment `spec`, using `workers` processes.

	:param spec: :class:`ExperimentSpec`
	:param workers: number of worker processes; with 1 the work runs in the default executor
	:returns: :class:`ReplicationResults`
	:raises MonteCarloError: if more than 0.1% of replications failed
	"""
	loop = asyncio.get_running_loop()
	log.info('running %d replications of %r on %d worker(s)', spec.reps, spec.process, workers)
	jobs = [functools.partial(_run_chunk, spec.process, spec.horizon, spec.step, spec.levels,
	                          spec.delta, spec.seed, a, b)
	        for a, b in _chunks(spec.reps, chunk)]
	if workers > 1:
		with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as ex:
			parts = await asyncio.gather(*(loop.run_in_executor(ex, j) for j in jobs))
	else:
		parts = []
		for j in jobs:
			parts.append(await loop.run_in_executor(None, j))
	log.debug('collected %d chunks', len(parts))
	return _collect(parts, spec.reps, spec.levels, spec.seed)


def run_replications(spec, workers=1):
	"""Synchronous wrapper around :func:`replicate`."""
	return asyncio.run(replicate(spec, workers))


def estimate_factorial_moment2(counts, seed=None):
	"""Return the :class:`MCEstimate` of ``E U(U − 1)`` from per-replication counts `counts`."""
	u = np.asarray(counts, dtype=float)
	return MCEstimate.from_samples(u * (u - 1), seed)


class TailEstimate(namedtuple('TailEstimate', ['total', 'start_above', 'start_below_up', 'mismatches'])):
	"""
	Empirical ``P(M(T) > u)`` and its decomposition into ``P(X(0) > u)`` and ``P(X(0) < u, U_u >= 1)``.

	`mismatches` counts replications where the two events do not add up to the total,
	which can only happen when a sampled value sits exactly at `u`.
	"""


def estimate_max_tail(results, u):
	"""Estimate ``P(M(T) > u)`` with its disjoint decomposition from :class:`ReplicationResults`."""
	tot = results.samples('max_exceed', u)
	above = results.samples('start_above', u)
	below_up = results.samples('start_below_up', u)
	bad = int(np.count_nonzero(tot != above + below_up))
	if bad:
		log.warning('maximum decomposition fails on %d replications at level %g', bad, u)
	return TailEstimate(MCEstimate.from_samples(tot, results.seed),
	                    MCEstimate.from_samples(above, results.seed),
	                    MCEstimate.from_samples(below_up, results.seed),
	                    bad)


class TailBounds(namedtuple('TailBounds', ['lower', 'upper'])):
	"""Lower and upper bounds on ``P(M(T) > u)``."""


def assemble_tail_bounds(upper, eu, eu2, p_joint, p_start):
	"""
	Combine moment estimates into bounds on ``P(M(T) > u)``.

	The lower bound is ``P(X(0) > u) + E U_u − ½ E U_u(U_u − 1) − P(U_u >= 1, X(0) > u)``, unclipped.
	The upper bound is `upper` if given, else ``P(X(0) > u) + E U_u``.

	:param upper: analytic upper bound, or :const:`None`
	:param eu: E U_u
	:param eu2: E U_u(U_u − 1)
	:param p_joint: P(U_u >= 1, X(0) > u)
	:param p_start: P(X(0) > u)
	:returns: :class:`TailBounds`
	"""
	lower = p_start + eu - 0.5 * eu2 - p_joint
	return TailBounds(lower, p_start + eu if upper is None else upper)


def lower_bound_estimate(results, u):
	"""Per-replication estimate of the lower tail bound of :func:`assemble_tail_bounds`, with standard error."""
	up = results.samples('up', u)
	x = results.samples('start_above', u) + up - 0.5 * up * (up - 1) - results.samples('up_start_above', u)
	return MCEstimate.from_samples(x, results.seed)
