#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


"""
Generic interface to simulated processes.

A process turns a :class:`numpy.random.SeedSequence` into a :class:`Realization`:
a sampled :class:`crossings_lab.crossings.HybridPath` together with an optional
compensator of its discontinuous crossings.
"""

import abc
import math
from collections import namedtuple

import numpy as np


class SimulationError(Exception):
	"""A replication could not be produced."""
	def __str__(self):
		if len(self.args) == 2:
			ctx, err = self.args
			return f'{ctx}: {err}'
		return super().__str__()


class ExplosionError(SimulationError):
	"""Too many jumps in a single replication."""


class Realization(namedtuple('Realization', ['path', 'disc_rate'], defaults=(None,))):
	"""
	One simulated replication.

	`path` is the sampled :class:`crossings_lab.crossings.HybridPath`.
	`disc_rate`, if not :const:`None`, is a callable ``disc_rate(u, direction)`` returning the
	compensator integral of discontinuous crossings through `u` conditional on the sampled background.
	"""


def make_grid(horizon, step):
	"""
	Return the uniform grid ``0, step, ..., horizon``.

	:raises ValueError: if the grid is empty or `horizon` is not an integral multiple of `step`
	"""
	if not horizon > 0 or not step > 0:
		raise ValueError(f'empty grid: horizon {horizon}, step {step}')
	n = round(horizon / step)
	if n < 1:
		raise ValueError(f'empty grid: horizon {horizon}, step {step}')
	if not math.isclose(n * step, horizon, rel_tol=1e-9):
		raise ValueError(f'horizon {horizon} is not an integral multiple of step {step}')
	return np.linspace(0.0, horizon, n + 1)


def streams(seeds, n):
	"""
	Return `n` independent generators derived from `seeds` without altering it.

	Child ``k`` has the spawn key of `seeds` extended by ``k``, as :meth:`numpy.random.SeedSequence.spawn` would produce.
	"""
	return [np.random.default_rng(np.random.SeedSequence(seeds.entropy, spawn_key=seeds.spawn_key + (k,)))
	        for k in range(n)]


class Process(abc.ABC):
	"""Abstract base class for simulated processes."""
	_args = ()

	def __repr__(self):
		args = ', '.join(repr(getattr(self, a)) for a in self._args)
		return f'{type(self).__name__}({args})'

	@abc.abstractmethod
	def simulate(self, seeds, horizon, step):
		"""
		Simulate one replication.

		:param seeds: the replication's :class:`numpy.random.SeedSequence`
		:param horizon: time horizon T
		:param step: grid step
		:returns: a :class:`Realization`
		:raises SimulationError: if the replication fails
		"""

	def simulate_batch(self, seeds, horizon, step):
		"""
		Simulate one replication per element of `seeds`.

		Failed replications are returned as their :class:`SimulationError` instead of a :class:`Realization`.
		"""
		out = []
		for s in seeds:
			try:
				out.append(self.simulate(s, horizon, step))
			except SimulationError as e:
				out.append(e)
		return out

	def initial_exceedance(self, u):
		"""Return ``P(X(0) > u)`` if known in closed form, else :const:`None`."""
		return None


from . import gaussian
from . import jumps


def default_jumps(kind):
	"""
	Get the jump sampler class used for `kind`.

	:param kind: jump kind; valid values are ``'poisson_ar'``, ``'cpp'``, ``'kernel'``, and ``'none'``
	:returns: appropriate jump sampler class
	:raises ValueError: if `kind` is unknown
	"""
	if kind == 'poisson_ar':
		return jumps.PoissonAR
	elif kind == 'cpp':
		return jumps.CompoundPoisson
	elif kind == 'kernel':
		return jumps.KernelJumps
	elif kind == 'none':
		return jumps.NoJumps
	else:
		raise ValueError('Unknown jump kind', kind)
