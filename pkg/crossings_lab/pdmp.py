#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


"""
Piecewise deterministic Markov processes.

Between jumps the state follows the flow of ``ẋ = μ(x)``; jumps arrive at constant rate λ
and add an increment drawn from the mark law. The flow is integrated with the classical
fourth-order Runge-Kutta scheme on a fixed grid, and jump times are exact breakpoints.
"""

import math
import logging
import dataclasses
from collections import namedtuple

import numpy as np
from scipy import special, integrate

from .crossings import HybridPath
from .process import Process, Realization, SimulationError, make_grid, streams
from .process.jumps import sample_poisson_times, normal_mark_disc_rate
from . import montecarlo


log = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Linear:
	"""Drift ``μ(x) = a·x + b``."""
	a: float
	b: float

	def __call__(self, x):
		return self.a * x + self.b

	def __str__(self):
		return f'linear {self.a!r} {self.b!r}'


@dataclasses.dataclass(frozen=True)
class NormalLaw:
	"""The law N(mean, sd²), ``sd > 0``."""
	mean: float = 0.0
	sd: float = 1.0

	def __post_init__(self):
		if not self.sd > 0:
			raise ValueError(f'standard deviation must be positive, got {self.sd}')

	def sample(self, rng, size=None):
		return rng.normal(self.mean, self.sd, size)

	def exceedance(self, u):
		"""``P(ξ > u)``."""
		return float(special.ndtr((self.mean - u) / self.sd))

	def __str__(self):
		return f'normal {self.mean!r} {self.sd!r}'


@dataclasses.dataclass(frozen=True)
class PointLaw:
	"""Point mass at `value`."""
	value: float

	def sample(self, rng, size=None):
		return self.value if size is None else np.full(size, self.value, dtype=float)

	def exceedance(self, u):
		return float(self.value > u)

	def __str__(self):
		return f'point {self.value!r}'


@dataclasses.dataclass(frozen=True)
class PdmpSpec:
	"""
	A piecewise deterministic Markov process.

	:param drift: vectorized drift μ
	:param x0: law of X(0), with a ``sample(rng, size)`` method
	:param lam: constant jump intensity, ``>= 0``
	:param mark: law of the jump increments
	:param h_ode: integration step
	:param horizon: time horizon T, an integral multiple of `h_ode`
	"""
	drift: object
	x0: object = NormalLaw()
	lam: float = 0.0
	mark: object = NormalLaw()
	h_ode: float = 1e-3
	horizon: float = 1.0

	def __post_init__(self):
		if not self.lam >= 0:
			raise ValueError(f'jump intensity must be nonnegative, got {self.lam}')
		if not self.h_ode > 0:
			raise ValueError(f'ODE step must be positive, got {self.h_ode}')
		make_grid(self.horizon, self.h_ode)


def _rk4(f, x, h):
	k1 = f(x)
	k2 = f(x + 0.5 * h * k1)
	k3 = f(x + 0.5 * h * k2)
	k4 = f(x + h * k3)
	return x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _draw(spec, rng):
	x0 = float(spec.x0.sample(rng))
	if spec.lam > 0:
		taus = sample_poisson_times(spec.lam, spec.horizon, rng)
	else:
		taus = np.empty(0)
	return x0, taus, np.asarray(spec.mark.sample(rng, taus.size), dtype=float)


def simulate_pdmp_batch(spec, rngs):
	"""
	Simulate one replication of `spec` per generator in `rngs`.

	All replications are integrated together on the grid; a replication with jumps inside a grid
	interval is advanced separately through that interval, stopping at every jump time to record
	the left value and apply the mark.

	:returns: list of :class:`crossings_lab.crossings.HybridPath`,
		with a :class:`crossings_lab.process.SimulationError` in place of a replication whose state became non-finite
	"""
	f = spec.drift
	t = make_grid(spec.horizon, spec.h_ode)
	h = t[1] - t[0]
	draws = [_draw(spec, r) for r in rngs]
	nrep = len(draws)
	x = np.array([d[0] for d in draws], dtype=float)
	grid = np.empty((nrep, t.size))
	grid[:, 0] = x
	left = [np.empty(d[1].size) for d in draws]
	right = [np.empty(d[1].size) for d in draws]

	events = {}
	for r, (_, taus, _) in enumerate(draws):
		for j, k in enumerate(np.searchsorted(t, taus, side='left') - 1):
			events.setdefault(int(k), []).append((r, j))

	with np.errstate(all='ignore'):
		for k in range(t.size - 1):
			nxt = _rk4(f, x, h)
			pending = events.get(k, ())
			for r in {r for r, _ in pending}:
				s, xr = t[k], x[r]
				for rr, j in pending:
					if rr != r:
						continue
					tau = draws[r][1][j]
					if tau > s:
						xr = _rk4(f, xr, tau - s)
					left[r][j] = xr
					xr = xr + draws[r][2][j]
					right[r][j] = xr
					s = tau
				if t[k + 1] > s:
					xr = _rk4(f, xr, t[k + 1] - s)
				nxt[r] = xr
			grid[:, k + 1] = nxt
			x = nxt

	out = []
	for r, (_, taus, _) in enumerate(draws):
		if not (np.all(np.isfinite(grid[r])) and np.all(np.isfinite(left[r])) and np.all(np.isfinite(right[r]))):
			out.append(SimulationError('PDMP integration', 'non-finite state'))
			continue
		out.append(HybridPath(t, grid[r], taus, left[r], right[r], spec.horizon))
	return out


def simulate_pdmp(spec, rng):
	"""
	Simulate one replication of `spec`.

	:returns: :class:`crossings_lab.crossings.HybridPath`
	:raises crossings_lab.process.SimulationError: if the state becomes non-finite
	"""
	res = simulate_pdmp_batch(spec, [rng])[0]
	if isinstance(res, SimulationError):
		raise res
	return res


class PdmpProcess(Process):
	"""
	:class:`crossings_lab.process.Process` wrapper around a :class:`PdmpSpec`.

	Paths are sampled on the integration grid of the spec; the experiment's horizon must match it.
	"""
	_args = ('spec',)

	def __init__(self, spec):
		self.spec = spec

	def _rngs(self, seeds, horizon):
		if not math.isclose(horizon, self.spec.horizon):
			raise ValueError(f'horizon {horizon} differs from the PDMP horizon {self.spec.horizon}')
		return [streams(s, 1)[0] for s in seeds]

	def _realize(self, path):
		spec = self.spec
		if spec.lam == 0:
			def rate(u, direction='up'):
				return 0.0
		elif isinstance(spec.mark, NormalLaw):
			def rate(u, direction='up'):
				g = normal_mark_disc_rate(path.merged_values, 1.0, u, spec.lam, spec.mark.mean, spec.mark.sd, direction)
				return float(integrate.trapezoid(g, path.merged_times))
		else:
			rate = None
		return Realization(path, rate)

	def simulate(self, seeds, horizon, step):
		res = self.simulate_batch([seeds], horizon, step)[0]
		if isinstance(res, SimulationError):
			raise res
		return res

	def simulate_batch(self, seeds, horizon, step):
		paths = simulate_pdmp_batch(self.spec, self._rngs(seeds, horizon))
		return [p if isinstance(p, SimulationError) else self._realize(p) for p in paths]

	def initial_exceedance(self, u):
		return self.spec.x0.exceedance(u)


def bl_mean_continuous(mu_u, density_integral):
	"""
	Mean continuous crossings ``|μ(u)|·∫₀ᵀ p_{X(t)}(u) dt``.

	:raises ValueError: if ``μ(u) = 0`` or `density_integral` is negative
	"""
	if mu_u == 0:
		raise ValueError('drift vanishes at the level; the crossing formula does not apply')
	if density_integral < 0:
		raise ValueError(f'density integral must be nonnegative, got {density_integral}')
	return abs(mu_u) * density_integral


def _stats(spec, u, reps, seed, delta=0.01):
	return montecarlo.simulate_stats(PdmpProcess(spec), (u,), spec.horizon, spec.h_ode, reps, seed, delta)


def occupation_density_integral(spec, u, delta=0.01, reps=100_000, seed=0):
	"""
	Estimate ``∫₀ᵀ p_{X(t)}(u) dt`` by the mean occupation time of ``(u − δ, u + δ)`` divided by 2δ.

	:returns: :class:`crossings_lab.montecarlo.MCEstimate`
	"""
	if not delta > 0:
		raise ValueError(f'delta must be positive, got {delta}')
	return _stats(spec, u, reps, seed, delta).estimate('occupation', u)


class NetCrossingCheck(namedtuple('NetCrossingCheck', ['lhs', 'rhs', 'se'])):
	"""
	Both sides of ``sgn μ(u)·(E D^d_u − E U^d_u) = E N^c_u + sgn μ(u)·(P(X(T) < u) − P(X(0) < u))``.

	For ``μ(u) > 0`` the left side is the net number of downward discontinuous crossings.

	`se` is the standard error of the per-replication difference of the two sides.
	"""
	def agrees(self, k=3.0):
		return abs(self.lhs.mean - self.rhs.mean) <= k * self.se + 1e-12


def net_crossing_terms(results, u, mu_u):
	"""
	Per-replication sides of the net discontinuous crossing identity.

	:returns: ``(lhs, rhs)`` arrays
	:raises ValueError: if ``μ(u) = 0``
	"""
	if mu_u == 0:
		raise ValueError('drift vanishes at the level; the crossing identity does not apply')
	sgn = math.copysign(1.0, mu_u)
	lhs = sgn * (results.samples('disc_down', u) - results.samples('disc_up', u))
	cont = results.samples('cont_up', u) + results.samples('cont_down', u)
	rhs = cont + sgn * (results.samples('end_below', u) - results.samples('start_below', u))
	return lhs, rhs


def net_crossing_check(results, u, mu_u):
	"""Evaluate :class:`NetCrossingCheck` on existing :class:`crossings_lab.montecarlo.ReplicationResults`."""
	lhs, rhs = net_crossing_terms(results, u, mu_u)
	diff = montecarlo.MCEstimate.from_samples(lhs - rhs)
	return NetCrossingCheck(montecarlo.MCEstimate.from_samples(lhs, results.seed),
	                        montecarlo.MCEstimate.from_samples(rhs, results.seed),
	                        diff.se)


def net_jump_crossing_check(spec, u, reps=100_000, seed=0):
	"""
	Estimate both sides of the net discontinuous crossing identity from the same replications.

	:returns: :class:`NetCrossingCheck`
	:raises ValueError: if ``μ(u) = 0``
	"""
	mu_u = float(spec.drift(u))
	if mu_u == 0:
		raise ValueError('drift vanishes at the level; the crossing identity does not apply')
	results = _stats(spec, u, reps, seed)
	check_direction(results, u, mu_u)
	return net_crossing_check(results, u, mu_u)


def check_direction(results, u, mu_u):
	"""
	Check that every continuous crossing of `u` goes in the direction of ``μ(u)``.

	:raises crossings_lab.process.SimulationError: on a crossing against the drift
	"""
	against = results.samples('cont_down' if mu_u > 0 else 'cont_up', u)
	bad = int(np.count_nonzero(against))
	if bad:
		raise SimulationError('direction check', f'{bad} replications cross level {u:g} against the drift')
