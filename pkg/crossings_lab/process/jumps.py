#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


"""
Jump processes and smooth-plus-jump processes.

Jump paths are piecewise constant and right-continuous; a :class:`JumpPath` stores post-jump values,
left limits are the preceding value.
"""

import math
import logging
import dataclasses
from collections import namedtuple

import numpy as np
from scipy import special, integrate

from . import Process, Realization, SimulationError, ExplosionError, make_grid, streams
from ..crossings import HybridPath


log = logging.getLogger(__name__)

MAX_JUMPS = 10**6


@dataclasses.dataclass(frozen=True, eq=False)
class JumpPath:
	"""
	Piecewise constant, right-continuous path on ``[0, horizon]``.

	:param times: jump times, strictly increasing, in ``(0, horizon]``
	:param values: values just after each jump
	:param initial: value on ``[0, times[0])``
	:param horizon: time horizon T
	"""
	times: np.ndarray
	values: np.ndarray
	initial: float
	horizon: float

	def __post_init__(self):
		times = np.asarray(self.times, dtype=float)
		values = np.asarray(self.values, dtype=float)
		object.__setattr__(self, 'times', times)
		object.__setattr__(self, 'values', values)
		if times.shape != values.shape or times.ndim != 1:
			raise ValueError('jump times and values must be matching 1-D sequences')
		if times.size and (times[0] <= 0 or times[-1] > self.horizon or np.any(np.diff(times) <= 0)):
			raise ValueError('jump times must be strictly increasing in (0, horizon]')

	@property
	def count(self):
		"""Number of jumps ν_T."""
		return self.times.size

	@property
	def _levels(self):
		return np.concatenate(([self.initial], self.values))

	def __call__(self, t):
		"""Return J(t)."""
		return self._levels[np.searchsorted(self.times, t, side='right')]

	def left_limit(self, t):
		"""Return J(t⁻)."""
		return self._levels[np.searchsorted(self.times, t, side='left')]

	def left_values(self):
		"""Return J(τ_n⁻) for every jump time τ_n."""
		return self._levels[:-1]


def sample_poisson_times(lam, horizon, rng):
	"""
	Sample the jump times of a Poisson process with intensity `lam` on ``(0, horizon]``.

	:raises ValueError: if `lam` or `horizon` is not positive
	"""
	if not lam > 0:
		raise ValueError(f'intensity must be positive, got {lam}')
	if not horizon > 0:
		raise ValueError(f'horizon must be positive, got {horizon}')
	m = lam * horizon
	batch = int(m + 5 * math.sqrt(m) + 10)
	t = np.cumsum(rng.exponential(1 / lam, batch))
	while t[-1] <= horizon:
		t = np.concatenate((t, t[-1] + np.cumsum(rng.exponential(1 / lam, batch))))
	return t[:np.searchsorted(t, horizon, side='right')]


def sample_poisson_ar(lam, rho, horizon, rng, variance=0.5):
	"""
	Sample a Poisson-autoregressive path ``J(t) = A_{ν_t}``.

	``A_0 = ξ_0`` and ``A_n = ρ A_{n−1} + √(1−ρ²) ξ_n`` with ξ_n i.i.d. N(0, `variance`),
	so every J(t) is N(0, `variance`) and ``Cov(J(s), J(s + τ)) = variance·e^{−λ(1−ρ)τ}``.

	:raises ValueError: if ``|rho| >= 1`` or `variance` is not positive
	"""
	if not -1 < rho < 1:
		raise ValueError(f'autoregression coefficient must satisfy |rho| < 1, got {rho}')
	if not variance > 0:
		raise ValueError(f'variance must be positive, got {variance}')
	times = sample_poisson_times(lam, horizon, rng)
	xi = rng.normal(0.0, math.sqrt(variance), times.size + 1)
	c = math.sqrt(1 - rho * rho)
	a = np.empty_like(xi)
	a[0] = xi[0]
	for n in range(1, a.size):
		a[n] = rho * a[n - 1] + c * xi[n]
	return JumpPath(times, a[1:], float(a[0]), horizon)


def sample_cpp(lam, horizon, rng):
	"""Sample a compound Poisson path with N(0, 1) marks and ``J(0) = 0``."""
	times = sample_poisson_times(lam, horizon, rng)
	return JumpPath(times, np.cumsum(rng.standard_normal(times.size)), 0.0, horizon)


class History(namedtuple('History', ['times', 'values'])):
	"""Jump history: ``times[0] = 0`` and ``values[0]`` the initial mark, followed by every jump so far."""


@dataclasses.dataclass(frozen=True)
class ExponentialGaps:
	"""Inter-arrival kernel with i.i.d. exponential(`lam`) gaps."""
	lam: float

	def __call__(self, history, rng):
		return rng.exponential(1 / self.lam)


@dataclasses.dataclass(frozen=True)
class NoArrivals:
	"""Inter-arrival kernel without mass on finite times."""
	lam = 0.0

	def __call__(self, history, rng):
		return math.inf


@dataclasses.dataclass(frozen=True)
class LinearNormalMarks:
	"""Mark kernel: the increment after value x is N(coef·x, sd²)."""
	coef: float
	sd: float

	def __call__(self, history, rng):
		return rng.normal(self.coef * history.values[-1], self.sd)


@dataclasses.dataclass(frozen=True)
class NormalInit:
	"""Initial mark N(mean, sd²); ``sd = 0`` gives a point mass."""
	mean: float = 0.0
	sd: float = 0.0

	def __call__(self, rng):
		return rng.normal(self.mean, self.sd) if self.sd > 0 else self.mean


@dataclasses.dataclass(frozen=True)
class KernelMPP:
	"""
	Marked point process defined by kernels.

	:param initial: callable ``initial(rng)`` drawing the initial mark ξ_0
	:param interarrival: callable ``interarrival(history, rng)`` drawing the next gap
	:param mark: callable ``mark(history, rng)`` drawing the next increment
	"""
	initial: object
	interarrival: object
	mark: object

	BUILTINS = ('cpp', 'poisson_ar', 'empty')

	@classmethod
	def cpp(cls, lam):
		"""Kernels of a compound Poisson process with N(0, 1) marks."""
		return cls(NormalInit(), ExponentialGaps(lam), LinearNormalMarks(0.0, 1.0))

	@classmethod
	def poisson_ar(cls, lam, rho, variance=0.5):
		"""Kernels of the Poisson-autoregressive process whose values are N(0, `variance`)."""
		if not -1 < rho < 1:
			raise ValueError(f'autoregression coefficient must satisfy |rho| < 1, got {rho}')
		if not variance > 0:
			raise ValueError(f'variance must be positive, got {variance}')
		return cls(NormalInit(0.0, math.sqrt(variance)), ExponentialGaps(lam),
		           LinearNormalMarks(rho - 1, math.sqrt((1 - rho * rho) * variance)))

	@classmethod
	def empty(cls):
		"""Kernels that never jump."""
		return cls(NormalInit(), NoArrivals(), LinearNormalMarks(0.0, 1.0))

	@classmethod
	def builtin(cls, name, **params):
		"""
		Return the built-in kernel family `name` with parameters `params`.

		:raises ValueError: if `name` is unknown
		"""
		if name == 'cpp':
			return cls.cpp(params['lam'])
		elif name == 'poisson_ar':
			return cls.poisson_ar(params['lam'], params['rho'], params.get('variance', 0.5))
		elif name == 'empty':
			return cls.empty()
		else:
			raise ValueError('Unknown kernel', name)


def sample_kernel_mpp(k, horizon, rng, *, max_jumps=MAX_JUMPS):
	"""
	Sample a :class:`KernelMPP` sequentially on ``[0, horizon]``.

	Draws ξ_0, then alternately the next gap and the next increment given the history,
	stopping when the next jump time exceeds `horizon`.

	:raises ExplosionError: if more than `max_jumps` jumps occur
	:raises SimulationError: if a kernel draws a nonpositive gap
	"""
	hist = History([0.0], [float(k.initial(rng))])
	t = 0.0
	while True:
		gap = k.interarrival(hist, rng)
		if not gap > 0:
			raise SimulationError('kernel sampling', f'nonpositive inter-arrival time {gap!r}')
		t += gap
		if t > horizon:
			break
		if len(hist.times) > max_jumps:  # times[0] is the origin
			raise ExplosionError('kernel sampling', f'more than {max_jumps} jumps before t={t:g}')
		hist.values.append(hist.values[-1] + k.mark(hist, rng))
		hist.times.append(t)
	return JumpPath(hist.times[1:], hist.values[1:], hist.values[0], horizon)


def normal_mark_disc_rate(x, j, u, lam, coef, sd, direction='up'):
	"""
	Intensity of discontinuous crossings through `u` for jumps with Gaussian increments.

	The increment after background ``X(t⁻) = x`` with jump part ``J(t⁻) = j`` is N(coef·j, sd²),
	jumps arrive at rate `lam`. Indicators are strict: a background exactly at `u` contributes nothing.

	:param direction: ``'up'``, ``'down'``, or ``'both'``
	"""
	x = np.asarray(x, dtype=float)
	z = (u - x - coef * np.asarray(j, dtype=float)) / sd
	if direction == 'up':
		return lam * special.ndtr(-z) * (x < u)
	elif direction == 'down':
		return lam * special.ndtr(z) * (x > u)
	elif direction == 'both':
		return lam * (special.ndtr(-z) * (x < u) + special.ndtr(z) * (x > u))
	raise ValueError('Unknown direction', direction)


def cpp_disc_rate_integral(times, x, u, lam, direction='up'):
	"""
	Compensator integral of discontinuous crossings through `u` for N(0, 1) jumps at rate `lam`.

	Trapezoidal evaluation of ``λ ∫ g(X(t⁻)) dt`` over the grid `times` with background values `x`,
	where ``g(x) = (1 − Φ(u − x))·1{x < u}`` for up-crossings and ``Φ(u − x)·1{x > u}`` for down-crossings.
	Averaged over backgrounds this is the mean number of discontinuous crossings.

	:raises ValueError: if the grid is empty
	"""
	times = np.asarray(times, dtype=float)
	if times.size < 2:
		raise ValueError('empty grid')
	return float(integrate.trapezoid(normal_mark_disc_rate(x, 0.0, u, lam, 0.0, 1.0, direction), times))


class PoissonAR:
	"""Poisson-autoregressive jumps with Γ_J(0) = `variance`, 1/2 by default."""
	def __init__(self, lam, rho, variance=0.5):
		if not -1 < rho < 1:
			raise ValueError(f'autoregression coefficient must satisfy |rho| < 1, got {rho}')
		if not variance > 0:
			raise ValueError(f'variance must be positive, got {variance}')
		self.lam = lam
		self.rho = rho
		self.variance = variance

	def __repr__(self):
		return f'PoissonAR({self.lam!r}, {self.rho!r}, {self.variance!r})'

	def sample(self, horizon, rng):
		return sample_poisson_ar(self.lam, self.rho, horizon, rng, self.variance)

	def disc_rate(self, x, j, u, direction):
		sd = math.sqrt((1 - self.rho**2) * self.variance)
		return normal_mark_disc_rate(x, j, u, self.lam, self.rho - 1, sd, direction)

	def initial_sd(self):
		return math.sqrt(self.variance)


class CompoundPoisson:
	"""Compound Poisson jumps with N(0, 1) marks and ``J(0) = 0``."""
	def __init__(self, lam):
		self.lam = lam

	def __repr__(self):
		return f'CompoundPoisson({self.lam!r})'

	def sample(self, horizon, rng):
		return sample_cpp(self.lam, horizon, rng)

	def disc_rate(self, x, j, u, direction):
		return normal_mark_disc_rate(x, j, u, self.lam, 0.0, 1.0, direction)

	def initial_sd(self):
		return 0.0


class KernelJumps:
	"""Jumps drawn from a :class:`KernelMPP`."""
	def __init__(self, kernel):
		self.kernel = kernel

	def __repr__(self):
		return f'KernelJumps({self.kernel!r})'

	def sample(self, horizon, rng):
		return sample_kernel_mpp(self.kernel, horizon, rng)

	def disc_rate(self, x, j, u, direction):
		gaps, marks = self.kernel.interarrival, self.kernel.mark
		if isinstance(gaps, NoArrivals):
			return np.zeros(np.shape(x))
		if isinstance(gaps, ExponentialGaps) and isinstance(marks, LinearNormalMarks):
			return normal_mark_disc_rate(x, j, u, gaps.lam, marks.coef, marks.sd, direction)
		return None

	def initial_sd(self):
		init = self.kernel.initial
		return init.sd if isinstance(init, NormalInit) and init.mean == 0 else None


class NoJumps:
	"""The identically zero jump part."""
	lam = 0.0

	def __repr__(self):
		return 'NoJumps()'

	def sample(self, horizon, rng):
		return JumpPath(np.empty(0), np.empty(0), 0.0, horizon)

	def disc_rate(self, x, j, u, direction):
		return np.zeros(np.shape(x))

	def initial_sd(self):
		return 0.0


class JumpDiffusion(Process):
	"""
	The process ``X = Z + J`` with Z from a spectral model and J from a jump sampler.

	Each replication uses two independent streams: the first drives Z, the second drives J,
	so switching jumps on or off leaves the Gaussian draws unchanged.

	:param model: :class:`crossings_lab.process.gaussian.SpectralModel`
	:param jumps: jump sampler, e.g. :class:`PoissonAR` or :class:`CompoundPoisson`
	"""
	_args = ('model', 'jumps')

	def __init__(self, model, jumps):
		self.model = model
		self.jumps = jumps

	def simulate(self, seeds, horizon, step):
		zrng, jrng = streams(seeds, 2)
		t = make_grid(horizon, step)
		z = self.model.sample_path(zrng)
		j = self.jumps.sample(horizon, jrng)
		zj = z(j.times)
		jl = j.left_values()
		path = HybridPath(t, z(t) + j(t), j.times, zj + jl, zj + j.values, horizon)
		if not np.all(np.isfinite(path.merged_values)):
			raise SimulationError('jump diffusion', 'non-finite path value')

		jm = path.merge(j(t), jl, j.values)
		def disc_rate(u, direction='up'):
			g = self.jumps.disc_rate(path.merged_values, jm, u, direction)
			if g is None:
				return math.nan
			return float(integrate.trapezoid(g, path.merged_times))
		return Realization(path, disc_rate)

	def initial_exceedance(self, u):
		"""``P(X(0) > u)`` when ``X(0) = Z(0) + J(0)`` is centered Gaussian with known variance."""
		sd = self.jumps.initial_sd()
		if sd is None:
			return None
		return float(special.ndtr(-u / math.sqrt(self.model.variance + sd * sd)))
