#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


"""
Stationary centered Gaussian processes with a finite spectral measure.

A :class:`SpectralModel` with atoms ``(w_k, ω_k)`` defines the process

	Z(t) = Σ √w_k (ξ_k cos ω_k t + η_k sin ω_k t)

with ξ_k, η_k i.i.d. standard Gaussian. Paths are exactly Gaussian and exactly differentiable.
"""

import math
import logging
import dataclasses
from collections import namedtuple

import numpy as np
from scipy import optimize

from . import make_grid


log = logging.getLogger(__name__)

TANGENCY_TOL = 1e-9


class SmoothPathSample(namedtuple('SmoothPathSample', ['times', 'values', 'derivatives'])):
	"""Sampled smooth path: grid times, values Z(t_i), and derivatives Ż(t_i)."""


class ModelDiagnostics(namedtuple('ModelDiagnostics', ['passed', 'horizon', 'tau', 'gamma', 'max_ratio', 'geman'])):
	"""
	Result of :meth:`SpectralModel.validate`.

	`tau` and `gamma` locate the first point where ``|Γ(τ)|`` reaches Γ(0), or are :const:`None` if none was found.
	`max_ratio` is the largest ``|Γ(τ)|/Γ(0)`` seen on ``(0, T]``.
	`geman` is always :const:`True`: a cosine polynomial has ``Γ(0) − Γ(τ) − λ2·τ²/2 = O(τ⁴)``.
	"""
	def __str__(self):
		if self.passed:
			return (f'pass: |Γ(τ)| < Γ(0) on (0, {self.horizon:g}], max |Γ|/Γ(0) = {self.max_ratio:.6f}; '
			        'Geman condition satisfied')
		return (f'FAIL: |Γ(τ)| reaches Γ(0) at τ ≈ {self.tau:.4f} (Γ = {self.gamma:.6f}); '
		        'Geman condition satisfied')


class HarmonicPath:
	"""One realization of a :class:`SpectralModel`, evaluable at arbitrary times."""
	def __init__(self, frequencies, cos_coef, sin_coef):
		self.frequencies = frequencies
		self.cos_coef = cos_coef
		self.sin_coef = sin_coef

	def _phase(self, t):
		return np.multiply.outer(np.asarray(t, dtype=float), self.frequencies)

	def __call__(self, t):
		"""Return Z(t)."""
		ph = self._phase(t)
		return np.cos(ph) @ self.cos_coef + np.sin(ph) @ self.sin_coef

	def derivative(self, t):
		"""Return Ż(t)."""
		ph = self._phase(t)
		return (np.cos(ph) @ (self.frequencies * self.sin_coef)
		        - np.sin(ph) @ (self.frequencies * self.cos_coef))


@dataclasses.dataclass(frozen=True)
class SpectralModel:
	"""
	Finite-atom spectral model of a stationary Gaussian process.

	:param weights: variance contribution of each atom, nonnegative
	:param frequencies: angular frequency of each atom, nonnegative
	:raises ValueError: for a degenerate or invalid model
	"""
	weights: tuple
	frequencies: tuple

	def __post_init__(self):
		w = tuple(float(x) for x in self.weights)
		f = tuple(float(x) for x in self.frequencies)
		object.__setattr__(self, 'weights', w)
		object.__setattr__(self, 'frequencies', f)
		if not w or len(w) != len(f):
			raise ValueError('spectral model needs matching, nonempty weights and frequencies')
		if any(not math.isfinite(x) or x < 0 for x in w + f):
			raise ValueError('spectral weights and frequencies must be finite and nonnegative')
		if self.variance == 0:
			raise ValueError('degenerate spectral model: Γ(0) = 0')
		if self.lambda2 <= 0:
			raise ValueError('degenerate spectral model: second spectral moment is 0')

	@classmethod
	def from_atoms(cls, atoms, variance=None):
		"""
		Build a model from ``(weight, frequency)`` pairs.

		:param atoms: iterable of ``(weight, frequency)`` pairs
		:param variance: if not :const:`None`, the required Γ(0), checked to within 1e-12
		"""
		atoms = [tuple(a) for a in atoms]
		if any(len(a) != 2 for a in atoms):
			raise ValueError('spectral atoms must be (weight, frequency) pairs')
		model = cls(tuple(a[0] for a in atoms), tuple(a[1] for a in atoms))
		if variance is not None and abs(model.variance - variance) > 1e-12:
			raise ValueError(f'spectral weights sum to {model.variance!r}, expected variance {variance!r}')
		return model

	@property
	def atoms(self):
		return list(zip(self.weights, self.frequencies))

	@property
	def variance(self):
		"""Γ(0)."""
		return math.fsum(self.weights)

	@property
	def lambda2(self):
		"""Second spectral moment, ``Σ w_k ω_k²``."""
		return math.fsum(w * f * f for w, f in self.atoms)

	def covariance(self, tau):
		"""Γ(τ) = Σ w_k cos(ω_k τ)."""
		return np.cos(np.multiply.outer(np.asarray(tau, dtype=float), self.frequencies)) @ np.array(self.weights)

	def second_spectral_moment(self):
		"""Return λ2, the variance of Ż(t)."""
		return self.lambda2

	def validate(self, horizon, npoints=10_000):
		"""
		Check that ``|Γ(τ)| < Γ(0)`` on ``(0, horizon]``.

		Γ is scanned on `npoints` equispaced points and every local maximum of ``|Γ|`` is refined
		with a bounded scalar search, so tangencies between grid points are not missed.

		:returns: :class:`ModelDiagnostics`
		"""
		if not horizon > 0:
			raise ValueError(f'horizon must be positive, got {horizon}')
		g0 = self.variance
		taus = np.linspace(horizon / npoints, horizon, npoints)
		g = np.abs(self.covariance(taus))
		inner = np.flatnonzero((g[1:-1] >= g[:-2]) & (g[1:-1] >= g[2:])) + 1
		cand = list(inner)
		if npoints > 1 and g[-1] >= g[-2]:
			cand.append(npoints - 1)
		best_tau, best_g = taus[np.argmax(g)], g.max()
		hits = [(t, gv) for t, gv in zip(taus, g) if gv >= g0 - TANGENCY_TOL]
		for i in cand:
			lo, hi = taus[max(i - 1, 0)], taus[min(i + 1, npoints - 1)]
			res = optimize.minimize_scalar(lambda t: -abs(float(self.covariance(t))), bounds=(lo, hi),
			                               method='bounded', options={'xatol': 1e-12})
			t, gv = float(res.x), -float(res.fun)
			if gv > best_g:
				best_tau, best_g = t, gv
			if gv >= g0 - TANGENCY_TOL:
				hits.append((t, gv))
		ratio = min(best_g / g0, 1.0)
		if hits:
			tau = min(hits)[0]
			gamma = float(self.covariance(tau))
			log.debug('covariance reaches ±Γ(0) at τ=%r', tau)
			return ModelDiagnostics(False, horizon, tau, gamma, ratio, True)
		return ModelDiagnostics(True, horizon, None, None, ratio, True)

	def sample_path(self, rng):
		"""Draw a :class:`HarmonicPath` using generator `rng`."""
		xi, eta = rng.standard_normal((2, len(self.weights)))
		sd = np.sqrt(self.weights)
		return HarmonicPath(np.array(self.frequencies), sd * xi, sd * eta)

	def sample(self, horizon, step, rng):
		"""
		Sample Z and Ż on the grid ``0, step, ..., horizon``.

		:returns: :class:`SmoothPathSample`
		:raises ValueError: if the grid is empty or `horizon` is not a multiple of `step`
		"""
		t = make_grid(horizon, step)
		path = self.sample_path(rng)
		return SmoothPathSample(t, path(t), path.derivative(t))


def sample_gaussian_path(model, horizon, step, rng):
	"""Sample `model` on a uniform grid; see :meth:`SpectralModel.sample`."""
	return model.sample(horizon, step, rng)
