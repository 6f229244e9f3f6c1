#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


"""
Closed-form mean crossing counts and maximum-tail bounds.

Two smooth-plus-jump models have explicit formulas for the mean number of up-crossings:

- Poisson-autoregressive jumps (:class:`PoissonArParams`), with ``Γ(0) = α²`` for the smooth part
  and ``1 − α²`` for the jump part so that every X(t) is standard Gaussian (``α² = 1/2`` by default);
- compound Poisson jumps with N(0, 1) marks (:class:`CppParams`), with ``Γ(0) = 1``.

The continuous term depends on the smooth part only through λ2 = Var Ż(0).
Mean down-crossings at `u` equal mean up-crossings at `-u`, since every model is symmetric.
"""

import math
import functools
import dataclasses
from collections import namedtuple

import numpy as np
from scipy import special

from . import numeric
from .numeric import DEFAULT_QUADRATURE


class RiceTerms(namedtuple('RiceTerms', ['continuous', 'discontinuous', 'total'])):
	"""Mean continuous, discontinuous, and total crossing counts."""
	@classmethod
	def of(cls, cont, disc):
		return cls(float(cont), float(disc), float(cont + disc))


def _positive(**kw):
	for k, v in kw.items():
		if not (v > 0 and math.isfinite(v)):
			raise ValueError(f'{k} must be positive and finite, got {v}')


@dataclasses.dataclass(frozen=True)
class PoissonArParams:
	"""
	Parameters of the Poisson-autoregressive model ``X = αZ̃ + √(1 − α²)J̃``.

	Z̃ and J̃ have unit variance, so X(t) is N(0, 1); the smooth part ``Z = αZ̃`` has ``Γ(0) = α²``.
	The default ``α² = 1/2`` splits the variance evenly. Since ``λ2(αZ̃) = α²λ2(Z̃)``, the continuous term
	is α times the mean continuous crossings of Z̃ alone.

	:param lambda2: second spectral moment of Z
	:param lam: jump intensity
	:param rho: autoregression coefficient, ``|rho| < 1``
	:param horizon: time horizon T
	:param smooth_variance: α², the variance of Z, in ``(0, 1)``
	"""
	lambda2: float
	lam: float
	rho: float
	horizon: float = 1.0
	smooth_variance: float = 0.5

	def __post_init__(self):
		_positive(lambda2=self.lambda2, lam=self.lam, horizon=self.horizon)
		if not -1 < self.rho < 1:
			raise ValueError(f'rho must satisfy |rho| < 1, got {self.rho}')
		if not 0 < self.smooth_variance < 1:
			raise ValueError(f'smooth_variance must lie in (0, 1), got {self.smooth_variance}')

	@property
	def jump_corr(self):
		"""Correlation of ``X(τ⁻)`` and ``X(τ)`` at a jump time τ: ``α² + (1 − α²)ρ``."""
		s = self.smooth_variance
		return s + (1 - s) * self.rho


@dataclasses.dataclass(frozen=True)
class CppParams:
	"""
	Parameters of the compound Poisson model.

	:param lambda2: second spectral moment of Z
	:param lam: jump intensity
	:param horizon: time horizon T
	:param tol: residual mass at which the mixture series is truncated, in ``(0, 1e-6]``
	"""
	lambda2: float
	lam: float
	horizon: float = 1.0
	tol: float = 1e-12

	def __post_init__(self):
		_positive(lambda2=self.lambda2, lam=self.lam, horizon=self.horizon)
		if not 0 < self.tol <= 1e-6:
			raise ValueError(f'tol must lie in (0, 1e-6], got {self.tol}')


def mean_abs_derivative(lambda2):
	"""
	Return ``(E|Ż(0)|, E Ż(0)⁺)`` for a centered Gaussian Ż(0) with variance `lambda2`.

	``E Ż⁺ = √(λ2/2π)`` and ``E|Ż| = 2·E Ż⁺``.
	"""
	_positive(lambda2=lambda2)
	pos = math.sqrt(lambda2 / (2 * math.pi))
	return 2 * pos, pos


def rice_const_var_continuous(lambda2, density, horizon, direction='up'):
	"""
	Mean continuous crossings when Ż(t) is independent of X(t) with constant variance `lambda2`.

	:param density: ``(1/T) ∫₀ᵀ p_{X(t)}(u) dt``
	:param direction: ``'up'``, ``'down'``, or ``'both'``
	"""
	if density < 0:
		raise ValueError(f'density must be nonnegative, got {density}')
	both, pos = mean_abs_derivative(lambda2)
	if direction in ('up', 'down'):
		return horizon * pos * density
	elif direction == 'both':
		return horizon * both * density
	raise ValueError('Unknown direction', direction)


def classical_upcrossings(lambda2, u, horizon=1.0, variance=1.0):
	"""Mean up-crossings of a stationary Gaussian process without jumps."""
	return rice_const_var_continuous(lambda2, float(numeric.gauss_density_var(u, variance)), horizon)


def poisson_ar_upcrossings(p, u, q=DEFAULT_QUADRATURE):
	"""
	Mean up-crossings of the Poisson-autoregressive model.

	The continuous term is ``T√(λ2/2π)ϕ(u)``; the discontinuous term is ``λT·P(X < u, Y > u)``
	for a standardized Gaussian pair with correlation :attr:`PoissonArParams.jump_corr`,
	``(1 + ρ)/2`` for the even split.

	:returns: :class:`RiceTerms`
	"""
	cont = rice_const_var_continuous(p.lambda2, float(numeric.std_normal_pdf(u)), p.horizon)
	disc = p.lam * p.horizon * numeric.bvn_rect_upper(u, p.jump_corr, q)
	return RiceTerms.of(cont, disc)


def poisson_ar_downcrossings(p, u, q=DEFAULT_QUADRATURE):
	"""Mean down-crossings of the Poisson-autoregressive model."""
	return poisson_ar_upcrossings(p, -u, q)


def max_tail_upper_bound(p, u, q=DEFAULT_QUADRATURE):
	"""Upper bound ``1 − Φ(u) + E U_u`` on ``P(M(T) > u)`` for the Poisson-autoregressive model, clipped at 1."""
	return min(1.0, float(numeric.std_normal_sf(u)) + poisson_ar_upcrossings(p, u, q).total)


@functools.lru_cache(maxsize=64)
def _mixture_weights(m, tol):
	n = max(16, int(m + 10 * math.sqrt(m) + 20))
	while True:
		w = numeric.poisson_tail(np.arange(1, n + 1), m) / m
		rest = 1 - np.cumsum(w)
		cut = np.flatnonzero(rest < tol)
		if cut.size:
			w = w[:cut[0] + 1]
			w.setflags(write=False)
			return w
		n *= 2


def cpp_mixture_weights(lam, horizon, tol=1e-12):
	"""
	Weights ``p_n = P(ν_T >= n)/(λT)``, ``n = 1, 2, ...``, truncated once their residual mass is below `tol`.

	The truncated density remainder is at most ``tol·ϕ_{n_cut}(0)``.
	"""
	_positive(lam=lam, horizon=horizon)
	return _mixture_weights(lam * horizon, tol)


def cpp_mixture_density(u, lam, horizon, tol=1e-12):
	"""
	Time-averaged density ``p(u) = Σ_{n≥1} p_n ϕ_n(u)`` of the compound Poisson model.

	Even in `u`; integrates to one and has second moment ``1 + λT/2``.
	"""
	w = cpp_mixture_weights(lam, horizon, tol)
	n = np.arange(1, w.size + 1)
	u = np.asarray(u, dtype=float)
	return (numeric.gauss_density_var(np.multiply.outer(u, 1 / np.sqrt(n)), 1.0) / np.sqrt(n)) @ w


def _cpp_scale(c):
	return math.sqrt(cpp_mixture_weights(c.lam, c.horizon, c.tol).size)


def cpp_upcrossings(c, u, q=DEFAULT_QUADRATURE):
	"""
	Mean up-crossings of the compound Poisson model.

	The continuous term is ``T√(λ2/2π)p(u)``; the discontinuous term is
	``λT ∫_{−∞}^{u} (1 − Φ(u − x)) p(x) dx``.

	:returns: :class:`RiceTerms`
	:raises crossings_lab.numeric.QuadratureError: if the quadrature fails
	"""
	pu = float(cpp_mixture_density(u, c.lam, c.horizon, c.tol))
	cont = rice_const_var_continuous(c.lambda2, pu, c.horizon)
	def integrand(x):
		return special.ndtr(x - u) * float(cpp_mixture_density(x, c.lam, c.horizon, c.tol))
	disc = c.lam * c.horizon * numeric.quad_adaptive(integrand, -math.inf, u, q, center=u, scale=_cpp_scale(c))
	return RiceTerms.of(cont, disc)


def cpp_downcrossings(c, u, q=DEFAULT_QUADRATURE):
	"""Mean down-crossings of the compound Poisson model."""
	return cpp_upcrossings(c, -u, q)


def cpp_disc_bounds(c, u):
	"""
	Bounds on the discontinuous term of :func:`cpp_upcrossings`.

	Lower: ``λT·p(u)·∫₀^{2u}(1 − Φ)``, from `p` being even and decreasing on ``[0, ∞)`` (zero for ``u <= 0``).
	As ``u → ∞`` the integral tends to ``∫₀^∞(1 − Φ) = 1/√(2π)``.
	Upper: ``λT·Σ p_n (1 − Φ(u/√(n+1)))``, dropping the constraint that the pre-jump value lies below `u`.

	:returns: ``(lower, upper)``
	"""
	m = c.lam * c.horizon
	w = cpp_mixture_weights(c.lam, c.horizon, c.tol)
	n = np.arange(1, w.size + 1)
	upper = m * float(special.ndtr(-u / np.sqrt(n + 1)) @ w)
	if u <= 0:
		return 0.0, upper
	a = 2 * u
	tail_int = a * special.ndtr(-a) - numeric.std_normal_pdf(a) + numeric.std_normal_pdf(0.0)
	return m * float(cpp_mixture_density(u, c.lam, c.horizon, c.tol)) * float(tail_int), upper


def cpp_max_tail_upper_bound(c, u, q=DEFAULT_QUADRATURE):
	"""Upper bound ``1 − Φ(u) + E U_u`` on ``P(M(T) > u)`` for the compound Poisson model, clipped at 1."""
	return min(1.0, float(numeric.std_normal_sf(u)) + cpp_upcrossings(c, u, q).total)


def general_rice_convolution(cond_mean_abs_deriv, pz, pj, u, horizon, q=DEFAULT_QUADRATURE, *,
                             z_scale=1.0, j_scale=None, points=()):
	"""
	Mean continuous crossings when J(t) has a continuous density.

	Evaluates ``∫₀ᵀ dt ∫ E(|Ż(t)| | Z(t) = v) p_{Z(t)}(v) p_{J(t)}(u − v) dv`` by nested quadrature.

	:param cond_mean_abs_deriv: ``f(t, v)``, the conditional mean of ``|Ż(t)|`` given ``Z(t) = v``
	:param pz: ``f(t, v)``, the density of Z(t)
	:param pj: ``f(t, x)``, the density of J(t)
	:param z_scale: scale of Z(t), sets the truncation window of the inner integral
	:param j_scale: scale of J(t) when it is much narrower than Z(t);
		the inner integral is then split at ``u ± k·j_scale`` so the peak of p_{J(t)}(u − v) is resolved
	:param points: further breakpoints of the inner integrand in `v`
	:raises ValueError: if `j_scale` is not positive
	:raises crossings_lab.numeric.QuadratureError: if either quadrature fails
	"""
	brk = tuple(points)
	if j_scale is not None:
		if not j_scale > 0:
			raise ValueError(f'j_scale must be positive, got {j_scale}')
		brk += tuple(u + k * j_scale for k in (-40, -10, -3, -1, 0, 1, 3, 10, 40))
	def inner(t):
		def f(v):
			return cond_mean_abs_deriv(t, v) * pz(t, v) * pj(t, u - v)
		return numeric.quad_adaptive(f, -math.inf, math.inf, q, scale=z_scale, points=brk)
	return numeric.quad_adaptive(inner, 0.0, horizon, q)
