#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


"""
Special functions, distributions, and quadrature shared by all formula evaluators.
"""

import math
import logging
import dataclasses

import numpy as np
from scipy import special, stats, integrate


log = logging.getLogger(__name__)

SQRT2PI = math.sqrt(2 * math.pi)


@dataclasses.dataclass(frozen=True)
class Quadrature:
	"""
	Accuracy controls for adaptive quadrature.

	:param abs_tol: absolute tolerance
	:param rel_tol: relative tolerance
	:param max_depth: maximum number of interval subdivisions
	:param half_width: truncation half-width for improper integrals, in units of the integrand's scale
	"""
	abs_tol: float = 1e-10
	rel_tol: float = 1e-10
	max_depth: int = 200
	half_width: float = 10.0

	def __post_init__(self):
		if not self.abs_tol > 0:
			raise ValueError(f'abs_tol must be positive, got {self.abs_tol}')
		if not self.rel_tol > 0:
			raise ValueError(f'rel_tol must be positive, got {self.rel_tol}')
		if int(self.max_depth) != self.max_depth or self.max_depth < 1:
			raise ValueError(f'max_depth must be an integer >= 1, got {self.max_depth}')
		if not self.half_width > 0:
			raise ValueError(f'half_width must be positive, got {self.half_width}')

	def window(self, a, b, center=0.0, scale=1.0):
		"""
		Replace infinite endpoints of ``[a, b]`` by the truncation window around `center`.

		The window is ``center ± (|center| + half_width·scale)``.
		"""
		reach = abs(center) + self.half_width * scale
		if a == -math.inf:
			a = center - reach
		if b == math.inf:
			b = center + reach
		return a, b


DEFAULT_QUADRATURE = Quadrature()


class QuadratureError(Exception):
	"""Quadrature did not reach the requested accuracy; carries the partial estimate."""
	def __init__(self, message, estimate, abserr):
		super().__init__(message, estimate, abserr)
		self.estimate = estimate
		self.abserr = abserr

	def __str__(self):
		msg, est, err = self.args
		return f'quadrature failed: {msg.strip()} (partial estimate {est!r}, error estimate {err!r})'


def std_normal_pdf(x):
	"""Standard Gaussian density ϕ(x)."""
	x = np.asarray(x, dtype=float)
	return np.exp(-0.5 * x * x) / SQRT2PI


def std_normal_cdf(x):
	"""Standard Gaussian distribution function Φ(x)."""
	return special.ndtr(x)


def std_normal_sf(x):
	"""Standard Gaussian tail 1 − Φ(x), accurate for large `x`."""
	return special.ndtr(-np.asarray(x, dtype=float))


def gauss_density_var(x, v):
	"""
	Centered Gaussian density with variance `v`.

	:raises ValueError: if `v` is not positive
	"""
	if not v > 0:
		raise ValueError(f'variance must be positive, got {v}')
	sd = math.sqrt(v)
	return std_normal_pdf(np.asarray(x, dtype=float) / sd) / sd


def quad_adaptive(f, a, b, q=DEFAULT_QUADRATURE, *, center=0.0, scale=1.0, points=()):
	"""
	Integrate `f` over ``[a, b]`` to the accuracy requested by `q`.

	Infinite endpoints are replaced by the truncation window of `q` (see :meth:`Quadrature.window`);
	for Gaussian-tailed integrands with the default half-width the discarded mass is below 1e-23·scale.

	:param f: scalar integrand
	:param a: lower bound, may be ``-inf``
	:param b: upper bound, may be ``inf``
	:param q: :class:`Quadrature` accuracy controls
	:param center: center of the truncation window
	:param scale: scale of the truncation window
	:param points: interior breakpoints where `f` has local difficulties
	:returns: the integral value
	:raises QuadratureError: if the requested accuracy was not reached
	"""
	a, b = q.window(a, b, center, scale)
	if a == b:
		return 0.0
	sign = 1.0
	if a > b:
		a, b, sign = b, a, -1.0
	brk = sorted({p for p in points if a < p < b})
	res = integrate.quad(f, a, b, epsabs=q.abs_tol, epsrel=q.rel_tol,
	                     limit=q.max_depth, points=brk or None, full_output=1)
	val, err = res[0], res[1]
	if len(res) > 3:
		if err > max(q.abs_tol, q.rel_tol * abs(val)):
			raise QuadratureError(res[3], sign * val, err)
		log.debug('quadrature on [%g, %g] warned but met tolerance: %s', a, b, res[3].strip())
	return sign * val


def bvn_rect_upper(u, r, q=DEFAULT_QUADRATURE):
	"""
	Return ``P(X < u, Y > u)`` for a standardized bivariate Gaussian pair with correlation `r`.

	Computed by integrating ϕ(x)·Φ((r·x − u)/√(1 − r²)) over ``(-inf, u)``. The second factor
	switches from 0 to 1 around ``x = u/r`` over a width of ``√(1 − r²)/|r|``; breakpoints are
	placed there so the switch is resolved for `r` close to ±1.

	:param u: the level
	:param r: correlation, ``-1 < r <= 1``
	:raises ValueError: if `r` is out of range
	"""
	if not -1 < r <= 1:
		raise ValueError(f'correlation must lie in (-1, 1], got {r}')
	if r == 1:
		return 0.0
	s = math.sqrt(1 - r * r)
	def integrand(x):
		return math.exp(-0.5 * x * x) / SQRT2PI * special.ndtr((r * x - u) / s)
	points = ()
	if r != 0:
		mid, w = u / r, s / abs(r)
		points = tuple(mid + k * w for k in (-40, -10, -3, -1, 0, 1, 3, 10, 40))
	val = quad_adaptive(integrand, -math.inf, u, q, center=u, points=points)
	return min(max(val, 0.0), float(min(special.ndtr(u), special.ndtr(-u))))


def _check_count(n):
	n = np.asarray(n)
	if np.any(n < 0):
		raise ValueError(f'count must be nonnegative, got {n}')
	return n


def poisson_pmf(n, m):
	"""
	Poisson probability mass ``P(ν = n)`` for mean `m`.

	:raises ValueError: if `n` is negative or `m` is not positive
	"""
	n = _check_count(n)
	if not m > 0:
		raise ValueError(f'Poisson mean must be positive, got {m}')
	return stats.poisson.pmf(n, m)


def poisson_tail(n, m):
	"""
	Poisson tail ``P(ν >= n)`` for mean `m`, via the regularized incomplete gamma function.

	:raises ValueError: if `n` is negative or `m` is not positive
	"""
	n = _check_count(n)
	if not m > 0:
		raise ValueError(f'Poisson mean must be positive, got {m}')
	return np.where(n == 0, 1.0, special.gammainc(np.maximum(n, 1), m))[()]
