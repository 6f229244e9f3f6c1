#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


"""
Continuous and discontinuous level crossings of sampled càdlàg paths.

A :class:`HybridPath` is viewed as one merged sequence: the grid values with the pair
``X(τ⁻), X(τ)`` inserted at each jump time τ. Consecutive entries of the merged sequence
are joined continuously, except for the pairs straddling a jump.
"""

import functools
import dataclasses

import numpy as np
from scipy import integrate


@dataclasses.dataclass(frozen=True, eq=False)
class HybridPath:
	"""
	A sampled path with jumps.

	:param times: uniform grid ``0 = t_0 < ... < t_n = horizon``
	:param values: X(t_i); at a jump time on the grid this is the right value
	:param jump_times: strictly increasing jump times in ``(0, horizon]``
	:param jump_left: left limits X(τ⁻)
	:param jump_right: values X(τ) after each jump
	:param horizon: time horizon T
	"""
	times: np.ndarray
	values: np.ndarray
	jump_times: np.ndarray = ()
	jump_left: np.ndarray = ()
	jump_right: np.ndarray = ()
	horizon: float = None

	def __post_init__(self):
		for f in ('times', 'values', 'jump_times', 'jump_left', 'jump_right'):
			object.__setattr__(self, f, np.asarray(getattr(self, f), dtype=float))
		if self.horizon is None:
			object.__setattr__(self, 'horizon', float(self.times[-1]))
		if self.times.ndim != 1 or self.times.size < 2 or self.times.shape != self.values.shape:
			raise ValueError('path needs matching grid times and values with at least two points')
		if not self.jump_times.shape == self.jump_left.shape == self.jump_right.shape:
			raise ValueError('jump times, left values and right values must match')
		jt = self.jump_times
		if jt.size and (jt[0] <= 0 or jt[-1] > self.horizon or np.any(np.diff(jt) <= 0)):
			raise ValueError('jump times must be strictly increasing in (0, horizon]')

	@functools.cached_property
	def _slots(self):
		return np.searchsorted(self.times, self.jump_times, side='left')

	@functools.cached_property
	def breaks(self):
		"""Positions of the left values of jumps within the merged sequence."""
		return self._slots + 2 * np.arange(self._slots.size)

	def merge(self, grid, left, right):
		"""Insert the pairs ``(left[k], right[k])`` into `grid` at the jump times."""
		pairs = np.column_stack((left, right)).ravel()
		return np.insert(np.asarray(grid, dtype=float), np.repeat(self._slots, 2), pairs)

	@functools.cached_property
	def merged_values(self):
		"""Grid values with the left and right values of each jump inserted in time order."""
		return self.merge(self.values, self.jump_left, self.jump_right)

	@functools.cached_property
	def merged_times(self):
		"""Times matching :attr:`merged_values`; each jump time appears twice."""
		return self.merge(self.times, self.jump_times, self.jump_times)

	@property
	def initial(self):
		return self.values[0]

	@property
	def final(self):
		return self.values[-1]


@dataclasses.dataclass(frozen=True)
class CrossingCounts:
	"""Continuous and discontinuous up- and down-crossings of a level."""
	cont_up: int = 0
	cont_down: int = 0
	disc_up: int = 0
	disc_down: int = 0

	@property
	def up(self):
		return self.cont_up + self.disc_up

	@property
	def down(self):
		return self.cont_down + self.disc_down

	@property
	def continuous(self):
		return self.cont_up + self.cont_down

	@property
	def discontinuous(self):
		return self.disc_up + self.disc_down

	@property
	def total(self):
		return self.continuous + self.discontinuous


def _fill_ties(s):
	"""
	Replace zeros of the sign array `s` (levels × points) by the next nonzero sign along the row.

	Trailing zeros take the previous nonzero sign; all-zero rows stay zero.
	"""
	n = s.shape[1]
	pos = np.arange(n)
	nz = s != 0
	nxt = np.minimum.accumulate(np.where(nz, pos, n)[:, ::-1], axis=1)[:, ::-1]
	prv = np.maximum.accumulate(np.where(nz, pos, -1), axis=1)
	src = np.where(nxt < n, nxt, prv)
	filled = np.take_along_axis(s, np.maximum(src, 0), axis=1)
	return np.where(src >= 0, filled, 0)


def count_crossings_levels(path, levels):
	"""
	Count crossings of every level in `levels`.

	:returns: integer array of shape ``(4, len(levels))`` holding
		continuous up, continuous down, discontinuous up, and discontinuous down counts
	"""
	levels = np.atleast_1d(np.asarray(levels, dtype=float))
	out = np.zeros((4, levels.size), dtype=np.int64)
	x = path.merged_values
	brk = path.breaks

	left, right = x[brk], x[brk + 1]
	dl = left[None, :] - levels[:, None]
	dr = right[None, :] - levels[:, None]
	straddle = dl * dr < 0
	out[2] = np.count_nonzero(straddle & (dr > 0), axis=1)
	out[3] = np.count_nonzero(straddle & (dr < 0), axis=1)

	bounds = np.concatenate(([0], brk + 1, [x.size]))
	for lo, hi in zip(bounds[:-1], bounds[1:]):
		if hi - lo < 2:
			continue
		s = _fill_ties(np.sign(x[None, lo:hi] - levels[:, None]))
		d = np.diff(s, axis=1)
		out[0] += np.count_nonzero(d > 0, axis=1)
		out[1] += np.count_nonzero(d < 0, axis=1)
	return out


def count_crossings(path, u):
	"""
	Count crossings of level `u` by `path`.

	A jump is a discontinuous crossing when ``(X(τ⁻) − u)(X(τ) − u) < 0``.
	Continuous crossings are strict sign changes of ``X − u`` between consecutive points of the
	same inter-jump segment; a point exactly at `u` takes the sign of the next point off `u`
	in its segment (the previous one at the end of a segment), so the endpoints 0 and T never count.

	:returns: :class:`CrossingCounts`
	"""
	c = count_crossings_levels(path, [u])[:, 0]
	return CrossingCounts(*(int(v) for v in c))


def path_max(path):
	"""Maximum of `path` over grid values and the left and right values of every jump."""
	return float(path.merged_values.max())


def occupation_time(path, u, delta):
	"""Approximate Lebesgue measure of ``{t : |X(t) − u| < delta}`` by the trapezoidal rule."""
	ind = (np.abs(path.merged_values - u) < delta).astype(float)
	return float(integrate.trapezoid(ind, path.merged_times))
