#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


"""
Per-level experiment reports and their file formats.

A :class:`RiceReport` holds one row per level. It is written as ``report.json``, ``report.csv``,
and one ``<column>.dat`` file per numeric column, each line holding a level and a value.
Floats are written in their shortest round-trip form in every file.
"""

import os
import io
import csv
import math
import json
import logging

import numpy as np

from . import rice
from . import numeric
from . import pdmp
from .process import SimulationError
from .montecarlo import MCEstimate, estimate_max_tail, assemble_tail_bounds, lower_bound_estimate


log = logging.getLogger(__name__)

AGREEMENT_K = 3.0

MC_FIELDS = ('cont_up', 'cont_down', 'disc_up', 'disc_down')


def _plain(v):
	"""Convert `v` to a JSON-compatible scalar; non-finite floats become :const:`None`."""
	if isinstance(v, (bool, np.bool_)):
		return bool(v)
	if isinstance(v, (int, np.integer)):
		return int(v)
	if isinstance(v, (float, np.floating)):
		v = float(v)
		return v if math.isfinite(v) else None
	return v


def _cell(v):
	if v is None:
		return ''
	elif isinstance(v, bool):
		return 'true' if v else 'false'
	elif isinstance(v, float):
		return repr(v)
	return str(v)


class RiceReport:
	"""
	Result of one command on one experiment.

	:param experiment: experiment name
	:param command: the command that produced the report
	:param config: JSON-serializable configuration
	:param rows: list of mappings from column name to value
	:param summary: mapping of experiment-wide values
	:param table: columns shown by :meth:`format_table`, defaults to all
	"""
	def __init__(self, experiment, command, config, rows=(), summary=None, table=None):
		self.experiment = experiment
		self.command = command
		self.config = config
		self.rows = [{k: _plain(v) for k, v in r.items()} for r in rows]
		self.summary = {k: _plain(v) for k, v in (summary or {}).items()}
		self.table = table

	@property
	def columns(self):
		"""All column names in first-seen order."""
		cols = {}
		for r in self.rows:
			cols.update(dict.fromkeys(r))
		return list(cols)

	@property
	def agreed(self):
		"""Whether every row's agreement flag, where present, holds."""
		return all(r['agree'] for r in self.rows if r.get('agree') is not None)

	def to_json(self):
		doc = {
			'experiment': self.experiment,
			'command': self.command,
			'config': self.config,
			'rows': self.rows,
			'summary': self.summary,
		}
		return json.dumps(doc, sort_keys=True, indent=1, allow_nan=False) + '\n'

	def to_csv(self):
		cols = self.columns
		buf = io.StringIO()
		w = csv.writer(buf, lineterminator='\n')
		w.writerow(cols)
		for r in self.rows:
			w.writerow([_cell(r.get(c)) for c in cols])
		return buf.getvalue()

	def plot_data(self):
		"""
		Return a mapping from column name to the text of its plot file.

		Only numeric columns of reports with a ``level`` column are included; rows where a column is missing are skipped.
		"""
		if 'level' not in self.columns:
			return {}
		out = {}
		for c in self.columns:
			if c == 'level':
				continue
			pts = [(r['level'], r.get(c)) for r in self.rows]
			pts = [(u, v) for u, v in pts if isinstance(v, (int, float)) and not isinstance(v, bool)]
			if pts:
				out[c] = ''.join(f'{u!r} {v!r}\n' for u, v in pts)
		return out

	def write(self, outdir):
		"""Write ``report.json``, ``report.csv``, and the plot files into `outdir`, creating it if absent."""
		os.makedirs(outdir, exist_ok=True)
		files = {'report.json': self.to_json(), 'report.csv': self.to_csv()}
		files.update((f'{c}.dat', text) for c, text in self.plot_data().items())
		for name, text in files.items():
			with open(os.path.join(outdir, name), 'w') as f:
				f.write(text)
		log.info('wrote %d files to %s', len(files), outdir)

	def format_table(self):
		"""Format the report as a fixed-width table for the terminal."""
		cols = [c for c in (self.table or self.columns) if c in self.columns]
		def fmt(v):
			if v is None:
				return '-'
			elif isinstance(v, bool):
				return 'yes' if v else 'NO'
			elif isinstance(v, float):
				return f'{v:.6g}'
			return str(v)
		cells = [cols] + [[fmt(r.get(c)) for c in cols] for r in self.rows]
		widths = [max(len(row[i]) for row in cells) for i in range(len(cols))]
		lines = ['  '.join(s.rjust(w) for s, w in zip(row, widths)) for row in cells]
		return '\n'.join([f'{self.command}: {self.experiment}'] + lines)


def _put(row, name, est):
	row[name] = est.mean
	row[f'{name}_se'] = est.se


def analytic_columns(cfg, u, results=None):
	"""
	Closed-form crossing terms at level `u`.

	For a PDMP the continuous term ``|μ(u)|·∫p_{X(t)}(u)dt`` uses the occupation estimate of `results`;
	without `results` its columns are :const:`None`.

	:param cfg: :class:`crossings_lab.config.Config`
	:returns: mapping of analytic columns
	"""
	q = cfg.quadrature()
	family = cfg.family
	row = dict.fromkeys(('analytic_cont', 'analytic_disc', 'analytic_total', 'analytic_se'))
	if family == 'pdmp':
		if results is not None:
			occ = results.estimate('occupation', u)
			mu_u = abs(cfg.mu(u))
			row['analytic_cont'] = pdmp.bl_mean_continuous(mu_u, occ.mean)
			row['analytic_se'] = mu_u * occ.se
		return row

	lambda2 = cfg.model().lambda2
	if family == 'poisson_ar':
		terms = rice.poisson_ar_upcrossings(rice.PoissonArParams(lambda2, cfg.lam, cfg.rho, cfg.T, cfg.variance), u, q)
	elif family == 'cpp':
		c = rice.CppParams(lambda2, cfg.lam, cfg.T)
		terms = rice.cpp_upcrossings(c, u, q)
		row['disc_lower_bound'], row['disc_upper_bound'] = rice.cpp_disc_bounds(c, u)
	else:
		terms = rice.RiceTerms.of(rice.classical_upcrossings(lambda2, u, cfg.T, cfg.model().variance), 0.0)
	row.update(analytic_cont=terms.continuous, analytic_disc=terms.discontinuous,
	           analytic_total=terms.total, analytic_se=0.0)
	return row


def analytic_tail_upper(cfg, u):
	"""Closed-form upper bound on ``P(M(T) > u)``, or :const:`None` for a PDMP."""
	q = cfg.quadrature()
	family = cfg.family
	if family == 'pdmp':
		return None
	lambda2 = cfg.model().lambda2
	if family == 'poisson_ar':
		return rice.max_tail_upper_bound(rice.PoissonArParams(lambda2, cfg.lam, cfg.rho, cfg.T, cfg.variance), u, q)
	elif family == 'cpp':
		return rice.cpp_max_tail_upper_bound(rice.CppParams(lambda2, cfg.lam, cfg.T), u, q)
	var = cfg.model().variance
	sf = float(numeric.std_normal_sf(u / math.sqrt(var)))
	return min(1.0, sf + rice.classical_upcrossings(lambda2, u, cfg.T, var))


def mc_columns(results, u):
	"""Monte Carlo means and standard errors of the crossing counts, compensator, and occupation at `u`."""
	row = {}
	for f in MC_FIELDS:
		_put(row, f'mc_{f}', results.estimate(f, u))
	for f in ('compensator_up', 'compensator_down'):
		samples = results.samples(f, u)
		if np.all(np.isfinite(samples)):
			_put(row, f, MCEstimate.from_samples(samples, results.seed))
		else:
			row[f] = row[f'{f}_se'] = None
	_put(row, 'occupation', results.estimate('occupation', u))
	return row


def tail_columns(process, results, u, upper=None):
	"""
	Maximum-tail quantities at level `u`.

	``P(X(0) > u)`` is taken from `process` when known in closed form, else estimated.
	``tail_ok`` holds when the empirical tail lies between the bounds within three standard errors.

	:param process: the simulated :class:`crossings_lab.process.Process`
	:param upper: closed-form upper bound, or :const:`None` to use the empirical ``P(X(0) > u) + E U_u``
	"""
	row = {}
	tail = estimate_max_tail(results, u)
	_put(row, 'tail_empirical', tail.total)
	_put(row, 'tail_start_above', tail.start_above)
	_put(row, 'tail_start_below_up', tail.start_below_up)
	row['tail_mismatches'] = tail.mismatches

	p_start = process.initial_exceedance(u)
	if p_start is None:
		p_start = tail.start_above.mean
	row['p_start'] = p_start
	eu = results.estimate('up', u)
	eu2 = results.estimate('up_fact2', u)
	joint = results.estimate('up_start_above', u)
	_put(row, 'eu', eu)
	_put(row, 'eu2', eu2)
	_put(row, 'p_joint', joint)

	bounds = assemble_tail_bounds(upper, eu.mean, eu2.mean, joint.mean, p_start)
	lower = lower_bound_estimate(results, u)
	row['tail_lower'] = bounds.lower
	row['tail_lower_se'] = lower.se
	row['tail_upper'] = upper
	row['tail_upper_empirical'] = min(1.0, p_start + eu.mean)
	hi, hi_se = (upper, 0.0) if upper is not None else (row['tail_upper_empirical'], eu.se)
	emp = tail.total
	row['tail_ok'] = bool(bounds.lower - AGREEMENT_K * math.hypot(lower.se, emp.se) <= emp.mean
	                      <= hi + AGREEMENT_K * math.hypot(hi_se, emp.se))
	return row


def _agree(a, a_se, m, m_se):
	if a is None or m is None:
		return None
	return abs(a - m) <= AGREEMENT_K * math.hypot(a_se or 0.0, m_se or 0.0)


def agreement_columns(cfg, row, results, u):
	"""
	Agreement flags between analytic and Monte Carlo columns of `row`.

	Continuous terms are compared with continuous up-crossings, or with all continuous crossings for a PDMP.
	The compensator is compared with discontinuous up-crossings. For a PDMP the net discontinuous
	crossing identity is checked as well. ``agree`` holds when every available comparison passes.
	"""
	out = {}
	if cfg.family == 'pdmp':
		cont = MCEstimate.from_samples(results.samples('cont_up', u) + results.samples('cont_down', u), results.seed)
		_put(out, 'mc_cont', cont)
		mu_u = cfg.mu(u)
		net = pdmp.net_crossing_check(results, u, mu_u)
		out.update(net_lhs=net.lhs.mean, net_rhs=net.rhs.mean, net_se=net.se, agree_net=net.agrees(AGREEMENT_K))
		try:
			pdmp.check_direction(results, u, mu_u)
		except SimulationError as e:
			log.warning('%s', e)
		out['agree_cont'] = _agree(row['analytic_cont'], row['analytic_se'], cont.mean, cont.se)
		out['agree_disc'] = None
	else:
		out['agree_cont'] = _agree(row['analytic_cont'], row['analytic_se'], row['mc_cont_up'], row['mc_cont_up_se'])
		out['agree_disc'] = _agree(row['analytic_disc'], row['analytic_se'], row['mc_disc_up'], row['mc_disc_up_se'])
	out['agree_compensator'] = _agree(row['compensator_up'], row['compensator_up_se'],
	                                  row['mc_disc_up'], row['mc_disc_up_se'])
	flags = [v for k, v in out.items() if k.startswith('agree_') and v is not None]
	out['agree'] = all(flags)
	return out
