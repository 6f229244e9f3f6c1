#!/usr/bin/env python

# Copyright © 2026 The crossings-lab developers
#
# SPDX-License-Identifier: GPL-3.0-or-later


"""Command line interface to crossings-lab. Run as main with '-h' for usage information."""

import os
import sys
import asyncio
import logging
import argparse

from . import VERSION
from . import config
from . import montecarlo
from .report import RiceReport, analytic_columns, analytic_tail_upper, mc_columns, tail_columns, agreement_columns


log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DISAGREE = 2
EXIT_RUNTIME = 3

THREADS_ENV = 'CROSSINGS_LAB_THREADS'


class ArgumentParser(argparse.ArgumentParser):
	""":class:`argparse.ArgumentParser` exiting with status 1 on usage errors."""
	def error(self, message):
		self.print_usage(sys.stderr)
		self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')


def positive_int(s):
	"""Parse a positive integer command-line argument."""
	try:
		n = int(s)
	except ValueError:
		raise argparse.ArgumentTypeError(f'invalid integer: {s!r}') from None
	if n < 1:
		raise argparse.ArgumentTypeError(f'must be at least 1, got {n}')
	return n


def setup_logging(verbose=False, quiet=0):
	"""Configure the root logger: DEBUG with `verbose`, else INFO, WARNING, or ERROR by `quiet` count."""
	if verbose:
		level = logging.DEBUG
	else:
		level = (logging.INFO, logging.WARNING, logging.ERROR)[min(quiet, 2)]
	logging.basicConfig(level=level, format='%(levelname)s: %(name)s: %(message)s', force=True)


def _report(cfg, command, rows, summary=None, table=None):
	return RiceReport(cfg.name, command, cfg.asdict(), rows, summary, table)


async def _simulate(cfg, workers):
	return await montecarlo.replicate(cfg.experiment(), workers)


def _mc_summary(results):
	return {'reps': results.reps, 'failures': len(results.failures), 'seed': results.seed}


async def cmd_analytic(cfg, workers=1):
	"""
	Evaluate the closed-form crossing terms at every level.

	A PDMP has no closed form without an occupation estimate; its analytic columns are empty.

	:returns: :class:`crossings_lab.report.RiceReport`
	"""
	if cfg.family == 'pdmp':
		log.warning('PDMP crossing terms need an occupation estimate; run "compare" instead')
	rows = []
	for u in cfg.levels:
		row = {'level': u}
		row.update(analytic_columns(cfg, u))
		rows.append(row)
	return _report(cfg, 'analytic', rows, table=('level', 'analytic_cont', 'analytic_disc', 'analytic_total'))


async def cmd_simulate(cfg, workers=1):
	"""
	Estimate crossing counts, compensator, and occupation by Monte Carlo.

	:param workers: number of worker processes
	:returns: :class:`crossings_lab.report.RiceReport`
	"""
	results = await _simulate(cfg, workers)
	rows = []
	for u in cfg.levels:
		row = {'level': u}
		row.update(mc_columns(results, u))
		rows.append(row)
	return _report(cfg, 'simulate', rows, _mc_summary(results),
	               ('level', 'mc_cont_up', 'mc_cont_down', 'mc_disc_up', 'mc_disc_down', 'compensator_up'))


async def cmd_compare(cfg, workers=1):
	"""
	Compare closed forms with Monte Carlo estimates at every level.

	The report's :attr:`crossings_lab.report.RiceReport.agreed` tells whether every comparison passed.
	"""
	results = await _simulate(cfg, workers)
	process = cfg.process()
	rows = []
	for u in cfg.levels:
		row = {'level': u}
		row.update(analytic_columns(cfg, u, results))
		row.update(mc_columns(results, u))
		row.update(tail_columns(process, results, u, analytic_tail_upper(cfg, u)))
		row.update(agreement_columns(cfg, row, results, u))
		rows.append(row)
	summary = _mc_summary(results)
	rep = _report(cfg, 'compare', rows, summary,
	              ('level', 'analytic_cont', 'mc_cont_up', 'analytic_disc', 'mc_disc_up', 'compensator_up', 'agree'))
	rep.summary['agreed'] = rep.agreed
	return rep


async def cmd_tail(cfg, workers=1):
	"""Report bounds on the tail of the maximum and its empirical estimate at every level."""
	results = await _simulate(cfg, workers)
	process = cfg.process()
	rows = []
	for u in cfg.levels:
		row = {'level': u}
		row.update(tail_columns(process, results, u, analytic_tail_upper(cfg, u)))
		rows.append(row)
	summary = _mc_summary(results)
	summary['tail_ok'] = all(r['tail_ok'] for r in rows)
	return _report(cfg, 'tail', rows, summary,
	               ('level', 'p_start', 'tail_lower', 'tail_empirical', 'tail_upper', 'tail_upper_empirical', 'tail_ok'))


async def cmd_validate(cfg, workers=1):
	"""Check the smooth part's covariance on ``(0, T]``."""
	if cfg.kind == 'pdmp':
		raise config.ConfigError('kind', 'a PDMP has no spectral model to validate')
	diag = cfg.model().validate(cfg.T)
	row = diag._asdict()
	row['message'] = str(diag)
	return _report(cfg, 'validate', [row], {'passed': diag.passed}, ('passed', 'max_ratio', 'tau', 'gamma'))


COMMANDS = {
	'analytic': cmd_analytic,
	'simulate': cmd_simulate,
	'compare': cmd_compare,
	'tail': cmd_tail,
	'validate': cmd_validate,
}


def cli_parser():
	"""Return an :mod:`argparse`-like parser for crossings-lab's command-line options."""
	PROG_VERSION = f'%(prog)s {VERSION}'
	COPYRIGHT = '''Copyright © 2026 The crossings-lab developers.
	This is free software; see the source for copying conditions.
	There is NO warranty; not even for MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.'''

	parser = ArgumentParser(prog='crossings-lab',
	                        description='Level crossings of smooth-plus-jump processes: Rice formulas and Monte Carlo')
	parser.add_argument('command', choices=tuple(COMMANDS),
	                    help='''what to compute: closed forms ('analytic'), Monte Carlo estimates ('simulate'),
	                    both with agreement flags ('compare'), maximum-tail bounds ('tail'),
	                    or covariance diagnostics ('validate')''')
	parser.add_argument('config', metavar='CONFIG',
	                    help='JSON experiment configuration')

	parser.add_argument('-o', '--out', metavar='DIR',
	                    help='write reports into DIR instead of the configured output directory')
	parser.add_argument('-s', '--seed', metavar='N', type=int,
	                    help='override the configured master seed')
	parser.add_argument('-r', '--reps', metavar='N', type=int,
	                    help='override the configured number of replications')
	parser.add_argument('-j', '--threads', metavar='N', type=positive_int,
	                    default=os.environ.get(THREADS_ENV, '1'),
	                    help=f'run replications in N worker processes (default: ${THREADS_ENV} or 1)')

	parser.add_argument('-v', '--verbose', action='store_true',
	                    help='print debugging details')
	parser.add_argument('-q', '--quiet', action='count', default=0,
	                    help='do not print the result table, specify twice to supress warnings as well')
	vcopts = parser.add_argument_group('version and copyright')
	vcopts.add_argument('-V', '--version', action='version', version=PROG_VERSION,
	                    help='Print version')
	vcopts.add_argument('--copyright', action='version', version=COPYRIGHT,
	                    help='Print copyright information')
	return parser


def cli_main(argv):
	"""
	Parse command-line arguments from `argv` and run the selected command.

	:returns: exit status: 0 on success, 1 on usage or configuration errors,
		2 when ``compare`` finds a disagreement, 3 on runtime failures
	"""
	try:
		args = cli_parser().parse_args(args=argv)
	except SystemExit as e:
		return e.code
	setup_logging(args.verbose, args.quiet)
	try:
		cfg = config.load_config(args.config).with_overrides(output=args.out, seed=args.seed, reps=args.reps)
	except (config.ConfigError, OSError) as e:
		print('Error:', e, file=sys.stderr)
		return EXIT_USAGE
	try:
		rep = asyncio.run(COMMANDS[args.command](cfg, args.threads))
		rep.write(cfg.output)
	except config.ConfigError as e:
		print('Error:', e, file=sys.stderr)
		return EXIT_USAGE
	except Exception as e:
		print('Error:', e, file=sys.stderr)
		return EXIT_RUNTIME
	if not args.quiet:
		print(rep.format_table())
	if args.command == 'compare' and not rep.agreed:
		bad = [r['level'] for r in rep.rows if r['agree'] is False]
		print('Disagreement at level(s):', *bad, file=sys.stderr)
		return EXIT_DISAGREE
	return EXIT_OK


def main():
	"""Call :func:`.cli_main` with :data:`sys.argv`."""
	return cli_main(sys.argv[1:])

if __name__ == '__main__':
	sys.exit(main())
