"""
minsir command line. Every subcommand reads a TOML run configuration and writes one CSV whose
leading '#' lines echo the fully resolved configuration.

    minsir min-cdf  --config fig1.toml --out fig1.csv
    minsir power    --config fig2.toml --trials 200000
    minsir rate     --config fig10.toml --seed 11
    minsir simulate --config fig4.toml --quiet

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
import argparse
import csv
import json
import logging
import math
import sys
from typing import Callable, Optional, Sequence, TextIO

import numpy as np
import pydantic

from . import __version__
from .config import RunConfig, load_config
from .evt import exact_min_cdf, asymptotic_min_law, weibull_min_cdf
from .exceptions import ValidationError, NumericError
from .models import McConfig
from .montecarlo import simulate_min_sir, simulate_outage_and_rate, empirical_cdf
from .policy import allocate_power, effective_secondary_power, ergodic_multicast_rate
from .utils import linear_to_db


logger = logging.getLogger('minsir')

Table = tuple[list[str], list[list[float]]]


def cmd_min_cdf(cfg: RunConfig, mc: McConfig) -> Table:
    model, k = cfg.sir.model, cfg.system.k_users
    law = asymptotic_min_law(model, k) if k >= 2 else None
    grid = cfg.sweep.values
    empirical = empirical_cdf(simulate_min_sir(model, k, mc), grid) if cfg.montecarlo.enabled \
        else [math.nan] * len(grid)
    rows = []
    for z, emp in zip(grid, empirical):
        logger.info('z=%g', z)
        rows.append([z, exact_min_cdf(model, k, z),
                     weibull_min_cdf(law, z) if law else math.nan, float(emp)])
    return ['z', 'exact_cdf', 'asymptotic_cdf', 'empirical_cdf'], rows


def cmd_power(cfg: RunConfig, mc: McConfig) -> Table:
    rows = []
    for value in cfg.sweep.values:
        logger.info('%s=%g', cfg.sweep.axis, value)
        problem = cfg.policy_problem(cfg.system_at(value))
        alloc = allocate_power(problem)
        empirical = math.nan
        if cfg.montecarlo.enabled:
            weakest = simulate_min_sir(problem.primary_model, problem.m_users, mc)
            empirical = float(np.mean(problem.p_primary / alloc.ps_bar * weakest <= problem.gamma0))
        rows.append([value, alloc.a_m, linear_to_db(alloc.ps_plus), linear_to_db(alloc.ps_bar),
                     alloc.asymptotic_outage, empirical])
    return ['sweep_value', 'a_M', 'Ps_plus_dB', 'Ps_bar_dB', 'asymptotic_outage_at_Ps_bar',
            'empirical_outage'], rows


def cmd_rate(cfg: RunConfig, mc: McConfig) -> Table:
    rows = []
    for value in cfg.sweep.values:
        logger.info('%s=%g', cfg.sweep.axis, value)
        problem = cfg.rate_problem(cfg.system_at(value))
        c = effective_secondary_power(problem) / problem.p_primary
        a_l = asymptotic_min_law(problem.secondary_model, problem.l_users).scale
        quadrature = ergodic_multicast_rate(problem) / problem.l_users
        simulated = math.nan
        if cfg.montecarlo.enabled:
            weakest = simulate_min_sir(problem.secondary_model, problem.l_users, mc)
            simulated = float(np.mean(np.log2(1 + c * weakest)))
        rows.append([value, a_l, quadrature, simulated])
    return ['sweep_value', 'a_L', 'rate_per_user_quadrature', 'rate_per_user_mc'], rows


def cmd_simulate(cfg: RunConfig, mc: McConfig) -> Table:
    rows = []
    for value in cfg.sweep.values:
        logger.info('%s=%g', cfg.sweep.axis, value)
        system = cfg.system_at(value)
        problem = cfg.policy_problem(system)
        ps_bar = allocate_power(problem).ps_bar
        est = simulate_outage_and_rate(problem, cfg.rate_problem(system), ps_bar, mc,
                                       system.secondary_threshold)
        rows.append([value, linear_to_db(ps_bar), est.primary_outage, est.secondary_outage,
                     est.rate_per_user])
    return ['sweep_value', 'Ps_bar_dB', 'primary_outage', 'secondary_outage',
            'rate_per_user_mc'], rows


COMMANDS: dict[str, Callable[[RunConfig, McConfig], Table]] = {
    'min-cdf': cmd_min_cdf,
    'power': cmd_power,
    'rate': cmd_rate,
    'simulate': cmd_simulate,
}


def _fmt(val: float) -> str:
    return format(val, '.12g')


def write_csv(stream: TextIO, command: str, cfg: RunConfig, mc: McConfig, table: Table):
    """
    Writes the provenance block and the table.
    :param stream:  Open text stream
    :param command: Subcommand name
    :param cfg:     Resolved configuration
    :param mc:      Monte-Carlo settings after command-line overrides
    :param table:   (header, rows)
    """
    header, rows = table
    stream.write(f'# minsir {__version__} {command}\n')
    resolved = {'config': cfg.model_dump(mode='json'), 'montecarlo': mc.model_dump(mode='json')}
    if cfg.primary is not None or cfg.secondary is not None:
        resolved['gamma0'] = _fmt(cfg.system.target_sir)
    for line in json.dumps(resolved, sort_keys=True, indent=1).splitlines():
        stream.write(f'# {line}\n')
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', required=True, help='TOML run configuration')
    common.add_argument('--out', help='CSV destination, defaults to the config output or stdout')
    common.add_argument('--seed', type=int, help='Monte-Carlo seed, overrides the config')
    common.add_argument('--trials', type=int, help='Monte-Carlo trials, overrides the config')
    noise = common.add_mutually_exclusive_group()
    noise.add_argument('--quiet', action='store_true', help='Only log warnings and errors')
    noise.add_argument('--verbose', action='store_true', help='Log series and quadrature details')

    parser = argparse.ArgumentParser(prog='minsir', description='Minimum-SIR statistics under '
                                     'kappa-mu shadowed fading')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('min-cdf', parents=[common], help='Exact, asymptotic and simulated CDF of the '
                   'minimum SIR over a z grid')
    sub.add_parser('power', parents=[common], help='SU-Tx power policy across a sweep')
    sub.add_parser('rate', parents=[common], help='Per-user ergodic multicast rate across a sweep')
    sub.add_parser('simulate', parents=[common], help='Simulated outage and rate across a sweep')
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING if args.quiet else logging.DEBUG if args.verbose else logging.INFO
    logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s', stream=sys.stderr)

    try:
        cfg = load_config(args.config)
        cfg.require(args.command)
        mc = cfg.mc_config(args.seed, args.trials)
        table = COMMANDS[args.command](cfg, mc)
    except (pydantic.ValidationError, ValidationError) as e:
        print(f'{type(e).__name__}: {e}', file=sys.stderr)
        return 2
    except NumericError as e:
        print(f'{type(e).__name__}: {e}', file=sys.stderr)
        return 3

    out = args.out or cfg.output
    if out:
        with open(out, 'w', newline='', encoding='utf-8') as f:
            write_csv(f, args.command, cfg, mc, table)
        logger.info('wrote %s', out)
    else:
        write_csv(sys.stdout, args.command, cfg, mc, table)
    return 0


if __name__ == '__main__':
    sys.exit(main())
