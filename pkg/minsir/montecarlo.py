"""
Seeded simulation of the SIR, its minimum over K users, and the outage and rate of the
cognitive-radio links.

Trials are drawn in blocks of cfg.block_size. Block i draws from its own generator seeded by
SeedSequence(cfg.seed, spawn_key=(i,)), and blocks are concatenated in index order, so the
output is bit-identical for any cfg.parallel_chunks.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

import numpy as np

from .exceptions import InvalidParam
from .fading import kmu_shadowed_samples
from .models import SirModel, McConfig, PowerPolicyProblem, RateProblem, OutageRateEstimate, \
    TruncationControl
from .policy import ergodic_multicast_rate, effective_secondary_power
from .sir import SIR_CONTROL


__all__ = ['block_rng', 'simulate_sir', 'simulate_min_sir', 'simulate_outage_and_rate',
           'empirical_cdf', 'rate_convergence_gap']

logger = logging.getLogger(__name__)

BlockFn = Callable[[np.random.Generator, int], np.ndarray]


def block_rng(seed: int, index: int) -> np.random.Generator:
    """Generator of one block, independent of every other (seed, index) pair."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _run_blocks(draw: BlockFn, cfg: McConfig) -> np.ndarray:
    sizes = [cfg.block_size] * (cfg.trials // cfg.block_size)
    if cfg.trials % cfg.block_size:
        sizes.append(cfg.trials % cfg.block_size)

    def job(index: int) -> np.ndarray:
        return draw(block_rng(cfg.seed, index), sizes[index])

    logger.debug('%d trials in %d blocks over %d workers', cfg.trials, len(sizes),
                 cfg.parallel_chunks)
    if cfg.parallel_chunks == 1:
        parts = [job(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=cfg.parallel_chunks) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    return np.concatenate(parts, axis=0)


def _sir_draws(model: SirModel, rng: np.random.Generator, shape) -> np.ndarray:
    signal = kmu_shadowed_samples(model.signal, rng, shape)
    interference = sum(kmu_shadowed_samples(i, rng, shape) for i in model.interferers)
    return signal / interference


def simulate_sir(model: SirModel, cfg: McConfig) -> np.ndarray:
    """
    cfg.trials draws of |b|^2 / sum_j |c_j|^2.
    :param model:   SIR model
    :param cfg:     Monte-Carlo settings
    :return:        ndarray of shape (cfg.trials,)
    """
    return _run_blocks(lambda rng, size: _sir_draws(model, rng, size), cfg)


def simulate_min_sir(model: SirModel, k: int, cfg: McConfig) -> np.ndarray:
    """
    cfg.trials draws of the minimum of k independent SIRs.
    :param model:   SIR model of each user
    :param k:       Number of users
    :param cfg:     Monte-Carlo settings
    :return:        ndarray of shape (cfg.trials,)
    """
    if int(k) != k or k < 1:
        raise InvalidParam(f'`k` must be a positive integer, got {k}.')
    return _run_blocks(lambda rng, size: _sir_draws(model, rng, (size, int(k))).min(axis=1), cfg)


def simulate_outage_and_rate(policy_problem: PowerPolicyProblem, rate_problem: RateProblem,
                             p_s: float, cfg: McConfig,
                             secondary_threshold: Optional[float] = None) -> OutageRateEstimate:
    """
    Empirical outage of the weakest primary and secondary receivers and the empirical
    per-user multicast rate when the SU-Tx sends at p_s.
    :param policy_problem:      Primary side, M receivers at threshold gamma0
    :param rate_problem:        Secondary side, L receivers
    :param p_s:                 Secondary power, linear, > 0
    :param cfg:                 Monte-Carlo settings
    :param secondary_threshold: SIR threshold of a secondary outage, defaults to gamma0
    :return:                    OutageRateEstimate
    """
    if p_s <= 0:
        raise InvalidParam(f'`p_s` must be positive, got {p_s}.')
    threshold = policy_problem.gamma0 if secondary_threshold is None else secondary_threshold
    primary_scale = policy_problem.p_primary / p_s
    secondary_scale = p_s / rate_problem.p_primary
    m_users, l_users = policy_problem.m_users, rate_problem.l_users

    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        primary = primary_scale * _sir_draws(policy_problem.primary_model, rng,
                                             (size, m_users)).min(axis=1)
        secondary = secondary_scale * _sir_draws(rate_problem.secondary_model, rng,
                                                 (size, l_users)).min(axis=1)
        return np.column_stack((primary <= policy_problem.gamma0, secondary <= threshold,
                                np.log2(1 + secondary)))

    out = _run_blocks(draw, cfg)
    est = OutageRateEstimate(primary_outage=float(out[:, 0].mean()),
                             secondary_outage=float(out[:, 1].mean()),
                             rate_per_user=float(out[:, 2].mean()), trials=cfg.trials)
    logger.debug('simulated at p_s=%.6g: %s', p_s, est)
    return est


def empirical_cdf(samples: np.ndarray, z: Sequence[float]) -> np.ndarray:
    """
    Fraction of samples <= each z.
    :param samples: Draws
    :param z:       Evaluation points
    :return:        ndarray
    """
    ordered = np.sort(np.asarray(samples))
    return np.searchsorted(ordered, np.asarray(z, dtype=float), side='right') / ordered.size


def rate_convergence_gap(problem: RateProblem, l_values: Sequence[int], cfg: McConfig,
                         ctl: TruncationControl = SIR_CONTROL) -> dict[int, float]:
    """
    |asymptotic - simulated| per-user rate for each L. The simulated rate is
    E[log2(1 + c min_l g_l / beta_l)] with c = P_s / P_p.
    :param problem:     Rate problem, its l_users is replaced by each L in turn
    :param l_values:    Receiver counts, each >= 2
    :param cfg:         Monte-Carlo settings
    :param ctl:         Truncation control
    :return:            dict L -> gap in bits/s/Hz
    """
    c = effective_secondary_power(problem, ctl) / problem.p_primary
    gaps = {}
    for l_users in l_values:
        sized = problem.model_copy(update={'l_users': int(l_users)})
        asymptotic = ergodic_multicast_rate(sized, ctl) / l_users
        simulated = float(np.mean(np.log2(1 + c * simulate_min_sir(problem.secondary_model,
                                                                   l_users, cfg))))
        gaps[int(l_users)] = abs(asymptotic - simulated)
        logger.debug('L=%d: asymptotic %.6f, simulated %.6f', l_users, asymptotic, simulated)
    return gaps
