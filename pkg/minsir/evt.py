import logging
import math
from typing import Optional, Sequence

import numpy as np

from .exceptions import InvalidParam
from .models import SirModel, WeibullMinLaw, ConvergenceReport, TruncationControl
from .sir import SIR_CONTROL, sir_cdf, sir_pdf, sir_cdf_inverse
from .utils import log_grid


__all__ = ['exact_min_cdf', 'exact_min_pdf', 'asymptotic_min_law', 'weibull_min_cdf',
           'weibull_min_pdf', 'convergence_diagnostic']

logger = logging.getLogger(__name__)


def _check_k(k: int, least: int = 1):
    if int(k) != k or k < least:
        raise InvalidParam(f'The number of users must be an integer >= {least}, got {k}.')


def exact_min_cdf(model: SirModel, k: int, z: float, ctl: TruncationControl = SIR_CONTROL) -> float:
    """
    CDF of the minimum of k i.i.d. SIRs, 1 - (1 - F(z))^k.
    :param model:   SIR model of each user
    :param k:       Number of users
    :param z:       Threshold, z >= 0
    :param ctl:     Truncation control
    :return:        float in [0, 1]
    """
    _check_k(k)
    f = sir_cdf(model, z, ctl)
    if k == 1 or f in (0.0, 1.0):
        return f
    return -math.expm1(k * math.log1p(-f))


def exact_min_pdf(model: SirModel, k: int, z: float, ctl: TruncationControl = SIR_CONTROL) -> float:
    """Density of the minimum of k i.i.d. SIRs, k f(z) (1 - F(z))^(k - 1)."""
    _check_k(k)
    dens = sir_pdf(model, z, ctl)
    if k == 1:
        return dens
    return k * dens * (1.0 - sir_cdf(model, z, ctl)) ** (k - 1)


def asymptotic_min_law(model: SirModel, k: int, ctl: TruncationControl = SIR_CONTROL) -> WeibullMinLaw:
    """
    Weibull limit of the minimum of k SIRs. The shape is the mu of the desired link only,
    the scale is the 1/k quantile of the SIR.
    :param model:   SIR model of each user
    :param k:       Number of users, k >= 2
    :param ctl:     Truncation control
    :return:        WeibullMinLaw
    """
    _check_k(k, 2)
    scale = sir_cdf_inverse(model, 1.0 / k, ctl)
    logger.debug('Weibull min law K=%d: shape %g, scale %.10g', k, model.signal.mu, scale)
    return WeibullMinLaw(shape=model.signal.mu, scale=scale, k_users=k)


def weibull_min_cdf(law: WeibullMinLaw, z: float) -> float:
    if z <= 0:
        return 0.0
    return -math.expm1(-(z / law.scale) ** law.shape)


def weibull_min_pdf(law: WeibullMinLaw, z: float) -> float:
    if z <= 0:
        raise InvalidParam(f'The Weibull density is taken at z > 0, got {z}.')
    u = z / law.scale
    return law.shape / law.scale * u ** (law.shape - 1) * math.exp(-u ** law.shape)


def convergence_diagnostic(model: SirModel, k_list: Sequence[int],
                           z_grid: Optional[Sequence[float]] = None,
                           ctl: TruncationControl = SIR_CONTROL) -> ConvergenceReport:
    """
    Sup-norm distance between the exact minimum CDF and its Weibull limit for each K, and
    the least-squares slope of log e(K) against log K.
    :param model:   SIR model of each user
    :param k_list:  Increasing user counts, at least three
    :param z_grid:  Evaluation points. Defaults per K to 200 log-spaced points in
                    (scale/100, 5 scale).
    :param ctl:     Truncation control
    :return:        ConvergenceReport
    """
    k_list = [int(k) for k in k_list]
    if len(k_list) < 3 or any(b <= a for a, b in zip(k_list, k_list[1:])):
        raise InvalidParam('`k_list` must hold at least three strictly increasing values.')

    errors = []
    for k in k_list:
        law = asymptotic_min_law(model, k, ctl)
        grid = z_grid if z_grid is not None else log_grid(law.scale / 100, 5 * law.scale)
        err = max(abs(exact_min_cdf(model, k, z, ctl) - weibull_min_cdf(law, z)) for z in grid)
        logger.debug('K=%d: sup error %.6g', k, err)
        errors.append(float(err))

    slope, _ = np.polyfit(np.log(k_list), np.log(errors), 1)
    return ConvergenceReport(k_values=tuple(k_list), errors=tuple(errors), slope=float(slope))
