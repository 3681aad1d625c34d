import logging
import math

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .exceptions import InvalidParam, QuadratureFailure
from .models import KappaMuShadowedParams, TruncationControl
from .special import DEFAULT_CONTROL, log_confluent_1f1


__all__ = ['kmu_shadowed_pdf', 'kmu_shadowed_cdf', 'kmu_shadowed_sample', 'kmu_shadowed_samples']

logger = logging.getLogger(__name__)

# past this 1F1 argument the leading asymptotic term misses by far less than the underflow margin
UNDERFLOW_ARG = 1000.0
UNDERFLOW_LOG = -800.0


def _terms_needed(z: float) -> int:
    # the 1F1 series peaks near index z and has settled a few widths sqrt(z) later
    return int(z + 12 * math.sqrt(z) + 40)


def kmu_shadowed_pdf(params: KappaMuShadowedParams, x: float,
                     ctl: TruncationControl = DEFAULT_CONTROL) -> float:
    """
    Density x^(mu-1) / (theta^(mu-m) lambda^m Gamma(mu)) e^(-x/theta) 1F1(m; mu; x/theta - x/lambda).
    The 1F1 is carried in log form so large x never overflows, and the series cap is raised
    to follow the argument.
    :param params:  Link parameters
    :param x:       Point of evaluation, x >= 0
    :param ctl:     Truncation control for the 1F1 series
    :return:        float
    """
    mu, m = params.mu, params.m
    theta, lam = params.theta, params.lam
    if x < 0:
        raise InvalidParam(f'The density is defined for x >= 0, got {x}.')
    if x == 0:
        if mu > 1:
            return 0.0
        if mu == 1:
            return theta ** (m - 1) * lam ** -m
        raise InvalidParam(f'The density is infinite at x = 0 when mu = {mu} < 1.')

    arg = x / theta - x / lam
    log_front = (mu - 1) * math.log(x) - (mu - m) * math.log(theta) - m * math.log(lam) \
        - gammaln(mu) - x / theta
    if arg > UNDERFLOW_ARG:
        # 1F1(m; mu; z) ~ Gamma(mu) / Gamma(m) e^z z^(m - mu)
        log_hyp = gammaln(mu) - gammaln(m) + arg + (m - mu) * math.log(arg)
        if log_front + log_hyp < UNDERFLOW_LOG:
            return 0.0
    if arg > 0 and ctl.per_variable_cap < _terms_needed(arg):
        ctl = ctl.model_copy(update={'per_variable_cap': _terms_needed(arg)})
    log_hyp, _, _ = log_confluent_1f1(m, mu, arg, ctl)
    return math.exp(log_front + log_hyp)


def kmu_shadowed_cdf(params: KappaMuShadowedParams, x: float,
                     ctl: TruncationControl = DEFAULT_CONTROL) -> float:
    """
    CDF by adaptive quadrature of the density.
    :param params:  Link parameters
    :param x:       Upper limit, may be math.inf
    :param ctl:     Truncation control for the density
    :return:        float
    """
    if x <= 0:
        return 0.0
    val, err = integrate.quad(lambda u: kmu_shadowed_pdf(params, u, ctl), 0, x, limit=200,
                              epsabs=1e-11, epsrel=1e-10)
    if err > 0.5e-7:
        logger.warning('density quadrature up to %g has error estimate %.3g', x, err)
    if err > 1e-7:
        raise QuadratureFailure(f'Density quadrature up to {x} has error estimate {err:.3g}.')
    return min(max(val, 0.0), 1.0)


def kmu_shadowed_samples(params: KappaMuShadowedParams, rng: np.random.Generator,
                         size=None) -> np.ndarray:
    """
    Draws by the gamma-Poisson-gamma mixture: s ~ Gamma(m, 1/m), p ~ Poisson(mu kappa s),
    x ~ Gamma(mu + p, theta). Works for non-integer mu and m alike.
    :param params:  Link parameters
    :param rng:     Seeded numpy generator owned by the caller
    :param size:    Output shape
    :return:        ndarray
    """
    s = rng.gamma(params.m, 1.0 / params.m, size)
    p = rng.poisson(params.mu * params.kappa * s)
    return rng.gamma(params.mu + p, params.theta)


def kmu_shadowed_sample(params: KappaMuShadowedParams, rng: np.random.Generator) -> float:
    """One draw, see kmu_shadowed_samples()"""
    return float(kmu_shadowed_samples(params, rng, 1)[0])
