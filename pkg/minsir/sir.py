"""
Exact law of the SIR |b|^2 / sum_j |c_j|^2 with a kappa-mu shadowed desired link and N
independent, non-identical kappa-mu shadowed interferers.

The interferer sum is expanded around the scale theta_1 of one distinguished interferer
(the reference), and the desired link is expanded around its own theta. Every term is then a
ratio of two gamma variables, which regroups into E_D series in the variables

    t = theta_1 z / (theta + theta_1 z),         1 - t = theta / (theta + theta_1 z),
    t w,            w = (lambda - theta) / lambda,
    (1 - t)(theta_j - theta_1) / theta_j        for j != reference,
    (1 - t)(lambda_j - theta_1) / lambda_j      for every j.

Choosing the interferer with the smallest theta as reference keeps all of them in [0, 1).
"""
import logging
import math
from typing import Literal, Optional

import numpy as np
from scipy import optimize
from scipy.special import betainc, gammaln

from .exceptions import InvalidParam, BracketFailure
from .models import KappaMuShadowedParams, SirModel, GammaApprox, TruncationControl
from .special import lauricella_ed


__all__ = ['SIR_CONTROL', 'sir_cdf', 'sir_ccdf', 'sir_pdf', 'sir_cdf_inverse',
           'gamma_moment_match', 'gamma_shape_derivative_kappa', 'sir_cdf_betaprime']

logger = logging.getLogger(__name__)

SIR_CONTROL = TruncationControl(per_variable_cap=20_000)

Form = Literal['auto', 'cdf', 'ccdf']


class _Expansion:
    """The z-dependent arguments and constants shared by the CDF, CCDF and PDF series."""

    def __init__(self, model: SirModel, z: float, reference: Optional[int]):
        if reference is None:
            reference = int(np.argmin([i.theta for i in model.interferers]))
        if not 0 <= reference < model.n_interferers:
            raise InvalidParam(f'`reference` must index one of the {model.n_interferers} interferers.')
        sig = model.signal
        ref = model.interferers[reference]
        self.mu, self.m = sig.mu, sig.m
        self.mu_sum = model.interferer_mu_sum
        theta, lam, theta1 = sig.theta, sig.lam, ref.theta

        self.t = theta1 * z / (theta + theta1 * z)
        self.tc = theta / (theta + theta1 * z)
        self.tw = self.t * (lam - theta) / lam

        self.b_int, self.x_int = [], []
        for j, itf in enumerate(model.interferers):
            if j != reference:
                self.b_int.append(itf.mu - itf.m)
                self.x_int.append(self.tc * (itf.theta - theta1) / itf.theta)
        for itf in model.interferers:
            self.b_int.append(itf.m)
            self.x_int.append(self.tc * (itf.lam - theta1) / itf.lam)

        self.log_c = self.m * math.log(theta / lam) + sum(
            (i.mu - i.m) * math.log(theta1 / i.theta) + i.m * math.log(theta1 / i.lam)
            for i in model.interferers)
        self.log_power = (self.mu * math.log(self.t) if self.t > 0 else -math.inf) \
                         + self.mu_sum * math.log(self.tc)

    @property
    def x_max(self) -> float:
        return max(map(abs, self.x_int), default=0.0)

    @property
    def rho_cdf(self) -> float:
        return self.t + self.x_max

    @property
    def rho_ccdf(self) -> float:
        return max(self.tc, self.x_max) + self.tw


def _cdf_series(e: _Expansion, ctl: TruncationControl) -> float:
    """F(z): prefactor with 1/Gamma(mu + 1), E_D of 2N + 1 variables, k = 2."""
    a = e.mu + e.mu_sum
    log_pref = e.log_c + gammaln(a) - gammaln(e.mu + 1) - gammaln(e.mu_sum) + e.log_power
    res = lauricella_ed(2, a, [1.0, e.m, *e.b_int], e.mu + 1, e.mu_sum,
                        [e.t, e.tw, *e.x_int], ctl)
    return math.exp(log_pref) * res.value


def _ccdf_series(e: _Expansion, ctl: TruncationControl) -> float:
    """1 - F(z): prefactor with 1/Gamma(sum mu_i + 1), the shadowing variable under (mu)."""
    a = e.mu + e.mu_sum
    log_pref = e.log_c + gammaln(a) - gammaln(e.mu_sum + 1) - gammaln(e.mu) + e.log_power
    res = lauricella_ed(1 + len(e.x_int), a, [1.0, *e.b_int, e.m], e.mu_sum + 1, e.mu,
                        [e.tc, *e.x_int, e.tw], ctl)
    return math.exp(log_pref) * res.value


def _clip(p: float) -> float:
    return min(max(p, 0.0), 1.0)


def sir_cdf(model: SirModel, z: float, ctl: TruncationControl = SIR_CONTROL,
            reference: Optional[int] = None, form: Form = 'auto') -> float:
    """
    CDF of the SIR. With form='auto' the series with the smaller convergence ratio is
    summed: the direct CDF series for small z, one minus the CCDF series for large z.
    :param model:       SIR model
    :param z:           Threshold, z >= 0
    :param ctl:         Truncation control
    :param reference:   Index of the distinguished interferer, defaults to the smallest theta
    :param form:        'auto', 'cdf' or 'ccdf'
    :return:            float in [0, 1]
    """
    if z < 0:
        raise InvalidParam(f'The SIR CDF takes z >= 0, got {z}.')
    if z == 0:
        return 0.0
    if math.isinf(z):
        return 1.0
    e = _Expansion(model, z, reference)
    if form == 'cdf' or (form == 'auto' and e.rho_cdf <= e.rho_ccdf):
        return _clip(_cdf_series(e, ctl))
    return _clip(1.0 - _ccdf_series(e, ctl))


def sir_ccdf(model: SirModel, z: float, ctl: TruncationControl = SIR_CONTROL,
             reference: Optional[int] = None, form: Form = 'auto') -> float:
    """1 - sir_cdf(), summed from whichever series converges faster unless `form` says otherwise."""
    if z < 0:
        raise InvalidParam(f'The SIR CCDF takes z >= 0, got {z}.')
    if z == 0:
        return 1.0
    if math.isinf(z):
        return 0.0
    e = _Expansion(model, z, reference)
    if form == 'ccdf' or (form == 'auto' and e.rho_ccdf < e.rho_cdf):
        return _clip(_ccdf_series(e, ctl))
    return _clip(1.0 - _cdf_series(e, ctl))


def sir_pdf(model: SirModel, z: float, ctl: TruncationControl = SIR_CONTROL,
            reference: Optional[int] = None) -> float:
    """
    Density of the SIR, an E_D series of 2N variables with k = 1.
    :param model:       SIR model
    :param z:           Point of evaluation, z > 0
    :param ctl:         Truncation control
    :param reference:   Index of the distinguished interferer
    :return:            float
    """
    if z <= 0:
        raise InvalidParam(f'The SIR density takes z > 0, got {z}.')
    e = _Expansion(model, z, reference)
    a = e.mu + e.mu_sum
    log_pref = e.log_c + gammaln(a) - gammaln(e.mu) - gammaln(e.mu_sum) - math.log(z) + e.log_power
    res = lauricella_ed(1, a, [e.m, *e.b_int], e.mu, e.mu_sum, [e.tw, *e.x_int], ctl)
    return max(math.exp(log_pref) * res.value, 0.0)


def sir_cdf_inverse(model: SirModel, p: float, ctl: TruncationControl = SIR_CONTROL,
                    reference: Optional[int] = None) -> float:
    """
    Quantile z* with F(z*) = p: geometric bracketing from z = 1, then bisection.
    :param model:       SIR model
    :param p:           Probability in (0, 1)
    :param ctl:         Truncation control
    :param reference:   Index of the distinguished interferer
    :return:            float
    """
    if not 0 < p < 1:
        raise InvalidParam(f'`p` must lie in (0, 1), got {p}.')

    def gap(z: float) -> float:
        return sir_cdf(model, z, ctl, reference) - p

    lo = hi = 1.0
    if gap(1.0) < 0:
        for _ in range(1100):
            lo, hi = hi, hi * 2
            if gap(hi) >= 0:
                break
        else:
            raise BracketFailure(f'F(z) stays below {p} up to z = {hi:.3g}.')
    else:
        for _ in range(1100):
            lo, hi = lo / 2, lo
            if gap(lo) <= 0:
                break
        else:
            raise BracketFailure(f'F(z) stays above {p} down to z = {lo:.3g}.')
    logger.debug('quantile %.6g bracketed in [%.6g, %.6g]', p, lo, hi)

    z = optimize.bisect(gap, lo, hi, xtol=1e-12 * min(1.0, lo), maxiter=2000)
    resid = gap(z)
    if abs(resid) > 1e-10:
        raise BracketFailure(f'Bisection ended at z = {z:.12g} with |F(z) - p| = {abs(resid):.3g}.')
    return z


def gamma_moment_match(params: KappaMuShadowedParams) -> GammaApprox:
    """
    Gamma variable with the same mean and variance:
    shape = m mu (1 + kappa)^2 / (m + mu kappa^2 + 2 m kappa), scale = mean / shape.
    :param params:  Link parameters
    :return:        GammaApprox
    """
    k, mu, m = params.kappa, params.mu, params.m
    shape = m * mu * (1 + k) ** 2 / (m + mu * k ** 2 + 2 * m * k)
    return GammaApprox(shape=shape, scale=params.mean_power / shape)


def gamma_shape_derivative_kappa(params: KappaMuShadowedParams) -> float:
    """d(shape)/d(kappa) = 2 kappa (1 + kappa) m mu (m - mu) / (m + 2 kappa m + kappa^2 mu)^2"""
    k, mu, m = params.kappa, params.mu, params.m
    return 2 * k * (1 + k) * m * mu * (m - mu) / (m + 2 * k * m + k ** 2 * mu) ** 2


def sir_cdf_betaprime(signal_approx: GammaApprox, interferer_approx: GammaApprox, z: float) -> float:
    """
    Beta-prime approximation of the single-interferer SIR CDF: with y = z phi_2 / psi_2,
    P(Gamma(psi_1, 1) / Gamma(phi_1, 1) <= y) = I_{y / (1 + y)}(psi_1, phi_1).
    :param signal_approx:       Moment-matched desired link
    :param interferer_approx:   Moment-matched interferer
    :param z:                   Threshold, z >= 0
    :return:                    float in [0, 1]
    """
    if z < 0:
        raise InvalidParam(f'The SIR CDF takes z >= 0, got {z}.')
    if z == 0:
        return 0.0
    y = z * interferer_approx.scale / signal_approx.scale
    return float(betainc(signal_approx.shape, interferer_approx.shape, y / (1 + y)))
