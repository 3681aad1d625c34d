"""
Truncated hypergeometric series: the confluent 1F1 and the multi-variable E_D series
(a Lauricella-type sum whose first k indices share one Pochhammer denominator and whose
remaining indices share another).

Every term is carried as log-magnitude plus sign so that the factorial growth of
(a)_{p1+...+pn} never overflows before it is balanced by the factorials below it.
"""
import logging
import math
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from .exceptions import InvalidParam, NonConvergent, OutOfConvergenceRegion, DimensionTooLarge
from .models import TruncationControl, SeriesResult
from .utils import is_nonpositive_integer


__all__ = ['DEFAULT_CONTROL', 'log_pochhammer', 'confluent_1f1', 'log_confluent_1f1',
           'lauricella_ed']

logger = logging.getLogger(__name__)

DEFAULT_CONTROL = TruncationControl()


def log_pochhammer(a: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """
    log|(a)_p| and sign((a)_p) for p = 0..n, built by cumulative products so the
    series terminates naturally when a is a nonpositive integer (sign 0, log -inf).
    :param a:   Base of the rising factorial
    :param n:   Largest index
    :return:    tuple of arrays (logmag, sign), each of length n + 1
    """
    factors = a + np.arange(n, dtype=float)
    with np.errstate(divide='ignore'):
        logs = np.log(np.abs(factors))
    logmag = np.concatenate(([0.0], np.cumsum(logs)))
    sign = np.concatenate(([1.0], np.cumprod(np.sign(factors))))
    return logmag, sign


def _signed_exp(logmag: np.ndarray, sign: np.ndarray) -> np.ndarray:
    with np.errstate(over='ignore', invalid='ignore'):
        out = sign * np.exp(logmag)
    return np.where(sign == 0, 0.0, out)


def _series_1f1(a: float, b: float, z: float, ctl: TruncationControl, shift: float = 0.0) -> tuple:
    """
    Direct power series in log form, stopped at the first index whose geometric tail bound
    t_p r_p / (1 - r_p) is inside tolerance. `shift` is added to the logs before the absolute
    tolerance applies. Returns (log|sum|, sign, terms_used, log tail, stopped).
    """
    cap = ctl.per_variable_cap
    p = np.arange(cap + 1, dtype=float)
    la, sa = log_pochhammer(a, cap)
    lb, sb = log_pochhammer(b, cap)
    logz = math.log(abs(z))
    logt = la - lb + p * logz - gammaln(p + 1)
    sign = sa * sb * (np.sign(z) ** p)
    sign = np.where(np.isneginf(logt), 0.0, sign)

    scale = float(np.max(logt[sign != 0]))
    terms = _signed_exp(logt - scale, sign)
    partial = np.cumsum(terms)

    # r_p = |t_{p+1} / t_p| keeps falling once it falls with a + p > 0
    with np.errstate(divide='ignore', invalid='ignore'):
        ratio = np.abs((a + p) * z / ((b + p) * (p + 1)))
        falling = np.append(ratio[1:] <= ratio[:-1], True)
        settled = (ratio < 1) & falling & (a + p > 0)
        bound = np.where(settled, logt + np.log(ratio) - np.log1p(-ratio), np.inf)
        log_tail = np.where(sign == 0, -np.inf, bound)
        log_partial = np.log(np.abs(partial)) + scale
    log_tol = np.maximum(math.log(ctl.abs_tol) - shift, math.log(ctl.rel_tol) + log_partial)
    hits = np.flatnonzero(log_tail <= log_tol)
    stopped = hits.size > 0
    stop = int(hits[0]) if stopped else cap

    total = partial[stop]
    tail = float(log_tail[stop])
    if total == 0:
        return -math.inf, 0.0, stop + 1, tail, stopped
    return math.log(abs(total)) + scale, float(np.sign(total)), stop + 1, tail, stopped


def log_confluent_1f1(a: float, b: float, z: float,
                      ctl: TruncationControl = DEFAULT_CONTROL) -> tuple[float, float, SeriesResult]:
    """
    log|1F1(a; b; z)| and its sign. Negative arguments go through Kummer's transform
    1F1(a; b; z) = e^z 1F1(b - a; b; -z) so the summed series never alternates in z.
    :param a:   Numerator parameter
    :param b:   Denominator parameter, not a nonpositive integer
    :param z:   Argument
    :param ctl: Truncation control
    :return:    tuple (log magnitude, sign, SeriesResult)
    """
    if is_nonpositive_integer(b):
        raise InvalidParam(f'1F1 is undefined for b = {b}.')
    if z == 0:
        return 0.0, 1.0, SeriesResult(value=1.0, terms_used=1, tail_estimate=0.0, converged=True)

    if z > 0:
        shift = 0.0
        logmag, sign, used, log_tail, stopped = _series_1f1(a, b, z, ctl)
    else:
        shift = z
        logmag, sign, used, log_tail, stopped = _series_1f1(b - a, b, -z, ctl, shift)
    logmag += shift
    log_tail += shift

    value = sign * math.exp(logmag) if logmag < 709 else sign * math.inf
    tail = math.exp(log_tail) if log_tail < 709 else math.inf
    logger.debug('1F1(%g; %g; %g): %d terms, log tail %.3g', a, b, z, used, log_tail)
    if not stopped:
        raise NonConvergent(f'1F1({a}; {b}; {z}) did not settle within {ctl.per_variable_cap} terms.')
    if used > ctl.per_variable_cap:
        logger.warning('1F1(%g; %g; %g) reached its cap of %d terms with the tail inside tolerance',
                       a, b, z, ctl.per_variable_cap)
    return logmag, sign, SeriesResult(value=value, terms_used=used, tail_estimate=tail,
                                      converged=True)


def confluent_1f1(a: float, b: float, z: float,
                  ctl: TruncationControl = DEFAULT_CONTROL) -> SeriesResult:
    """
    Confluent hypergeometric function sum_p (a)_p z^p / ((b)_p p!).
    :param a:   Numerator parameter
    :param b:   Denominator parameter, not a nonpositive integer
    :param z:   Argument
    :param ctl: Truncation control
    :return:    SeriesResult
    """
    return log_confluent_1f1(a, b, z, ctl)[2]


def _group_coefficients(b: Sequence[float], x: Sequence[float], cap: int) -> np.ndarray:
    """
    Coefficients of u^R, R = 0..cap, in prod_i (1 - x_i u)^(-b_i), i.e. the sum of
    prod_i (b_i)_{p_i} x_i^{p_i} / p_i! over all index vectors with p_1 + ... = R.
    """
    out = np.zeros(cap + 1)
    out[0] = 1.0
    j = np.arange(cap + 1, dtype=float)
    for bi, xi in zip(b, x):
        if xi == 0 or bi == 0:
            continue
        lb, sb = log_pochhammer(bi, cap)
        logc = lb + j * math.log(abs(xi)) - gammaln(j + 1)
        coef = _signed_exp(logc, sb * np.sign(xi) ** j)
        out = np.convolve(out, coef)[:cap + 1]
    return out


def _layer_tables(k: int, a: float, b: list, c: float, c_prime: float, x: list, cap: int):
    """Log-magnitude and sign arrays, degree 0..cap, of every factor of a diagonal layer."""
    head = _group_coefficients(b[:k], x[:k], cap)
    tail = _group_coefficients(b[k:], x[k:], cap)
    with np.errstate(divide='ignore'):
        head = np.log(np.abs(head)), np.sign(head)
        tail = np.log(np.abs(tail)), np.sign(tail)
    return (log_pochhammer(a, cap), log_pochhammer(c, cap),
            log_pochhammer(c_prime if k < len(b) else 1.0, cap), head, tail)


def _geometric_tail(layer: float, prev: float, rho: float) -> float:
    """Majorant of the remaining layers when they shrink at least as fast as the last step."""
    ratio = rho
    if prev != 0 and layer != 0:
        ratio = max(ratio, abs(layer / prev))
    return abs(layer) * ratio / (1 - ratio) if ratio < 1 else math.inf


def lauricella_ed(k: int, a: float, b: Sequence[float], c: float, c_prime: float,
                  x: Sequence[float], ctl: TruncationControl = DEFAULT_CONTROL,
                  strict: bool = True) -> SeriesResult:
    """
    The n-fold series

        sum (a)_{p1+..+pn} prod (b_i)_{p_i} x_i^{p_i} / ((c)_{p1+..+pk} (c')_{p(k+1)+..+pn} p1!..pn!)

    summed by diagonal layers of total degree. The inner sum of each group at fixed group
    total is a coefficient of prod (1 - x_i u)^(-b_i), so a layer costs O(degree) rather than
    O(degree^(n-1)). The sweep stops at total degree ctl.per_variable_cap, which bounds every
    individual index as well. Coefficient tables start at 64 degrees and double on demand.
    :param k:       Number of leading variables under the (c) denominator
    :param a:       Shared numerator parameter
    :param b:       Per-variable numerator parameters (may be negative)
    :param c:       Denominator parameter of the leading group
    :param c_prime: Denominator parameter of the trailing group
    :param x:       Arguments, |x_i| < 1
    :param ctl:     Truncation control
    :param strict:  Raise NonConvergent instead of returning an unconverged result
    :return:        SeriesResult
    """
    b = [float(i) for i in b]
    x = [float(i) for i in x]
    n = len(b)
    if n < 1 or len(x) != n:
        raise InvalidParam('`b` and `x` must be nonempty and of equal length.')
    if not 1 <= k <= n:
        raise InvalidParam(f'`k` must lie in 1..{n}.')
    if n > ctl.max_variables:
        raise DimensionTooLarge(f'{n} summation variables exceed the limit of {ctl.max_variables}.')
    if any(abs(i) >= 1 for i in x):
        raise OutOfConvergenceRegion(f'Every |x_i| must be below 1, got {x}.')
    if is_nonpositive_integer(c) or (k < n and is_nonpositive_integer(c_prime)):
        raise InvalidParam('`c` and `c_prime` must not be nonpositive integers.')

    # joint region of the two-denominator series
    rho = max(abs(i) for i in x[:k]) + max((abs(i) for i in x[k:]), default=0.0)
    if rho >= 1:
        raise OutOfConvergenceRegion(
            f'max|x| of the two denominator groups sums to {rho:.6g} >= 1; the series diverges.')

    cap = ctl.per_variable_cap
    depth = min(cap, 64)
    tables = _layer_tables(k, a, b, c, c_prime, x, depth)

    total = 0.0
    run = 0
    prev = 0.0
    layer = 0.0
    stopped = False
    tail_estimate = math.inf
    degree = 0
    for degree in range(cap + 1):
        if degree > depth:
            depth = min(cap, 2 * depth)
            tables = _layer_tables(k, a, b, c, c_prime, x, depth)
        (lpa, spa), (lpc, spc), (lpcp, spcp), (log_head, s_head), (log_tail, s_tail) = tables
        r = np.arange(degree + 1)
        q = degree - r
        logmag = lpa[degree] - lpc[r] - lpcp[q] + log_head[r] + log_tail[q]
        sign = spa[degree] * spc[r] * spcp[q] * s_head[r] * s_tail[q]
        layer = float(np.sum(_signed_exp(logmag, sign)))
        total += layer

        run = run + 1 if abs(layer) <= ctl.tolerance(total) else 0
        if run >= ctl.stagnation_layers:
            tail_estimate = _geometric_tail(layer, prev, rho)
            if tail_estimate <= ctl.tolerance(total):
                stopped = True
                break
        prev = layer

    if not stopped:
        tail_estimate = _geometric_tail(layer, prev, rho)
        if tail_estimate <= ctl.tolerance(total):
            logger.warning('E_D series reached total degree %d with tail %.3g inside tolerance', cap,
                           tail_estimate)
            stopped = True
    logger.debug('E_D n=%d k=%d: %d layers, value %.12g, tail %.3g', n, k, degree + 1,
                 total, tail_estimate)
    if not stopped and strict:
        raise NonConvergent(f'E_D series did not settle within total degree {cap} '
                            f'(last layer {layer:.3g}, partial sum {total:.12g}).')
    return SeriesResult(value=total, terms_used=degree + 1, tail_estimate=tail_estimate,
                        converged=stopped)
