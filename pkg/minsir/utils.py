import math
from typing import Union

import numpy as np


__all__ = ['db_to_linear', 'linear_to_db', 'rate_to_sir', 'sir_to_rate', 'is_nonpositive_integer',
           'log_grid', 'oxford_comma', 'listify']


def db_to_linear(val: float) -> float:
    """
    Converts a power ratio in dB to linear units.
    :param val: Value in dB
    :return:    float
    """
    return 10.0 ** (val / 10.0)


def linear_to_db(val: float) -> float:
    """
    Converts a linear power ratio to dB. Zero maps to -inf.
    :param val: Linear value, nonnegative
    :return:    float
    """
    if val < 0:
        raise ValueError('Only nonnegative powers can be converted to dB.')
    if val == 0:
        return -math.inf
    return 10.0 * math.log10(val)


def rate_to_sir(rate: float) -> float:
    """
    SIR threshold that supports a target rate in bps/Hz, gamma0 = 2**R0 - 1.
    :param rate:    Target rate R0 in bps/Hz
    :return:        float
    """
    return math.expm1(rate * math.log(2.0))


def sir_to_rate(sir: float) -> float:
    """Inverse of rate_to_sir()"""
    return math.log2(1.0 + sir)


def is_nonpositive_integer(val: float) -> bool:
    """
    Checks if a value is 0, -1, -2, ... where Pochhammer denominators vanish.
    :param val: Value to check
    :return:    bool
    """
    return val <= 0 and float(val).is_integer()


def log_grid(lo: float, hi: float, num: int = 200) -> np.ndarray:
    """
    Log-spaced grid between two positive endpoints, both included.
    :param lo:  Lower endpoint
    :param hi:  Upper endpoint
    :param num: Number of points
    :return:    ndarray
    """
    if not 0 < lo < hi:
        raise ValueError('`lo` and `hi` must satisfy 0 < lo < hi.')
    return np.geomspace(lo, hi, num)


def oxford_comma(items, separator: str = 'or') -> str:
    """
    Joins choices for an error message, with a serial comma before the last one once there
    are three or more. Items are passed through str().
    :param items:       Any iterable of choices, may be None or empty
    :param separator:   Word before the last choice
    :return:            str
    """
    names = [str(i) for i in (items or [])]
    if len(names) < 3:
        return f' {separator} '.join(names)
    return f'{", ".join(names[:-1])}, {separator} {names[-1]}'


def listify(data: Union[str, int, float, list, set, tuple, bool]) -> list:
    """
    A convenience function that converts data into a list unless it's already one.
    Bool is a subset of int.
    :param data:    Data to turn into a list
    :return:        list
    """
    if isinstance(data, list):
        return data
    elif isinstance(data, (set, tuple)):
        return list(data)
    elif isinstance(data, np.ndarray):
        return data.tolist()
    else:
        return [data]
