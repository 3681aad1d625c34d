import math
import pytest
import numpy as np
from collections import Counter
from minsir import utils, listify



param = [(0, 1.0), (10, 10.0), (14, 25.118864315095795), (20, 100.0), (-10, 0.1),
         (-math.inf, 0.0)]
@pytest.mark.parametrize('db, out', param)
def test_db_to_linear(db, out):
    assert utils.db_to_linear(db) == pytest.approx(out, rel=1e-12)


param = [(1.0, 0.0), (100.0, 20.0), (0.5, -3.010299956639812), (0.0, -math.inf),
         (-1.0, ValueError)]
@pytest.mark.parametrize('val, out', param)
def test_linear_to_db(val, out):
    try:
        assert utils.linear_to_db(val) == pytest.approx(out, rel=1e-12)
    except out:
        with pytest.raises(out):
            utils.linear_to_db(val)


param = [(0.03, 2 ** 0.03 - 1), (1.0, 1.0), (2.0, 3.0), (0.0, 0.0)]
@pytest.mark.parametrize('rate, out', param)
def test_rate_to_sir(rate, out):
    assert utils.rate_to_sir(rate) == pytest.approx(out, rel=1e-12, abs=1e-15)
    assert utils.sir_to_rate(utils.rate_to_sir(rate)) == pytest.approx(rate, abs=1e-14)


def test_rate_to_sir_threshold():
    assert utils.rate_to_sir(0.03) == pytest.approx(0.0210, abs=5e-5)


param = [(0, True), (-1, True), (-3.0, True), (-0.5, False), (1, False), (2.0, False), (0.0, True)]
@pytest.mark.parametrize('val, out', param)
def test_is_nonpositive_integer(val, out):
    assert utils.is_nonpositive_integer(val) is out


def test_log_grid():
    grid = utils.log_grid(0.01, 10, 4)
    assert np.allclose(grid, [0.01, 0.1, 1, 10])
    with pytest.raises(ValueError):
        utils.log_grid(0, 1)
    with pytest.raises(ValueError):
        utils.log_grid(2, 1)


param = [
    (['one', 'two', 'three', 'four'], 'one, two, three, or four'),
    (['one', 'two', 'three'], 'one, two, or three'),
    (['one', 'two'], 'one or two'),
    (['one'], 'one'), ([], '')
]
@pytest.mark.parametrize('seq, out', param)
def test_oxford_comma(seq, out):
    assert utils.oxford_comma(seq) == out


def test_oxford_comma_items():
    assert utils.oxford_comma([20, 40, 60], separator='and') == '20, 40, and 60'
    assert utils.oxford_comma(('cdf', 'ccdf'), separator='and') == 'cdf and ccdf'
    assert utils.oxford_comma(None) == ''
    assert utils.oxford_comma([1.5]) == '1.5'


param = [
    ('foo', ['foo']), (['foo'], ['foo']),
    (1, [1]), (12.5, [12.5]),
    (['foo', 'bar'], ['foo', 'bar']),
    (('foo',), ['foo']), (('foo', 'bar'), ['foo', 'bar']),
    ({'foo'}, ['foo']), ({'foo', 'bar'}, ['foo', 'bar']),
    (True, [True]), (False, [False]), (np.array([0.1, 0.2]), [0.1, 0.2])
]
@pytest.mark.parametrize('data, out', param)
# @pytest.mark.focus
def test_listify(data, out):
    assert Counter(listify(data)) == Counter(out)
