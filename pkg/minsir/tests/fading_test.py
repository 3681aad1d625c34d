import math
import pytest
import numpy as np
from scipy import integrate, stats
from minsir import kmu_shadowed_pdf, kmu_shadowed_cdf, kmu_shadowed_samples, kmu_shadowed_sample, \
    InvalidParam
from .conftest import link



param = [((0, 1, 1), 0.7, math.exp(-0.7)), ((0, 2, 1, 2.0), 1.0, math.exp(-1)),
         ((0, 1, 1), 0, 1.0)]
@pytest.mark.parametrize('params, x, out', param)
def test_pdf_examples(params, x, out):
    assert kmu_shadowed_pdf(link(*params), x) == pytest.approx(out, rel=1e-10)


param = [(1, 0.4), (2, 1.3), (3.5, 2.0), (0.6, 0.05)]
@pytest.mark.parametrize('mu, x', param)
def test_pdf_gamma_when_no_dominant(mu, x):
    params = link(0, mu, 1.7, 1.5)
    out = stats.gamma.pdf(x, a=mu, scale=1.5 / mu)
    assert kmu_shadowed_pdf(params, x) == pytest.approx(out, rel=1e-10)


param = [(2, 2, 0.8), (5, 1, 0.3), (1, 3, 2.5), (10, 3, 40.0), (10, 3, 100.0)]
@pytest.mark.parametrize('kappa, mu, x', param)
def test_pdf_gamma_when_m_equals_mu(kappa, mu, x):
    # with m = mu the law is Gamma(mu, mean / mu) whatever kappa is
    out = stats.gamma.pdf(x, a=mu, scale=1 / mu)
    assert kmu_shadowed_pdf(link(kappa, mu, mu), x) == pytest.approx(out, rel=1e-9)


def test_pdf_origin():
    assert kmu_shadowed_pdf(link(2, 3, 1), 0) == 0.0
    with pytest.raises(InvalidParam):
        kmu_shadowed_pdf(link(2, 0.5, 1), 0)
    with pytest.raises(InvalidParam):
        kmu_shadowed_pdf(link(2, 2, 1), -0.1)


def test_pdf_large_argument():
    # far in the tail the 1F1 argument is in the hundreds
    val = kmu_shadowed_pdf(link(10, 3, 0.5), 40.0)
    assert 0 < val < 1e-3
    assert math.isfinite(val)


def test_pdf_thousands_of_terms():
    # 1F1(1; 3; 3857), summed well short of its cap
    val = kmu_shadowed_pdf(link(2, 3, 1), 500.0)
    assert 0 < val < 1e-200


def test_pdf_underflows_to_zero():
    assert kmu_shadowed_pdf(link(10, 3, 0.5), 1e4) == 0.0
    assert kmu_shadowed_pdf(link(2, 3, 1), 1e12) == 0.0


param = [(0, 1, 1), (2, 2, 1), (10, 1, 0.5)]
@pytest.mark.parametrize('params', param)
def test_pdf_normalized(params):
    assert kmu_shadowed_cdf(link(*params), math.inf) == pytest.approx(1.0, abs=1e-6)


param = [(k, mu, m) for k in (0, 2, 10) for mu in (1, 2, 3) for m in (0.5, 1, 10)]
@pytest.mark.parametrize('params', param)
@pytest.mark.slow
def test_pdf_normalized_grid(params):
    assert kmu_shadowed_cdf(link(*params), math.inf) == pytest.approx(1.0, abs=1e-6)


def test_cdf_examples():
    assert kmu_shadowed_cdf(link(0, 1, 1), 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-9)
    assert kmu_shadowed_cdf(link(0, 1, 1), 0) == 0.0
    mean, _ = integrate.quad(lambda x: x * kmu_shadowed_pdf(link(2, 3, 1, 1.5), x), 0, math.inf)
    assert mean == pytest.approx(1.5, rel=1e-7)


def test_samples_mean():
    rng = np.random.default_rng(3)
    draws = kmu_shadowed_samples(link(2, 3, 1, 1.5), rng, 1_000_000)
    assert draws.shape == (1_000_000,)
    assert draws.mean() == pytest.approx(1.5, abs=0.01)
    assert (draws >= 0).all()


def test_samples_gamma_ks():
    rng = np.random.default_rng(11)
    draws = kmu_shadowed_samples(link(0, 2.5, 1), rng, 100_000)
    assert stats.kstest(draws, 'gamma', args=(2.5, 0, 1 / 2.5)).pvalue > 1e-3


def test_samples_scale_with_mean():
    unit = kmu_shadowed_samples(link(3, 2, 1.5), np.random.default_rng(5), 1000)
    scaled = kmu_shadowed_samples(link(3, 2, 1.5, 4.0), np.random.default_rng(5), 1000)
    assert np.allclose(scaled, 4.0 * unit, rtol=1e-12, atol=0)


def test_samples_shape():
    draws = kmu_shadowed_samples(link(1, 1, 1), np.random.default_rng(0), (50, 4))
    assert draws.shape == (50, 4)
    assert isinstance(kmu_shadowed_sample(link(1, 1, 1), np.random.default_rng(0)), float)


@pytest.mark.slow
def test_samples_match_cdf():
    params = link(2, 2, 1)
    draws = np.sort(kmu_shadowed_samples(params, np.random.default_rng(17), 1_000_000))
    for x in (0.1, 0.3, 0.6, 1.0, 1.5, 2.5, 4.0):
        empirical = np.searchsorted(draws, x, side='right') / draws.size
        assert abs(empirical - kmu_shadowed_cdf(params, x)) < 0.005
