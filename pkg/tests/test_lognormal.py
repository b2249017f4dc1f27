import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from umichan import lognormal
from umichan.lognormal import (
    GPP,
    NYU,
    REFERENCES,
    compare,
    expectation_paper,
    expectation_rounded,
    expectation_strict,
    fit_lognormal,
    round_half_up,
)
from umichan.pathloss import fspl_1m
from umichan.records import CiFit, FrequencyBand, LinkState, LogNormalStat


def test_fit_asa_los_675():
    stat = fit_lognormal([23.5, 14.5, 63.0, 10.5, 10.8])
    assert stat.mu_lg == pytest.approx(1.28, abs=0.005)
    assert stat.sigma_lg == pytest.approx(0.32, abs=0.005)
    assert stat.n_points == 5


def test_fit_ds_los_675_expectation():
    stat = fit_lognormal([29.3, 60.5, 121.3, 184.6, 60.9, 22.8, 26.8])
    assert stat.expectation == pytest.approx(62.8, abs=0.2)


def test_sample_variance_denominator():
    x = [29.3, 60.5, 121.3, 184.6, 60.9, 22.8, 26.8]
    lg = np.log10(x)
    assert fit_lognormal(x).sigma_lg == pytest.approx(math.sqrt(((lg - lg.mean()) ** 2).sum() / (len(x) - 1)))
    # the population variant lands near 61.6 ns, away from the published 62.8
    pop = 10 ** (lg.mean() + lg.var() / 2)
    assert pop == pytest.approx(61.6, abs=0.1)


def test_degenerate():
    stat = fit_lognormal([10.0] * 4)
    assert (stat.mu_lg, stat.sigma_lg, stat.expectation) == (1.0, 0.0, 10.0)
    one = fit_lognormal([42.0])
    assert one.sigma_lg == 0.0 and one.n_points == 1


def test_fit_errors():
    with pytest.raises(ValueError):
        fit_lognormal([])
    with pytest.raises(ValueError):
        fit_lognormal([10.0, 0.0])
    with pytest.raises(ValueError):
        fit_lognormal([10.0, -3.0])


@pytest.mark.parametrize(
    "mu, sigma, expected",
    [(1.28, 0.32, 21.44), (1.74, 0.34, 62.78), (1.50, 0.23, 33.61), (1.67, 0.15, 48.00)],
)
def test_expectation_paper(mu, sigma, expected):
    assert expectation_paper(mu, sigma) == pytest.approx(expected, abs=0.005)


def test_expectation_zero_sigma():
    for x in (-1.0, 0.0, 1.3, 2.5):
        assert expectation_paper(x, 0.0) == pytest.approx(10**x)
        assert expectation_strict(x, 0.0) == pytest.approx(10**x)


def test_expectation_strict():
    assert expectation_strict(1.28, 0.32) == pytest.approx(25.00, abs=0.005)


def test_expectation_strict_monotone():
    grid = np.linspace(0, 1.5, 151)
    vals = [expectation_strict(1.2, s) for s in grid]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_expectation_strict_is_the_lognormal_mean():
    rng = np.random.default_rng(21)
    draws = 10 ** rng.normal(1.5, 0.23, 400_000)
    assert draws.mean() == pytest.approx(expectation_strict(1.5, 0.23), rel=0.003)
    assert abs(draws.mean() - expectation_paper(1.5, 0.23)) > 2.0


@given(st.floats(-3, 3), st.floats(0, 2))
def test_paper_expectation_lower_bound(mu, sigma):
    e = expectation_paper(mu, sigma)
    assert e >= 10**mu * (1 - 1e-12)
    if sigma == 0:
        assert e == pytest.approx(10**mu)


def test_logstat_expectation_recomputed():
    s = LogNormalStat(1.234, 0.2, 5)
    assert s.expectation == 10.0 ** (1.234 + 0.2**2 / 2)
    with pytest.raises(ValueError):
        LogNormalStat(1.0, 0.1, 1)
    with pytest.raises(ValueError):
        LogNormalStat(1.0, -0.1, 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0.1, 1000), min_size=2, max_size=20), st.floats(1e-3, 1e3))
def test_scaling_shifts_mu(samples, c):
    a = fit_lognormal(samples)
    b = fit_lognormal([x * c for x in samples])
    assert b.mu_lg == pytest.approx(a.mu_lg + math.log10(c), abs=1e-9)
    assert b.sigma_lg == pytest.approx(a.sigma_lg, abs=1e-9)


def test_convergence_on_generated_data():
    rng = np.random.default_rng(1234)
    mu, sigma, n = 1.4, 0.25, 100_000
    stat = fit_lognormal(10 ** rng.normal(mu, sigma, n))
    assert abs(stat.mu_lg - mu) <= 4 * sigma / math.sqrt(n)
    assert stat.sigma_lg == pytest.approx(sigma, rel=0.01)


def test_round_half_up():
    assert round_half_up(0.125) == 0.13
    assert round_half_up(1.2773) == 1.28
    assert round_half_up(-0.125) == -0.13


def test_rounded_vs_full_expectation():
    # full-precision parameters give about 21.37; display-rounded ones give 21.44
    mu, sigma = 1.2773, 0.3242
    assert expectation_paper(mu, sigma) == pytest.approx(21.37, abs=0.005)
    assert expectation_rounded(mu, sigma) == pytest.approx(21.44, abs=0.005)


# --- reference constants ----------------------------------------------------------


def test_reference_spot_values():
    assert lognormal.reference(16.95, "LOS", "omni_pl", GPP).values() == {"ple": 2.1, "sigma_db": 4.0}
    assert lognormal.reference(6.75, "NLOS", "omni_pl", GPP).values() == {"ple": 3.19, "sigma_db": 8.2}
    assert lognormal.reference(6.75, "LOS", "omni_ds", GPP).expectation == 52.7
    assert lognormal.reference(16.95, "NLOS", "omni_ds", GPP).expectation == 96.65
    assert lognormal.reference(6.75, "NLOS", "omni_ds", NYU).expectation == 75.6
    assert lognormal.reference(6.75, LinkState.NLOS_BEST, "dir_pl").ple == 2.68
    assert lognormal.reference(6.75, "LOS", "dir_ds").note


def test_reference_as_rows_are_self_consistent():
    # every published (mu, sigma) pair reproduces its published expectation
    rows = [r for r in REFERENCES.values() if r.mu_lg is not None]
    assert len(rows) == 16
    for r in rows:
        assert expectation_paper(r.mu_lg, r.sigma_lg) == pytest.approx(r.expectation, abs=0.006)


def test_references_immutable():
    with pytest.raises(TypeError):
        REFERENCES[(1.0, LinkState.LOS, "x", NYU)] = None


def test_compare_asa():
    stat = LogNormalStat(1.50, 0.23, 8)
    c = compare(stat, 6.75, "NLOS", "omni_asa")
    assert c.delta_nyu["mu_lg"] == pytest.approx(0.0, abs=1e-12)
    assert c.delta_gpp["mu_lg"] == pytest.approx(0.24)
    assert c.gpp["mu_lg"] == 1.74
    assert c.computed["expectation_rounded"] == pytest.approx(33.61, abs=0.005)


def test_compare_pl():
    fit = CiFit(FrequencyBand(16.95), 1.85, 4.05, 7, fspl_1m(16.95))
    c = compare(fit, 16.95, "LOS", "omni_pl")
    assert c.gpp == {"ple": 2.1, "sigma_db": 4.0}
    assert c.delta_gpp["ple"] == pytest.approx(0.25)
    assert c.delta_nyu["ple"] == pytest.approx(0.0)


def test_compare_ds_uses_full_precision():
    stat = fit_lognormal([29.3, 60.5, 121.3, 184.6, 60.9, 22.8, 26.8])
    c = compare(stat, 6.75, "LOS", "omni_ds")
    assert set(c.delta_nyu) == {"expectation"}
    assert c.delta_nyu["expectation"] == pytest.approx(abs(stat.expectation - 62.8))


def test_compare_unknown_key():
    with pytest.raises(KeyError):
        compare(LogNormalStat(1.0, 0.1, 3), 28.0, "LOS", "omni_asa")
    with pytest.raises(KeyError):
        compare(LogNormalStat(1.0, 0.1, 3), 6.75, "LOS", "omni_zsa")


def test_compare_after_reproduction(bundled):
    from umichan.analysis import fit_pl

    fit = fit_pl(bundled, 16.95, "NLOS")
    c = compare(fit, 16.95, "NLOS", "omni_pl")
    assert c.delta_nyu["ple"] <= 0.02 and c.delta_nyu["sigma_db"] <= 0.15
