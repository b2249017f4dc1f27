"""Log-normal spread statistics and published reference values.

Spread statistics (delay spread in ns, angular spreads in degrees) are
summarized by the mean and sample standard deviation of ``log10(x)``. The
quoted "expected value" follows the 3GPP-table convention
``10**(mu + sigma**2 / 2)``, which is *smaller* than the true mean of a
log-normal variable, ``10**mu * exp((sigma ln 10)**2 / 2)``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from decimal import ROUND_HALF_UP, Decimal
from types import MappingProxyType
from typing import Iterable, Mapping, Optional, Union

import numpy as np

from .records import BandLike, CiFit, LinkState, LogNormalStat, as_band, expectation_paper

NYU = "NYU"
GPP = "3GPP"
SOURCES = (NYU, GPP)

METRICS = ("omni_pl", "dir_pl", "omni_ds", "dir_ds", "omni_asa", "omni_asd")


def fit_lognormal(samples: Iterable[float]) -> LogNormalStat:
    x = np.asarray(list(samples), dtype=float)
    if x.size == 0:
        raise ValueError("no samples")
    if np.any(~(x > 0)):
        raise ValueError("log-normal samples must be positive (drop zero-spread single-path rows)")
    lg = np.log10(x)
    sigma = float(lg.std(ddof=1)) if lg.size > 1 else 0.0
    return LogNormalStat(mu_lg=float(lg.mean()), sigma_lg=sigma, n_points=int(lg.size))


def expectation_strict(mu_lg: float, sigma_lg: float) -> float:
    """Mean of ``10**N(mu_lg, sigma_lg)``."""
    if sigma_lg < 0:
        raise ValueError("sigma_lg must be >= 0")
    return 10.0**mu_lg * math.exp((sigma_lg * math.log(10.0)) ** 2 / 2.0)


def round_half_up(x: float, ndigits: int = 2) -> float:
    """Round as a table would print it (0.125 -> 0.13)."""
    q = Decimal(1).scaleb(-ndigits)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def expectation_rounded(mu_lg: float, sigma_lg: float, ndigits: int = 2) -> float:
    """Convention expectation computed from parameters rounded for display."""
    return expectation_paper(round_half_up(mu_lg, ndigits), round_half_up(sigma_lg, ndigits))


@dataclass(frozen=True)
class Reference:
    """One published parameter set. Unpublished fields are ``None``."""

    ple: Optional[float] = None
    sigma_db: Optional[float] = None
    mu_lg: Optional[float] = None
    sigma_lg: Optional[float] = None
    expectation: Optional[float] = None
    note: str = ""

    def values(self) -> dict[str, float]:
        return {k: v for k, v in asdict(self).items() if k != "note" and v is not None}


RefKey = tuple  # (band_ghz, LinkState, metric, source)

_L, _N, _NB = LinkState.LOS, LinkState.NLOS, LinkState.NLOS_BEST


def _build_references() -> Mapping[RefKey, Reference]:
    t: dict[RefKey, Reference] = {}

    def pl(band, state, metric, src, n, s):
        t[(band, state, metric, src)] = Reference(ple=n, sigma_db=s)

    def ln(band, state, metric, src, mu, s, e):
        t[(band, state, metric, src)] = Reference(mu_lg=mu, sigma_lg=s, expectation=e)

    def ex(band, state, metric, src, e, note=""):
        t[(band, state, metric, src)] = Reference(expectation=e, note=note)

    # omnidirectional CI path loss
    pl(6.75, _L, "omni_pl", NYU, 1.79, 2.57)
    pl(6.75, _N, "omni_pl", NYU, 2.56, 6.53)
    pl(16.95, _L, "omni_pl", NYU, 1.85, 4.05)
    pl(16.95, _N, "omni_pl", NYU, 2.59, 8.78)
    for band in (6.75, 16.95):
        pl(band, _L, "omni_pl", GPP, 2.1, 4.0)
        pl(band, _N, "omni_pl", GPP, 3.19, 8.2)

    # directional CI path loss (no per-direction point data is available)
    pl(6.75, _L, "dir_pl", NYU, 1.89, 2.05)
    pl(6.75, _NB, "dir_pl", NYU, 2.68, 6.5)
    pl(6.75, _N, "dir_pl", NYU, 3.25, 12.25)
    pl(16.95, _L, "dir_pl", NYU, 1.97, 3.41)
    pl(16.95, _NB, "dir_pl", NYU, 2.74, 10.29)
    pl(16.95, _N, "dir_pl", NYU, 3.51, 14.02)

    # RMS delay spread expectations, ns
    ex(6.75, _L, "dir_ds", NYU, 29.1, "running text quotes 27 ns")
    ex(6.75, _N, "dir_ds", NYU, 35.6, "running text quotes 35.9 ns")
    ex(16.95, _L, "dir_ds", NYU, 28.1)
    ex(16.95, _N, "dir_ds", NYU, 31.7)
    ex(6.75, _L, "omni_ds", NYU, 62.8, "running text quotes 63.5 ns")
    ex(6.75, _N, "omni_ds", NYU, 75.6, "running text quotes 74.1 ns")
    ex(16.95, _L, "omni_ds", NYU, 46.5)
    ex(16.95, _N, "omni_ds", NYU, 65.8)
    ex(6.75, _L, "omni_ds", GPP, 52.7)
    ex(6.75, _N, "omni_ds", GPP, 111.1)
    ex(16.95, _L, "omni_ds", GPP, 42.9)
    ex(16.95, _N, "omni_ds", GPP, 96.65)

    # omnidirectional angular spreads, degrees (T-R separation <= 180 m)
    ln(6.75, _L, "omni_asa", NYU, 1.28, 0.32, 21.44)
    ln(6.75, _N, "omni_asa", NYU, 1.50, 0.23, 33.61)
    ln(6.75, _L, "omni_asd", NYU, 1.31, 0.11, 20.70)
    ln(6.75, _N, "omni_asd", NYU, 1.67, 0.15, 48.00)
    ln(16.95, _L, "omni_asa", NYU, 1.12, 0.36, 15.30)
    ln(16.95, _N, "omni_asa", NYU, 1.36, 0.20, 23.99)
    ln(16.95, _L, "omni_asd", NYU, 1.18, 0.13, 15.43)
    ln(16.95, _N, "omni_asd", NYU, 1.49, 0.21, 32.51)
    ln(6.75, _L, "omni_asa", GPP, 1.66, 0.29, 50.36)
    ln(6.75, _N, "omni_asa", GPP, 1.74, 0.34, 62.78)
    ln(6.75, _L, "omni_asd", GPP, 1.16, 0.41, 17.54)
    ln(6.75, _N, "omni_asd", GPP, 1.32, 0.43, 25.85)
    ln(16.95, _L, "omni_asa", GPP, 1.63, 0.30, 47.31)
    ln(16.95, _N, "omni_asa", GPP, 1.71, 0.36, 59.54)
    ln(16.95, _L, "omni_asd", GPP, 1.15, 0.41, 17.14)
    ln(16.95, _N, "omni_asd", GPP, 1.24, 0.47, 22.41)
    return MappingProxyType(t)


REFERENCES: Mapping[RefKey, Reference] = _build_references()


def reference(band: BandLike, state: Union[LinkState, str], metric: str, source: str = NYU) -> Reference:
    key = (as_band(band).carrier_ghz, LinkState.parse(state), metric, source)
    try:
        return REFERENCES[key]
    except KeyError:
        raise KeyError(f"no published reference for {key}") from None


def has_reference(band: BandLike, state, metric: str, source: str = NYU) -> bool:
    return (as_band(band).carrier_ghz, LinkState.parse(state), metric, source) in REFERENCES


@dataclass(frozen=True)
class Comparison:
    band_ghz: float
    state: LinkState
    metric: str
    computed: dict
    nyu: dict
    gpp: Optional[dict]
    delta_nyu: dict
    delta_gpp: Optional[dict]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["state"] = self.state.value
        return d


def _computed_values(stat: Union[LogNormalStat, CiFit]) -> dict[str, float]:
    if isinstance(stat, CiFit):
        return {"ple": stat.ple, "sigma_db": stat.sigma_db}
    if isinstance(stat, LogNormalStat):
        return {
            "mu_lg": stat.mu_lg,
            "sigma_lg": stat.sigma_lg,
            "expectation": stat.expectation,
            "expectation_rounded": expectation_rounded(stat.mu_lg, stat.sigma_lg),
        }
    raise TypeError(f"cannot compare {type(stat).__name__}")


def _deltas(computed: dict, ref: Reference) -> dict[str, float]:
    out = {}
    for name, value in ref.values().items():
        if name == "expectation":
            # a published expectation is compared against the one derived
            # from display-rounded parameters when those were published too
            src = "expectation_rounded" if ref.mu_lg is not None else "expectation"
            out[name] = abs(computed[src] - value)
        elif name in computed:
            out[name] = abs(computed[name] - value)
    return out


def compare(
    stat: Union[LogNormalStat, CiFit],
    band: BandLike,
    state: Union[LinkState, str],
    metric: str,
) -> Comparison:
    """Put a computed statistic next to the published NYU and 3GPP values."""
    band_ghz = as_band(band).carrier_ghz
    state = LinkState.parse(state)
    nyu = reference(band_ghz, state, metric, NYU)
    gpp = REFERENCES.get((band_ghz, state, metric, GPP))
    computed = _computed_values(stat)
    return Comparison(
        band_ghz=band_ghz,
        state=state,
        metric=metric,
        computed=computed,
        nyu=nyu.values(),
        gpp=gpp.values() if gpp else None,
        delta_nyu=_deltas(computed, nyu),
        delta_gpp=_deltas(computed, gpp) if gpp else None,
    )
