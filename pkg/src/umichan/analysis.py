"""Standard selections and fits over a campaign, and the reproduction report."""

from __future__ import annotations

import json
from dataclasses import asdict
from typing import Optional, Union

from . import __version__, dataset, lognormal
from .dataset import Campaign
from .pathloss import ci_fit, fi_fit
from .records import CAMPAIGN_BANDS_GHZ, BandLike, CiFit, FiFit, LinkState, LogNormalStat

#: Default T-R separation cap (m) for angular-spread statistics; locations
#: further out lie along a street canyon with much smaller spreads.
AS_MAX_DIST_M = 180.0

PL_FIELDS = {"vv": "omni_pl_vv_db", "vh": "omni_pl_vh_db"}

# report metric -> campaign column
SPREAD_METRICS = {
    "omni_ds": "omni_ds_ns",
    "omni_asa": "omni_asa_deg",
    "omni_asd": "omni_asd_deg",
    "omni_zsa": "omni_zsa_deg",
    "omni_zsd": "omni_zsd_deg",
}


def pl_points(campaign: Campaign, band: BandLike, state, polarization: str = "vv") -> list[tuple[float, float]]:
    try:
        field = PL_FIELDS[polarization.lower()]
    except KeyError:
        raise ValueError(f"polarization must be vv or vh, got {polarization!r}") from None
    pts = dataset.select(campaign, band, state, field)
    if not pts:
        raise LookupError("no matching records")
    return pts


def fit_pl(campaign: Campaign, band: BandLike, state, polarization: str = "vv") -> CiFit:
    """CI fit of omnidirectional path loss, no distance cap."""
    return ci_fit(pl_points(campaign, band, state, polarization), band)


def fit_pl_fi(campaign: Campaign, band: BandLike, state, polarization: str = "vv") -> FiFit:
    return fi_fit(pl_points(campaign, band, state, polarization))


def default_max_dist(field: str) -> Optional[float]:
    """Angular statistics default to the 180 m cap, delay/path-loss ones to none."""
    return AS_MAX_DIST_M if field.endswith("_deg") else None


def spread_values(
    campaign: Campaign,
    band: BandLike,
    state,
    field: str,
    max_dist_m: Optional[float] = None,
) -> list[float]:
    # single-path rows have exactly zero delay spread; log10 is undefined there
    pts = dataset.select(
        campaign,
        band,
        state,
        field,
        max_dist_m=max_dist_m,
        exclude_single_mpc=field.endswith("_ns"),
    )
    return dataset.values(pts)


def fit_spread(
    campaign: Campaign,
    band: BandLike,
    state,
    field: str,
    max_dist_m: Optional[float] = None,
) -> LogNormalStat:
    vals = spread_values(campaign, band, state, field, max_dist_m)
    if not vals:
        raise LookupError("no matching records")
    return lognormal.fit_lognormal(vals)


def _stat_dict(stat: Union[LogNormalStat, CiFit, FiFit]) -> dict:
    d = asdict(stat)
    d.pop("band", None)
    if isinstance(stat, LogNormalStat):
        d["expectation_rounded"] = lognormal.expectation_rounded(stat.mu_lg, stat.sigma_lg)
    return d


def build_report(campaign: Campaign) -> dict:
    """Fits, spread statistics and comparisons for every (band, state).

    Only campaign bands are covered. Comparisons are attached wherever a
    published NYU value exists for the key.
    """
    bands = [b for b in campaign.bands() if b.carrier_ghz in CAMPAIGN_BANDS_GHZ]
    pl_fits, fi_fits, spreads, comparisons = [], [], [], []
    for band in bands:
        for state in (LinkState.LOS, LinkState.NLOS):
            head = {"band_ghz": band.carrier_ghz, "state": state.value}
            try:
                ci = fit_pl(campaign, band, state)
            except LookupError:
                ci = None
            if ci is not None:
                pl_fits.append({**head, "polarization": "vv", **_stat_dict(ci)})
                if lognormal.has_reference(band, state, "omni_pl"):
                    comparisons.append(lognormal.compare(ci, band, state, "omni_pl").to_dict())
                try:
                    fi_fits.append({**head, "polarization": "vv", **_stat_dict(fit_pl_fi(campaign, band, state))})
                except ValueError:
                    pass
            for metric, field in SPREAD_METRICS.items():
                cap = default_max_dist(field)
                try:
                    stat = fit_spread(campaign, band, state, field, cap)
                except LookupError:
                    continue
                spreads.append({**head, "metric": metric, "max_dist_m": cap, **_stat_dict(stat)})
                if lognormal.has_reference(band, state, metric):
                    comparisons.append(lognormal.compare(stat, band, state, metric).to_dict())
    return {
        "tool_version": __version__,
        "provenance": campaign.provenance,
        "ci_fits": pl_fits,
        "fi_fits": fi_fits,
        "spread_stats": spreads,
        "comparisons": comparisons,
        "findings": [str(f) for f in dataset.validate(campaign)],
    }


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
