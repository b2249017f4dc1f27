"""Shared value types: measurement records, model parameters and signal profiles."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Union

#: Campaign carrier frequencies, GHz.
CAMPAIGN_BANDS_GHZ = (6.75, 16.95)


@dataclass(frozen=True, order=True)
class FrequencyBand:
    carrier_ghz: float

    def __post_init__(self) -> None:
        if not (isinstance(self.carrier_ghz, (int, float)) and self.carrier_ghz > 0):
            raise ValueError(f"carrier_ghz must be positive, got {self.carrier_ghz!r}")
        object.__setattr__(self, "carrier_ghz", float(self.carrier_ghz))

    def __str__(self) -> str:
        return f"{self.carrier_ghz:g} GHz"


BandLike = Union[FrequencyBand, float, int]


def as_band(band: BandLike) -> FrequencyBand:
    if isinstance(band, FrequencyBand):
        return band
    return FrequencyBand(float(band))


class LinkState(str, Enum):
    """Link state. ``NLOS_BEST`` only exists for directional path loss."""

    LOS = "LOS"
    NLOS = "NLOS"
    NLOS_BEST = "NLOS_BEST"

    @classmethod
    def parse(cls, text: Union[str, "LinkState"]) -> "LinkState":
        if isinstance(text, LinkState):
            return text
        key = text.strip().upper().replace("-", "_")
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown link state {text!r}") from None


# Measured-statistic columns of a LocationRecord, in CSV order.
STAT_FIELDS = (
    "omni_pl_vv_db",
    "omni_pl_vh_db",
    "mean_dir_ds_ns",
    "omni_ds_ns",
    "mean_lobe_asa_deg",
    "omni_asa_deg",
    "mean_lobe_asd_deg",
    "omni_asd_deg",
    "mean_lobe_zsa_deg",
    "omni_zsa_deg",
    "mean_lobe_zsd_deg",
    "omni_zsd_deg",
)
ANGULAR_FIELDS = tuple(f for f in STAT_FIELDS if f.endswith("_deg"))
DELAY_FIELDS = ("mean_dir_ds_ns", "omni_ds_ns")


@dataclass(frozen=True)
class LocationRecord:
    """Measured large-scale statistics of one TX-RX link in one band.

    Absent statistics are ``None`` (never 0 or NaN: a zero delay spread is a
    real value for single-MPC locations). Construction does not enforce the
    record rules so that bad rows can be reported; see :meth:`problems`.
    """

    band: FrequencyBand
    tx_id: str
    rx_id: str
    link_state: LinkState
    tr_sep_m: float
    omni_pl_vv_db: Optional[float] = None
    omni_pl_vh_db: Optional[float] = None
    mean_dir_ds_ns: Optional[float] = None
    omni_ds_ns: Optional[float] = None
    mean_lobe_asa_deg: Optional[float] = None
    omni_asa_deg: Optional[float] = None
    mean_lobe_asd_deg: Optional[float] = None
    omni_asd_deg: Optional[float] = None
    mean_lobe_zsa_deg: Optional[float] = None
    omni_zsa_deg: Optional[float] = None
    mean_lobe_zsd_deg: Optional[float] = None
    omni_zsd_deg: Optional[float] = None
    outage: bool = False
    single_mpc: bool = False

    @property
    def key(self) -> tuple:
        return (self.band.carrier_ghz, self.tx_id, self.rx_id)

    def stat(self, name: str) -> Optional[float]:
        if name not in STAT_FIELDS:
            raise KeyError(f"unknown statistic {name!r}")
        return getattr(self, name)

    def problems(self) -> list[str]:
        """Return the record rules this record breaks (empty if valid)."""
        out = []
        if self.link_state not in (LinkState.LOS, LinkState.NLOS):
            out.append(f"link state {self.link_state.value} not allowed in a location record")
        if not self.tr_sep_m > 0:
            out.append("tr_sep_m must be > 0")
        present = [f for f in STAT_FIELDS if getattr(self, f) is not None]
        if self.outage:
            if present:
                out.append("outage row has statistics")
        elif self.omni_pl_vv_db is None:
            out.append("non-outage row lacks omni V-V path loss")
        if self.single_mpc and (self.omni_ds_ns != 0 or self.mean_dir_ds_ns != 0):
            out.append("single-MPC row must have zero delay spreads")
        for f in present:
            v = getattr(self, f)
            if not math.isfinite(v):
                out.append(f"{f} is not finite")
            elif f in ANGULAR_FIELDS and not 0.0 <= v < 360.0:
                out.append(f"{f}={v} outside [0, 360)")
            elif f in DELAY_FIELDS and v < 0:
                out.append(f"{f}={v} is negative")
        return out


@dataclass(frozen=True)
class CiFit:
    """Close-in (1 m free-space anchored) path-loss model parameters."""

    band: FrequencyBand
    ple: float
    sigma_db: float
    n_points: int
    fspl_1m_db: float

    def __post_init__(self) -> None:
        if self.sigma_db < 0:
            raise ValueError("sigma_db must be >= 0")
        if self.n_points < 1:
            raise ValueError("n_points must be >= 1")


@dataclass(frozen=True)
class FiFit:
    """Floating-intercept fit ``PL = alpha + beta * 10 log10(d)``."""

    alpha_db: float
    beta: float
    sigma_db: float
    n_points: int

    def __post_init__(self) -> None:
        if self.n_points < 2:
            raise ValueError("a floating-intercept fit needs n_points >= 2")


def expectation_paper(mu_lg: float, sigma_lg: float) -> float:
    """Expected value under the ``10**(mu + sigma**2 / 2)`` convention.

    This is the convention used when quoting log-normal spread statistics
    against 3GPP tables. It is *not* the mean of ``10**N(mu, sigma)``; see
    :func:`umichan.lognormal.expectation_strict`.
    """
    if sigma_lg < 0:
        raise ValueError("sigma_lg must be >= 0")
    return 10.0 ** (mu_lg + sigma_lg**2 / 2.0)


@dataclass(frozen=True)
class LogNormalStat:
    """Gaussian statistics of ``log10(value / unit)``."""

    mu_lg: float
    sigma_lg: float
    n_points: int
    expectation: float = field(init=False)

    def __post_init__(self) -> None:
        if self.sigma_lg < 0:
            raise ValueError("sigma_lg must be >= 0")
        if self.n_points < 1:
            raise ValueError("n_points must be >= 1")
        if self.n_points == 1 and self.sigma_lg != 0:
            raise ValueError("a single sample has sigma_lg = 0")
        object.__setattr__(self, "expectation", expectation_paper(self.mu_lg, self.sigma_lg))


def _check_unique_sorted(values: Sequence[float], what: str) -> None:
    for a, b in zip(values, values[1:]):
        if not b > a:
            raise ValueError(f"{what} must be strictly increasing")


@dataclass(frozen=True)
class Pdp:
    """Power-delay profile.

    Powers are linear; ``noise_floor_db`` is ``10 log10`` of the same scale.
    """

    delays_ns: tuple[float, ...]
    powers: tuple[float, ...]
    noise_floor_db: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "delays_ns", tuple(float(x) for x in self.delays_ns))
        object.__setattr__(self, "powers", tuple(float(x) for x in self.powers))
        if not self.delays_ns:
            raise ValueError("a PDP needs at least one tap")
        if len(self.delays_ns) != len(self.powers):
            raise ValueError("delays and powers differ in length")
        if any(d < 0 for d in self.delays_ns):
            raise ValueError("delays must be >= 0")
        if any(not p > 0 for p in self.powers):
            raise ValueError("tap powers must be > 0")
        _check_unique_sorted(self.delays_ns, "delays")

    @classmethod
    def from_taps(cls, taps, noise_floor_db: float) -> "Pdp":
        taps = sorted(taps)
        return cls(tuple(t[0] for t in taps), tuple(t[1] for t in taps), noise_floor_db)

    @property
    def taps(self) -> list[tuple[float, float]]:
        return list(zip(self.delays_ns, self.powers))

    @property
    def powers_db(self) -> list[float]:
        return [10.0 * math.log10(p) for p in self.powers]


class Plane(str, Enum):
    AZIMUTH = "azimuth"
    ZENITH = "zenith"


@dataclass(frozen=True)
class PowerAngularProfile:
    """Received power versus pointing angle; samples are kept sorted by angle."""

    angles_deg: tuple[float, ...]
    powers: tuple[float, ...]
    plane: Plane = Plane.AZIMUTH

    def __post_init__(self) -> None:
        plane = Plane(self.plane)
        pairs = sorted(zip((float(a) for a in self.angles_deg), (float(p) for p in self.powers)))
        if not pairs:
            raise ValueError("a power angular profile needs at least one sample")
        if len(self.angles_deg) != len(self.powers):
            raise ValueError("angles and powers differ in length")
        hi = 360.0 if plane is Plane.AZIMUTH else 180.0
        for a, p in pairs:
            if plane is Plane.AZIMUTH and not 0.0 <= a < hi:
                raise ValueError(f"azimuth angle {a} outside [0, 360)")
            if plane is Plane.ZENITH and not 0.0 <= a <= hi:
                raise ValueError(f"zenith angle {a} outside [0, 180]")
            if not p > 0:
                raise ValueError("powers must be > 0")
        angles = tuple(a for a, _ in pairs)
        _check_unique_sorted(angles, "angles")
        object.__setattr__(self, "angles_deg", angles)
        object.__setattr__(self, "powers", tuple(p for _, p in pairs))
        object.__setattr__(self, "plane", plane)

