"""Angular spread and spatial-lobe statistics from power angular profiles.

Azimuth spread is the power-weighted standard deviation of angles wrapped
to (-180, 180], taken at the reference rotation that minimizes it. The
value only changes when a sample crosses the wrap cut, so it suffices to
try each sample as the last angle before the cut. Zenith profiles do not
wrap and use the plain weighted standard deviation.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import IO, Iterable, Sequence, Union

import numpy as np

from .records import Plane, PowerAngularProfile


def wrap180(angle_deg):
    """Map angles to (-180, 180]."""
    a = np.mod(np.asarray(angle_deg, dtype=float), 360.0)
    return np.where(a > 180.0, a - 360.0, a)


def _weighted_std(x: np.ndarray, w: np.ndarray) -> float:
    w = w / w.sum()
    mean = float(w @ x)
    return math.sqrt(max(float(w @ (x - mean) ** 2), 0.0))


def weighted_spread(angles_deg: Sequence[float], powers: Sequence[float], plane=Plane.AZIMUTH) -> float:
    theta = np.asarray(angles_deg, dtype=float)
    p = np.asarray(powers, dtype=float)
    if len(theta) == 0:
        raise ValueError("no samples")
    if len(theta) == 1:
        return 0.0
    if Plane(plane) is Plane.ZENITH:
        return _weighted_std(theta, p)
    best = math.inf
    for cut in theta:
        # place this sample at +180 so the cut falls in the gap that follows it
        x = wrap180(theta - (cut - 180.0))
        best = min(best, _weighted_std(x, p))
    return best


def omni_angular_spread(pas: PowerAngularProfile) -> float:
    """RMS angular spread (degrees) of the whole profile."""
    return weighted_spread(pas.angles_deg, pas.powers, pas.plane)


@dataclass(frozen=True)
class Lobe:
    start_deg: float
    end_deg: float
    power_fraction: float
    spread_deg: float
    n_samples: int = 1


def _runs(mask: Sequence[bool], wrap: bool) -> list[list[int]]:
    """Index runs of consecutive True entries, merging across the ends if ``wrap``."""
    n = len(mask)
    if all(mask):
        return [list(range(n))]
    runs, cur = [], []
    for i, m in enumerate(mask):
        if m:
            cur.append(i)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    if wrap and len(runs) > 1 and runs[0][0] == 0 and runs[-1][-1] == n - 1:
        runs[0] = runs.pop() + runs[0]
    return runs


def segment_lobes(pas: PowerAngularProfile, lobe_threshold_db: float = 10.0) -> list[Lobe]:
    """Split a profile into spatial lobes.

    A lobe is a maximal run of angularly adjacent samples whose power is
    within ``lobe_threshold_db`` of the profile peak; azimuth runs may wrap
    through 0 degrees. Lobes are returned in angular order of their start.
    """
    theta = np.asarray(pas.angles_deg)
    p = np.asarray(pas.powers)
    p_db = 10.0 * np.log10(p)
    mask = list(p_db >= p_db.max() - lobe_threshold_db)
    total = float(p.sum())
    lobes = []
    for run in _runs(mask, wrap=pas.plane is Plane.AZIMUTH):
        idx = np.asarray(run)
        lobes.append(
            Lobe(
                start_deg=float(theta[idx[0]]),
                end_deg=float(theta[idx[-1]]),
                power_fraction=float(p[idx].sum()) / total,
                spread_deg=weighted_spread(theta[idx], p[idx], pas.plane),
                n_samples=len(run),
            )
        )
    return sorted(lobes, key=lambda lb: lb.start_deg)


def mean_lobe_spread(lobes: Iterable[Lobe]) -> float:
    """Unweighted mean of per-lobe spreads."""
    spreads = [lb.spread_deg for lb in lobes]
    if not spreads:
        raise ValueError("no lobes")
    return math.fsum(spreads) / len(spreads)


# --- file format: "# plane=azimuth" + "angle_deg,power_db" ------------------


class PasFormatError(ValueError):
    pass


def read_pas(source: Union[str, IO[str]]) -> PowerAngularProfile:
    text = source if isinstance(source, str) else source.read()
    plane = None
    body = []
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("#"):
            key, sep, val = s[1:].partition("=")
            if sep and key.strip() == "plane":
                plane = val.strip().lower()
        elif s:
            body.append(line)
    if plane not in ("azimuth", "zenith"):
        raise PasFormatError("missing or invalid '# plane=azimuth|zenith' comment line")
    rows = list(csv.reader(body))
    if not rows or [c.strip() for c in rows[0]] != ["angle_deg", "power_db"]:
        raise PasFormatError("header must be 'angle_deg,power_db'")
    angles, powers = [], []
    for i, row in enumerate(rows[1:], start=1):
        try:
            a, p_db = (float(c) for c in row)
        except ValueError:
            raise PasFormatError(f"row {i}: expected two numbers, got {row!r}") from None
        angles.append(a)
        powers.append(10.0 ** (p_db / 10.0))
    try:
        return PowerAngularProfile(tuple(angles), tuple(powers), Plane(plane))
    except ValueError as e:
        raise PasFormatError(str(e)) from None


def write_pas(pas: PowerAngularProfile) -> str:
    buf = io.StringIO()
    buf.write(f"# plane={pas.plane.value}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["angle_deg", "power_db"])
    for a, p in zip(pas.angles_deg, pas.powers):
        w.writerow([repr(a), repr(10.0 * math.log10(p))])
    return buf.getvalue()
