"""RMS delay spread and omnidirectional PDP synthesis."""

from __future__ import annotations

import csv
import io
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import IO, Iterable, Sequence, Union

import numpy as np

from .records import Pdp


@dataclass(frozen=True)
class DsOptions:
    """Tap-retention thresholds for delay-spread computation.

    A tap is kept if it is no more than ``peak_threshold_db`` below the PDP
    peak *and* at least ``noise_margin_db`` above the noise floor.
    """

    peak_threshold_db: float = 25.0
    noise_margin_db: float = 5.0

    def __post_init__(self) -> None:
        if not (self.peak_threshold_db > 0 and self.noise_margin_db > 0):
            raise ValueError("thresholds must be > 0")


DEFAULT_DS_OPTIONS = DsOptions()


def threshold_level_db(pdp: Pdp, opts: DsOptions = DEFAULT_DS_OPTIONS) -> float:
    peak_db = 10.0 * math.log10(max(pdp.powers))
    return max(peak_db - opts.peak_threshold_db, pdp.noise_floor_db + opts.noise_margin_db)


def threshold_pdp(pdp: Pdp, opts: DsOptions = DEFAULT_DS_OPTIONS) -> Pdp:
    """Drop taps below the combined peak/noise threshold; the peak always stays."""
    level = threshold_level_db(pdp, opts)
    peak = max(pdp.powers)
    keep = [
        (d, p)
        for d, p in pdp.taps
        if p == peak or 10.0 * math.log10(p) >= level
    ]
    return Pdp.from_taps(keep, pdp.noise_floor_db)


def rms_delay_spread(pdp: Pdp, opts: DsOptions = DEFAULT_DS_OPTIONS) -> float:
    """Power-weighted RMS delay spread (ns) of the thresholded PDP."""
    kept = threshold_pdp(pdp, opts)
    tau = np.asarray(kept.delays_ns)
    p = np.asarray(kept.powers)
    if len(tau) == 1:
        return 0.0
    # centre on the first delay to avoid cancellation at large absolute delays
    tau = tau - tau[0]
    w = p / p.sum()
    mean = float(w @ tau)
    var = float(w @ (tau - mean) ** 2)
    return math.sqrt(max(var, 0.0))


def synthesize_omni(directional: Sequence[Pdp]) -> Pdp:
    """Sum directional PDPs bin by bin on the union of their delay bins.

    Inputs must share an absolute delay grid and a noise-floor scale, one PDP
    per unique TX/RX pointing pair. Delay bins are matched exactly. The
    output noise floor is the highest input noise floor.
    """
    if not directional:
        raise ValueError("no directional PDPs to synthesize")
    acc: dict[float, float] = defaultdict(float)
    for pdp in directional:
        for d, p in pdp.taps:
            acc[d] += p
    return Pdp.from_taps(acc.items(), max(p.noise_floor_db for p in directional))


# --- file format -----------------------------------------------------------
#
#   # noise_floor_db=-95.0
#   delay_ns,power_db
#   0.0,-60.2
#   ...


class PdpFormatError(ValueError):
    pass


def _split_comments(text: str) -> tuple[dict[str, str], list[str]]:
    meta, body = {}, []
    for line in text.splitlines():
        s = line.strip()
        if s.startswith("#"):
            key, sep, val = s[1:].partition("=")
            if sep:
                meta[key.strip()] = val.strip()
        elif s:
            body.append(line)
    return meta, body


def read_pdp(source: Union[str, IO[str]]) -> Pdp:
    text = source if isinstance(source, str) else source.read()
    meta, body = _split_comments(text)
    if "noise_floor_db" not in meta:
        raise PdpFormatError("missing '# noise_floor_db=<value>' comment line")
    try:
        noise = float(meta["noise_floor_db"])
    except ValueError:
        raise PdpFormatError(f"bad noise floor {meta['noise_floor_db']!r}") from None
    rows = list(csv.reader(body))
    if not rows or [c.strip() for c in rows[0]] != ["delay_ns", "power_db"]:
        raise PdpFormatError("header must be 'delay_ns,power_db'")
    taps = []
    for i, row in enumerate(rows[1:], start=1):
        try:
            d, p_db = (float(c) for c in row)
        except ValueError:
            raise PdpFormatError(f"row {i}: expected two numbers, got {row!r}") from None
        taps.append((d, 10.0 ** (p_db / 10.0)))
    try:
        return Pdp.from_taps(taps, noise)
    except ValueError as e:
        raise PdpFormatError(str(e)) from None


def write_pdp(pdp: Pdp) -> str:
    buf = io.StringIO()
    buf.write(f"# noise_floor_db={pdp.noise_floor_db!r}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["delay_ns", "power_db"])
    for d, p_db in zip(pdp.delays_ns, pdp.powers_db):
        w.writerow([repr(d), repr(p_db)])
    return buf.getvalue()


def pdp_from_db(taps_db: Iterable[tuple[float, float]], noise_floor_db: float) -> Pdp:
    return Pdp.from_taps([(d, 10.0 ** (p / 10.0)) for d, p in taps_db], noise_floor_db)
