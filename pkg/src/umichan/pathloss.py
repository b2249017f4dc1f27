"""Close-in (CI) and floating-intercept (FI) path-loss models.

The CI model anchors the distance law at the 1 m free-space loss::

    PL(f, d) = FSPL(f, 1 m) + 10 n log10(d / 1 m) + X_sigma

with ``X_sigma`` zero-mean Gaussian shadow fading in dB.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .records import BandLike, CiFit, FiFit, as_band

#: Reference distance of the CI model, meters.
D0_M = 1.0


def fspl_1m(band: BandLike) -> float:
    """Free-space path loss at 1 m in dB, ``32.4 + 20 log10(f / 1 GHz)``."""
    f = as_band(band).carrier_ghz
    return 32.4 + 20.0 * math.log10(f)


def _check_distance(d_m: float) -> None:
    if not d_m >= D0_M:
        raise ValueError(f"distance {d_m} m is inside the 1 m reference distance")


def ci_predict(fit: CiFit, d_m: float) -> float:
    """Mean CI path loss (dB) at ``d_m`` meters, shadow fading excluded."""
    _check_distance(d_m)
    return fit.fspl_1m_db + 10.0 * fit.ple * math.log10(d_m / D0_M)


def _as_arrays(points: Iterable[Sequence[float]]) -> tuple[np.ndarray, np.ndarray]:
    pts = np.asarray(list(points), dtype=float)
    if pts.size == 0:
        raise ValueError("no points to fit")
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be (distance_m, path_loss_db) pairs")
    return pts[:, 0], pts[:, 1]


def ci_fit(points: Iterable[Sequence[float]], band: BandLike) -> CiFit:
    """Minimum mean-square-error CI fit.

    The exponent has the closed form ``n = sum(A*B) / sum(B*B)`` with
    ``A = PL - FSPL(f, 1 m)`` and ``B = 10 log10(d)``. The shadow-fading
    sigma is the RMS residual (divides by N, not N - 1).
    """
    band = as_band(band)
    d, pl = _as_arrays(points)
    if np.any(d < D0_M):
        raise ValueError("all distances must be >= 1 m")
    anchor = fspl_1m(band)
    a = pl - anchor
    b = 10.0 * np.log10(d / D0_M)
    bb = float(b @ b)
    if bb == 0.0:
        raise ValueError("all points at the reference distance: exponent undefined")
    n = float(a @ b) / bb
    resid = a - n * b
    sigma = math.sqrt(float(resid @ resid) / len(d))
    return CiFit(band=band, ple=n, sigma_db=sigma, n_points=len(d), fspl_1m_db=anchor)


def fi_fit(points: Iterable[Sequence[float]]) -> FiFit:
    """Ordinary least squares of path loss on ``10 log10(d)``.

    Returns intercept ``alpha_db`` (loss at 1 m), slope ``beta`` and the RMS
    residual with an N denominator, matching :func:`ci_fit`.
    """
    d, pl = _as_arrays(points)
    if np.any(d <= 0):
        raise ValueError("distances must be positive")
    if len(np.unique(d)) < 2:
        raise ValueError("floating-intercept fit needs at least two distinct distances")
    x = 10.0 * np.log10(d)
    xm, ym = x.mean(), pl.mean()
    dx = x - xm
    beta = float(dx @ (pl - ym)) / float(dx @ dx)
    alpha = float(ym - beta * xm)
    resid = pl - (alpha + beta * x)
    sigma = math.sqrt(float(resid @ resid) / len(d))
    return FiFit(alpha_db=alpha, beta=beta, sigma_db=sigma, n_points=len(d))


def fi_predict(fit: FiFit, d_m: float) -> float:
    if not d_m > 0:
        raise ValueError("distance must be positive")
    return fit.alpha_db + fit.beta * 10.0 * math.log10(d_m)


def best_direction_pl(directional_pls: Iterable[float]) -> float:
    """Path loss in the strongest pointing direction (the smallest loss)."""
    vals = list(directional_pls)
    if not vals:
        raise ValueError("no directional path loss values")
    return min(vals)


def shadow_fading_sample(fit: CiFit, d_m: float, rng: np.random.Generator) -> float:
    """One CI path-loss draw: the mean law plus Gaussian shadow fading."""
    mean = ci_predict(fit, d_m)
    # always draw so the stream position does not depend on sigma
    return mean + float(rng.normal(0.0, fit.sigma_db))


def sse(points: Iterable[Sequence[float]], band: BandLike, ple: float) -> float:
    """Sum of squared CI residuals for a given exponent."""
    d, pl = _as_arrays(points)
    r = pl - fspl_1m(band) - 10.0 * ple * np.log10(d / D0_M)
    return float(r @ r)
