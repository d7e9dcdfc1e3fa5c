"""Probability profiles, dispersion, and scaling-exponent fits."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateSeriesError, InsufficientDataError, InvalidParameterError
from .walk import WalkerState


class RegimeLabel(Enum):
    """Dynamical regime classified from the size-scaling exponent."""

    LOCALIZED = "localized"
    SUBDIFFUSIVE = "subdiffusive"
    DIFFUSIVE = "diffusive"
    SUPERDIFFUSIVE = "superdiffusive"
    BALLISTIC = "ballistic"


@dataclass
class TrajectoryStats:
    """Time series of the walker's mean position and dispersion.

    ``snapshots`` optionally maps a time step to the full probability
    profile recorded there.  ``boundary_contact_time`` is the first step
    at which the probability at the chain ends exceeded the contact
    threshold (None if it never did); statistics past that time include
    wrap-around artefacts.
    """

    times: np.ndarray
    mean_position: np.ndarray
    dispersion: np.ndarray
    snapshots: dict[int, np.ndarray] | None = None
    boundary_contact_time: int | None = None

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=np.int64)
        self.mean_position = np.asarray(self.mean_position, dtype=np.float64)
        self.dispersion = np.asarray(self.dispersion, dtype=np.float64)
        if not (self.times.shape == self.mean_position.shape == self.dispersion.shape):
            raise InvalidParameterError("times, mean_position, and dispersion must share one length")
        if self.times.ndim != 1 or self.times.size == 0:
            raise InvalidParameterError("trajectory must contain at least one entry")
        if np.any(self.dispersion < 0):
            raise InvalidParameterError("dispersion values must be non-negative")


def probability_profile(state: WalkerState) -> np.ndarray:
    """Born-rule site probabilities ``|up_n|^2 + |down_n|^2``."""
    up = state.up
    down = state.down
    return up.real**2 + up.imag**2 + down.real**2 + down.imag**2


def dispersion(profile) -> tuple[float, float]:
    """Mean site and spread of a probability profile over sites ``1 .. N``.

    Returns ``(mean, sigma)`` with ``mean = sum n P_n`` and
    ``sigma = sqrt(sum (n - mean)^2 P_n)``.

    Raises
    ------
    InvalidParameterError
        If the profile has negative entries or does not sum to 1 within
        1e-8.
    """
    p = np.asarray(profile, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise InvalidParameterError("profile must be a non-empty 1-D array")
    if np.any(p < 0):
        raise InvalidParameterError("profile contains negative probabilities")
    total = p.sum()
    if abs(total - 1.0) > 1e-8:
        raise InvalidParameterError(f"profile sums to {total!r}, expected 1 within 1e-8")
    sites = np.arange(1.0, p.size + 1.0)
    mean = float(np.dot(sites, p))
    dev = sites - mean
    sigma = float(np.sqrt(np.dot(dev * dev, p)))
    return mean, sigma


def _loglog_fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Unweighted OLS slope of log y vs log x, with its standard error."""
    lx = np.log(np.asarray(x, dtype=np.float64))
    ly = np.log(np.asarray(y, dtype=np.float64))
    dx = lx - lx.mean()
    sxx = float(np.dot(dx, dx))
    if sxx == 0.0:
        raise DegenerateSeriesError("all x values coincide; slope is undefined")
    slope = float(np.dot(dx, ly) / sxx)
    resid = ly - ly.mean() - slope * dx
    dof = max(lx.size - 2, 1)
    stderr = float(np.sqrt(np.dot(resid, resid) / dof / sxx))
    return slope, stderr


def fit_hurst(stats: TrajectoryStats, window: tuple[int, int] | None = None) -> tuple[float, float]:
    """Fit ``sigma(t) ~ t**H`` by least squares on the log-log series.

    Parameters
    ----------
    stats : TrajectoryStats
        Recorded trajectory; only entries with ``t >= 1`` can enter the
        fit.
    window : (t_min, t_max), optional
        Inclusive time bounds.  Defaults to ``[T // 5, T_eff]`` where
        ``T`` is the last recorded time and ``T_eff`` caps it at the
        boundary-contact time.  An explicit window must not extend past
        boundary contact.

    Returns
    -------
    (H, stderr)

    Raises
    ------
    InsufficientDataError
        Fewer than 5 points fall inside the window.
    DegenerateSeriesError
        The window contains non-positive dispersion values.
    InvalidParameterError
        The window extends past the boundary-contact time.
    """
    t_last = int(stats.times[-1])
    contact = stats.boundary_contact_time
    t_eff = t_last if contact is None else min(t_last, int(contact))
    if window is None:
        window = (t_last // 5, t_eff)
    t_min, t_max = int(window[0]), int(window[1])
    if contact is not None and t_max > contact:
        raise InvalidParameterError(
            f"fit window [{t_min}, {t_max}] extends past boundary contact at t={contact}"
        )
    mask = (stats.times >= max(t_min, 1)) & (stats.times <= t_max)
    if int(mask.sum()) < 5:
        raise InsufficientDataError(
            f"fit window [{t_min}, {t_max}] contains {int(mask.sum())} points, need at least 5"
        )
    sig = stats.dispersion[mask]
    if np.any(sig <= 0):
        raise DegenerateSeriesError("dispersion must be positive inside the fit window")
    return _loglog_fit(stats.times[mask], sig)


def longtime_avg_dispersion(stats: TrajectoryStats, window_len: int = 100) -> float:
    """Arithmetic mean of the dispersion over the final ``window_len`` entries."""
    if window_len < 1:
        raise InvalidParameterError(f"window_len must be positive, got {window_len}")
    if stats.times.size < window_len:
        raise InsufficientDataError(
            f"trajectory has {stats.times.size} entries, need at least {window_len}"
        )
    return float(np.mean(stats.dispersion[-window_len:]))


def fit_gamma(points) -> tuple[float, float]:
    """Fit ``sigma_bar ~ N**gamma`` from ``(N, sigma_bar)`` pairs.

    Returns ``(gamma, stderr)`` from an unweighted OLS fit of
    ``log sigma_bar`` vs ``log N``; requires at least 3 positive points.
    """
    pts = list(points)
    if len(pts) < 3:
        raise InsufficientDataError(f"need at least 3 (N, sigma_bar) points, got {len(pts)}")
    sizes = np.array([p[0] for p in pts], dtype=np.float64)
    sbar = np.array([p[1] for p in pts], dtype=np.float64)
    if np.any(sizes <= 0) or np.any(sbar <= 0):
        raise InvalidParameterError("all points must be positive for a log-log fit")
    return _loglog_fit(sizes, sbar)


def classify_regime(gamma: float) -> RegimeLabel:
    """Map a size-scaling exponent to its dynamical regime.

    Half-open bands of width 0.1 around the nominal values: below 0.10
    localized, [0.10, 0.40) subdiffusive, [0.40, 0.60) diffusive,
    [0.60, 0.90) superdiffusive, 0.90 and above ballistic.
    """
    g = float(gamma)
    if not np.isfinite(g):
        raise InvalidParameterError(f"gamma must be finite, got {gamma}")
    if g < 0.10:
        return RegimeLabel.LOCALIZED
    if g < 0.40:
        return RegimeLabel.SUBDIFFUSIVE
    if g < 0.60:
        return RegimeLabel.DIFFUSIVE
    if g < 0.90:
        return RegimeLabel.SUPERDIFFUSIVE
    return RegimeLabel.BALLISTIC
