"""Disorder-averaged runs, lattice-size scans, and parameter sweeps.

Realizations are independent work units: realization ``r`` derives its own
coin-phase seed from the master seed, so results are reproducible and the
reduction over realizations is performed in index order regardless of how
many workers computed them.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, replace
from multiprocessing import Pool
from pathlib import Path

import numpy as np

from .errors import InvalidParameterError, ResourceLimitError
from .noise import _check_seed, derive_seed, generate_coin_phases
from .observables import (
    RegimeLabel,
    TrajectoryStats,
    classify_regime,
    fit_gamma,
    longtime_avg_dispersion,
)
from .walk import evolve, initial_state_symmetric

log = logging.getLogger(__name__)

# First time step at which P_1 + P_N exceeds this is flagged as boundary
# contact; statistics past it include periodic wrap-around.
BOUNDARY_CONTACT_EPS = 1e-8

DEFAULT_UPDATE_CAP = 1_000_000_000


@dataclass(frozen=True)
class EnsembleConfig:
    """Parameters of one disorder-averaged run."""

    N: int
    T: int
    alpha_t: float
    beta_s: float
    realizations: int = 200
    master_seed: int = 0
    snapshot_times: tuple[int, ...] = ()
    normalize_variance: bool = False
    snapshot_single: bool = False
    update_cap: int = DEFAULT_UPDATE_CAP

    def __post_init__(self) -> None:
        if not isinstance(self.N, (int, np.integer)) or self.N < 2:
            raise InvalidParameterError(f"N must be an integer >= 2, got {self.N}")
        if not isinstance(self.T, (int, np.integer)) or self.T < 1:
            raise InvalidParameterError(f"T must be a positive integer, got {self.T}")
        for name, value in (("alpha_t", self.alpha_t), ("beta_s", self.beta_s)):
            if not np.isfinite(value) or value < 0:
                raise InvalidParameterError(f"{name} must be a finite non-negative real, got {value}")
        if self.realizations < 1:
            raise InvalidParameterError(f"realizations must be >= 1, got {self.realizations}")
        _check_seed(self.master_seed)
        object.__setattr__(self, "snapshot_times", tuple(int(t) for t in self.snapshot_times))
        for t in self.snapshot_times:
            if not 0 <= t <= self.T:
                raise InvalidParameterError(f"snapshot time {t} outside [0, {self.T}]")
        if self.update_cap < 1:
            raise InvalidParameterError(f"update_cap must be positive, got {self.update_cap}")


@dataclass
class EnsembleResult:
    """Averaged trajectory statistics plus run provenance."""

    config: EnsembleConfig
    stats: TrajectoryStats
    realization_seeds: np.ndarray
    contacted_realizations: int
    elapsed_seconds: float


class _StatsRecorder:
    """Per-step observer recording dispersion, mean, snapshots, edge contact."""

    def __init__(self, N: int, T: int, snapshot_times) -> None:
        self.sites = np.arange(1.0, N + 1.0)
        self.profile = np.empty(N)
        self.work = np.empty(N)
        self.sigma = np.zeros(T + 1)
        self.mean = np.zeros(T + 1)
        self.snapshot_times = frozenset(int(t) for t in snapshot_times)
        self.snapshots: dict[int, np.ndarray] = {}
        self.contact: int | None = None

    def record(self, t: int, state) -> None:
        p = self.profile
        w = self.work
        up = state.up
        down = state.down
        np.multiply(up.real, up.real, out=p)
        np.multiply(up.imag, up.imag, out=w)
        p += w
        np.multiply(down.real, down.real, out=w)
        p += w
        np.multiply(down.imag, down.imag, out=w)
        p += w
        m = np.dot(self.sites, p)
        np.subtract(self.sites, m, out=w)
        w *= w
        self.mean[t] = m
        self.sigma[t] = np.sqrt(np.dot(w, p))
        if self.contact is None and p[0] + p[-1] > BOUNDARY_CONTACT_EPS:
            self.contact = t
        if t in self.snapshot_times:
            self.snapshots[t] = p.copy()

    __call__ = record


def run_realization(
    N: int,
    T: int,
    alpha_t: float,
    beta_s: float,
    seed: int,
    snapshot_times=(),
    normalize_variance: bool = False,
) -> TrajectoryStats:
    """Evolve one disorder realization and record its trajectory statistics.

    The walker starts from the symmetric state at site ``N // 2``; fresh
    coin phases are generated from ``seed``.
    """
    phases = generate_coin_phases(T, N, alpha_t, beta_s, seed, normalize=normalize_variance)
    state = initial_state_symmetric(N)
    recorder = _StatsRecorder(N, T, snapshot_times)
    recorder.record(0, state)
    evolve(state, phases, T, observer=recorder)
    return TrajectoryStats(
        times=np.arange(T + 1),
        mean_position=recorder.mean,
        dispersion=recorder.sigma,
        snapshots=recorder.snapshots or None,
        boundary_contact_time=recorder.contact,
    )


def _realization_task(args):
    N, T, alpha_t, beta_s, seed, snapshot_times, normalize_variance = args
    stats = run_realization(N, T, alpha_t, beta_s, seed, snapshot_times, normalize_variance)
    return stats.dispersion, stats.mean_position, stats.boundary_contact_time, stats.snapshots


def run_ensemble(config: EnsembleConfig, workers: int | None = None) -> EnsembleResult:
    """Average trajectories over ``config.realizations`` independent draws.

    Realization ``r`` (1-based) uses coin phases seeded by
    ``derive_seed(master_seed, r)``.  Per-realization results are
    accumulated strictly in realization order, so the output is
    bit-identical for a fixed master seed no matter how many workers are
    used.

    Raises
    ------
    ResourceLimitError
        If ``N * T`` exceeds ``config.update_cap``.
    """
    updates = config.N * config.T
    if updates > config.update_cap:
        raise ResourceLimitError(
            f"N*T = {updates} exceeds the configured cap of {config.update_cap} "
            "amplitude updates per realization; raise update_cap to allow this run"
        )
    seeds = [derive_seed(config.master_seed, r) for r in range(1, config.realizations + 1)]
    tasks = [
        (
            config.N,
            config.T,
            config.alpha_t,
            config.beta_s,
            seed,
            config.snapshot_times,
            config.normalize_variance,
        )
        for seed in seeds
    ]

    started = time.perf_counter()
    if workers is None or workers <= 1:
        results = map(_realization_task, tasks)
        stats, contacted = _reduce(results, config)
    else:
        chunksize = max(1, len(tasks) // (workers * 4))
        with Pool(processes=workers) as pool:
            results = pool.imap(_realization_task, tasks, chunksize=chunksize)
            stats, contacted = _reduce(results, config)
    elapsed = time.perf_counter() - started

    return EnsembleResult(
        config=config,
        stats=stats,
        realization_seeds=np.array(seeds, dtype=np.uint64),
        contacted_realizations=contacted,
        elapsed_seconds=elapsed,
    )


def _reduce(results, config: EnsembleConfig) -> tuple[TrajectoryStats, int]:
    """Accumulate per-realization results in realization order."""
    sigma_sum = np.zeros(config.T + 1)
    mean_sum = np.zeros(config.T + 1)
    snap_sums = {t: np.zeros(config.N) for t in config.snapshot_times}
    first_snapshots: dict[int, np.ndarray] | None = None
    contact_min: int | None = None
    contacted = 0

    for index, (sigma, mean, contact, snapshots) in enumerate(results):
        sigma_sum += sigma
        mean_sum += mean
        if contact is not None:
            contacted += 1
            contact_min = contact if contact_min is None else min(contact_min, contact)
        if snapshots:
            if index == 0:
                first_snapshots = snapshots
            for t, profile in snapshots.items():
                snap_sums[t] += profile

    R = config.realizations
    sigma_sum /= R
    mean_sum /= R
    averaged: dict[int, np.ndarray] | None = None
    if config.snapshot_times:
        if config.snapshot_single:
            averaged = first_snapshots
        else:
            averaged = {t: snap_sums[t] / R for t in config.snapshot_times}

    stats = TrajectoryStats(
        times=np.arange(config.T + 1),
        mean_position=mean_sum,
        dispersion=sigma_sum,
        snapshots=averaged,
        boundary_contact_time=contact_min,
    )
    return stats, contacted


def scan_config(base: EnsembleConfig, N: int, T: int | None = None) -> EnsembleConfig:
    """Per-size config for a scan: ``T = N // 2`` by default and an
    independent master seed derived from the base seed and the size."""
    return replace(
        base,
        N=int(N),
        T=int(T) if T is not None else int(N) // 2,
        master_seed=derive_seed(base.master_seed, "size", int(N)),
        snapshot_times=(),
    )


def size_scan(
    base: EnsembleConfig,
    sizes,
    *,
    window_len: int = 100,
    workers: int | None = None,
) -> list[tuple[int, float]]:
    """Long-time mean dispersion versus lattice size.

    Runs one ensemble per size with ``T = N // 2`` and independent derived
    seeds, and extracts the mean dispersion over the final ``window_len``
    steps.  The output is ordered by increasing ``N``.
    """
    ordered = sorted(int(n) for n in sizes)
    if len(ordered) < 3:
        raise InvalidParameterError(f"need at least 3 sizes, got {len(ordered)}")
    points = []
    for N in ordered:
        result = run_ensemble(scan_config(base, N), workers=workers)
        points.append((N, longtime_avg_dispersion(result.stats, window_len)))
        log.info("size scan N=%d: sigma_bar=%.6g", N, points[-1][1])
    return points


@dataclass
class SweepResult:
    """Grid of fitted size-scaling exponents and their regime labels."""

    alphas: tuple[float, ...]
    betas: tuple[float, ...]
    gamma: np.ndarray
    stderr: np.ndarray
    regimes: list[list[RegimeLabel]]
    sizes: tuple[int, ...]
    points: dict[tuple[int, int], list[tuple[int, float]]]

    def rows(self):
        """Yield ``(alpha, beta, gamma, stderr, regime)`` in grid order."""
        for i, a in enumerate(self.alphas):
            for j, b in enumerate(self.betas):
                yield a, b, float(self.gamma[i, j]), float(self.stderr[i, j]), self.regimes[i][j]


def _cell_path(out_dir: Path, i: int, j: int) -> Path:
    return out_dir / "cells" / f"cell_{i:03d}_{j:03d}.json"


def _load_cell(path: Path, alpha: float, beta: float, sizes) -> dict:
    with open(path, encoding="utf-8") as fh:
        cell = json.load(fh)
    if cell.get("alpha") != alpha or cell.get("beta") != beta:
        raise InvalidParameterError(
            f"{path} holds a result for (alpha={cell.get('alpha')}, beta={cell.get('beta')}), "
            f"not (alpha={alpha}, beta={beta}); use force=True or a fresh output directory"
        )
    cell_sizes = tuple(int(n) for n, _ in cell.get("points", ()))
    if cell_sizes != tuple(sizes):
        raise InvalidParameterError(
            f"{path} was computed for sizes {list(cell_sizes)}, not {list(sizes)}; "
            "use force=True or a fresh output directory"
        )
    return cell


def phase_diagram_sweep(
    grid_alpha,
    grid_beta,
    base: EnsembleConfig,
    sizes,
    *,
    window_len: int = 100,
    workers: int | None = None,
    out_dir: str | Path | None = None,
    force: bool = False,
) -> SweepResult:
    """Fit the size-scaling exponent over an ``(alpha_t, beta_s)`` grid.

    Every cell runs an independent size scan (seeded from the base master
    seed and the cell indices), fits gamma, and classifies the regime.
    With ``out_dir`` set, each completed cell is persisted as JSON under
    ``cells/`` and re-runs skip cells whose files already exist unless
    ``force`` is true.
    """
    alphas = tuple(float(a) for a in grid_alpha)
    betas = tuple(float(b) for b in grid_beta)
    if not alphas or not betas:
        raise InvalidParameterError("alpha and beta grids must be non-empty")
    ordered_sizes = tuple(sorted(int(n) for n in sizes))

    root = Path(out_dir) if out_dir is not None else None
    if root is not None:
        (root / "cells").mkdir(parents=True, exist_ok=True)

    gamma = np.empty((len(alphas), len(betas)))
    stderr = np.empty_like(gamma)
    regimes: list[list[RegimeLabel]] = [[RegimeLabel.DIFFUSIVE] * len(betas) for _ in alphas]
    points: dict[tuple[int, int], list[tuple[int, float]]] = {}

    for i, alpha in enumerate(alphas):
        for j, beta in enumerate(betas):
            cell_file = _cell_path(root, i, j) if root is not None else None
            if cell_file is not None and cell_file.exists() and not force:
                cell = _load_cell(cell_file, alpha, beta, ordered_sizes)
                log.info("cell (alpha=%g, beta=%g): reusing %s", alpha, beta, cell_file)
            else:
                cell_base = replace(
                    base,
                    alpha_t=alpha,
                    beta_s=beta,
                    master_seed=derive_seed(base.master_seed, "cell", i, j),
                )
                cell_points = size_scan(cell_base, ordered_sizes, window_len=window_len, workers=workers)
                g, se = fit_gamma(cell_points)
                cell = {
                    "alpha": alpha,
                    "beta": beta,
                    "gamma": g,
                    "stderr": se,
                    "regime": classify_regime(g).value,
                    "points": [[n, s] for n, s in cell_points],
                    "master_seed": cell_base.master_seed,
                }
                if cell_file is not None:
                    with open(cell_file, "w", encoding="utf-8", newline="\n") as fh:
                        json.dump(cell, fh, indent=2, sort_keys=True)
                        fh.write("\n")
                log.info("cell (alpha=%g, beta=%g): gamma=%.4f (%s)", alpha, beta, g, cell["regime"])
            gamma[i, j] = cell["gamma"]
            stderr[i, j] = cell["stderr"]
            regimes[i][j] = RegimeLabel(cell["regime"])
            points[(i, j)] = [(int(n), float(s)) for n, s in cell["points"]]

    return SweepResult(
        alphas=alphas,
        betas=betas,
        gamma=gamma,
        stderr=stderr,
        regimes=regimes,
        sizes=ordered_sizes,
        points=points,
    )
