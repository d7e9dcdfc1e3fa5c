"""Walker state on the chain and the coined evolution step.

Sites are labelled ``1 .. N`` and stored 0-based, so ``up[i]`` is the
spin-up amplitude at site ``i + 1``.  One step applies the coin with the
current temporal phase ``theta_t`` and the per-site phases ``phi_n``, then
shifts: spin-up amplitude gathers from site ``n + 1``, spin-down from
``n - 1``, with periodic wrapping at the chain ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .errors import InvalidParameterError
from .noise import CoinPhases, PhaseSequence

INV_SQRT2 = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class CoinParameters:
    """SU(2) coin parameters: bias ``q`` and the two relative phases."""

    q: float
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not np.isfinite(self.q) or not 0.0 <= self.q <= 1.0:
            raise InvalidParameterError(f"q must lie in [0, 1], got {self.q}")


def coin_matrix(params: CoinParameters) -> np.ndarray:
    """Return the 2x2 unitary coin matrix for the given parameters.

    ::

        [ sqrt(q)               sqrt(1-q) e^{i theta}      ]
        [ sqrt(1-q) e^{i phi}  -sqrt(q)   e^{i(theta+phi)} ]

    ``q = 1/2`` with ``theta = phi = 0`` is the fair (Hadamard) coin.
    """
    rq = np.sqrt(params.q)
    rp = np.sqrt(1.0 - params.q)
    return np.array(
        [
            [rq, rp * np.exp(1j * params.theta)],
            [rp * np.exp(1j * params.phi), -rq * np.exp(1j * (params.theta + params.phi))],
        ],
        dtype=np.complex128,
    )


@dataclass
class WalkerState:
    """Two complex amplitude arrays over N sites at one time step."""

    up: np.ndarray
    down: np.ndarray
    time: int = 0

    def __post_init__(self) -> None:
        self.up = np.asarray(self.up, dtype=np.complex128)
        self.down = np.asarray(self.down, dtype=np.complex128)
        if self.up.ndim != 1 or self.up.shape != self.down.shape:
            raise InvalidParameterError("up and down must be 1-D arrays of identical length")
        if self.up.size < 2:
            raise InvalidParameterError(f"lattice needs at least 2 sites, got {self.up.size}")
        if self.time < 0:
            raise InvalidParameterError(f"time must be non-negative, got {self.time}")

    @property
    def lattice_size(self) -> int:
        return self.up.size

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.up, self.up).real + np.vdot(self.down, self.down).real))

    def copy(self) -> "WalkerState":
        return WalkerState(self.up.copy(), self.down.copy(), self.time)


def initial_state_symmetric(N: int) -> WalkerState:
    """Walker at site ``N // 2`` with equal-weight internal components.

    The amplitudes are ``1/sqrt(2)`` (spin-up) and ``i/sqrt(2)``
    (spin-down); every other site is zero and ``time`` is 0.
    """
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise InvalidParameterError(f"N must be an integer >= 2, got {N}")
    up = np.zeros(N, dtype=np.complex128)
    down = np.zeros(N, dtype=np.complex128)
    center = N // 2
    up[center - 1] = INV_SQRT2
    down[center - 1] = 1j * INV_SQRT2
    return WalkerState(up=up, down=down, time=0)


def initial_state_generic(
    N: int, amplitudes: Iterable[tuple[int, complex, complex]]
) -> tuple[WalkerState, float]:
    """Build a normalized state from ``(site, up, down)`` amplitude entries.

    Sites are 1-based; entries for the same site accumulate.  The state is
    rescaled to unit norm and the applied factor returned alongside it.

    Raises
    ------
    InvalidParameterError
        On an empty amplitude list, a site outside ``[1, N]``, or zero
        total norm.
    """
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise InvalidParameterError(f"N must be an integer >= 2, got {N}")
    up = np.zeros(N, dtype=np.complex128)
    down = np.zeros(N, dtype=np.complex128)
    empty = True
    for site, amp_up, amp_down in amplitudes:
        empty = False
        if not 1 <= site <= N:
            raise InvalidParameterError(f"site {site} outside [1, {N}]")
        up[site - 1] += amp_up
        down[site - 1] += amp_down
    if empty:
        raise InvalidParameterError("amplitude list is empty")
    norm = np.sqrt(np.vdot(up, up).real + np.vdot(down, down).real)
    if norm == 0.0:
        raise InvalidParameterError("total norm is zero")
    factor = 1.0 / norm
    up *= factor
    down *= factor
    return WalkerState(up=up, down=down, time=0), factor


def _phi_values(phi, N: int) -> np.ndarray:
    values = phi.values if isinstance(phi, PhaseSequence) else np.asarray(phi, dtype=np.float64)
    if values.ndim != 1 or values.size != N:
        raise InvalidParameterError(f"phi has length {values.size}, lattice has {N} sites")
    return values


def _step_kernel(u, d, exp_theta, exp_phi_scaled, out_up, out_down, scratch) -> None:
    # out_up[n]   = (u[n+1] + e^{i theta} d[n+1]) / sqrt(2)
    # out_down[n] = e^{i phi_n} (u[n-1] - e^{i theta} d[n-1]) / sqrt(2)
    # exp_phi_scaled already carries the 1/sqrt(2) factor.
    np.multiply(d, exp_theta, out=scratch)
    np.add(u, scratch, out=out_down)  # out_down used as a temporary here
    out_up[:-1] = out_down[1:]
    out_up[-1] = out_down[0]
    out_up *= INV_SQRT2
    np.subtract(u, scratch, out=scratch)
    out_down[1:] = scratch[:-1]
    out_down[0] = scratch[-1]
    out_down *= exp_phi_scaled


def step(state: WalkerState, theta_t: float, phi) -> WalkerState:
    """Advance the state by one time step.

    ``theta_t`` is the temporal coin phase for this step; ``phi`` the
    per-site phase sequence (applied at the destination site of the
    spin-down shift).  Site indices wrap periodically.  The map is unitary
    for every phase choice, so the norm is preserved.
    """
    values = _phi_values(phi, state.lattice_size)
    exp_theta = complex(np.exp(1j * float(theta_t)))
    exp_phi_scaled = np.exp(1j * values)
    exp_phi_scaled *= INV_SQRT2
    out_up = np.empty_like(state.up)
    out_down = np.empty_like(state.down)
    scratch = np.empty_like(state.up)
    _step_kernel(state.up, state.down, exp_theta, exp_phi_scaled, out_up, out_down, scratch)
    return WalkerState(up=out_up, down=out_down, time=state.time + 1)


def evolve(
    state: WalkerState,
    phases: CoinPhases,
    T: int,
    observer: Callable[[int, WalkerState], None] | None = None,
) -> WalkerState:
    """Apply ``T`` steps, using ``theta[t-1]`` for step ``t`` and fixed ``phi``.

    The observer, if given, is called as ``observer(t, state_t)`` after
    each step with ``t`` counted from ``state.time``.  The state handed to
    the observer reuses internal buffers: copy the amplitude arrays before
    storing them.

    Raises
    ------
    InvalidParameterError
        If fewer than ``T`` temporal phases are available or the spatial
        sequence does not match the lattice size.
    """
    if not isinstance(T, (int, np.integer)) or T < 0:
        raise InvalidParameterError(f"T must be a non-negative integer, got {T}")
    if len(phases.theta) < T:
        raise InvalidParameterError(
            f"need {T} temporal phases, sequence has {len(phases.theta)}"
        )
    phi_values = _phi_values(phases.phi, state.lattice_size)
    if T == 0:
        return state.copy()

    exp_theta = np.exp(1j * phases.theta.values[:T])
    exp_phi_scaled = np.exp(1j * phi_values)
    exp_phi_scaled *= INV_SQRT2

    u = state.up.copy()
    d = state.down.copy()
    buf_u = np.empty_like(u)
    buf_d = np.empty_like(d)
    scratch = np.empty_like(u)
    current = WalkerState(up=u, down=d, time=state.time) if observer is not None else None

    for t in range(1, T + 1):
        _step_kernel(u, d, exp_theta[t - 1], exp_phi_scaled, buf_u, buf_d, scratch)
        u, buf_u = buf_u, u
        d, buf_d = buf_d, d
        if observer is not None:
            current.up = u
            current.down = d
            current.time = state.time + t
            observer(state.time + t, current)

    return WalkerState(up=u, down=d, time=state.time + T)
