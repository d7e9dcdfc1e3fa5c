"""Independent reference implementations used by the test suite only."""

import numpy as np

INV_SQRT2 = 1.0 / np.sqrt(2.0)


def dense_step_unitary(theta, phi):
    """The one-step map as an explicit 2N x 2N matrix.

    Basis ordering: indices 0..N-1 are spin-up at sites 1..N, indices
    N..2N-1 spin-down.  Entries follow the recurrence coefficients with
    periodic wrapping.
    """
    N = len(phi)
    U = np.zeros((2 * N, 2 * N), dtype=complex)
    for n in range(N):
        src_up = (n + 1) % N
        U[n, src_up] = INV_SQRT2
        U[n, N + src_up] = INV_SQRT2 * np.exp(1j * theta)
        src_down = (n - 1) % N
        U[N + n, src_down] = INV_SQRT2 * np.exp(1j * phi[n])
        U[N + n, N + src_down] = -INV_SQRT2 * np.exp(1j * (theta + phi[n]))
    return U


def as_vector(state):
    return np.concatenate([state.up, state.down])


def periodogram_slope(trace, k_lo=2, k_hi=None):
    """OLS slope of log |DFT|^2 vs log k over wavenumbers [k_lo, k_hi]."""
    trace = np.asarray(trace, float)
    M = trace.size
    if k_hi is None:
        k_hi = M // 8
    spectrum = np.fft.fft(trace)
    k = np.arange(k_lo, k_hi + 1)
    power = np.abs(spectrum[k]) ** 2
    return np.polyfit(np.log(k), np.log(power), 1)[0]


def windowed_peaks(values, threshold, half_width):
    """Indices that are the strict maximum of their +/- half_width window
    and exceed the threshold."""
    values = np.asarray(values, float)
    peaks = []
    for i in range(values.size):
        if values[i] <= threshold:
            continue
        lo = max(0, i - half_width)
        hi = min(values.size, i + half_width + 1)
        window = values[lo:hi]
        if values[i] == window.max() and np.count_nonzero(window == values[i]) == 1:
            peaks.append(i)
    return peaks
