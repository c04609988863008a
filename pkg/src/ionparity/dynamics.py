"""Closed-form vibronic dynamics of the pair-exchange coupling.

An initial state with N total quanta distributed binomially over
|N-k, k> and the internal system in |-> stays exactly solvable: each
k-sector oscillates independently at its own rate

    f_k = 2 * g * sqrt((N - k) * k)

so the component attached to |-> is sum_k P_k cos(f_k t) |N-k, k>, the
component attached to |+> is -i sum_{k=1}^{N-1} P_k sin(f_k t) |N-k-1, k-1>,
and the ground-level probability is

    c(t) = 1/2 * [1 + sum_k |P_k|^2 cos(2 f_k t)].

The weights |P_k|^2 = 2^-N C(N, k) come from the tau=1 spin-coherent
construction of the initial state.  Everything here is a pure function of
its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .states import TwoModeState, VibronicState


def symmetric_binomial_amplitudes(n_total: int) -> np.ndarray:
    """Amplitudes P_k = 2^(-N/2) sqrt(C(N, k)) for k = 0..N.

    Built from cumulative products of ratios so no factorial ever
    overflows, valid far beyond N ~ 170.
    """
    if n_total < 0:
        raise ValueError("n_total must be non-negative")
    amps = np.empty(n_total + 1)
    amps[0] = 2.0 ** (-n_total / 2.0)
    for k in range(1, n_total + 1):
        amps[k] = amps[k - 1] * np.sqrt((n_total - k + 1) / k)
    return amps


@dataclass(frozen=True)
class Su2CoherentSpec:
    """Parameters of a two-mode spin-coherent state: complex tau_param and
    spin length j with 2j a non-negative integer."""

    tau_param: complex
    j: float

    def __post_init__(self) -> None:
        doubled = 2.0 * self.j
        if self.j < 0 or abs(doubled - round(doubled)) > 1e-9:
            raise ValueError(f"2j must be a non-negative integer, got j={self.j}")

    @property
    def n_quanta(self) -> int:
        return int(round(2.0 * self.j))


def build_su2_state(spec: Su2CoherentSpec, cutoff_a: int, cutoff_b: int) -> TwoModeState:
    """Normalized spin-coherent state on the |2j-k, k> anti-diagonal.

    coefficient_k = (1 + |tau|^2)^(-j) * sqrt(C(2j, k)) * tau^k.  At
    tau_param = 1 this reduces to the symmetric binomial amplitudes; at
    tau_param = 0 only |2j, 0> survives.
    """
    n = spec.n_quanta
    if cutoff_a < n or cutoff_b < n:
        raise ValueError(
            f"cutoffs ({cutoff_a}, {cutoff_b}) too small for 2j = {n} quanta"
        )
    tau = complex(spec.tau_param)
    coeffs = np.empty(n + 1, dtype=np.complex128)
    coeffs[0] = (1.0 + abs(tau) ** 2) ** (-spec.j)
    for k in range(1, n + 1):
        coeffs[k] = coeffs[k - 1] * tau * np.sqrt((n - k + 1) / k)
    grid = np.zeros((cutoff_a + 1, cutoff_b + 1), dtype=np.complex128)
    for k in range(n + 1):
        grid[n - k, k] = coeffs[k]
    return TwoModeState(grid)


@dataclass(frozen=True)
class RabiSpectrum:
    """Oscillation rates and weights governing the N-quanta dynamics.

    frequencies[k] = 2 g sqrt((N-k) k) (rad/s), symmetric under k -> N-k
    with zeros at both ends; weights[k] = 2^-N C(N, k), summing to one.
    """

    n_total: int
    frequencies: np.ndarray
    weights: np.ndarray


def rabi_spectrum(n_total: int, g: float) -> RabiSpectrum:
    if g <= 0.0:
        raise ValueError("g must be positive")
    k = np.arange(n_total + 1)
    freqs = 2.0 * g * np.sqrt((n_total - k) * k)
    weights = symmetric_binomial_amplitudes(n_total) ** 2
    freqs.flags.writeable = False
    weights.flags.writeable = False
    return RabiSpectrum(n_total=n_total, frequencies=freqs, weights=weights)


def evolve_closed_form(
    n_total: int,
    g: float,
    t: float,
    cutoff_a: int | None = None,
    cutoff_b: int | None = None,
) -> VibronicState:
    """Exact state at time t >= 0 from the binomial N-quanta initial state.

    Defaults the grid to cutoff N in each mode, the smallest grid holding
    both components.  Total norm is 1 for every (N, t).
    """
    if n_total < 0:
        raise ValueError("n_total must be non-negative")
    if t < 0.0:
        raise ValueError("t must be non-negative")
    ca = n_total if cutoff_a is None else cutoff_a
    cb = n_total if cutoff_b is None else cutoff_b
    if ca < n_total or cb < n_total:
        raise ValueError("cutoffs must be at least n_total")
    amps = symmetric_binomial_amplitudes(n_total)
    spec = rabi_spectrum(n_total, g)
    minus = np.zeros((ca + 1, cb + 1), dtype=np.complex128)
    plus = np.zeros_like(minus)
    for k in range(n_total + 1):
        minus[n_total - k, k] = amps[k] * np.cos(spec.frequencies[k] * t)
    for k in range(1, n_total):
        plus[n_total - k - 1, k - 1] = -1j * amps[k] * np.sin(spec.frequencies[k] * t)
    return VibronicState(TwoModeState(minus), TwoModeState(plus))


def ground_probability(n_total: int, g: float, t):
    """Probability c(t) of finding the internal system in |->.

    Accepts a scalar or array of times; returns the matching shape.
    """
    spec = rabi_spectrum(n_total, g)
    times = np.asarray(t, dtype=float)
    if np.any(times < 0.0):
        raise ValueError("t must be non-negative")
    phases = 2.0 * np.multiply.outer(times, spec.frequencies)
    c = 0.5 * (1.0 + np.cos(phases) @ spec.weights)
    return float(c) if np.isscalar(t) or times.ndim == 0 else c


def binary_entropy(p):
    """-p ln p - (1-p) ln(1-p), with the limit value 0 at p in {0, 1}."""
    arr = np.clip(np.asarray(p, dtype=float), 0.0, 1.0)
    out = np.zeros_like(arr)
    interior = (arr > 0.0) & (arr < 1.0)
    q = arr[interior]
    out[interior] = -(q * np.log(q) + (1.0 - q) * np.log(1.0 - q))
    return float(out) if np.isscalar(p) or arr.ndim == 0 else out


def vibrational_entropy(n_total: int, g: float, t):
    """Entanglement entropy (nats) between vibration and internal state.

    For this dynamics the reduced spectrum is {c, 1-c}, so the entropy is
    the binary entropy of the ground probability, bounded by ln 2.
    """
    return binary_entropy(ground_probability(n_total, g, t))


def von_neumann_entropy(density: np.ndarray) -> float:
    """-Tr[rho ln rho] via the eigenvalue spectrum; zeros are skipped."""
    evals = np.linalg.eigvalsh(np.asarray(density))
    evals = np.clip(evals.real, 0.0, None)
    positive = evals[evals > 0.0]
    return float(-np.sum(positive * np.log(positive)))


@dataclass(frozen=True)
class ParityTimes:
    """Characteristic instants of the parity effect for a given N.

    For odd N: ``revival_time`` = pi (N-1) / (4 g) is the instant near
    which the ground probability returns close to one,
    ``entangle_time`` = pi (N+1) / (4 g) is the maximal-entanglement
    instant of the even partner N+1, and ``comparison_time`` =
    pi (2N-1) / (8 g) -- the midpoint of pi (N-1)/(4 g) and pi N/(4 g) --
    is the single instant at which odd-N and even-(N+1) runs are compared.

    For even N only ``entangle_time`` = pi N / (4 g) is defined.
    """

    n_total: int
    revival_time: float | None
    entangle_time: float
    comparison_time: float | None


def parity_times(n_total: int, g: float) -> ParityTimes:
    if n_total < 2:
        raise ValueError("n_total must be at least 2")
    if g <= 0.0:
        raise ValueError("g must be positive")
    if n_total % 2 == 1:
        return ParityTimes(
            n_total=n_total,
            revival_time=np.pi * (n_total - 1) / (4.0 * g),
            entangle_time=np.pi * (n_total + 1) / (4.0 * g),
            comparison_time=np.pi * (2 * n_total - 1) / (8.0 * g),
        )
    return ParityTimes(
        n_total=n_total,
        revival_time=None,
        entangle_time=np.pi * n_total / (4.0 * g),
        comparison_time=None,
    )
