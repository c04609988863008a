"""Imperfect initial-state preparation as a Gaussian-weighted Fock mixture.

A preparation aiming for the quantum number N actually delivers the
classical mixture with weights w_m proportional to exp(-(m-N)^2 / 2 Delta^2)
over m = 0, 1, ..., truncated at m = N + ceil(8 Delta) and renormalized
(the discarded tail mass is below 1e-14).  The preparation efficiency is
eta = 1 - w_{N+1}/w_N = 1 - exp(-1 / 2 Delta^2), so Delta -> 0 is the exact
Fock state with eta = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fluctuations import FluctuationModel, averaged_ground_probability


def efficiency(delta: float | None) -> float:
    """Preparation efficiency 1 - exp(-1 / 2 Delta^2); None means exact (1.0)."""
    if delta is None:
        return 1.0
    if delta <= 0.0:
        raise ValueError("delta must be positive (or None for an exact state)")
    return 1.0 - math.exp(-1.0 / (2.0 * delta * delta))


def delta_from_efficiency(eta_prep: float) -> float:
    """Width Delta achieving the given efficiency, inverse of ``efficiency``.

    Only defined on the open interval 0 < eta_prep < 1; an exact state
    (eta_prep = 1) is represented by delta = None.
    """
    if not (0.0 < eta_prep < 1.0):
        raise ValueError(f"eta_prep must lie in (0, 1), got {eta_prep}")
    return 1.0 / math.sqrt(-2.0 * math.log(1.0 - eta_prep))


@dataclass(frozen=True)
class PreparationModel:
    """Gaussian mixture of Fock states centered on ``n_target``.

    ``delta=None`` flags the exact state (single term at n_target).
    """

    n_target: int
    delta: float | None = None

    def __post_init__(self) -> None:
        if self.n_target < 0:
            raise ValueError("n_target must be non-negative")
        if self.delta is not None and self.delta <= 0.0:
            raise ValueError("delta must be positive (or None for an exact state)")

    @property
    def is_exact(self) -> bool:
        return self.delta is None

    @property
    def efficiency(self) -> float:
        return efficiency(self.delta)

    def terms(self, extra: int = 0) -> tuple[np.ndarray, np.ndarray]:
        """Mixture support m = 0..m_max and normalized weights.

        ``extra`` widens the truncation, used to verify that the default
        m_max = n_target + ceil(8 Delta) is already converged.
        """
        if self.delta is None:
            return np.array([self.n_target]), np.array([1.0])
        m_max = self.n_target + math.ceil(8.0 * self.delta) + extra
        m = np.arange(0, m_max + 1)
        weights = np.exp(-((m - self.n_target) ** 2) / (2.0 * self.delta**2))
        return m, weights / weights.sum()


def averaged_ground_probability_mixed(
    prep: PreparationModel,
    model: FluctuationModel,
    t: float,
    extra_terms: int = 0,
) -> float:
    """Mixture-averaged ground probability: sum_m w_m P_m(t).

    Each m enters exactly as a pure run with N = m; the m = 0 term is the
    stationary vacuum and contributes 1.
    """
    m_values, weights = prep.terms(extra=extra_terms)
    total = 0.0
    for m, w in zip(m_values, weights):
        total += w * averaged_ground_probability(int(m), model, t)
    return total


def parity_delta_mixed(
    n_odd: int,
    delta: float | None,
    model: FluctuationModel,
    t_compare: float,
) -> float:
    """Parity visibility with both runs prepared through the same mixture
    width: targets n_odd and n_odd + 1, compared at t_compare."""
    if n_odd % 2 == 0 or n_odd < 3:
        raise ValueError(f"n_odd must be odd and >= 3, got {n_odd}")
    upper = averaged_ground_probability_mixed(PreparationModel(n_odd, delta), model, t_compare)
    lower = averaged_ground_probability_mixed(PreparationModel(n_odd + 1, delta), model, t_compare)
    return upper - lower
