"""Independent numerical propagators used to validate the closed forms.

Two Hamiltonians are implemented over the truncated vibronic basis
|n_a, n_b> x {|->, |+>}:

* the static pair-exchange model H = coupling * (a b sigma+ + h.c.),
  which decomposes into closed two-level blocks
  |n_a, n_b>|->  <->  |n_a - 1, n_b - 1>|+> rotating at
  coupling * sqrt(n_a n_b), evolved exactly block by block;

* the time-dependent drive Hamiltonian of two counter-phased beams along
  the diagonal mode directions, expanded to a configurable total power of
  the Lamb-Dicke parameter and integrated with a fixed-step RK4 scheme.

The closed-form module's rate parameter g makes each |N-k, k> amplitude
oscillate at 2 g sqrt((N-k) k), so closed-form runs with rate g correspond
to the pair-exchange propagator with coupling = 2 g.  The drive expansion,
whose static part is coupling = omega * eta^2 * exp(-eta^2/2), matches the
pair-exchange propagator at that same coupling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fluctuations import sample_pulse_areas
from .states import PhysicalParams, TwoModeState, VibronicState

# Maximum tolerated population on plus-component cells whose coupling
# partner would fall outside the grid.
EDGE_POPULATION_TOL = 1e-12

# Fixed-step integration must resolve the fastest retained oscillation
# with at least this many steps per cycle.
STEPS_PER_CYCLE = 20


class TruncationError(RuntimeError):
    """Raised when population sits on cells whose dynamics needs a larger grid."""


def vibronic_basis_labels(cutoff_a: int, cutoff_b: int) -> list[tuple[str, int, int]]:
    """Basis ordering used by the dense matrices: the full |-> grid
    (row-major) followed by the full |+> grid."""
    labels = []
    for sign in ("-", "+"):
        for na in range(cutoff_a + 1):
            for nb in range(cutoff_b + 1):
                labels.append((sign, na, nb))
    return labels


class EffectiveHamiltonian:
    """Dense matrix of coupling * (a b sigma+ + a^dag b^dag sigma-).

    Couples only |n_a, n_b>|-> <-> |n_a - 1, n_b - 1>|+> with matrix
    element coupling * sqrt(n_a n_b); Hermitian by construction.
    """

    def __init__(self, coupling: float, cutoff_a: int, cutoff_b: int) -> None:
        if coupling <= 0.0:
            raise ValueError("coupling must be positive")
        if cutoff_a < 0 or cutoff_b < 0:
            raise ValueError("cutoffs must be non-negative")
        self.coupling = coupling
        self.cutoff_a = cutoff_a
        self.cutoff_b = cutoff_b

    @property
    def grid_size(self) -> int:
        return (self.cutoff_a + 1) * (self.cutoff_b + 1)

    def matrix(self) -> np.ndarray:
        dim = 2 * self.grid_size
        width = self.cutoff_b + 1
        matrix = np.zeros((dim, dim), dtype=np.complex128)
        for na in range(1, self.cutoff_a + 1):
            for nb in range(1, self.cutoff_b + 1):
                i_minus = na * width + nb
                i_plus = self.grid_size + (na - 1) * width + (nb - 1)
                element = self.coupling * math.sqrt(na * nb)
                matrix[i_minus, i_plus] = element
                matrix[i_plus, i_minus] = element
        return matrix


def propagate_effective(
    initial: VibronicState, coupling: float, t: float, dt_max: float | None = None
) -> VibronicState:
    """Evolve ``initial`` under the pair-exchange Hamiltonian for time t.

    Every two-level block is rotated exactly, so the result carries no
    step-size error; ``dt_max`` merely splits the evolution into exact
    sub-steps and never changes the outcome.  Raises TruncationError when
    plus-component population sits on the grid edge where its coupling
    partner is not representable.
    """
    if coupling <= 0.0:
        raise ValueError("coupling must be positive")
    if t < 0.0:
        raise ValueError("t must be non-negative")
    if dt_max is not None and dt_max <= 0.0:
        raise ValueError("dt_max must be positive")
    minus = initial.minus_component.amplitudes.copy()
    plus = initial.plus_component.amplitudes.copy()
    ca, cb = initial.cutoff_a, initial.cutoff_b

    edge_population = float(np.sum(np.abs(plus[-1, :]) ** 2))
    if ca > 0:
        edge_population += float(np.sum(np.abs(plus[:-1, -1]) ** 2))
    if edge_population > EDGE_POPULATION_TOL:
        raise TruncationError(
            f"plus-component population {edge_population:.3e} on the cutoff "
            f"boundary exceeds {EDGE_POPULATION_TOL}; enlarge the grid"
        )
    if ca == 0 or cb == 0 or t == 0.0:
        return VibronicState(TwoModeState(minus), TwoModeState(plus))

    steps = 1 if dt_max is None else max(1, math.ceil(t / dt_max))
    step = t / steps
    kappa = coupling * np.sqrt(
        np.multiply.outer(np.arange(1.0, ca + 1.0), np.arange(1.0, cb + 1.0))
    )
    cos_step = np.cos(kappa * step)
    sin_step = np.sin(kappa * step)
    for _ in range(steps):
        m_block = minus[1:, 1:]
        p_block = plus[:ca, :cb]
        new_m = cos_step * m_block - 1j * sin_step * p_block
        new_p = cos_step * p_block - 1j * sin_step * m_block
        minus[1:, 1:] = new_m
        plus[:ca, :cb] = new_p
    return VibronicState(TwoModeState(minus), TwoModeState(plus))


def _annihilation_matrix(dim: int) -> np.ndarray:
    mat = np.zeros((dim, dim))
    n = np.arange(1, dim)
    mat[n - 1, n] = np.sqrt(n)
    return mat


class LambDickeHamiltonian:
    """Drive Hamiltonian of the two counter-phased beams, expanded in eta.

    Retains every operator product with total power j + k <= expansion_order
    of the diagonal-mode ladder operators, each oscillating at
    (k - j - 2) * nu in the rotating frame.  At expansion_order = 2 with
    only the static (k - j - 2 = 0) term kept, the matrix reduces to
    ``EffectiveHamiltonian`` with coupling omega * eta^2 * exp(-eta^2/2);
    the beam labeling is fixed so that term enters with a plus sign.
    """

    def __init__(
        self,
        params: PhysicalParams,
        expansion_order: int,
        cutoff_a: int,
        cutoff_b: int,
        resonant_only: bool = False,
    ) -> None:
        if params.omega is None or params.nu is None or params.eta_ld is None:
            raise ValueError("params must provide omega, nu and eta_ld")
        if not params.eta_ld < 1.0:
            raise ValueError(f"eta_ld must be below 1, got {params.eta_ld}")
        if expansion_order < 2:
            raise ValueError(
                "expansion_order below 2 cannot represent the pair-exchange process"
            )
        self.params = params
        self.expansion_order = expansion_order
        self.cutoff_a = cutoff_a
        self.cutoff_b = cutoff_b
        self.grid_size = (cutoff_a + 1) * (cutoff_b + 1)

        a_full = np.kron(_annihilation_matrix(cutoff_a + 1), np.eye(cutoff_b + 1))
        b_full = np.kron(np.eye(cutoff_a + 1), _annihilation_matrix(cutoff_b + 1))
        mode_x = (a_full + b_full) / math.sqrt(2.0)
        mode_y = (b_full - a_full) / math.sqrt(2.0)

        order = expansion_order
        lower_pows = {"x": _matrix_powers(mode_x, order), "y": _matrix_powers(mode_y, order)}
        raise_pows = {
            "x": _matrix_powers(mode_x.T.conj(), order),
            "y": _matrix_powers(mode_y.T.conj(), order),
        }

        eta = params.eta_ld
        prefactor = params.omega * math.exp(-(eta**2) / 2.0)
        terms: dict[int, np.ndarray] = {}
        for j in range(order + 1):
            for k in range(order + 1 - j):
                if j == 0 and k == 0:
                    continue  # identical in both beams, cancels exactly
                harmonic = k - j - 2
                if resonant_only and harmonic != 0:
                    continue
                coeff = prefactor * (-1j * eta) ** (j + k) / (
                    math.factorial(j) * math.factorial(k)
                )
                op = raise_pows["y"][k] @ lower_pows["y"][j] - (
                    raise_pows["x"][k] @ lower_pows["x"][j]
                )
                if harmonic not in terms:
                    terms[harmonic] = np.zeros(
                        (self.grid_size, self.grid_size), dtype=np.complex128
                    )
                terms[harmonic] += coeff * op

        self.harmonics = np.array(sorted(terms), dtype=float)
        self._lower_blocks = np.stack([terms[int(m)] for m in self.harmonics])
        self._raise_blocks = np.conj(np.transpose(self._lower_blocks, (0, 2, 1)))
        # flattened copies let the integrator hit BLAS with one GEMV per block
        n_harmonics = len(self.harmonics)
        self._lower_flat = np.ascontiguousarray(
            self._lower_blocks.reshape(n_harmonics * self.grid_size, self.grid_size)
        )
        self._raise_flat = np.ascontiguousarray(
            self._raise_blocks.reshape(n_harmonics * self.grid_size, self.grid_size)
        )

    def stability_dt(self) -> float:
        """Largest step resolving the fastest retained oscillation."""
        fastest = float(np.max(np.abs(self.harmonics))) * self.params.nu
        if fastest == 0.0:
            return math.inf
        return 2.0 * math.pi / (STEPS_PER_CYCLE * fastest)

    def matrix_at(self, t: float) -> np.ndarray:
        """Full Hermitian matrix at time t over the ``vibronic_basis_labels``
        ordering (minus block first)."""
        phases = np.exp(1j * self.harmonics * self.params.nu * t)
        coupling_block = np.einsum("m,mij->ij", phases, self._lower_blocks)
        dim = self.grid_size
        matrix = np.zeros((2 * dim, 2 * dim), dtype=np.complex128)
        matrix[:dim, dim:] = coupling_block
        matrix[dim:, :dim] = coupling_block.conj().T
        return matrix

    def _rhs(self, t: float, y: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
        # d/dt [minus; plus] = -i H(t) [minus; plus] with the block structure
        # H = [[0, W(t)], [W(t)^dag, 0]] and W(t) = sum_m e^{i m nu t} W_m.
        dim = self.grid_size
        n_harmonics = len(self.harmonics)
        phases = np.exp(1j * self.harmonics * self.params.nu * t)
        if out is None:
            out = np.empty_like(y)
        lowered = np.dot(self._lower_flat, y[dim:]).reshape(n_harmonics, dim)
        raised = np.dot(self._raise_flat, y[:dim]).reshape(n_harmonics, dim)
        np.dot(phases, lowered, out=out[:dim])
        np.dot(phases.conj(), raised, out=out[dim:])
        out *= -1j
        return out


def _matrix_powers(matrix: np.ndarray, max_power: int) -> list[np.ndarray]:
    powers = [np.eye(matrix.shape[0], dtype=np.complex128)]
    for _ in range(max_power):
        powers.append(powers[-1] @ matrix)
    return powers


def _rk4_span(h_ld: LambDickeHamiltonian, y: np.ndarray, t0: float, t1: float, dt: float) -> np.ndarray:
    span = t1 - t0
    if span == 0.0:
        return y
    steps = max(1, math.ceil(span / dt))
    h = span / steps
    y = y.copy()
    k1, k2, k3, k4 = (np.empty_like(y) for _ in range(4))
    stage = np.empty_like(y)
    for i in range(steps):
        t = t0 + i * h
        h_ld._rhs(t, y, out=k1)
        np.multiply(k1, 0.5 * h, out=stage)
        stage += y
        h_ld._rhs(t + 0.5 * h, stage, out=k2)
        np.multiply(k2, 0.5 * h, out=stage)
        stage += y
        h_ld._rhs(t + 0.5 * h, stage, out=k3)
        np.multiply(k3, h, out=stage)
        stage += y
        h_ld._rhs(t + h, stage, out=k4)
        k2 += k3
        k2 *= 2.0
        k1 += k4
        k1 += k2
        k1 *= h / 6.0
        y += k1
    return y


def _check_dt(h_ld: LambDickeHamiltonian, dt: float) -> None:
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    bound = h_ld.stability_dt()
    if dt > bound * (1.0 + 1e-12):
        raise ValueError(
            f"dt={dt:.3e} too coarse for the fastest retained oscillation; "
            f"need dt <= {bound:.3e}"
        )


def _flatten(state: VibronicState) -> np.ndarray:
    return np.concatenate(
        [state.minus_component.amplitudes.ravel(), state.plus_component.amplitudes.ravel()]
    )


def _unflatten(y: np.ndarray, cutoff_a: int, cutoff_b: int) -> VibronicState:
    shape = (cutoff_a + 1, cutoff_b + 1)
    dim = shape[0] * shape[1]
    return VibronicState(
        TwoModeState(y[:dim].reshape(shape)), TwoModeState(y[dim:].reshape(shape))
    )


NORM_DRIFT_TOL = 1e-8


def propagate_lamb_dicke(
    initial: VibronicState,
    params: PhysicalParams,
    expansion_order: int,
    t: float,
    dt: float,
) -> VibronicState:
    """Integrate the expanded drive Hamiltonian from 0 to t with step dt.

    dt must satisfy dt <= 2 pi / (20 nu max|k - j - 2|); the run is
    rejected as unstable otherwise.  Norm drift beyond 1e-8 raises.
    """
    if t < 0.0:
        raise ValueError("t must be non-negative")
    h_ld = LambDickeHamiltonian(params, expansion_order, initial.cutoff_a, initial.cutoff_b)
    _check_dt(h_ld, dt)
    y = _rk4_span(h_ld, _flatten(initial), 0.0, t, dt)
    drift = abs(float(np.sum(np.abs(y) ** 2)) - initial.total_squared_norm())
    if drift > NORM_DRIFT_TOL:
        raise RuntimeError(f"norm drift {drift:.3e} exceeds {NORM_DRIFT_TOL}; reduce dt")
    return _unflatten(y, initial.cutoff_a, initial.cutoff_b)


def ground_population_trajectory(
    initial: VibronicState,
    params: PhysicalParams,
    expansion_order: int,
    times: np.ndarray,
    dt: float,
) -> np.ndarray:
    """Ground-level population at each requested time, from one RK4 pass.

    ``times`` must be non-decreasing and non-negative; each segment is
    subdivided to land exactly on the sample instants.
    """
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        return np.array([])
    if np.any(times < 0.0) or np.any(np.diff(times) < 0.0):
        raise ValueError("times must be non-negative and non-decreasing")
    h_ld = LambDickeHamiltonian(params, expansion_order, initial.cutoff_a, initial.cutoff_b)
    _check_dt(h_ld, dt)
    dim = h_ld.grid_size
    y = _flatten(initial)
    populations = np.empty(times.size)
    current = 0.0
    for i, target in enumerate(times):
        y = _rk4_span(h_ld, y, current, float(target), dt)
        current = float(target)
        populations[i] = float(np.sum(np.abs(y[:dim]) ** 2))
    drift = abs(float(np.sum(np.abs(y) ** 2)) - initial.total_squared_norm())
    if drift > NORM_DRIFT_TOL:
        raise RuntimeError(f"norm drift {drift:.3e} exceeds {NORM_DRIFT_TOL}; reduce dt")
    return populations


@dataclass(frozen=True)
class PulseAreaSample:
    """Seeded pulse-area draws with their first two sample moments.

    The draws follow Gamma(shape = t/tau, scale = g_mean * tau), whose mean
    g_mean * t and variance g_mean^2 * t * tau the sample moments approach.
    """

    draws: np.ndarray
    sample_mean: float
    sample_variance: float


def sample_pulse_area(
    g_mean: float, tau: float, t: float, seed: int, n_samples: int
) -> PulseAreaSample:
    if g_mean <= 0.0:
        raise ValueError("g_mean must be positive")
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    rng = np.random.default_rng(seed)
    draws = sample_pulse_areas(g_mean, tau, t, rng, n_samples)
    variance = float(draws.var(ddof=1)) if n_samples > 1 else 0.0
    return PulseAreaSample(
        draws=draws, sample_mean=float(draws.mean()), sample_variance=variance
    )
