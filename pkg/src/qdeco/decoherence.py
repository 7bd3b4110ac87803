"""System-apparatus-environment decoherence pipeline.

Builds correlated three-party states, reduces them over the environment, and
quantifies how environmental overlaps control the surviving interference
terms.  A central-spin pure-dephasing bath provides a fully solvable dynamical
example: the exact coherence is the product of per-spin cosine overlaps, so
the matrix-evolution path can be checked against a closed form at every time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .hilbert import (
    DensityMatrix,
    NormalizationError,
    StateVector,
    TensorLayout,
    coherence_norm,
    von_neumann_entropy,
)

__all__ = [
    "CorrelatedStateSpec",
    "SpinBathModel",
    "DephasingCurve",
    "EntropyCheck",
    "build_correlated_state",
    "reduce_to_apparatus",
    "environment_overlap",
    "spin_bath_coherence",
    "spin_bath_evolve",
    "entropy_curve",
    "binary_entropy",
]

_NORM_TOL = 1e-9
_MAX_BATH_SIZE = 12
ENTROPY_CHECK_TOL = 1e-9


def _check_consistent(states: list[StateVector], label: str) -> int:
    dims = {s.dim for s in states}
    if len(dims) != 1:
        raise ValueError(f"{label} states have inconsistent dimensions {sorted(dims)}")
    return dims.pop()


@dataclass(frozen=True)
class CorrelatedStateSpec:
    """Branch data for a correlated state sum_n c_n phi_n (x) Phi_n (x) env_n.

    Environment states need not be orthogonal; the spec is only required to
    describe a normalized total state, which :func:`build_correlated_state`
    verifies from the branch Gram matrices.
    """

    coefficients: np.ndarray
    system_states: list[StateVector]
    apparatus_states: list[StateVector]
    environment_states: list[StateVector]

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.complex128).ravel()
        object.__setattr__(self, "coefficients", c)
        n = len(c)
        if n < 1:
            raise ValueError("need at least one branch")
        for label, states in (
            ("system", self.system_states),
            ("apparatus", self.apparatus_states),
            ("environment", self.environment_states),
        ):
            if len(states) != n:
                raise ValueError(
                    f"{label} list length {len(states)} does not match {n} coefficients"
                )
            _check_consistent(states, label)

    @property
    def n_branches(self) -> int:
        return len(self.coefficients)

    def total_norm_squared(self) -> float:
        """<Psi|Psi> computed from the three per-factor Gram matrices."""
        c = self.coefficients
        n = len(c)
        gram = np.outer(c.conj(), c)
        for states in (self.system_states, self.apparatus_states, self.environment_states):
            g = np.empty((n, n), dtype=np.complex128)
            for i in range(n):
                for j in range(n):
                    g[i, j] = states[i].overlap(states[j])
            gram *= g
        return float(np.real(np.sum(gram)))


def build_correlated_state(spec: CorrelatedStateSpec) -> StateVector:
    """Assemble sum_n c_n phi_n (x) Phi_n (x) env_n with layout (dim_S, dim_A, dim_E).

    Raises :class:`NormalizationError` when the branch data do not describe a
    unit-norm total state; non-orthogonal branches are accepted but never
    silently renormalized.
    """
    norm_sq = spec.total_norm_squared()
    if abs(norm_sq - 1.0) > _NORM_TOL:
        raise NormalizationError(
            f"correlated state has norm {math.sqrt(max(norm_sq, 0.0)):.6f}, expected 1; "
            "adjust the coefficients for the given branch overlaps"
        )
    dim_s = spec.system_states[0].dim
    dim_a = spec.apparatus_states[0].dim
    dim_e = spec.environment_states[0].dim
    total = np.zeros(dim_s * dim_a * dim_e, dtype=np.complex128)
    for c, phi, app, env in zip(
        spec.coefficients, spec.system_states, spec.apparatus_states, spec.environment_states
    ):
        total += c * np.kron(np.kron(phi.amplitudes, app.amplitudes), env.amplitudes)
    return StateVector(TensorLayout((dim_s, dim_a, dim_e)), total)


def reduce_to_apparatus(psi: StateVector) -> DensityMatrix:
    """Trace the environment out of |Psi><Psi|, keeping the (system, apparatus) pair.

    Contracted directly from the state (reshape + Gram matrix), which is
    equivalent to forming the projector and partial-tracing it but stays
    cheap for large environment factors.
    """
    if psi.layout.n_factors != 3:
        raise ValueError(
            f"expected a (system, apparatus, environment) layout, got {psi.layout.dims}"
        )
    dim_s, dim_a, dim_e = psi.layout.dims
    m = psi.amplitudes.reshape(dim_s * dim_a, dim_e)
    reduced = m @ m.conj().T
    return DensityMatrix(TensorLayout((dim_s, dim_a)), reduced)


def environment_overlap(spec: CorrelatedStateSpec, n: int, m: int) -> complex:
    """Inner product <env_n|env_m> (conjugation on the first argument)."""
    n_branches = spec.n_branches
    if not (0 <= n < n_branches and 0 <= m < n_branches):
        raise ValueError(f"branch indices ({n}, {m}) out of range for {n_branches} branches")
    return spec.environment_states[n].overlap(spec.environment_states[m])


@dataclass(frozen=True)
class SpinBathModel:
    """Central qubit dephased by ``bath_size`` spins prepared in |+>.

    ``couplings`` are angular frequencies g_k (natural units); the interaction
    is sigma_z^sys (x) sum_k (g_k/2) sigma_z^(k), so the system populations are
    frozen and only the off-diagonal coherence evolves.
    """

    bath_size: int
    couplings: np.ndarray
    system_weights: tuple[complex, complex] = field(
        default=(1 / math.sqrt(2), 1 / math.sqrt(2))
    )

    def __post_init__(self):
        if self.bath_size < 1:
            raise ValueError("bath_size must be >= 1")
        g = np.asarray(self.couplings, dtype=np.float64).ravel()
        if g.shape[0] != self.bath_size:
            raise ValueError(f"need {self.bath_size} couplings, got {g.shape[0]}")
        if not np.all(np.isfinite(g)):
            raise ValueError("couplings must be finite")
        object.__setattr__(self, "couplings", g)
        c0, c1 = complex(self.system_weights[0]), complex(self.system_weights[1])
        if abs(abs(c0) ** 2 + abs(c1) ** 2 - 1.0) > _NORM_TOL:
            raise NormalizationError("system weights must satisfy |c0|^2 + |c1|^2 = 1")
        object.__setattr__(self, "system_weights", (c0, c1))


@dataclass(frozen=True)
class DephasingCurve:
    """Time series of system coherence |r(t)| and entropy (nats)."""

    times: np.ndarray
    coherence: np.ndarray
    entropy: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=np.float64).ravel()
        c = np.asarray(self.coherence, dtype=np.float64).ravel()
        s = np.asarray(self.entropy, dtype=np.float64).ravel()
        if not (t.shape == c.shape == s.shape):
            raise ValueError("times, coherence and entropy must have equal lengths")
        if np.any(c < 0.0) or np.any(c > 1.0 + 1e-12):
            raise ValueError("coherence values must lie in [0, 1]")
        if np.any(s < -1e-12) or np.any(s > math.log(2) + 1e-9):
            raise ValueError("entropy values must lie in [0, ln 2]")
        for name, arr in (("times", t), ("coherence", c), ("entropy", s)):
            object.__setattr__(self, name, arr)

    def rows(self) -> list[tuple[float, float, float]]:
        return [
            (float(t), float(c), float(s))
            for t, c, s in zip(self.times, self.coherence, self.entropy)
        ]


def spin_bath_coherence(model: SpinBathModel, t: float) -> float:
    """Closed-form coherence prod_k |cos(g_k t)| of the central qubit."""
    if t < 0:
        raise ValueError("time must be nonnegative")
    return float(np.prod(np.abs(np.cos(model.couplings * t))))


def _bath_energies(model: SpinBathModel) -> np.ndarray:
    """Diagonal of sum_k (g_k/2) sigma_z^(k) over the 2^N bath basis."""
    energies = np.zeros(1)
    for g in model.couplings:
        energies = np.add.outer(energies, np.array([g / 2.0, -g / 2.0])).ravel()
    return energies


def spin_bath_evolve(model: SpinBathModel, times) -> DephasingCurve:
    """Evolve (c0|0> + c1|1>) (x)_k |+> exactly and reduce to the system qubit.

    The coupling is diagonal in the computational basis, so the evolution is
    elementwise phase multiplication on the full 2^(N+1)-dimensional state.
    Returns the coherence (relative off-diagonal magnitude) and entropy of the
    reduced system qubit at each time.
    """
    if model.bath_size > _MAX_BATH_SIZE:
        raise ValueError(
            f"bath_size {model.bath_size} exceeds dense-evolution bound {_MAX_BATH_SIZE}"
        )
    t_arr = np.asarray(times, dtype=np.float64).ravel()
    if np.any(t_arr < 0):
        raise ValueError("times must be nonnegative")

    n = model.bath_size
    dim_bath = 2**n
    c0, c1 = model.system_weights
    bath0 = np.full(dim_bath, 2.0 ** (-n / 2.0), dtype=np.complex128)
    psi0 = np.concatenate([c0 * bath0, c1 * bath0])

    # H = sigma_z^sys * sum_k (g_k/2) sigma_z^(k): diagonal, sign set by the system bit.
    e_bath = _bath_energies(model)
    h_diag = np.concatenate([e_bath, -e_bath])

    coherences = np.empty_like(t_arr)
    entropies = np.empty_like(t_arr)
    for i, t in enumerate(t_arr):
        psi_t = np.exp(-1j * h_diag * t) * psi0
        m = psi_t.reshape(2, dim_bath)
        rho_sys = DensityMatrix(TensorLayout((2,)), m @ m.conj().T)
        coherences[i] = coherence_norm(rho_sys)
        entropies[i] = von_neumann_entropy(rho_sys)
    return DephasingCurve(t_arr, np.clip(coherences, 0.0, 1.0), np.clip(entropies, 0.0, None))


def binary_entropy(p: float) -> float:
    """h(p) = -p ln p - (1-p) ln(1-p) in nats, with h(0) = h(1) = 0."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * math.log(p) - (1.0 - p) * math.log(1.0 - p))


@dataclass(frozen=True)
class EntropyCheck:
    """Result of validating a dephasing curve against the closed entropy form."""

    max_deviation: float
    monotone_in_coherence: bool
    n_points: int

    @property
    def passed(self) -> bool:
        return self.max_deviation <= ENTROPY_CHECK_TOL and self.monotone_in_coherence


def entropy_curve(curve: DephasingCurve) -> EntropyCheck:
    """Check S(t) = h((1 - |r(t)|)/2) pointwise for an equal-weight curve.

    Also verifies, by sorting the samples, that entropy decreases whenever
    coherence increases.
    """
    if len(curve.times) == 0:
        raise ValueError("curve is empty")
    expected = np.array([binary_entropy((1.0 - r) / 2.0) for r in curve.coherence])
    max_dev = float(np.max(np.abs(expected - curve.entropy)))

    order = np.argsort(curve.coherence)
    s_sorted = curve.entropy[order]
    # Allow numerical wiggle when neighbouring coherences are nearly equal.
    monotone = bool(np.all(np.diff(s_sorted) <= 1e-9))
    return EntropyCheck(max_dev, monotone, len(curve.times))
