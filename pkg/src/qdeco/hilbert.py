"""Dense complex linear algebra on finite tensor-product Hilbert spaces.

States and operators are stored flat; a :class:`TensorLayout` records the
subsystem dimensions, with the leftmost factor slowest-varying in the flat
index (numpy C order).  Everything here is a pure function over immutable
values; target flat dimensions are a few hundred.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "NormalizationError",
    "TensorLayout",
    "StateVector",
    "Operator",
    "DensityMatrix",
    "basis_state",
    "tensor_product",
    "outer_product",
    "partial_trace",
    "hermitian_eigendecomposition",
    "von_neumann_entropy",
    "coherence_norm",
    "purity",
    "HERMITICITY_TOL",
    "TRACE_TOL",
    "EIGEN_RESIDUAL_TOL",
]

# Tolerances: Hermiticity/trace at 1e-10, eigensolver residual 1e-9.
# Double precision leaves ample headroom at these dimensions.
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIGEN_RESIDUAL_TOL = 1e-9
_POSITIVITY_TOL = 1e-10
_DIAG_FLOOR = 1e-30


class NormalizationError(ValueError):
    """Raised when an operation requires a unit-norm state and the input is not."""


@dataclass(frozen=True)
class TensorLayout:
    """Ordered subsystem dimensions locating each factor in the flat index."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"all dimensions must be >= 1, got {self.dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def flat_dim(self) -> int:
        return reduce(lambda a, b: a * b, self.dims, 1)

    @property
    def n_factors(self) -> int:
        return len(self.dims)

    def flat_index(self, multi: Sequence[int]) -> int:
        """Flat index of a multi-index (leftmost factor slowest-varying)."""
        if len(multi) != len(self.dims):
            raise ValueError("multi-index rank does not match layout")
        idx = 0
        for k, d in zip(multi, self.dims):
            if not 0 <= k < d:
                raise ValueError(f"multi-index {tuple(multi)} out of range for dims {self.dims}")
            idx = idx * d + k
        return idx

    def multi_index(self, flat: int) -> tuple[int, ...]:
        """Inverse of :meth:`flat_index`."""
        if not 0 <= flat < self.flat_dim:
            raise ValueError(f"flat index {flat} out of range for dimension {self.flat_dim}")
        multi = []
        for d in reversed(self.dims):
            multi.append(flat % d)
            flat //= d
        return tuple(reversed(multi))

    def concat(self, other: "TensorLayout") -> "TensorLayout":
        return TensorLayout(self.dims + other.dims)


def _as_complex_vector(amplitudes) -> np.ndarray:
    arr = np.asarray(amplitudes, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"amplitudes must be one-dimensional, got shape {arr.shape}")
    return arr


def _as_complex_matrix(entries) -> np.ndarray:
    arr = np.asarray(entries, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"entries must be a square matrix, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over a tensor-factored space.

    Unit norm is not enforced at construction; operations that need it say so
    and raise :class:`NormalizationError` otherwise.
    """

    layout: TensorLayout
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _as_complex_vector(self.amplitudes))
        if self.amplitudes.shape[0] != self.layout.flat_dim:
            raise ValueError(
                f"amplitude length {self.amplitudes.shape[0]} does not match "
                f"layout dimension {self.layout.flat_dim}"
            )

    @property
    def dim(self) -> int:
        return self.layout.flat_dim

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "StateVector") -> complex:
        """Inner product with conjugation on self."""
        if self.dim != other.dim:
            raise ValueError("states live in different dimensions")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def __repr__(self):
        return f"StateVector(dims={self.layout.dims}, dim={self.dim})"


@dataclass(frozen=True)
class Operator:
    """Square complex matrix on a tensor-factored space."""

    layout: TensorLayout
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _as_complex_matrix(self.entries))
        if self.entries.shape[0] != self.layout.flat_dim:
            raise ValueError(
                f"matrix dimension {self.entries.shape[0]} does not match "
                f"layout dimension {self.layout.flat_dim}"
            )

    @property
    def dim(self) -> int:
        return self.layout.flat_dim

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) <= tol)

    def is_unitary(self, tol: float = EIGEN_RESIDUAL_TOL) -> bool:
        eye = np.eye(self.dim)
        return bool(np.max(np.abs(self.entries.conj().T @ self.entries - eye)) <= tol)

    def __repr__(self):
        return f"Operator(dims={self.layout.dims}, dim={self.dim})"


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive matrix (all within fixed tolerances)."""

    layout: TensorLayout
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _as_complex_matrix(self.entries))
        if self.entries.shape[0] != self.layout.flat_dim:
            raise ValueError(
                f"matrix dimension {self.entries.shape[0]} does not match "
                f"layout dimension {self.layout.flat_dim}"
            )
        self._validate()

    def _validate(self):
        dev = np.max(np.abs(self.entries - self.entries.conj().T))
        if dev > HERMITICITY_TOL:
            raise ValueError(f"density matrix not Hermitian: deviation {dev:.3e}")
        tr = np.trace(self.entries)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr} differs from 1")
        lo = float(np.min(np.linalg.eigvalsh(self.entries)))
        if lo < -_POSITIVITY_TOL:
            raise ValueError(f"density matrix not positive: min eigenvalue {lo:.3e}")

    @property
    def dim(self) -> int:
        return self.layout.flat_dim

    def __repr__(self):
        return f"DensityMatrix(dims={self.layout.dims}, dim={self.dim})"


HermitianLike = Union[Operator, DensityMatrix, np.ndarray]


def basis_state(dim: int, index: int) -> StateVector:
    """Single-factor computational basis state |index> of the given dimension."""
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dimension {dim}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(TensorLayout((dim,)), amps)


def tensor_product(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product a (x) b; layouts concatenate, norms multiply."""
    return StateVector(a.layout.concat(b.layout), np.kron(a.amplitudes, b.amplitudes))


def outer_product(psi: StateVector) -> DensityMatrix:
    """Projector |psi><psi| as a density matrix; requires unit norm."""
    n = psi.norm()
    if abs(n - 1.0) > HERMITICITY_TOL:
        raise NormalizationError(f"outer_product needs a unit state, got norm {n!r}")
    return DensityMatrix(psi.layout, np.outer(psi.amplitudes, psi.amplitudes.conj()))


def _normalize_keep(keep: Iterable[int], n_factors: int) -> tuple[int, ...]:
    kept = sorted(set(int(k) for k in keep))
    if not kept:
        raise ValueError("keep set must not be empty")
    if kept[0] < 0 or kept[-1] >= n_factors:
        raise ValueError(f"keep indices {kept} out of range for {n_factors} factors")
    return tuple(kept)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Trace out every factor not in ``keep``; kept dims stay in original order."""
    dims = rho.layout.dims
    kept = _normalize_keep(keep, len(dims))
    traced = tuple(i for i in range(len(dims)) if i not in kept)
    if not traced:
        return DensityMatrix(rho.layout, rho.entries.copy())

    n = len(dims)
    tensor = rho.entries.reshape(dims + dims)
    # Row axes 0..n-1, column axes n..2n-1; contract each traced pair.
    row = list(range(n))
    col = list(range(n, 2 * n))
    for i in traced:
        col[i] = row[i]
    out_axes = [row[i] for i in kept] + [col[i] for i in kept]
    reduced = np.einsum(tensor, row + col, out_axes)

    kept_dims = tuple(dims[i] for i in kept)
    d = int(np.prod(kept_dims))
    return DensityMatrix(TensorLayout(kept_dims), reduced.reshape(d, d))


def _hermitian_entries(m: HermitianLike) -> np.ndarray:
    if isinstance(m, (Operator, DensityMatrix)):
        entries = m.entries
    else:
        entries = _as_complex_matrix(m)
    dev = np.max(np.abs(entries - entries.conj().T))
    if dev > HERMITICITY_TOL:
        raise ValueError(f"matrix not Hermitian: deviation {dev:.3e}")
    return entries


def hermitian_eigendecomposition(m: HermitianLike) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvector matrix of a Hermitian input.

    Backed by LAPACK via ``numpy.linalg.eigh``; the reconstruction
    ``U diag(w) U^dagger`` matches the input to within ``EIGEN_RESIDUAL_TOL``.
    """
    entries = _hermitian_entries(m)
    w, u = np.linalg.eigh(entries)
    return w, u


def von_neumann_entropy(rho: DensityMatrix) -> float:
    """Entropy -sum(p ln p) of the spectrum, in nats (0 ln 0 := 0)."""
    w, _ = hermitian_eigendecomposition(rho)
    # Clip [-1e-10, 0) noise before taking logs.
    w = np.clip(w.real, 0.0, 1.0)
    w = w[w > 0.0]
    return float(-np.sum(w * np.log(w)))


def coherence_norm(rho: DensityMatrix) -> float:
    """Largest off-diagonal magnitude relative to its diagonal geometric mean.

    Pairs whose diagonal product is below 1e-30 are skipped, so exact
    diagonal matrices and matrices with empty branches both give 0.
    """
    diag = rho.entries.diagonal().real
    weight = np.outer(diag, diag)
    mask = weight > _DIAG_FLOOR
    np.fill_diagonal(mask, False)
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(rho.entries[mask]) / np.sqrt(weight[mask])))


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2), between 1/dim (maximally mixed) and 1 (pure)."""
    return float(np.real(np.trace(rho.entries @ rho.entries)))
