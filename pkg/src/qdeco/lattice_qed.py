"""Exact treatment of a 1D truncated-link electrodynamics model.

Each of the N sites carries a static charge q_x in {-1, 0, +1}; link x (to the
right of site x) carries an integer electric field E_x in [-e_max, e_max].
The field on the fictitious link 0 is a fixed classical boundary value, and
link N plays the role of the far boundary: the total charge is read off as
boundary flux, E_N minus the left value.

The per-site divergence constraints are diagonal in the configuration basis,
so the physical subspace is found by exhaustive enumeration, and all gauge
identities hold to machine precision.  Operators on spaces beyond the dense
bound are handled through their diagonals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Collection

import numpy as np

from .hilbert import Operator, StateVector, TensorLayout

__all__ = [
    "LatticeSpec",
    "GaugeFunction",
    "PhysicalSubspace",
    "SectorDecomposition",
    "SuperselectionReport",
    "enumerate_basis",
    "gauss_operator",
    "gauss_diagonal",
    "physical_subspace",
    "charge_sectors",
    "gauge_generator",
    "gauge_generator_diagonal",
    "boundary_decomposition",
    "boundary_decomposition_diagonals",
    "total_charge",
    "total_charge_diagonal",
    "wilson_line",
    "maximal_interior",
    "gauge_invariant_local_basis",
    "superselection_report",
    "charge_phase_action",
]

ENUMERATION_LIMIT = 20000
DENSE_OPERATOR_LIMIT = 2048
CROSS_ELEMENT_TOL = 1e-12
_SUPPORT_TOL = 1e-12

FactorLabel = tuple[str, int]


@dataclass(frozen=True)
class LatticeSpec:
    """Model definition: N sites, field truncation, fixed left boundary field."""

    sites: int
    e_max: int
    left_field: int = 0

    def __post_init__(self):
        if self.sites < 1:
            raise ValueError("need at least one site")
        if self.e_max < 1:
            raise ValueError("field truncation must be >= 1")
        if abs(self.left_field) > self.e_max:
            raise ValueError(
                f"left boundary field {self.left_field} outside truncation "
                f"[-{self.e_max}, {self.e_max}]"
            )

    @property
    def link_dim(self) -> int:
        return 2 * self.e_max + 1

    @property
    def flat_dim(self) -> int:
        return 3**self.sites * self.link_dim**self.sites

    @property
    def layout(self) -> TensorLayout:
        # Site charge factors first, then link field factors; configurations
        # are therefore ordered lexicographically in (q_1..q_N, E_1..E_N).
        return TensorLayout((3,) * self.sites + (self.link_dim,) * self.sites)

    def site_factor(self, x: int) -> int:
        self._check_site(x)
        return x - 1

    def link_factor(self, x: int) -> int:
        self._check_site(x)
        return self.sites + x - 1

    def _check_site(self, x: int):
        if not 1 <= x <= self.sites:
            raise ValueError(f"site/link index {x} out of range 1..{self.sites}")


@dataclass(frozen=True)
class GaugeFunction:
    """Per-site gauge parameters plus the two boundary values."""

    values: np.ndarray
    left_value: float = 0.0
    asymptotic_value: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).ravel()
        if not np.all(np.isfinite(v)) or not (
            math.isfinite(self.left_value) and math.isfinite(self.asymptotic_value)
        ):
            raise ValueError("gauge function values must be finite")
        object.__setattr__(self, "values", v)

    @classmethod
    def constant(cls, sites: int, value: float) -> "GaugeFunction":
        return cls(np.full(sites, value), left_value=value, asymptotic_value=value)


def _config_arrays(spec: LatticeSpec) -> tuple[np.ndarray, np.ndarray]:
    """Charge and field values of every configuration, shape (flat_dim, N) each."""
    if spec.flat_dim > ENUMERATION_LIMIT:
        raise ValueError(
            f"flat dimension {spec.flat_dim} exceeds enumeration bound {ENUMERATION_LIMIT}"
        )
    n = spec.sites
    dims = spec.layout.dims
    idx = np.unravel_index(np.arange(spec.flat_dim), dims)
    charges = np.stack([idx[x] - 1 for x in range(n)], axis=1)
    fields = np.stack([idx[n + x] - spec.e_max for x in range(n)], axis=1)
    return charges.astype(np.int64), fields.astype(np.int64)


def enumerate_basis(spec: LatticeSpec) -> np.ndarray:
    """All configurations as integer rows (q_1..q_N, E_1..E_N), in flat-index order."""
    charges, fields = _config_arrays(spec)
    return np.concatenate([charges, fields], axis=1)


def _diag_operator(spec: LatticeSpec, diag: np.ndarray) -> Operator:
    if spec.flat_dim > DENSE_OPERATOR_LIMIT:
        raise ValueError(
            f"flat dimension {spec.flat_dim} exceeds dense bound {DENSE_OPERATOR_LIMIT}; "
            "use the *_diagonal form"
        )
    return Operator(spec.layout, np.diag(diag.astype(np.complex128)))


def gauss_diagonal(spec: LatticeSpec, x: int) -> np.ndarray:
    """Eigenvalues of the site-x divergence E_x - E_{x-1} - q_x (E_0 = left field)."""
    spec._check_site(x)
    charges, fields = _config_arrays(spec)
    left = fields[:, x - 2] if x >= 2 else np.full(spec.flat_dim, spec.left_field)
    return (fields[:, x - 1] - left - charges[:, x - 1]).astype(np.float64)


def gauss_operator(spec: LatticeSpec, x: int) -> Operator:
    """Divergence constraint at site x as a diagonal operator."""
    return _diag_operator(spec, gauss_diagonal(spec, x))


@dataclass(frozen=True)
class PhysicalSubspace:
    """Configurations annihilated by every divergence constraint."""

    spec: LatticeSpec
    basis: np.ndarray          # flat indices, ascending
    configurations: np.ndarray  # matching rows (q_1..q_N, E_1..E_N)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def embed(self, coords: np.ndarray) -> StateVector:
        """Full-space state from coordinates in the physical basis."""
        coords = np.asarray(coords, dtype=np.complex128).ravel()
        if coords.shape[0] != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {coords.shape[0]}")
        amps = np.zeros(self.spec.flat_dim, dtype=np.complex128)
        amps[self.basis] = coords
        return StateVector(self.spec.layout, amps)

    def project(self, state: StateVector) -> np.ndarray:
        """Coordinates of a full-space state in the physical basis."""
        if state.dim != self.spec.flat_dim:
            raise ValueError("state dimension does not match the lattice")
        return state.amplitudes[self.basis].copy()

    def isometry_matrix(self) -> np.ndarray:
        """The (flat_dim x dim) 0/1 embedding matrix."""
        iso = np.zeros((self.spec.flat_dim, self.dim))
        iso[self.basis, np.arange(self.dim)] = 1.0
        return iso

    def support_violation(self, state: StateVector) -> float:
        """Total weight of a state outside the physical subspace."""
        mask = np.ones(self.spec.flat_dim, dtype=bool)
        mask[self.basis] = False
        return float(np.sum(np.abs(state.amplitudes[mask]) ** 2))


def physical_subspace(spec: LatticeSpec) -> PhysicalSubspace:
    """Brute-force filter of the configuration basis by all constraints."""
    charges, fields = _config_arrays(spec)
    left = np.concatenate(
        [np.full((spec.flat_dim, 1), spec.left_field), fields[:, :-1]], axis=1
    )
    ok = np.all(fields - left - charges == 0, axis=1)
    basis = np.nonzero(ok)[0]
    table = np.concatenate([charges[basis], fields[basis]], axis=1)
    return PhysicalSubspace(spec, basis, table)


@dataclass(frozen=True)
class SectorDecomposition:
    """Partition of the physical basis by total boundary-flux charge."""

    subspace: PhysicalSubspace
    sectors: dict[int, np.ndarray]  # charge -> flat indices

    def charges(self) -> list[int]:
        return sorted(self.sectors)

    def sector_sizes(self) -> dict[int, int]:
        return {q: len(ix) for q, ix in sorted(self.sectors.items())}


def charge_sectors(subspace: PhysicalSubspace) -> SectorDecomposition:
    spec = subspace.spec
    n = spec.sites
    charge_of = subspace.configurations[:, 2 * n - 1] - spec.left_field
    sectors = {
        int(q): subspace.basis[charge_of == q] for q in np.unique(charge_of)
    }
    return SectorDecomposition(subspace, sectors)


def _gauge_arrays(spec: LatticeSpec, xi: GaugeFunction) -> np.ndarray:
    v = xi.values
    if v.shape[0] != spec.sites:
        raise ValueError(f"gauge function has {v.shape[0]} values, lattice has {spec.sites} sites")
    return v


def gauge_generator_diagonal(spec: LatticeSpec, xi: GaugeFunction) -> np.ndarray:
    """Diagonal of the gauge generator in its link-difference (stencil) form.

    Sum over links of E_x (xi_{x+1} - xi_x), with xi beyond the last site set
    to the asymptotic value, plus the fixed left-boundary contribution and the
    site charge term sum_x q_x xi_x.
    """
    v = _gauge_arrays(spec, xi)
    charges, fields = _config_arrays(spec)
    xi_ext = np.append(v, xi.asymptotic_value)
    diff = xi_ext[1:] - v  # xi_{x+1} - xi_x per link
    diag = fields @ diff + charges @ v
    diag += spec.left_field * (v[0] - xi.left_value)
    return diag.astype(np.float64)


def gauge_generator(spec: LatticeSpec, xi: GaugeFunction) -> Operator:
    """Generator of the gauge transformation parameterized by xi (diagonal)."""
    return _diag_operator(spec, gauge_generator_diagonal(spec, xi))


def boundary_decomposition_diagonals(
    spec: LatticeSpec, xi: GaugeFunction
) -> tuple[np.ndarray, np.ndarray]:
    """Diagonals of the surface and bulk parts of the gauge generator.

    Surface: asymptotic value times the last-link field minus the left-value
    times the fixed boundary field.  Bulk: minus the xi-weighted sum of the
    divergence constraints.  Their sum reproduces the stencil form exactly.
    """
    v = _gauge_arrays(spec, xi)
    _, fields = _config_arrays(spec)
    surface = xi.asymptotic_value * fields[:, -1] - xi.left_value * spec.left_field
    bulk = np.zeros(spec.flat_dim)
    for x in range(1, spec.sites + 1):
        bulk -= v[x - 1] * gauss_diagonal(spec, x)
    return surface.astype(np.float64), bulk


def boundary_decomposition(spec: LatticeSpec, xi: GaugeFunction) -> tuple[Operator, Operator]:
    surface, bulk = boundary_decomposition_diagonals(spec, xi)
    return _diag_operator(spec, surface), _diag_operator(spec, bulk)


def total_charge_diagonal(spec: LatticeSpec) -> np.ndarray:
    """Boundary flux E_N minus the fixed left field, per configuration."""
    _, fields = _config_arrays(spec)
    return (fields[:, -1] - spec.left_field).astype(np.float64)


def total_charge(spec: LatticeSpec) -> Operator:
    return _diag_operator(spec, total_charge_diagonal(spec))


def wilson_line(spec: LatticeSpec, x: int) -> Operator:
    """String operator from site x to the right boundary.

    Raises q_x by one and every link field on the string (links x..N) by one;
    matrix elements leaving the truncated ranges are dropped, so states at the
    truncation edge are annihilated.
    """
    spec._check_site(x)
    charges, fields = _config_arrays(spec)
    dim = spec.flat_dim
    if dim > DENSE_OPERATOR_LIMIT:
        raise ValueError(f"flat dimension {dim} exceeds dense bound {DENSE_OPERATOR_LIMIT}")

    entries = np.zeros((dim, dim), dtype=np.complex128)
    layout = spec.layout
    n = spec.sites
    for i in range(dim):
        if charges[i, x - 1] == 1 or np.any(fields[i, x - 1 :] == spec.e_max):
            continue
        multi = list(layout.multi_index(i))
        multi[x - 1] += 1  # charge factor
        for link in range(x, n + 1):
            multi[n + link - 1] += 1  # field factors on the string
        entries[layout.flat_index(multi), i] = 1.0
    return Operator(layout, entries)


def maximal_interior(spec: LatticeSpec) -> frozenset[FactorLabel]:
    """All sites and all links except the boundary link N."""
    labels = {("site", x) for x in range(1, spec.sites + 1)}
    labels |= {("link", x) for x in range(1, spec.sites)}
    return frozenset(labels)


def _interior_factors(
    spec: LatticeSpec, interior: Collection[FactorLabel], allow_boundary: bool
) -> list[int]:
    factors = []
    for label in interior:
        kind, x = label
        if kind == "site":
            factors.append(spec.site_factor(x))
        elif kind == "link":
            if x == spec.sites and not allow_boundary:
                raise ValueError("interior must not contain the boundary link")
            factors.append(spec.link_factor(x))
        else:
            raise ValueError(f"unknown factor label {label!r}")
    if not factors:
        raise ValueError("interior must not be empty")
    return sorted(set(factors))


def _commutant_basis(spec: LatticeSpec, factors: list[int]) -> list[Operator]:
    """Hermitian operators supported on the given factors commuting with all constraints.

    Every elementary matrix unit on the support (identity elsewhere) is
    projected onto the joint commutant of the divergence constraints: entries
    connecting configurations with different constraint eigenvalues are zeroed.
    Surviving candidates are Hermitized, orthonormalized (Hilbert-Schmidt) by
    modified Gram-Schmidt, and zero remainders discarded.  The normalized
    identity is seeded first so it always appears in the list.
    """
    dim = spec.flat_dim
    if dim > DENSE_OPERATOR_LIMIT:
        raise ValueError(f"flat dimension {dim} exceeds dense bound {DENSE_OPERATOR_LIMIT}")
    dims = spec.layout.dims
    n_factors = len(dims)
    exterior = [f for f in range(n_factors) if f not in factors]

    # Group each flat index by (interior config, exterior config).
    idx = np.unravel_index(np.arange(dim), dims)
    int_dims = [dims[f] for f in factors]
    ext_dims = [dims[f] for f in exterior]
    d_int = int(np.prod(int_dims))
    d_ext = int(np.prod(ext_dims)) if exterior else 1
    int_code = np.zeros(dim, dtype=np.int64)
    for f, d in zip(factors, int_dims):
        int_code = int_code * d + idx[f]
    ext_code = np.zeros(dim, dtype=np.int64)
    for f, d in zip(exterior, ext_dims):
        ext_code = ext_code * d + idx[f]
    # flat index of (a, e) pair
    position = np.empty((d_int, d_ext), dtype=np.int64)
    position[int_code, ext_code] = np.arange(dim)

    gauss = np.stack([gauss_diagonal(spec, x) for x in range(1, spec.sites + 1)], axis=1)

    candidates: list[np.ndarray] = []
    candidates.append(np.eye(dim, dtype=np.complex128))
    for a in range(d_int):
        rows = position[a]
        for b in range(a, d_int):
            cols = position[b]
            keep = np.all(gauss[rows] == gauss[cols], axis=1)
            if not np.any(keep):
                continue
            unit = np.zeros((dim, dim), dtype=np.complex128)
            unit[rows[keep], cols[keep]] = 1.0
            if a == b:
                candidates.append(unit)
            else:
                candidates.append(unit + unit.conj().T)
                candidates.append(1j * (unit - unit.conj().T))

    # Modified Gram-Schmidt in the Hilbert-Schmidt inner product.
    basis: list[np.ndarray] = []
    for cand in candidates:
        vec = cand.ravel()
        for prev in basis:
            vec = vec - np.vdot(prev, vec) * prev
        norm = np.linalg.norm(vec)
        if norm > 1e-12:
            basis.append(vec / norm)
    return [Operator(spec.layout, b.reshape(dim, dim)) for b in basis]


def gauge_invariant_local_basis(
    spec: LatticeSpec, interior: Collection[FactorLabel]
) -> list[Operator]:
    """Spanning set of Hermitian constraint-commuting operators on the interior.

    The interior is a set of ("site", x) / ("link", x) labels and must exclude
    the boundary link; see :func:`maximal_interior`.
    """
    factors = _interior_factors(spec, interior, allow_boundary=False)
    return _commutant_basis(spec, factors)


def _sector_of(decomp: SectorDecomposition, state: StateVector) -> int:
    """Charge sector of a physical state; errors if support straddles sectors."""
    subspace = decomp.subspace
    if abs(state.norm() - 1.0) > 1e-9:
        raise ValueError("expected a unit-norm state")
    if subspace.support_violation(state) > _SUPPORT_TOL:
        raise ValueError("state has support outside the physical subspace")
    weights = {
        q: float(np.sum(np.abs(state.amplitudes[ix]) ** 2))
        for q, ix in decomp.sectors.items()
    }
    sector, w = max(weights.items(), key=lambda kv: kv[1])
    if w < 1.0 - _SUPPORT_TOL:
        raise ValueError(f"state is spread over several charge sectors: {weights}")
    return sector


@dataclass(frozen=True)
class SuperselectionReport:
    """Cross-sector matrix elements of a gauge-invariant operator basis."""

    physical_dim: int
    sector_plus: int
    sector_minus: int
    n_operators: int
    max_cross: float
    max_expectation_diff: float
    same_sector: bool
    includes_boundary_link: bool

    @property
    def passed(self) -> bool:
        return (
            not self.same_sector
            and self.max_cross <= CROSS_ELEMENT_TOL
            and self.max_expectation_diff <= CROSS_ELEMENT_TOL
        )

    def as_dict(self) -> dict:
        return {
            "physical_dim": self.physical_dim,
            "sector_plus": self.sector_plus,
            "sector_minus": self.sector_minus,
            "n_operators": self.n_operators,
            "max_cross": self.max_cross,
            "max_expectation_diff": self.max_expectation_diff,
            "same_sector": self.same_sector,
            "includes_boundary_link": self.includes_boundary_link,
        }


def superselection_report(
    spec: LatticeSpec,
    psi_plus: StateVector,
    psi_minus: StateVector,
    include_boundary_link: bool = False,
) -> SuperselectionReport:
    """Probe two charge-sector states with every gauge-invariant interior operator.

    Records the largest cross matrix element |<+|O|->| and the largest
    difference between operator expectations in the equal superposition and in
    the even mixture.  With ``include_boundary_link`` the operator basis is
    extended to the boundary link, which admits string operators that connect
    the sectors; this is the contrast case, not a locality statement.
    """
    subspace = physical_subspace(spec)
    decomp = charge_sectors(subspace)
    sector_plus = _sector_of(decomp, psi_plus)
    sector_minus = _sector_of(decomp, psi_minus)
    same_sector = sector_plus == sector_minus

    if include_boundary_link:
        interior = set(maximal_interior(spec)) | {("link", spec.sites)}
        factors = _interior_factors(spec, interior, allow_boundary=True)
        ops = _commutant_basis(spec, factors)
    else:
        ops = gauge_invariant_local_basis(spec, maximal_interior(spec))

    plus = psi_plus.amplitudes
    minus = psi_minus.amplitudes
    superpos = (plus + minus) / math.sqrt(2.0)
    max_cross = 0.0
    max_diff = 0.0
    for op in ops:
        m = op.entries
        cross = abs(np.vdot(plus, m @ minus))
        max_cross = max(max_cross, cross)
        exp_sup = np.vdot(superpos, m @ superpos).real
        exp_mix = 0.5 * (np.vdot(plus, m @ plus).real + np.vdot(minus, m @ minus).real)
        max_diff = max(max_diff, abs(exp_sup - exp_mix))

    return SuperselectionReport(
        physical_dim=subspace.dim,
        sector_plus=sector_plus,
        sector_minus=sector_minus,
        n_operators=len(ops),
        max_cross=float(max_cross),
        max_expectation_diff=float(max_diff),
        same_sector=same_sector,
        includes_boundary_link=include_boundary_link,
    )


def charge_phase_action(
    decomp: SectorDecomposition, state: StateVector, theta: float
) -> StateVector:
    """Multiply each charge-q component by exp(i q theta).

    ``theta`` is the product of the unit charge and the asymptotic gauge value,
    so a superposition of charges +-1 picks up the relative phase exp(2i theta)
    while every interior expectation stays untouched.
    """
    subspace = decomp.subspace
    if state.dim != subspace.spec.flat_dim:
        raise ValueError("state dimension does not match the lattice")
    if subspace.support_violation(state) > _SUPPORT_TOL:
        raise ValueError("state has support outside the physical subspace")
    amps = state.amplitudes.copy()
    for q, ix in decomp.sectors.items():
        amps[ix] *= np.exp(1j * q * theta)
    return StateVector(state.layout, amps)
