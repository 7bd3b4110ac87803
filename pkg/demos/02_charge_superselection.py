#!/usr/bin/env python3
"""Why the relative phase between charge sectors is locally unobservable.

On a small truncated-link lattice with exact constraint handling, this walk
shows: (1) the gauge generator splits exactly into a boundary piece plus a
constraint piece, (2) on physical states only the boundary flux survives, so
total charge is a boundary observable, and (3) every gauge-invariant operator
supported away from the boundary has vanishing matrix elements between charge
sectors, while a string operator reaching the boundary connects them.
"""

import math

import numpy as np

from qdeco.hilbert import StateVector
from qdeco.lattice_qed import (
    GaugeFunction,
    LatticeSpec,
    boundary_decomposition_diagonals,
    charge_phase_action,
    charge_sectors,
    gauge_generator_diagonal,
    gauge_invariant_local_basis,
    maximal_interior,
    physical_subspace,
    superselection_report,
    total_charge_diagonal,
    wilson_line,
)

spec = LatticeSpec(sites=2, e_max=1, left_field=0)
print("=" * 72)
print(f"Lattice: {spec.sites} sites, fields truncated to |E| <= {spec.e_max}, "
      f"left boundary field {spec.left_field}")
print("=" * 72)
print()

sub = physical_subspace(spec)
print(f"Configuration space: {spec.flat_dim} states; constraint kernel: {sub.dim}.")
print("Physical configurations (q1, q2, E1, E2) and their boundary-flux charge:")
charge = total_charge_diagonal(spec)[sub.basis]
for row, q in zip(sub.configurations, charge):
    print(f"  {tuple(int(v) for v in row)}   Q = {int(q):+d}")

decomp = charge_sectors(sub)
print(f"\nSector sizes: {decomp.sector_sizes()}")

print()
print("-" * 72)
print("Gauge generator = boundary term + constraint term (exact identity)")
print("-" * 72)
rng = np.random.default_rng(7)
worst = 0.0
for _ in range(50):
    xi = GaugeFunction(
        values=rng.uniform(-1, 1, size=spec.sites),
        left_value=float(rng.uniform(-1, 1)),
        asymptotic_value=float(rng.uniform(-1, 1)),
    )
    direct = gauge_generator_diagonal(spec, xi)
    surface, bulk = boundary_decomposition_diagonals(spec, xi)
    worst = max(worst, float(np.max(np.abs(direct - surface - bulk))))
    phys = direct[sub.basis]
    flux = xi.asymptotic_value * charge + (xi.asymptotic_value - xi.left_value) * spec.left_field
    worst = max(worst, float(np.max(np.abs(phys - flux))))
print(f"max residual over 50 random gauge functions: {worst:.2e}")
print("On the kernel the generator acts purely through the boundary values:")
print("gauge transformations that die off at the boundary are pure redundancy.")

print()
print("-" * 72)
print("Interior observables cannot tell a sector superposition from a mixture")
print("-" * 72)


def embed_first(charge_value):
    coords = np.zeros(sub.dim, dtype=complex)
    coords[np.searchsorted(sub.basis, decomp.sectors[charge_value][0])] = 1.0
    return sub.embed(coords)


psi_plus, psi_minus = embed_first(+1), embed_first(-1)
report = superselection_report(spec, psi_plus, psi_minus)
print(f"gauge-invariant operators on the interior: {report.n_operators}")
print(f"largest cross-sector matrix element |<+|O|->|: {report.max_cross:.2e}")
print(f"largest superposition-vs-mixture expectation gap: "
      f"{report.max_expectation_diff:.2e}")

print()
print("Phasing the sectors (the charge action) changes nothing interior:")
superpos = StateVector(
    spec.layout, (psi_plus.amplitudes + psi_minus.amplitudes) / math.sqrt(2.0)
)
ops = gauge_invariant_local_basis(spec, maximal_interior(spec))
worst_gap = 0.0
for theta in (0.4, math.pi / 2, 2.2):
    phased = charge_phase_action(decomp, superpos, theta)
    for op in ops:
        before = np.vdot(superpos.amplitudes, op.entries @ superpos.amplitudes).real
        after = np.vdot(phased.amplitudes, op.entries @ phased.amplitudes).real
        worst_gap = max(worst_gap, abs(before - after))
print(f"max interior expectation change over three phase angles: {worst_gap:.2e}")

print()
print("-" * 72)
print("The exception that proves the rule: a string to the boundary")
print("-" * 72)
spec1 = LatticeSpec(sites=1, e_max=1, left_field=0)
sub1 = physical_subspace(spec1)
decomp1 = charge_sectors(sub1)


def embed1(charge_value):
    coords = np.zeros(sub1.dim, dtype=complex)
    coords[np.searchsorted(sub1.basis, decomp1.sectors[charge_value][0])] = 1.0
    return sub1.embed(coords)


w = wilson_line(spec1, 1).entries
cross_w = abs(np.vdot(embed1(+1).amplitudes, w @ embed1(0).amplitudes))
print(f"string operator matrix element between adjacent sectors: {cross_w:.3f}")
contrast = superselection_report(spec1, embed1(+1), embed1(-1), include_boundary_link=True)
print(f"operator basis extended to the boundary link: max cross element "
      f"{contrast.max_cross:.3f} (> 0.1)")
print()
print("Charge superselection is a statement about where operators live, not a")
print("new postulate: reach the boundary and the sectors reconnect.")
