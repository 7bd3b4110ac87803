"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test prints a single ``[criterion N] PASS`` line (visible with ``-s``);
under ``pytest -v`` the per-test PASSED/FAILED status serves the same purpose.
Runtime budgets are enforced with perf_counter around the operative calls.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from qdeco.cli import run
from qdeco.decoherence import (
    CorrelatedStateSpec,
    SpinBathModel,
    build_correlated_state,
    entropy_curve,
    environment_overlap,
    reduce_to_apparatus,
    spin_bath_coherence,
    spin_bath_evolve,
)
from qdeco.hilbert import StateVector, TensorLayout, basis_state, tensor_product
from qdeco.lattice_qed import (
    GaugeFunction,
    LatticeSpec,
    boundary_decomposition_diagonals,
    charge_sectors,
    gauge_generator_diagonal,
    gauge_invariant_local_basis,
    maximal_interior,
    physical_subspace,
    superselection_report,
    total_charge_diagonal,
    wilson_line,
)
from qdeco.units import (
    DIMENSIONLESS,
    ELECTRIC_FIELD,
    ENERGY,
    LENGTH,
    NATURAL,
    SI,
    TIME,
    VOLUME,
    PhysicalQuantity,
    convert,
    efield_factor_via_ev_chain,
    efield_factor_via_schwinger,
)

from oracles import brute_force_gauss_kernel

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def announce(number: int, message: str):
    print(f"[criterion {number}] PASS: {message}")


def run_to_report(argv, tmp_path, name="report.json"):
    path = tmp_path / name
    start = time.perf_counter()
    code = run(argv + ["--out", str(path)])
    elapsed = time.perf_counter() - start
    assert code == 0, f"command failed: {argv}"
    return json.loads(path.read_text()), elapsed


def test_criterion_01_coherence_length_reproduction(tmp_path):
    report, elapsed = run_to_report(
        ["field", "coherence-length", "--efield-v-per-cm", "1e7"], tmp_path
    )
    length_cm = report["outputs"]["length_cm"]
    assert 1e-5 <= length_cm <= 1e-3, length_cm
    assert length_cm == pytest.approx(5.5e-4, rel=0.05)
    assert elapsed < 0.1, f"took {elapsed:.3f} s"
    announce(1, f"L(1e7 V/cm) = {length_cm:.4e} cm in [1e-5, 1e-3] ({elapsed * 1e3:.1f} ms)")


def test_criterion_02_thermal_datum_and_scaling(tmp_path):
    report, elapsed = run_to_report(["thermal", "length", "--time-s", "1"], tmp_path)
    assert report["outputs"]["length_cm"] == 0.1

    from qdeco.field_decoherence import thermal_coherence_length

    start = time.perf_counter()
    times = np.logspace(-3, 3, 61)
    products = np.array(
        [thermal_coherence_length(float(t)).magnitude * math.sqrt(t) for t in times]
    )
    sweep_elapsed = time.perf_counter() - start
    spread = float(np.max(np.abs(products - products[0])) / products[0])
    assert spread <= 1e-12
    assert elapsed < 0.1 and sweep_elapsed < 0.1
    announce(2, f"l(1 s) = 0.1 cm exactly; l*sqrt(t) constant to {spread:.1e} relative")


def test_criterion_03_validity_limit(tmp_path):
    report, elapsed = run_to_report(
        ["field", "validity-time", "--efield-v-per-cm", "1e7"], tmp_path
    )
    t_min = report["outputs"]["t_min_s"]
    assert t_min < 1e-10
    assert elapsed < 0.1
    announce(3, f"t_min(1e7 V/cm) = {t_min:.3e} s < 1e-10 s")


GRID = [(sites, e_max) for sites in (1, 2, 3) for e_max in (1, 2)]


def _random_gauges(rng, sites, count=50):
    return [
        GaugeFunction(
            values=rng.uniform(-1.0, 1.0, size=sites),
            left_value=float(rng.uniform(-1.0, 1.0)),
            asymptotic_value=float(rng.uniform(-1.0, 1.0)),
        )
        for _ in range(count)
    ]


def test_criterion_04_surface_plus_bulk_identity():
    start = time.perf_counter()
    worst = 0.0
    for sites, e_max in GRID:
        spec = LatticeSpec(sites=sites, e_max=e_max)
        rng = np.random.default_rng(4000 + 10 * sites + e_max)
        for xi in _random_gauges(rng, sites):
            direct = gauge_generator_diagonal(spec, xi)
            surface, bulk = boundary_decomposition_diagonals(spec, xi)
            worst = max(worst, float(np.max(np.abs(direct - surface - bulk))))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-12
    assert elapsed < 10.0
    announce(4, f"max |generator - surface - bulk| = {worst:.2e} over {len(GRID)}x50 gauges "
                f"({elapsed:.2f} s)")


def test_criterion_05_kernel_restriction_is_boundary_flux():
    start = time.perf_counter()
    worst = 0.0
    for sites, e_max in GRID:
        spec = LatticeSpec(sites=sites, e_max=e_max)
        sub = physical_subspace(spec)
        q_phys = total_charge_diagonal(spec)[sub.basis]
        rng = np.random.default_rng(5000 + 10 * sites + e_max)
        for xi in _random_gauges(rng, sites):
            restricted = gauge_generator_diagonal(spec, xi)[sub.basis]
            flux_form = xi.asymptotic_value * q_phys + (
                xi.asymptotic_value - xi.left_value
            ) * spec.left_field
            worst = max(worst, float(np.max(np.abs(restricted - flux_form))))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-12
    assert elapsed < 10.0
    announce(5, f"kernel restriction equals boundary flux to {worst:.2e} ({elapsed:.2f} s)")


def test_criterion_06_superselection_suite():
    start = time.perf_counter()
    spec = LatticeSpec(sites=2, e_max=1, left_field=0)
    sub = physical_subspace(spec)
    decomp = charge_sectors(sub)

    # brute-force-verified kernel and sector counts
    kernel = brute_force_gauss_kernel(2, 1, 0)
    assert sub.dim == len(kernel) == 7
    sizes = {}
    for config in kernel:
        q_total = config[3] - 0  # E_N minus left field
        sizes[q_total] = sizes.get(q_total, 0) + 1
    assert sizes == {-1: 2, 0: 3, 1: 2}
    assert decomp.sector_sizes() == sizes

    def embed_first(charge):
        coords = np.zeros(sub.dim, dtype=complex)
        coords[np.searchsorted(sub.basis, decomp.sectors[charge][0])] = 1.0
        return sub.embed(coords)

    psi_plus, psi_minus = embed_first(1), embed_first(-1)
    report = superselection_report(spec, psi_plus, psi_minus)
    assert report.max_cross <= 1e-12
    assert report.max_expectation_diff <= 1e-12

    # every interior operator individually, against both sector states
    ops = gauge_invariant_local_basis(spec, maximal_interior(spec))
    for op in ops:
        assert abs(np.vdot(psi_plus.amplitudes, op.entries @ psi_minus.amplitudes)) <= 1e-12

    # contrast case: boundary-reaching operators do connect sectors
    spec1 = LatticeSpec(sites=1, e_max=1)
    sub1 = physical_subspace(spec1)
    decomp1 = charge_sectors(sub1)

    def embed1(charge):
        coords = np.zeros(sub1.dim, dtype=complex)
        coords[np.searchsorted(sub1.basis, decomp1.sectors[charge][0])] = 1.0
        return sub1.embed(coords)

    contrast = superselection_report(
        spec1, embed1(1), embed1(-1), include_boundary_link=True
    )
    assert contrast.max_cross > 0.1

    # and the string operator itself connects adjacent sectors
    w = wilson_line(spec1, 1).entries
    cross = abs(np.vdot(embed1(1).amplitudes, w @ embed1(0).amplitudes))
    assert cross > 0.1

    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    announce(6, f"7 states, sectors 2/3/2; {report.n_operators} interior ops with "
                f"max cross {report.max_cross:.1e}; contrast cross {contrast.max_cross:.2f} "
                f"({elapsed:.2f} s)")


def test_criterion_07_decoherence_pipeline():
    start = time.perf_counter()

    # orthonormal environments: exactly diagonal with |c_n|^2 weights
    coeffs = np.array([math.sqrt(0.5), math.sqrt(0.3), math.sqrt(0.2)], dtype=complex)
    spec = CorrelatedStateSpec(
        coefficients=coeffs,
        system_states=[basis_state(3, i) for i in range(3)],
        apparatus_states=[basis_state(3, i) for i in range(3)],
        environment_states=[basis_state(4, i) for i in range(3)],
    )
    rho = reduce_to_apparatus(build_correlated_state(spec))
    off = rho.entries - np.diag(np.diag(rho.entries))
    assert np.max(np.abs(off)) <= 1e-12
    branch_weights = [rho.entries[i * 3 + i, i * 3 + i].real for i in range(3)]
    np.testing.assert_allclose(branch_weights, np.abs(coeffs) ** 2, atol=1e-12)

    # 20-factor product environments: off-diagonal equals the overlap product
    plus = StateVector(TensorLayout((2,)), np.array([INV_SQRT2, INV_SQRT2]))
    theta = math.acos(0.9)
    rotated = StateVector(
        TensorLayout((2,)),
        np.array(
            [
                (math.cos(theta) + math.sin(theta)) * INV_SQRT2,
                (math.cos(theta) - math.sin(theta)) * INV_SQRT2,
            ]
        ),
    )
    env0, env1 = plus, rotated
    for _ in range(19):
        env0 = tensor_product(env0, plus)
        env1 = tensor_product(env1, rotated)
    spec20 = CorrelatedStateSpec(
        coefficients=np.array([INV_SQRT2, INV_SQRT2], dtype=complex),
        system_states=[basis_state(2, 0), basis_state(2, 1)],
        apparatus_states=[basis_state(2, 0), basis_state(2, 1)],
        environment_states=[env0, env1],
    )
    overlap = environment_overlap(spec20, 0, 1)
    expected = 0.9**20
    assert abs(overlap - expected) <= 1e-12

    rho20 = reduce_to_apparatus(build_correlated_state(spec20))
    block = abs(rho20.entries[0, 3])
    assert abs(block - 0.5 * expected) <= 1e-12

    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    announce(7, f"orthonormal envs exactly diagonal; 20-factor block = "
                f"{block:.10f} = |c0 c1| * 0.9^20 ({elapsed:.2f} s)")


def test_criterion_08_dephasing_oracle_equivalence():
    start = time.perf_counter()
    times = np.linspace(0.0, 6.0, 100)
    worst_coh = 0.0
    worst_ent = 0.0
    for n in range(1, 11):
        rng = np.random.default_rng(8000 + n)
        model = SpinBathModel(bath_size=n, couplings=rng.uniform(0.1, 2.5, size=n))
        curve = spin_bath_evolve(model, times)
        oracle = np.array([spin_bath_coherence(model, t) for t in times])
        worst_coh = max(worst_coh, float(np.max(np.abs(curve.coherence - oracle))))
        check = entropy_curve(curve)
        worst_ent = max(worst_ent, check.max_deviation)
    assert worst_coh <= 1e-10
    assert worst_ent <= 1e-9

    model = SpinBathModel(bath_size=6, couplings=np.ones(6))
    revival = spin_bath_evolve(model, [math.pi]).coherence[0]
    assert abs(revival - 1.0) <= 1e-10

    elapsed = time.perf_counter() - start
    assert elapsed < 60.0
    announce(8, f"matrix vs closed form dev {worst_coh:.1e}; entropy dev {worst_ent:.1e}; "
                f"revival |r(pi)| = {revival:.12f} ({elapsed:.2f} s)")


def test_criterion_09_units_engine():
    start = time.perf_counter()
    a = efield_factor_via_ev_chain()
    b = efield_factor_via_schwinger()
    rel = abs(a - b) / a
    assert rel <= 1e-3

    worst = 0.0
    for dim in (LENGTH, TIME, VOLUME, ENERGY, ELECTRIC_FIELD, DIMENSIONLESS):
        for mag in (1.0, 3.7e-5, 2.9e8):
            q = PhysicalQuantity(mag, dim, SI)
            back = convert(convert(q, NATURAL), SI)
            worst = max(worst, abs(back.magnitude - mag) / mag)
            qn = PhysicalQuantity(mag, dim, NATURAL)
            back_n = convert(convert(qn, SI), NATURAL)
            worst = max(worst, abs(back_n.magnitude - mag) / mag)
    assert worst <= 1e-12

    elapsed = time.perf_counter() - start
    assert elapsed < 0.1
    announce(9, f"conversion routes differ {rel:.2e} <= 1e-3; round trips {worst:.1e} <= 1e-12")


DETERMINISM_ARGV = [
    "lattice", "superselect", "--sites", "2", "--emax", "1", "--left-field", "0",
]


def test_criterion_10_determinism(tmp_path):
    # in-process: byte-identical files
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(DETERMINISM_ARGV + ["--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()

    # separate processes: byte-identical stdout
    outs = []
    for _ in range(2):
        proc = subprocess.run(
            [sys.executable, "-m", "qdeco.cli"] + DETERMINISM_ARGV,
            capture_output=True, check=True,
        )
        outs.append(proc.stdout)
    assert outs[0] == outs[1]
    announce(10, f"identical argv gives byte-identical reports "
                 f"({len(outs[0])} bytes, in-process and across processes)")
