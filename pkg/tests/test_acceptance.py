"""Acceptance criteria, one test each, at the stated tolerances."""

import time

import numpy as np

from hdivbasis import assembly, basis_tet, checks, divfree, tables
from hdivbasis.checks import build

from helpers import KINDS, ORDERS, basis, interior_points, mass, sets, stiffness


def _conditioning(kind, p, variant=None):
    s = build(kind, p, variant)
    return assembly.mass_condition(s).kappa, assembly.stiffness_condition(s).kappa


def _mismatches(rows):
    return [f"{name}: {value:.6e} vs {ref:.4e} ({tables.relative_error(value, ref):.2%})" for name, value, ref, tol in rows
            if tables.relative_error(value, ref) > tol]


def test_criterion_1_triangle_conditioning():
    start = time.perf_counter()
    rows = []
    for p in ORDERS:
        km, ks = _conditioning("tri", p)
        rows += [(f"p={p} mass", km, tables.TRI_MASS[p], 0.005), (f"p={p} stiffness", ks, tables.TRI_STIFFNESS[p], 0.005)]
    elapsed = time.perf_counter() - start
    assert not _mismatches(rows), "\n".join(_mismatches(rows))
    assert elapsed < 10, f"took {elapsed:.1f} s"


def test_criterion_2_tetrahedron_conditioning():
    start = time.perf_counter()
    kappa = {(v, p): _conditioning("tet", p, v) for v in ("first", "second") for p in ORDERS}
    elapsed = time.perf_counter() - start
    rows = []
    for p in ORDERS:
        for v in ("first", "second"):
            km, ks = kappa[v, p]
            rows += [
                (f"{v} p={p} mass", km, tables.TET_MASS[v][p], 0.02),
                (f"{v} p={p} stiffness", ks, tables.TET_STIFFNESS[v][p], 0.02),
            ]
        (fm, fs), (sm, ss) = kappa["first", p], kappa["second", p]
        rows += [
            (f"p={p} mass ratio", fm / sm, tables.TET_RATIO_MASS[p], 0.03),
            (f"p={p} stiffness ratio", fs / ss, tables.TET_RATIO_STIFFNESS[p], 0.03),
        ]
    assert elapsed < 60, f"took {elapsed:.1f} s"
    assert not _mismatches(rows), "\n".join(_mismatches(rows))


def test_criterion_3_dimensions():
    failures = []
    for kind, p, variant in sets():
        s = basis(kind, p, variant)
        failures += [f"{kind} p={p} {variant}: {r.name} {r.detail}" for r in checks.check_dims(s) if not r.passed]
    assert not failures, failures


def test_criterion_4_degeneracy_and_full_rank():
    cert = basis_tet.degeneracy_certificate(2)
    assert cert.rank < cert.count
    assert cert.nullspace
    for vec in cert.nullspace:
        assert basis_tet.combine(basis_tet.ac_family(2), vec).is_zero()
    failures = []
    for p in ORDERS:
        for variant in ("first", "second"):
            failures += [f"{variant} p={p}: {r.name} {r.detail}" for r in checks.check_rank(basis("tet", p, variant))
                         if not r.passed]
    assert not failures, failures


def test_criterion_5_exact_properties():
    failures, total = [], 0
    for kind, p, variant in sets():
        s = basis(kind, p, variant)
        results = checks.check_divfree(s) + checks.check_traces(s)
        total += len(results)
        failures += [f"{kind} p={p} {variant}: {r.name}" for r in results if not r.passed]
    assert total > 0
    assert not failures, failures[:10]


def test_criterion_6_orthonormal_blocks():
    failures, total = [], 0
    for kind, p, variant in sets():
        results = checks.check_orthonormal(basis(kind, p, variant), tol=1e-10)
        total += len(results)
        failures += [f"{kind} p={p} {variant}: {r.name} {r.detail}" for r in results if not r.passed]
    assert total > 0
    assert not failures, failures


def _finite_difference_error(kind, rng):
    s = basis(kind, 3, "first" if kind == "tet" else None)
    pts = interior_points(kind, 20, rng)
    h = 1e-6
    worst = 0.0
    for f in s.fields:
        exact = f.evaluate_jacobian(pts)
        approx = np.empty_like(exact)
        for k in range(pts.shape[1]):
            step = np.zeros(pts.shape[1])
            step[k] = h
            approx[:, :, k] = (f.evaluate(pts + step) - f.evaluate(pts - step)) / (2 * h)
        worst = max(worst, np.linalg.norm(approx - exact) / max(np.linalg.norm(exact), 1.0))
    return worst


def test_criterion_7_oracle_equivalence():
    failures = []
    for kind, p, variant in sets():
        for name, build_matrix in (("mass", mass), ("stiffness", stiffness)):
            gap = np.abs(build_matrix(kind, p, variant) - build_matrix(kind, p, variant, assembly.QUADRATURE)).max()
            if gap > 1e-12:
                failures.append(f"{kind} p={p} {variant} {name}: {gap:.2e}")
    rng = np.random.default_rng(2024)
    for kind in KINDS:
        err = _finite_difference_error(kind, rng)
        if err > 1e-6:
            failures.append(f"{kind} finite differences: {err:.2e}")
    assert not failures, failures


def test_criterion_8_divergence_control():
    rng = np.random.default_rng(8)
    failures = []
    for kind in KINDS:
        s = basis(kind, 2, "first" if kind == "tet" else None)
        n = s.dimension
        gram = divfree.augmented_divergence_gram(s)

        def norm(c, coeff):
            v = np.append(c, coeff)
            return np.sqrt(max(v @ gram @ v, 0.0))

        for _ in range(100):
            c = rng.standard_normal(n)
            res = divfree.augment(divfree.DiscreteField.on(s, c))
            if res.norm_after > res.norm_before:
                failures.append(f"{kind}: norm increased")
            if abs(res.derivative_at_optimum) > 1e-10 * max(1.0, res.norm_before**2):
                failures.append(f"{kind}: derivative {res.derivative_at_optimum:.2e}")
            best = norm(c, res.coefficient)
            if min(norm(c, res.coefficient + d) for d in (-1e-3, 1e-3)) < best:
                failures.append(f"{kind}: perturbation decreased the norm")

        lam, vecs = np.linalg.eigh(gram[:n, :n])
        kernel = vecs[:, lam <= 1e-12 * lam[-1]]
        for _ in range(10):
            c = kernel @ rng.standard_normal(kernel.shape[1])
            coeff = divfree.augment(divfree.DiscreteField.on(s, c)).coefficient
            if abs(coeff) > 1e-10:
                failures.append(f"{kind}: divergence-free input gave C = {coeff:.2e}")

        for p in ORDERS:
            chi = divfree.bubble_for(kind, p)
            if not checks.normal_trace_vanishes(chi, kind):
                failures.append(f"{kind} p={p}: bubble normal trace")
            if any(v != 0 for v in divfree.divergence_integral(chi, kind).values()):
                failures.append(f"{kind} p={p}: bubble mean divergence")
    assert not failures, failures[:10]
