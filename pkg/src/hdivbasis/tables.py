"""Dimension and conditioning tables with their published reference values.

``dimension_table`` rebuilds each basis and compares category counts with
the closed-form counts; ``triangle_conditioning`` and
``tetrahedron_conditioning`` recompute the condition numbers and compare
them with the reference values at the stated relative tolerances.
"""

from __future__ import annotations

from functools import lru_cache

from .assembly import EXACT, CondReport, mass_condition, stiffness_condition
from .checks import CheckResult, build, expected_counts, expected_dimension
from .kinds import ElementKind

ORDERS = (1, 2, 3, 4)

TRI_MASS = {1: 2.016e1, 2: 8.804e1, 3: 9.847e2, 4: 1.286e4}
TRI_STIFFNESS = {1: 1.040e1, 2: 5.959e1, 3: 4.197e2, 4: 8.843e3}
TRI_TOL = 0.005

TET_MASS = {
    "first": {1: 3.084e1, 2: 6.987e3, 3: 3.412e6, 4: 5.972e9},
    "second": {1: 3.084e1, 2: 7.733e4, 3: 2.289e6, 4: 2.717e7},
}
TET_STIFFNESS = {
    "first": {1: 1.989e1, 2: 3.395e3, 3: 1.094e6, 4: 2.883e9},
    "second": {1: 1.989e1, 2: 5.917e4, 3: 1.191e6, 4: 2.372e7},
}
# first-kind over second-kind condition numbers
TET_RATIO_MASS = {1: 1.000e0, 2: 0.090e0, 3: 1.491e0, 4: 2.198e2}
TET_RATIO_STIFFNESS = {1: 1.000e0, 2: 0.057e0, 3: 0.919e0, 4: 1.215e2}
TET_TOL = 0.02
RATIO_TOL = 0.03


def relative_error(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference)


def _compare(name: str, value: float, reference: float, tol: float) -> tuple[dict, CheckResult]:
    err = relative_error(value, reference)
    row = {"value": value, "reference": reference, "relative_error": err, "tolerance": tol}
    return row, CheckResult(name, err <= tol, f"{value:.6e} vs {reference:.4e} (rel. error {err:.2e})")


@lru_cache(maxsize=None)
def conditioning(kind: str, p: int, variant: str | None = None, path: str = EXACT) -> tuple[CondReport, CondReport]:
    """Mass and stiffness condition reports; cached because the tet sets are costly."""
    basis = build(kind, p, variant)
    return mass_condition(basis, path), stiffness_condition(basis, path)


def dimension_table(kind: ElementKind | str, orders=ORDERS) -> tuple[list[dict], list[CheckResult]]:
    kind = ElementKind.parse(kind)
    rows, checks = [], []
    for p in orders:
        basis = build(kind, p)
        got = basis.category_counts()
        want = expected_counts(basis)
        rows.append({"order": p, "counts": got, "expected": want, "dimension": basis.dimension})
        ok = got == {c: n for c, n in want.items() if n} and basis.dimension == expected_dimension(kind, p)
        checks.append(CheckResult(f"{kind.value} p={p} dimensions", ok, f"dimension {basis.dimension}"))
    return rows, checks


def triangle_conditioning(orders=ORDERS) -> tuple[list[dict], list[CheckResult]]:
    rows, checks = [], []
    for p in orders:
        mass, stiff = conditioning(ElementKind.TRI.value, p)
        m_row, m_chk = _compare(f"tri p={p} mass", mass.kappa, TRI_MASS[p], TRI_TOL)
        s_row, s_chk = _compare(f"tri p={p} stiffness", stiff.kappa, TRI_STIFFNESS[p], TRI_TOL)
        rows.append({"order": p, "mass": m_row, "stiffness": s_row, "excluded": stiff.excluded})
        checks += [m_chk, s_chk]
    return rows, checks


def tetrahedron_conditioning(orders=ORDERS) -> tuple[list[dict], list[CheckResult]]:
    rows, checks = [], []
    for p in orders:
        row: dict = {"order": p}
        kappas = {}
        for variant in ("first", "second"):
            mass, stiff = conditioning(ElementKind.TET.value, p, variant)
            kappas[variant] = (mass.kappa, stiff.kappa)
            m_row, m_chk = _compare(f"tet {variant} p={p} mass", mass.kappa, TET_MASS[variant][p], TET_TOL)
            s_row, s_chk = _compare(
                f"tet {variant} p={p} stiffness", stiff.kappa, TET_STIFFNESS[variant][p], TET_TOL
            )
            row[variant] = {"mass": m_row, "stiffness": s_row, "excluded": stiff.excluded}
            checks += [m_chk, s_chk]
        rm = kappas["first"][0] / kappas["second"][0]
        rs = kappas["first"][1] / kappas["second"][1]
        row["ratio_mass"], chk_m = _compare(f"tet p={p} mass ratio", rm, TET_RATIO_MASS[p], RATIO_TOL)
        row["ratio_stiffness"], chk_s = _compare(f"tet p={p} stiffness ratio", rs, TET_RATIO_STIFFNESS[p], RATIO_TOL)
        checks += [chk_m, chk_s]
        rows.append(row)
    return rows, checks


def all_tables() -> tuple[dict, list[CheckResult]]:
    """Tables 1 to 6 in one payload, together with every comparison made."""
    payload, checks = {}, []
    for number, kind in enumerate(("quad", "hex", "tri", "tet"), start=1):
        rows, chk = dimension_table(kind)
        payload[f"table{number}_{kind}_dimensions"] = rows
        checks += chk
    rows, chk = triangle_conditioning()
    payload["table5_tri_conditioning"] = rows
    checks += chk
    rows, chk = tetrahedron_conditioning()
    payload["table6_tet_conditioning"] = rows
    checks += chk
    return payload, checks


__all__ = [
    "ORDERS",
    "all_tables",
    "conditioning",
    "dimension_table",
    "relative_error",
    "tetrahedron_conditioning",
    "triangle_conditioning",
]

