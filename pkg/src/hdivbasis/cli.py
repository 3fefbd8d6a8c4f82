"""Command-line front end.

Every command prints one report (JSON by default, CSV on request) and exits
with 0 when all of its checks pass, 1 when any check fails and 2 on a usage
error.  Reports are deterministic: identical arguments give identical bytes
unless ``--timestamp`` is requested.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import platform
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import Callable

import numpy as np

from . import __version__, assembly, basis_tet, checks, divfree, tables
from .basis import MAX_ORDER
from .checks import CheckResult
from .kinds import ElementKind
from .polyalgebra import divergence_field
from .refgeom import make_reference

log = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
ELEMENTS = tuple(k.value for k in ElementKind)
VARIANTS = tuple(v.value for v in basis_tet.Variant)
# commands that accept the non-basis ac family
AC_COMMANDS = {"degeneracy", "check-rank", "check-traces"}


class UsageError(Exception):
    pass


# serialization -------------------------------------------------------------------


def _plain(value):
    """Convert numpy scalars, arrays, fractions and tuples to JSON-ready values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, Fraction):
        return str(value)
    return value


def _encode(value, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{_encode_str(k)}: {_encode(v, indent, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in value):
            return "[" + ", ".join(_encode(v, indent, level) for v in value) + "]"
        return "[\n" + ",\n".join(pad + _encode(v, indent, level + 1) for v in value) + "\n" + end + "]"
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if not np.isfinite(value):
            raise ValueError(f"non-finite number in report: {value!r}")
        return assembly.format_float(value)
    return _encode_str(str(value))


def _encode_str(s: str) -> str:
    return json.dumps(s)


def dumps(report: dict) -> str:
    """JSON text with every float written to 17 significant digits."""
    return _encode(_plain(report), 2, 0) + "\n"


def _flatten(value, prefix: str, out: list):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(v, f"{prefix}.{k}" if prefix else str(k), out)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            _flatten(v, f"{prefix}[{i}]", out)
    else:
        if isinstance(value, float):
            value = assembly.format_float(value)
        elif isinstance(value, bool):
            value = "true" if value else "false"
        elif value is None:
            value = ""
        out.append((prefix, value))


def to_csv(report: dict) -> str:
    """Matrices as row-major CSV; any other report as ``key,value`` lines."""
    matrix = report["payload"].get("matrix") if isinstance(report.get("payload"), dict) else None
    if matrix is not None and report["command"] in ("mass", "stiffness"):
        return assembly.matrix_to_csv(np.asarray(matrix, dtype=float))
    rows: list = []
    _flatten(_plain(report), "", rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    writer.writerows(rows)
    return buf.getvalue()


# commands ------------------------------------------------------------------------


def _basis(args):
    return checks.build(args.element, args.order, args.variant if args.element == "tet" else None)


def cmd_dims(args):
    basis = _basis(args)
    payload = {
        "dimension": basis.dimension,
        "expected_dimension": checks.expected_dimension(basis.kind, basis.order),
        "counts": basis.category_counts(),
        "expected_counts": checks.expected_counts(basis),
    }
    return payload, checks.check_dims(basis)


def _matrix_cmd(builder: Callable):
    def run(args):
        basis = _basis(args)
        a = builder(basis, args.path)
        return {"path": args.path, "size": int(a.shape[0]), "matrix": a}, []

    return run


def cmd_cond(args):
    basis = _basis(args)
    mass = assembly.mass_matrix(basis, args.path)
    stiff = assembly.stiffness_matrix(basis, args.path)
    m_spec = assembly.eigenvalues(mass)
    s_spec = assembly.eigenvalues(stiff)
    m_rep = assembly.condition_number(
        mass, spectrum=m_spec, kind=basis.kind.value, order=basis.order, variant=basis.variant, matrix="mass"
    )
    s_rep = assembly.condition_number(
        stiff,
        exclude_zeros=True,
        spectrum=s_spec,
        kind=basis.kind.value,
        order=basis.order,
        variant=basis.variant,
        matrix="stiffness",
    )
    payload = {
        "path": args.path,
        "kappa_mass": m_rep.kappa,
        "kappa_stiffness": s_rep.kappa,
        "mass": m_rep.to_dict(),
        "stiffness": s_rep.to_dict(),
        "mass_spectrum": m_spec,
        "stiffness_spectrum": s_spec,
    }
    result = [
        CheckResult("mass positive definite", m_rep.lambda_min > 0, f"lambda_min {m_rep.lambda_min:.6e}"),
        CheckResult("kappa >= 1", m_rep.kappa >= 1 and s_rep.kappa >= 1),
    ]
    return payload, result


def _checks_cmd(fn: Callable, describe: str):
    def run(args):
        basis = _basis(args)
        results = fn(basis)
        payload = {"property": describe, "count": len(results), "failures": sum(not r.passed for r in results)}
        return payload, results

    return run


def cmd_check_traces(args):
    if args.element == "tet" and args.variant == "ac":
        results = checks.tet_traces(basis_tet.ac_family(args.order), make_reference(ElementKind.TET))
    else:
        results = checks.check_traces(_basis(args))
    payload = {"property": "vanishing traces", "count": len(results), "failures": sum(not r.passed for r in results)}
    return payload, results


def cmd_check_rank(args):
    if args.element == "tet" and args.variant == "ac":
        cert = basis_tet.degeneracy_certificate(args.order)
        payload = {"count": cert.count, "rank": cert.rank}
        return payload, [CheckResult("rank = count", cert.deficit == 0, f"rank {cert.rank}, count {cert.count}")]
    basis = _basis(args)
    results = checks.check_rank(basis)
    return {"dimension": basis.dimension}, results


def cmd_degeneracy(args):
    if args.element != "tet":
        raise UsageError("degeneracy applies to --element tet only")
    cert = basis_tet.degeneracy_certificate(args.order)
    family = basis_tet.ac_family(args.order)
    results = []
    for k, vec in enumerate(cert.nullspace):
        combo = basis_tet.combine(family, vec)
        results.append(CheckResult(f"null vector {k} combines to zero", combo.is_zero()))
    payload = {
        "family": "ac",
        "count": cert.count,
        "rank": cert.rank,
        "deficit": cert.deficit,
        "nullspace": [list(v) for v in cert.nullspace],
        "labels": list(cert.labels),
        "nonzero_entries": [sum(1 for x in v if x) for v in cert.nullspace],
    }
    return payload, results


def _augment_kind(kind: ElementKind, p: int, samples: int, rng: np.random.Generator):
    basis = checks.build(kind, p)
    n = basis.dimension
    gram = divfree.augmented_divergence_gram(basis)
    chi = divfree.bubble_for(kind, p)

    def norm(c, coeff):
        v = np.append(c, coeff)
        return float(np.sqrt(max(v @ gram @ v, 0.0)))

    rows, increased, derivative_bad, perturbation_bad = [], 0, 0, 0
    for _ in range(samples):
        c = rng.standard_normal(n)
        res = divfree.augment(divfree.DiscreteField.on(basis, c))
        rows.append({"coefficient": res.coefficient, "before": res.norm_before, "after": res.norm_after})
        increased += res.norm_after > res.norm_before
        derivative_bad += abs(res.derivative_at_optimum) > 1e-10 * max(1.0, res.norm_before**2)
        best = norm(c, res.coefficient)
        worse = min(norm(c, res.coefficient + h) for h in (-1e-3, 1e-3))
        perturbation_bad += worse < best

    # divergence-free inputs: the numerical kernel of the divergence Gram
    lam, vecs = np.linalg.eigh(gram[:n, :n])
    kernel = vecs[:, lam <= 1e-12 * lam[-1]]
    worst_c = 0.0
    for _ in range(min(samples, 10)):
        c = kernel @ rng.standard_normal(kernel.shape[1]) if kernel.size else np.zeros(n)
        worst_c = max(worst_c, abs(divfree.augment(divfree.DiscreteField.on(basis, c)).coefficient))

    elem_checks = [
        CheckResult(f"{kind.value}: after-norm <= before-norm", increased == 0, f"{increased} violations"),
        CheckResult(f"{kind.value}: derivative vanishes at optimum", derivative_bad == 0, f"{derivative_bad} violations"),
        CheckResult(f"{kind.value}: +-1e-3 perturbation never helps", perturbation_bad == 0, f"{perturbation_bad} violations"),
        CheckResult(f"{kind.value}: divergence-free input gives C = 0", worst_c <= 1e-10, f"max |C| {worst_c:.3e}"),
        CheckResult(f"{kind.value}: bubble normal trace vanishes", checks.normal_trace_vanishes(chi, kind)),
        CheckResult(
            f"{kind.value}: bubble mean divergence vanishes",
            all(v == 0 for v in divfree.divergence_integral(chi, kind).values()),
        ),
    ]
    ratios = [r["after"] / r["before"] for r in rows if r["before"] > 0]
    summary = {
        "order": p,
        "bubble_order": divfree.bubble_order(kind, p),
        "bubble_divergence_degree": divergence_field(chi).degree,
        "divergence_free_dimension": int(kernel.shape[1]),
        "max_after_over_before": max(ratios),
        "min_after_over_before": min(ratios),
        "samples": rows,
    }
    return summary, elem_checks


def cmd_augment_demo(args):
    kinds = [ElementKind.parse(args.element)] if args.element else list(ElementKind)
    rng = np.random.default_rng(args.seed)
    payload, results = {"seed": args.seed, "samples": args.samples}, []
    for kind in kinds:
        summary, elem_checks = _augment_kind(kind, args.order, args.samples, rng)
        payload[kind.value] = summary
        results += elem_checks
    return payload, results


def cmd_tables(args):
    return tables.all_tables()


COMMANDS = {
    "dims": (cmd_dims, "category counts and total dimension"),
    "mass": (_matrix_cmd(assembly.mass_matrix), "mass matrix"),
    "stiffness": (_matrix_cmd(assembly.stiffness_matrix), "stiffness matrix"),
    "cond": (cmd_cond, "mass and stiffness condition numbers"),
    "check-orthonormal": (
        _checks_cmd(checks.check_orthonormal, "orthonormal Gram blocks"),
        "Gram blocks declared orthonormal",
    ),
    "check-divfree": (_checks_cmd(checks.check_divfree, "divergence claims"), "divergence-free families"),
    "check-traces": (cmd_check_traces, "vanishing normal/tangential traces"),
    "check-rank": (cmd_check_rank, "exact linear independence"),
    "degeneracy": (cmd_degeneracy, "rank deficit of the ac edge-face family"),
    "augment-demo": (cmd_augment_demo, "interior-bubble divergence control on random fields"),
    "tables": (cmd_tables, "dimension and conditioning tables 1 to 6"),
}
# commands that need no element
ELEMENT_OPTIONAL = {"tables", "augment-demo"}
DEFAULT_ORDER = {"degeneracy": 2, "augment-demo": 2}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--element", choices=ELEMENTS)
    common.add_argument("--order", type=int, metavar="P")
    common.add_argument("--variant", choices=VARIANTS, help="tetrahedron edge-face family (default: first)")
    common.add_argument("--path", choices=(assembly.EXACT, assembly.QUADRATURE), default=assembly.EXACT)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for random fields")
    common.add_argument("--samples", type=int, default=100, help="random fields per element (augment-demo)")
    common.add_argument("--out", metavar="FILE", help="write the report here instead of standard output")
    common.add_argument("--timestamp", action="store_true", help="record the UTC time in the report")

    parser = argparse.ArgumentParser(prog="hdivbasis", description="Hierarchical H(div) bases on reference elements.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text, description=help_text)
    return parser


def _validate(args) -> None:
    cmd = args.command
    if args.element is None:
        if cmd == "degeneracy":
            args.element = "tet"
        elif cmd not in ELEMENT_OPTIONAL:
            raise UsageError(f"{cmd} requires --element")
    if args.variant is not None and args.element != "tet":
        raise UsageError("--variant applies to --element tet only")
    if args.element == "tet" and args.variant is None:
        args.variant = "ac" if cmd == "degeneracy" else "first"
    if args.variant == "ac" and cmd not in AC_COMMANDS:
        raise UsageError(f"the ac family is not a basis; use it with {', '.join(sorted(AC_COMMANDS))}")
    if cmd == "degeneracy" and args.variant != "ac":
        raise UsageError("degeneracy certifies the ac family only")
    if args.order is None:
        if cmd in DEFAULT_ORDER:
            args.order = DEFAULT_ORDER[cmd]
        elif cmd != "tables":
            raise UsageError(f"{cmd} requires --order")
    if args.order is not None and cmd != "tables":
        kinds = [ElementKind.parse(args.element)] if args.element else list(ElementKind)
        top = min(MAX_ORDER[k] for k in kinds)
        if args.variant == "ac":
            top = min(top, 4)
        if not 1 <= args.order <= top:
            raise UsageError(f"--order must be between 1 and {top}")
    if args.samples < 1:
        raise UsageError("--samples must be positive")


def _metadata() -> dict:
    return {
        "package": "artifact",
        "version": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
    }


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage to stderr
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        _validate(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hdivbasis: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    handler, _ = COMMANDS[args.command]
    log.debug("running %s element=%s order=%s variant=%s", args.command, args.element, args.order, args.variant)
    try:
        payload, results = handler(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hdivbasis: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    passed = checks.all_passed(results)
    payload = dict(payload)
    payload["checks"] = [r.to_dict() for r in results]
    report = {
        "command": args.command,
        "element": args.element,
        "order": args.order,
        "variant": args.variant,
        "passed": passed,
        "payload": payload,
        "meta": _metadata(),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds") if args.timestamp else None,
    }
    text = dumps(report) if args.format == "json" else to_csv(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    for r in results:
        if not r.passed:
            print(f"FAILED {r.name} {r.detail}".rstrip(), file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAILED


def main() -> None:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run())


if __name__ == "__main__":
    main()
