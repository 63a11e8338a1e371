"""Command-line front end: ``lagcubic {check-cubic,verify-section,mirror,jacobian-ring}``.

Every run writes one JSON report (``schema_version`` 1, sorted keys) to
``--output`` or stdout.  Exit status 0 means every check passed, 1 a
condition or pipeline failure, 2 an input error.  All inputs are parsed
before any computation starts.
"""

import argparse
import sys
from dataclasses import dataclass
from typing import List, Optional

from . import __version__
from .errors import (LagcubicError, NotMaximallyUnipotentError, PipelineError,
                     PreconditionError, SchemaError, StructuralError)
from .io import (cubic_file_from_json, dumps, mirror_config_from_json, period_map_from_json,
                 rational_str, read_json, section_from_json, section_to_json)
from .lagrangian import (check_tau_homogeneity, infinitesimal_invariant, is_isotropic,
                         jacobian_ring, lift_quadric, normal_function_residual, one_form_xi)
from .mirror import action_periods, period_yukawa, run_pipeline
from .period import (action_variables, check_torus_lagrangian_condition, integrate_prepotential,
                     resolve_frame, split_symmetric)

SCHEMA_VERSION = 1

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

COMMANDS = ("check-cubic", "verify-section", "mirror", "jacobian-ring")


@dataclass
class RunManifest:
    command: str
    input_paths: List[str]
    truncation_override: Optional[int] = None
    output_path: Optional[str] = None
    emit_witnesses: bool = False
    kmax: Optional[int] = None


def _verdict(v, manifest):
    return v.to_json(witnesses=True) if manifest.emit_witnesses else {
        "passed": v.passed, "message": v.message,
        **({"witness": v.witness} if v.witness is not None else {})}


def _matrix_json(m):
    return [[rational_str(x) for x in row] for row in m]


# -- parsing (all of it happens before any computation) ------------------

def _load_period(path, manifest):
    p, frame, anchor = period_map_from_json(read_json(path))
    try:
        frame = resolve_frame(p, frame)
    except StructuralError as exc:
        raise SchemaError("%s: %s" % (path, exc)) from exc
    if anchor is not None and len(anchor) != p.n:
        raise SchemaError("%s: gauge_anchor needs %d coordinates" % (path, p.n))
    if manifest.truncation_override is not None:
        if manifest.truncation_override > p.order:
            raise SchemaError("%s: --order %d exceeds the order %d of the entries"
                              % (path, manifest.truncation_override, p.order))
        p = p.truncate(manifest.truncation_override)
    return p, frame, anchor


def _parse_inputs(manifest):
    paths = manifest.input_paths
    if manifest.command == "check-cubic":
        return [(path, _load_period(path, manifest)) for path in paths]
    if manifest.command == "verify-section":
        if len(paths) < 2:
            raise SchemaError("verify-section needs a period-map file followed by section files")
        base = _load_period(paths[0], manifest)
        sections = []
        for path in paths[1:]:
            s = section_from_json(read_json(path))
            width = len(s.m) if s.kind == "translation" else len(s.lift)
            if width != base[0].g:
                raise SchemaError("%s: section has %d components, period map has g=%d"
                                  % (path, width, base[0].g))
            if s.kind == "general" and any(x.num_vars != base[0].n for x in s.lift):
                raise SchemaError("%s: lift must be series in %d variables" % (path, base[0].n))
            sections.append((path, s))
        return (paths[0], base), sections
    if manifest.command == "mirror":
        out = []
        for path in paths:
            cfg = mirror_config_from_json(read_json(path))
            order = manifest.truncation_override or cfg.truncation_order
            if order < 2:
                raise SchemaError("%s: truncation order must be at least 2" % path)
            out.append((path, cfg))
        return out
    if manifest.command == "jacobian-ring":
        return [(path, cubic_file_from_json(read_json(path))) for path in paths]
    raise SchemaError("unknown command %r" % manifest.command)


# -- commands --------------------------------------------------------------

def cmd_check_cubic(manifest, parsed):
    results, status = [], EXIT_PASS
    for path, (p, frame, _anchor) in parsed:
        rep = {"input": path, "g": p.g, "n": p.n, "order": p.order,
               "divisors": list(p.polarization_divisors)}
        if p.base_point_imag is not None:
            rep["siegel_positive"] = p.siegel_positive()
        verdict = check_torus_lagrangian_condition(p, frame)
        rep["condition"] = _verdict(verdict, manifest)
        plus, minus = split_symmetric(p)
        if not verdict:
            status = EXIT_FAIL
            results.append(rep)
            continue
        rep["p_minus"] = _matrix_json([[minus[i, j].constant_term for j in range(p.g)]
                                       for i in range(p.g)])
        data = integrate_prepotential(plus, frame)
        g = p.g
        rep["cubic"] = [{"index": [i, j, k], "series": data.tensor[i][j][k].to_json()}
                        for i in range(g) for j in range(i, g) for k in range(j, g)]
        rep["cubic_at_base_point"] = [[[rational_str(x) for x in r] for r in pl] for pl in data.at()]
        rep["prepotential"] = data.prepotential.to_json()
        rep["action_variables"] = [t.to_json() for t in action_variables(plus, frame)]
        results.append(rep)
    return status, results


def cmd_verify_section(manifest, parsed):
    (ppath, (p, frame, anchor)), sections = parsed
    status = EXIT_PASS
    tau = check_tau_homogeneity(p, frame, "tau", anchor)
    out_sections = []
    cubic_ok = bool(check_torus_lagrangian_condition(p, frame))
    for path, s in sections:
        rep = {"input": path, "section": section_to_json(s)}
        xi = one_form_xi(p, s, frame)
        iso = is_isotropic(p, s, frame)
        residual = normal_function_residual(p, s, frame, anchor)
        rep["xi"] = [x.to_json() for x in xi]
        rep["isotropic"] = _verdict(iso, manifest)
        rep["residual"] = [r.to_json() for r in residual]
        rep["residual_zero"] = all(r.is_zero() for r in residual)
        rep["discrete_class"] = list(s.class_vector)
        if iso and cubic_ok and p.is_symmetric():
            q = lift_quadric(p, s, frame)
            c = integrate_prepotential(p, frame).at()
            rep["lift_quadric"] = _matrix_json(q)
            rep["infinitesimal_invariant"] = infinitesimal_invariant(c, q).to_json()
        if not iso:
            status = EXIT_FAIL
        out_sections.append(rep)
    if not tau:
        status = EXIT_FAIL
    summary = {"input": ppath, "g": p.g, "n": p.n, "order": p.order,
               "tau_homogeneity": _verdict(tau, manifest), "sections": out_sections}
    return status, [summary]


def cmd_mirror(manifest, parsed):
    results, status = [], EXIT_PASS
    for path, cfg in parsed:
        rep = {"input": path, "name": cfg.name, "provenance": cfg.provenance}
        try:
            res = run_pipeline(cfg, manifest.truncation_override, manifest.kmax)
        except NotMaximallyUnipotentError as exc:
            rep["error"] = str(exc)
            rep["indicial_roots"] = list(exc.roots)
            status = EXIT_FAIL
            results.append(rep)
            continue
        except (PipelineError, PreconditionError) as exc:
            rep["error"] = str(exc)
            status = EXIT_FAIL
            results.append(rep)
            continue
        rep.update(res.to_json())
        op = cfg.operator
        rep["annihilated"] = all(op.apply(w).is_zero() for w in res.basis.solutions)
        rep["K_is_constant"] = res.K.is_constant()
        if len(res.basis) >= 3:
            from_periods = period_yukawa(res.basis, res.maps).scale(cfg.classical_triple)
            rep["period_yukawa_consistent"] = from_periods.truncate(res.K.order) == res.K
        if manifest.emit_witnesses:
            rep["action_periods"] = action_periods(res.basis, res.maps)
        results.append(rep)
    return status, results


def cmd_jacobian_ring(manifest, parsed):
    results, status = [], EXIT_PASS
    for path, (tensor, degrees, quadrics) in parsed:
        rep = {"input": path, "g": len(tensor)}
        try:
            ring = jacobian_ring(tensor, tuple(sorted(set(degrees) | {2})))
            rep["graded_pieces"] = [
                {"degree": d, "dim_S": ring.piece(d).dim_S, "dim_J": ring.piece(d).dim_J,
                 "dim_R": ring.piece(d).dim_R,
                 "quotient_basis": [list(m) for m in ring.quotient_basis(d)]}
                for d in sorted(set(degrees) | {2})]
            rep["classes"] = [infinitesimal_invariant(tensor, q, ring).to_json() for q in quadrics]
        except PreconditionError as exc:
            rep["error"] = str(exc)
            status = EXIT_FAIL
        results.append(rep)
    return status, results


HANDLERS = {
    "check-cubic": cmd_check_cubic,
    "verify-section": cmd_verify_section,
    "mirror": cmd_mirror,
    "jacobian-ring": cmd_jacobian_ring,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="lagcubic",
                                     description="Cubic-condition, section and mirror-pipeline checks.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "check-cubic": "cubic condition, prepotential and action variables of a period map",
        "verify-section": "isotropy and normal-function residual of sections (period map first)",
        "mirror": "Frobenius basis, mirror map, normalized Yukawa and curve counts",
        "jacobian-ring": "graded Jacobian ring of a cubic and classes of quadrics",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        sp.add_argument("--input", nargs="+", required=True, metavar="PATH")
        sp.add_argument("--output", default=None, metavar="PATH", help="report path (default stdout)")
        sp.add_argument("--order", type=int, default=None, help="truncation order override")
        sp.add_argument("--kmax", type=int, default=None, help="number of counts to extract")
        sp.add_argument("--witnesses", action="store_true",
                        help="include verdict details and intermediate data in the report")
    return parser


def _write(report, path):
    text = dumps(report)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def run(manifest):
    """Execute a manifest; returns ``(exit_status, report)``."""
    report = {"schema_version": SCHEMA_VERSION, "command": manifest.command,
              "inputs": list(manifest.input_paths)}
    try:
        if manifest.truncation_override is not None and manifest.truncation_override < 0:
            raise SchemaError("--order must be non-negative")
        if manifest.kmax is not None and manifest.kmax < 0:
            raise SchemaError("--kmax must be non-negative")
        parsed = _parse_inputs(manifest)
    except (SchemaError, StructuralError) as exc:
        report.update(status="input_error", exit_status=EXIT_INPUT, error=str(exc))
        return EXIT_INPUT, report
    try:
        status, results = HANDLERS[manifest.command](manifest, parsed)
    except LagcubicError as exc:
        report.update(status="error", exit_status=EXIT_FAIL, error=str(exc))
        return EXIT_FAIL, report
    report.update(status="pass" if status == EXIT_PASS else "fail", exit_status=status,
                  results=results)
    return status, report


def main(argv=None):
    args = build_parser().parse_args(argv)
    manifest = RunManifest(args.command, list(args.input), args.order, args.output,
                           args.witnesses, args.kmax)
    status, report = run(manifest)
    _write(report, manifest.output_path)
    return status


if __name__ == "__main__":
    sys.exit(main())
