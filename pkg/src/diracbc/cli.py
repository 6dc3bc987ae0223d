"""Command-line front end.

    diracbc rep D N
    diracbc check FILE [--tol T] [--samples S] [--cross-check] [--json] [--quiet]
    diracbc sweep FAMILY --grid NAME=START:STOP:NUM [--grid ...] [--set NAME=JSON] [--rep D,N]
    diracbc witness FILE [--n 4,16,64,256]

Exit codes: 0 ok, 1 internal inconsistency, 2 input error.
"""
import argparse
import itertools
import json
import math
import sys

import numpy as np

from .boundary import BoundaryCondition, BoundaryFrame, is_self_adjoint, is_symmetric
from .catalog import FAMILIES, FamilySpec, build_family, closed_form, expected_verdicts, oracle, resolve_frame
from .clifford import SUPPORTED, build_rep, chirality, verify_chirality, verify_rep
from .errors import DiracBCError, InconsistentCheck, InputError
from .linalg import DEFAULT_TOL, Subspace
from .regularity import BOUNDARY, DEFAULT_SAMPLES, sl_check_sampled
from .transmission import TransmissionPair, trans_self_adjoint, trans_sl_check, trans_symmetric
from .witness import witness_build, witness_report

FORMAT_VERSION = 1


# ---------------------------------------------------------------- encoding


def encode_complex(z):
    return [float(np.real(z)), float(np.imag(z))]


def encode_vector(v):
    return [encode_complex(z) for z in np.asarray(v).ravel()]


def encode_matrix(m):
    return [[encode_complex(z) for z in row] for row in np.asarray(m)]


def _scalar(x):
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(c, (int, float)) for c in x):
        return complex(x[0], x[1])
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    raise InputError(f"expected a number or a [re, im] pair, got {x!r}")


def decode_matrix(rows):
    """Row-major matrix whose entries are numbers or [re, im] pairs."""
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise InputError("a matrix must be a non-empty list of rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InputError("matrix rows have different lengths")
    return np.array([[_scalar(x) for x in r] for r in rows], dtype=complex)


def _float(x):
    if x is None:
        return None
    x = float(x)
    return None if math.isnan(x) or math.isinf(x) else x


def _decode_params(params):
    """Family parameters: matrices may use [re, im] pairs; everything else is passed through."""
    out = {}
    for k, v in params.items():
        if k == "A":
            out[k] = decode_matrix(v)
        else:
            out[k] = v
    return out


# ---------------------------------------------------------------- input


def load_spec_file(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def parse_spec(doc):
    """Validate a BCSpecFile document; returns (frame, condition kind, payload, tolerances)."""
    if not isinstance(doc, dict):
        raise InputError("top level must be an object")
    if doc.get("version") != FORMAT_VERSION:
        raise InputError(f"unsupported version {doc.get('version')!r}; expected {FORMAT_VERSION}")
    rep_doc = doc.get("rep")
    if not isinstance(rep_doc, dict) or "d" not in rep_doc or "N" not in rep_doc:
        raise InputError("rep must be an object with d and N")
    try:
        rep = build_rep(int(rep_doc["d"]), int(rep_doc["N"]))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad rep: {exc}") from exc
    fdoc = doc.get("frame")
    if fdoc is None:
        frame = BoundaryFrame.standard(rep)
    else:
        try:
            frame = BoundaryFrame(rep, np.asarray(fdoc["nu"], dtype=float), np.asarray(fdoc["tangent"], dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise
            raise InputError(f"bad frame: {exc}") from exc
    tols = doc.get("tolerances") or {}
    if not isinstance(tols, dict):
        raise InputError("tolerances must be an object")
    cond = doc.get("condition")
    if not isinstance(cond, dict):
        raise InputError("condition must be an object")
    try:
        if "family" in cond:
            spec = FamilySpec(str(cond["family"]), _decode_params(cond.get("params") or {}))
            resolve_frame(spec, frame)
            return frame, "family", spec, tols
        if "subspace" in cond:
            cols = decode_matrix(cond["subspace"])
            if cols.shape[0] != rep.N:
                raise InputError(f"subspace frame needs {rep.N} rows")
            return frame, "subspace", BoundaryCondition(frame, Subspace.span(cols)), tols
        if "transmission" in cond:
            t = cond["transmission"]
            return frame, "transmission", TransmissionPair(frame, decode_matrix(t["B1"]), decode_matrix(t["B2"])), tols
        if "delta_shell" in cond:
            params = {k: float(v) for k, v in cond["delta_shell"].items()}
            spec = FamilySpec("delta_shell", params)
            resolve_frame(spec, frame)
            return frame, "family", spec, tols
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad condition: {exc}") from exc
    raise InputError("condition needs one of: family, subspace, transmission, delta_shell")


# ---------------------------------------------------------------- reports


def _agrees(closed, sampled):
    """Closed-form and sampled labels agree; a sampled boundary case or a closed-form no-claim agrees with anything."""
    if closed is None or sampled == BOUNDARY or closed == BOUNDARY:
        return True
    return closed == sampled


def _verdict_fields(verdict):
    w = verdict.witness
    return {
        "regular": verdict.regular,
        "witness_direction": None if w is None else [float(x) for x in w.k],
        "witness_vector": None if w is None else encode_vector(w.v),
        "margin": _float(verdict.margin),
        "method": verdict.method,
        "notes": list(verdict.notes),
    }


def _structure(obj, tol):
    if isinstance(obj, TransmissionPair):
        return {"symmetric": trans_symmetric(obj, tol), "self_adjoint": trans_self_adjoint(obj, tol)}
    return {"symmetric": is_symmetric(obj, tol), "self_adjoint": is_self_adjoint(obj, tol)}


def run_check(doc, tol=None, samples=None, cross_check=False):
    """Report dict for a BCSpecFile document; raises InconsistentCheck on cross-check disagreement."""
    frame, kind, payload, tols = parse_spec(doc)
    tol = float(tol if tol is not None else tols.get("tol", DEFAULT_TOL))
    samples = int(samples if samples is not None else tols.get("samples", DEFAULT_SAMPLES))
    report = {"input": doc, "tolerances": {"tol": tol, "samples": samples}}
    if kind == "family":
        obj, verdict = closed_form(payload, frame, samples, tol)
        report["expected"] = expected_verdicts(payload, frame)
    elif kind == "subspace":
        obj, verdict = payload, sl_check_sampled(payload, samples, tol)
    else:
        obj, verdict = payload, trans_sl_check(payload, samples, tol)
    report.update(_structure(obj, tol))
    report.update(_verdict_fields(verdict))
    if cross_check and kind == "family":
        _, ov = oracle(payload, frame, samples, tol)
        agree = _agrees(verdict.regular, ov.regular)
        report["cross_check"] = {"sampled_regular": ov.regular, "sampled_margin": _float(ov.margin), "agree": agree}
        if not agree:
            raise InconsistentCheck(json.dumps(report, sort_keys=True))
    return report


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2)


def _table(report):
    keys = ("symmetric", "self_adjoint", "regular", "margin", "method", "witness_direction")
    lines = [f"{k:18s} {json.dumps(report.get(k))}" for k in keys]
    if report.get("cross_check"):
        lines.append(f"{'cross_check':18s} {json.dumps(report['cross_check'], sort_keys=True)}")
    for n in report.get("notes", []):
        lines.append(f"note: {n}")
    return "\n".join(lines)


# ---------------------------------------------------------------- sweep


def parse_grid(text):
    """NAME=START:STOP:NUM (inclusive linspace), NAME=v1,v2,... or NAME=<JSON list>."""
    if "=" not in text:
        raise InputError(f"grid spec {text!r} needs NAME=VALUES")
    name, spec = text.split("=", 1)
    spec = spec.strip()
    try:
        if spec.startswith("["):
            values = json.loads(spec)
            if not isinstance(values, list):
                raise InputError("grid JSON must be a list")
        elif ":" in spec:
            parts = spec.split(":")
            if len(parts) != 3:
                raise InputError("range grid is START:STOP:NUM")
            start, stop, num = float(parts[0]), float(parts[1]), int(parts[2])
            if num < 0:
                raise InputError("NUM must be non-negative")
            values = [float(x) for x in np.linspace(start, stop, num)]
        else:
            values = [float(x) for x in spec.split(",") if x.strip()]
    except (ValueError, json.JSONDecodeError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad grid spec {text!r}: {exc}") from exc
    return name.strip(), values


def parse_set(text):
    if "=" not in text:
        raise InputError(f"--set {text!r} needs NAME=JSON")
    name, value = text.split("=", 1)
    try:
        return name.strip(), json.loads(value)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad --set value {value!r}: {exc}") from exc


def run_sweep(family, grids, fixed=None, rep=None, tol=DEFAULT_TOL, samples=DEFAULT_SAMPLES, method="closed-form", cross_check=False):
    """One row per grid point (Cartesian product in the order given) plus a summary."""
    if family not in FAMILIES:
        raise InputError(f"unknown family {family!r}")
    frame = BoundaryFrame.standard(build_rep(*rep)) if rep else None
    names = [g[0] for g in grids]
    rows = []
    counts = {"regular": 0, "not_regular": 0, "boundary": 0, "no_claim": 0}
    inconsistent = 0
    points = itertools.product(*[g[1] for g in grids]) if grids else iter(())
    for point in points:
        params = dict(fixed or {})
        params.update(zip(names, point))
        spec = FamilySpec(family, _decode_params(params))
        obj, v = closed_form(spec, frame, samples, tol) if method == "closed-form" else oracle(spec, frame, samples, tol)
        row = {"params": dict(zip(names, point)), "regular": v.regular, "margin": _float(v.margin), "method": v.method}
        row.update(_structure(obj, tol))
        if cross_check:
            _, ov = oracle(spec, frame, samples, tol) if method == "closed-form" else closed_form(spec, frame, samples, tol)
            row["cross_regular"] = ov.regular
            row["agree"] = _agrees(v.regular if method == "closed-form" else ov.regular,
                                   ov.regular if method == "closed-form" else v.regular)
            inconsistent += not row["agree"]
        key = {True: "regular", False: "not_regular", BOUNDARY: "boundary"}.get(v.regular, "no_claim")
        counts[key] += 1
        rows.append(row)
    return {"family": family, "fixed": fixed or {}, "grid": [list(g) for g in grids], "rows": rows, "summary": counts,
            "tolerances": {"tol": tol, "samples": samples}, "method": method, "inconsistent": inconsistent}


def _sweep_table(result):
    lines = []
    for row in result["rows"]:
        p = " ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in row["params"].items())
        lines.append(f"{p:40s} regular={json.dumps(row['regular'])} self_adjoint={json.dumps(row['self_adjoint'])}")
    s = result["summary"]
    lines.append(f"summary: regular={s['regular']} not_regular={s['not_regular']} boundary={s['boundary']} no_claim={s['no_claim']}")
    return "\n".join(lines)


# ---------------------------------------------------------------- witness


def run_witness(doc, n_list, tol=None, samples=None):
    frame, kind, payload, tols = parse_spec(doc)
    tol = float(tol if tol is not None else tols.get("tol", DEFAULT_TOL))
    samples = int(samples if samples is not None else tols.get("samples", DEFAULT_SAMPLES))
    if kind == "transmission" or (kind == "family" and payload.name == "delta_shell"):
        raise InputError("witness sequences are defined for local boundary conditions only")
    if kind == "family":
        bc, verdict = closed_form(payload, frame, samples, tol)
        if verdict.regular is False and verdict.witness is None:
            verdict = sl_check_sampled(bc, samples, tol)
    else:
        bc, verdict = payload, sl_check_sampled(payload, samples, tol)
    spec = witness_build(bc, verdict, n_list)
    rep = witness_report(spec, n_list)
    return {
        "input": doc,
        "witness_direction": [float(x) for x in spec.xi0],
        "witness_vector": encode_vector(spec.v0),
        "rows": [{"n": r.n, "l2": r.l2, "graph": r.graph, "h1_t": r.h1_t} for r in rep["rows"]],
        "l2_slope": _float(rep["l2_slope"]),
        "h1_graph_slope": _float(rep["h1_graph_slope"]),
        "graph_ratio": _float(rep["graph_ratio"]),
    }


def _witness_table(result):
    lines = [f"{'n':>6s} {'l2':>14s} {'graph':>14s} {'h1_t':>14s}"]
    for r in result["rows"]:
        lines.append(f"{r['n']:6d} {r['l2']:14.6e} {r['graph']:14.6e} {r['h1_t']:14.6e}")
    lines.append(f"l2 slope {result['l2_slope']:.4f}  h1_t/graph slope {result['h1_graph_slope']:.4f}  graph max/min {result['graph_ratio']:.4f}")
    return "\n".join(lines)


# ---------------------------------------------------------------- rep


def run_rep(d, n):
    rep = build_rep(d, n)
    out = {"d": d, "N": n, "gammas": [encode_matrix(g) for g in rep.gammas], "verify": verify_rep(rep)}
    if (d, n) in ((2, 2), (2, 4), (3, 4), (4, 4)):
        ch = chirality(rep)
        out["chirality"] = {
            "beta": encode_matrix(ch.beta),
            "phase": None if ch.phase is None else encode_complex(ch.phase),
            "residuals": verify_chirality(ch),
        }
    return out


# ---------------------------------------------------------------- main


def _common(p):
    p.add_argument("--tol", type=float, default=None, help="tolerance (default 1e-9)")
    p.add_argument("--samples", type=int, default=None, help="tangent directions (default 512)")
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.add_argument("--quiet", action="store_true", help="no output; exit code only")


def build_parser():
    parser = argparse.ArgumentParser(prog="diracbc", description="Pointwise checks for Dirac boundary conditions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rep", help="print a Clifford representation and its residuals")
    p.add_argument("d", type=int)
    p.add_argument("N", type=int)
    p.add_argument("--json", action="store_true")
    p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("check", help="symmetry, self-adjointness and regularity of one condition")
    p.add_argument("file")
    p.add_argument("--cross-check", action="store_true", help="also run the sampled checker and compare")
    _common(p)

    p = sub.add_parser("sweep", help="run a family over a parameter grid")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("--grid", action="append", default=[], help="NAME=START:STOP:NUM, NAME=v1,v2 or NAME=[json]")
    p.add_argument("--set", action="append", default=[], help="fixed parameter NAME=JSON")
    p.add_argument("--rep", default=None, help="D,N (default: the family's representation)")
    p.add_argument("--method", choices=("closed-form", "sampled"), default="closed-form")
    p.add_argument("--cross-check", action="store_true")
    _common(p)

    p = sub.add_parser("witness", help="norms of the concentrating witness sequence")
    p.add_argument("file")
    p.add_argument("--n", default="4,16,64,256", help="comma-separated n values")
    _common(p)
    return parser


def _emit(args, text_json, text_table):
    if args.quiet:
        return
    print(text_json if args.json else text_table)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "rep":
            if (args.d, args.N) not in SUPPORTED:
                raise InputError(f"(d, N) = ({args.d}, {args.N}) is not supported")
            out = run_rep(args.d, args.N)
            _emit(args, dumps(out), dumps(out))
            return 0
        if args.command == "check":
            report = run_check(load_spec_file(args.file), args.tol, args.samples, args.cross_check)
            _emit(args, dumps(report), _table(report))
            return 0
        if args.command == "sweep":
            grids = [parse_grid(g) for g in args.grid]
            fixed = dict(parse_set(s) for s in args.set)
            rep = None
            if args.rep:
                try:
                    rep = tuple(int(x) for x in args.rep.split(","))
                except ValueError as exc:
                    raise InputError(f"bad --rep {args.rep!r}") from exc
            tol = DEFAULT_TOL if args.tol is None else args.tol
            samples = DEFAULT_SAMPLES if args.samples is None else args.samples
            result = run_sweep(args.family, grids, fixed, rep, tol, samples, args.method, args.cross_check)
            _emit(args, dumps(result), _sweep_table(result))
            return 1 if result["inconsistent"] else 0
        if args.command == "witness":
            try:
                n_list = [int(x) for x in args.n.split(",") if x.strip()]
            except ValueError as exc:
                raise InputError(f"bad --n {args.n!r}") from exc
            if not n_list or min(n_list) < 1:
                raise InputError("--n needs positive integers")
            result = run_witness(load_spec_file(args.file), n_list, args.tol, args.samples)
            _emit(args, dumps(result), _witness_table(result))
            return 0
    except InputError as exc:
        if not args.quiet:
            print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, TypeError, KeyError) as exc:
        # malformed values that slipped past the structural validation
        if not args.quiet:
            print(f"input error: {exc}", file=sys.stderr)
        return 2
    except InconsistentCheck as exc:
        if not args.quiet:
            print(f"inconsistent: {exc}", file=sys.stderr)
        return 1
    except DiracBCError as exc:
        if not args.quiet:
            print(f"error: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
