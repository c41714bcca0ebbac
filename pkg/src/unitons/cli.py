"""Command-line front end.

Every run prints a JSON certificate on stdout (and writes it to --out for the
JSON-producing commands). Exit codes: 0 all checks pass, 1 a check failed,
2 bad input, 3 an internal theorem check was violated.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import factorize as fz
from . import gaussmat as gm
from .canonical import canonical_from_type, canonical_from_xi
from .errors import SchemaError, UnitonError
from .exactnum import GaussianRational, as_rf, format_rf, format_scalar, parse_scalar
from .lambdamat import LambdaMatrix, is_complex_orthogonal_by_product, lambda_substitute
from .mesh import sample_mesh
from .nullcurve import (
    NullCurve,
    WeierstrassData,
    curve_to_matrix,
    matrix_to_curve,
    matrix_to_data,
    weierstrass,
)
from .solver import (
    SolutionCandidate,
    build_low_dim,
    check_border_equivalence,
    schema_for,
    verify_candidate,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3
COMMANDS = ("validate", "build", "verify", "factorize", "nullcurve", "mesh")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(message)


_VALUE_FLAGS = ("--lambda", "--at", "--param", "--grid")


def _glue_values(argv):
    """Attach values such as ``-1,i`` to their flag so they are not read as options."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _parser():
    p = _Parser(prog="unitons", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", nargs="?", help="JSON job document (path or - for stdin)")
    p.add_argument("--type", help="canonical type, e.g. 1,1,2,1,1")
    p.add_argument("--param", action="append", default=[], metavar="NAME=EXPR")
    p.add_argument("--at", action="append", default=[], metavar="z=EXPR")
    p.add_argument("--lambda", dest="lambdas", default="1,-1,i,-i", metavar="LIST")
    p.add_argument("--mode", default="alternating", choices=fz.MODES)
    p.add_argument("--out", help="output path")
    p.add_argument("--format", default="json", choices=("json", "obj", "csv"))
    p.add_argument("--fd-step", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--grid", default="-1,1,-1,1", metavar="X0,X1,Y0,Y1")
    return p


# -- input assembly ---------------------------------------------------------


def _load_document(path):
    if path is None:
        return {}
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"input is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("input document must be a JSON object")
    return doc


def _parse_params(items):
    out = {}
    for item in items:
        name, sep, expr = item.partition("=")
        if not sep or not name.strip():
            raise SchemaError(f"--param expects NAME=EXPR, got {item!r}")
        out[name.strip()] = expr.strip()
    return out


def _job(args):
    doc = _load_document(args.input)
    job = dict(doc)
    if args.type:
        job["type"] = [int(x) for x in args.type.split(",")]
    params = dict(doc.get("params", {}))
    params.update(_parse_params(args.param))
    job["params"] = params
    return job


def _candidate(job):
    """A candidate from a matrix document or from a type plus constructor parameters."""
    if "matrix" in job:
        A = LambdaMatrix.from_json(job["matrix"])
        if "xi" in job:
            xi = canonical_from_xi(job["xi"])
        elif "type" in job:
            xi = canonical_from_type(job["type"])
        else:
            raise SchemaError("a matrix document needs 'type' or 'xi'")
        return SolutionCandidate(A, xi, {k: as_rf(v) for k, v in job.get("params", {}).items()})
    if "type" not in job:
        raise SchemaError("missing 'type' (use --type or a JSON document)")
    return build_low_dim(job["type"], job["params"])


def _points(args, job):
    items = args.at or job.get("at") or ["z=1"]
    pts = []
    for item in items:
        name, sep, expr = str(item).partition("=")
        pts.append(parse_scalar(expr if sep else name))
    return pts


def _lambdas(text):
    """Exact Q(i) values where possible, floating complex numbers otherwise."""
    out = []
    for tok in str(text).split(","):
        tok = tok.strip()
        try:
            out.append(parse_scalar(tok))
        except UnitonError:
            try:
                out.append(complex(tok.replace("i", "j")))
            except ValueError as exc:
                raise SchemaError(f"cannot read lambda value {tok!r}") from exc
    return out


def _curve(job):
    p = job["params"]
    if "curve" in job:
        return NullCurve.from_json(job["curve"]), None
    names = set(p)
    if names == {"g", "nu"}:
        data = WeierstrassData.c3(p["g"], p["nu"])
    elif names == {"g1", "h1", "h2"}:
        data = WeierstrassData.c4(p["g1"], p["h1"], p["h2"])
    elif names in ({"chi1", "chi2", "chi3"}, {"chi1", "chi2", "chi3", "chi4"}):
        comps = [p[f"chi{k}"] for k in range(1, len(names) + 1)]
        return NullCurve(len(comps), tuple(comps)), None
    else:
        raise SchemaError("null-curve input needs params {g, nu}, {g1, h1, h2} or chi1..chi3/chi4")
    return weierstrass(data), data


# -- commands ----------------------------------------------------------------


def _reports_json(reports):
    return [r.to_json() for r in reports]


def cmd_validate(args, job):
    if "matrix" in job or "type" in job:
        if "matrix" not in job and job["params"]:
            schema_for(job["type"])
        cand = _candidate(job)
        return {"valid": True, "n": cand.xi.n, "type": list(cand.xi.type)}, True
    if job["params"]:
        chi, _ = _curve(job)
        return {"valid": True, "curve": chi.to_json()}, True
    raise SchemaError("nothing to validate")


def cmd_build(args, job):
    cand = _candidate(job)
    reports = verify_candidate(cand) + [check_border_equivalence(cand)]
    cert = {
        "type": list(cand.xi.type),
        "xi": list(cand.xi.xi),
        "params": {k: format_rf(v) for k, v in sorted(cand.params.items())},
        "matrix": cand.A.to_json(),
        "lambda_free": cand.A.is_lambda_free(),
        "checks": _reports_json(reports),
    }
    return cert, all(reports)


def cmd_verify(args, job):
    cand = _candidate(job)
    reports = verify_candidate(cand) + [check_border_equivalence(cand)]
    product = is_complex_orthogonal_by_product(cand.A)
    deformations = {}
    for mu in ("0", "1", "i", "1+i"):
        ext = verify_candidate(
            SolutionCandidate(lambda_substitute(cand.A, parse_scalar(mu)), cand.xi))
        deformations[mu] = all(ext)
    ok = all(reports) and product == reports[1].passed
    cert = {
        "type": list(cand.xi.type),
        "checks": _reports_json(reports),
        "orthogonal_by_product": product,
        "lambda_deformations": deformations,
    }
    return cert, ok


def _numeric_unit_checks(seq, lam):
    """Floating point checks at a unit lambda outside Q(i)."""
    coeffs = [np.array(gm.to_complex(C)) for C in seq.phi_coeffs()]
    Phi = sum(C * lam**k for k, C in enumerate(coeffs))
    n = Phi.shape[0]
    J = np.eye(n)[::-1]
    unitary = float(np.abs(Phi.conj().T @ Phi - np.eye(n)).max())
    second = float(np.abs(J @ Phi.T @ J @ Phi - lam**seq.r * np.eye(n)).max())
    conj = float(np.abs(J @ Phi.conj() @ J - lam ** (-seq.r) * Phi).max())
    return {"lambda": repr(lam), "unitary_residual": unitary,
            "second_transpose_residual": second, "conjugation_residual": conj}


def cmd_factorize(args, job):
    cand = _candidate(job)
    lambdas = _lambdas(args.lambdas)
    exact = [x for x in lambdas if isinstance(x, GaussianRational)]
    numeric = [x for x in lambdas if not isinstance(x, GaussianRational)]
    tol = 1e-9 if args.tol is None else args.tol
    points, ok = [], True
    for z0 in _points(args, job):
        cert = fz.certify(cand, z0, exact or fz.UNIT_LAMBDAS, args.mode)
        ok &= all(cert["reports"])
        cert["reports"] = _reports_json(cert["reports"])
        if numeric:
            seq = fz.factorize(cand, z0, args.mode)[2]
            checks = [_numeric_unit_checks(seq, lam) for lam in numeric]
            ok &= all(max(v for k, v in c.items() if k != "lambda") <= tol for c in checks)
            cert["numeric_lambdas"] = checks
        _, info = fz.harmonic_map(cand, z0, args.mode)
        cert["harmonic_map"] = info
        if args.fd_step is not None:
            fd_lams = [x for x in exact if x != 1] or [GaussianRational(-1), parse_scalar("i")]
            if len(fd_lams) < 2:
                fd_lams.append(parse_scalar("i") if fd_lams[0] != parse_scalar("i") else GaussianRational(-1))
            fd_tol = 1e-6 if args.tol is None else args.tol
            rep = fz.fd_report(cand, z0, args.fd_step, fd_lams, args.mode, fd_tol)
            ok &= rep.passed
            cert["fd"] = rep.to_json()
        points.append(cert)
    return {"type": list(cand.xi.type), "mode": args.mode,
            "lambdas": [format_scalar(x) if isinstance(x, GaussianRational) else repr(x)
                        for x in lambdas],
            "points": points}, ok


def cmd_nullcurve(args, job):
    chi, data = _curve(job)
    nullity = chi.nullity()
    cand = curve_to_matrix(chi)
    reports = verify_candidate(cand)
    back = matrix_to_curve(cand)
    read = matrix_to_data(cand)
    round_trips = {"curve_matrix_curve": back == chi,
                   "matrix_curve_matrix": curve_to_matrix(back).A == cand.A}
    if data is not None:
        round_trips["data_curve_matrix_data"] = read == data
    cert = {
        "curve": chi.to_json(),
        "nullity": format_rf(nullity),
        "data": read.to_json(),
        "type": list(cand.xi.type),
        "matrix": cand.A.to_json(),
        "checks": _reports_json(reports),
        "round_trips": round_trips,
    }
    return cert, nullity.is_zero() and all(reports) and all(round_trips.values())


def cmd_mesh(args, job):
    chi, _ = _curve(job)
    bounds = [float(x) for x in args.grid.split(",")]
    if len(bounds) != 4:
        raise SchemaError("--grid expects X0,X1,Y0,Y1")
    mesh = sample_mesh(chi.components, bounds, args.resolution)
    tol = 1e-4 if args.tol is None else args.tol
    meta = dict(mesh.metadata)
    worst = {k: meta[k]["max"] for k in ("conformality_stretch", "conformality_shear", "laplacian")}
    ok = all(v is not None and v <= tol for v in worst.values())
    outputs = []
    if args.format != "json" or args.out:
        out = Path(args.out or f"mesh.{args.format}")
        if args.format == "csv":
            out.write_text(mesh.csv_text())
        elif args.format == "obj":
            out.write_text(mesh.obj_text())
            if chi.n_ambient == 4:
                side = out.with_suffix(".csv")
                side.write_text(mesh.csv_text())
                outputs.append(str(side))
        else:
            out.write_text(json.dumps({"vertices": mesh.vertices.tolist(),
                                       "faces": [list(map(int, f)) for f in mesh.faces]}))
        outputs.insert(0, str(out))
    cert = {"curve": chi.to_json(), "tol": tol, "metadata": meta, "outputs": outputs}
    return cert, ok


HANDLERS = {
    "validate": cmd_validate,
    "build": cmd_build,
    "verify": cmd_verify,
    "factorize": cmd_factorize,
    "nullcurve": cmd_nullcurve,
    "mesh": cmd_mesh,
}


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


def run(argv=None, stdout=None):
    """Run one command; returns the exit status."""
    stdout = stdout or sys.stdout
    argv = sys.argv[1:] if argv is None else list(argv)
    cert = {"command": next((a for a in argv if a in COMMANDS), None)}
    args = None
    try:
        args = _parser().parse_args(_glue_values(argv))
        job = _job(args)
        body, ok = HANDLERS[args.command](args, job)
        cert.update(body)
        cert["passed"] = bool(ok)
        status = EXIT_OK if ok else EXIT_FAIL
    except AssertionError as exc:
        cert.update(passed=False, error={"kind": type(exc).__name__, "message": str(exc)})
        status = EXIT_INTERNAL
    except (UnitonError, OSError, ValueError, KeyError) as exc:
        cert.update(passed=False, error={"kind": type(exc).__name__, "message": str(exc)})
        status = EXIT_INPUT
    cert["exit_code"] = status
    text = _dump(cert)
    stdout.write(text)
    if args is not None and args.out and args.command != "mesh":
        Path(args.out).write_text(text)
    return status


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
