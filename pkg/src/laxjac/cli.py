"""Command-line front end.

Every command writes one artifact (JSON or CSV) to ``--output`` or stdout.
JSON artifacts carry a ``header`` object with the full configuration; CSV
artifacts start with ``# key=value`` comment lines followed by a header row.

Exit codes: 0 success, 1 usage error, 2 numerical failure (any
:class:`~laxjac.errors.LaxJacError`; the error name is written to the artifact).
"""
import argparse
import csv
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import LaxJacError

DEFAULT_TOL = 1e-12
TOL_RANGE = (1e-14, 1e-3)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _floats(text, n=None):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} numbers, got {len(vals)}")
    return vals


def _vec3(text):
    return _floats(text, 3)


def _pair(text):
    return _floats(text, 2)


def _default_tol():
    env = os.environ.get("LAXJAC_TOL")
    if env is None:
        return DEFAULT_TOL
    try:
        return float(env)
    except ValueError:
        raise UsageError(f"LAXJAC_TOL={env!r} is not a number")


def build_parser():
    p = _Parser(prog="laxjac", description="Spherical pendulum, Lax pairs and generalized Jacobians.")
    p.add_argument("--version", action="version", version=f"laxjac {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="integrator/solver tolerance (default 1e-12, env LAXJAC_TOL)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("-o", "--output", default="-", help="output path ('-' for stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def state_args(sp):
        sp.add_argument("--x", type=_vec3, default=[0.6, 0.0, 0.8])
        sp.add_argument("--v", type=_vec3, default=[0.0, 1.0, 0.0])

    sp = sub.add_parser("simulate", parents=[common], help="integrate the pendulum")
    state_args(sp)
    sp.add_argument("--t", type=float, default=10.0)
    sp.add_argument("--samples", type=int, default=201)

    sp = sub.add_parser("invariants", parents=[common], help="H, K and the Lax relations")
    state_args(sp)

    sp = sub.add_parser("curve", parents=[common], help="spectral curve of (h, k)")
    sp.add_argument("--h", type=float, default=1.3)
    sp.add_argument("--k", type=float, default=0.6)

    sp = sub.add_parser("periods", parents=[common], help="period lattice of (h, k)")
    sp.add_argument("--h", type=float, default=1.3)
    sp.add_argument("--k", type=float, default=0.6)

    sp = sub.add_parser("abel-fit", parents=[common], help="linearity of the Abel image")
    state_args(sp)
    sp.add_argument("--t", type=float, default=5.0)
    sp.add_argument("--samples", type=int, default=200)

    sp = sub.add_parser("equivariance", parents=[common], help="rotation action on J(X')")
    state_args(sp)
    sp.add_argument("--theta", type=_floats, default=[0.3, 0.7, 1.1])

    sp = sub.add_parser("monodromy", parents=[common], help="monodromy around a loop in (h, k)")
    sp.add_argument("--center", type=_pair, default=[1.0, 0.0])
    sp.add_argument("--radius", type=float, default=0.3)
    sp.add_argument("--steps", type=int, default=64)
    sp.add_argument("--reverse", action="store_true")

    sp = sub.add_parser("frequency", parents=[common], help="frequency map on a grid")
    sp.add_argument("--h", type=_floats, default=[1.3], help="h value(s), comma separated")
    sp.add_argument("--k", type=_floats, default=[0.6], help="k value(s), comma separated")
    sp.add_argument("--jacobian-step", type=float, default=1e-3)

    sp = sub.add_parser("discriminant", parents=[common], help="real discriminant locus")
    sp.add_argument("--h-range", type=_pair, default=[-1.5, 3.0])
    sp.add_argument("--k-range", type=_pair, default=[-2.0, 2.0])
    sp.add_argument("--grid", type=int, default=301)

    sp = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    sp.add_argument("--only", type=lambda s: [int(x) for x in s.split(",")], default=None,
                    help="comma-separated criterion numbers")
    return p


# ----------------------------------------------------------------------------
# commands; each returns (payload dict, csv rows or None)


def _state(args):
    from .pendulum import PendulumState
    return PendulumState(args.x, args.v)


def cmd_simulate(args):
    from .flows import integrate_pendulum
    tr = integrate_pendulum(_state(args), args.t, tol=args.tol, n_samples=args.samples)
    summary = {"final_H_drift": float(tr.diagnostics["H_drift"][-1]),
               "max_H_drift": float(tr.diagnostics["H_drift"].max()),
               "max_K_drift": float(tr.diagnostics["K_drift"].max()),
               "max_constraint_drift": float(tr.diagnostics["constraint_drift"].max())}
    payload = {"summary": summary, "trajectory": tr.to_dict()}
    return payload, tr.to_rows()


def cmd_invariants(args):
    from .pendulum import integrals, lax_vars_of, spectral_invariants
    from ._jsonutil import encode_complex
    st = _state(args)
    H, K = integrals(st)
    lv = lax_vars_of(st)
    h, k, F = spectral_invariants(lv)
    r0, r1 = lv.relation_residuals()
    payload = {"H": encode_complex(H), "K": encode_complex(K), "h": encode_complex(h),
               "k": encode_complex(k), "F_coeffs": encode_complex(F),
               "lax_variables": encode_complex(lv.as_array()),
               "relation_residuals": [float(abs(r0)), float(abs(r1))]}
    rows = [["quantity", "re", "im"]]
    for name, z in (("H", H), ("K", K), ("h", h), ("k", k)):
        rows.append([name, complex(z).real, complex(z).imag])
    return payload, rows


def cmd_curve(args):
    from .curves import curve_from_hk
    c = curve_from_hk(args.h, args.k)
    payload = c.to_dict()
    payload.update({"p_g": c.p_g, "p_a": c.p_a, "vieta_residual": c.vieta_residual()})
    rows = [["branch_point", "re", "im"]]
    for n, b in enumerate(c.branch_points, start=1):
        rows.append([f"b{n}", b.real, b.imag])
    return payload, rows


def cmd_periods(args):
    from .curves import curve_from_hk, extended_lattice, periods_agm, reciprocity_residual
    c = curve_from_hk(args.h, args.k)
    L = extended_lattice(c)
    agm = periods_agm(c)
    payload = L.to_dict()
    payload["singular_values"] = L.singular_values().tolist()
    payload["reciprocity_residual"] = reciprocity_residual(c, L.periods)
    payload["agm_relative_error"] = max(abs(agm[0] - L.periods.omega_a) / abs(agm[0]),
                                        abs(agm[1] - L.periods.omega_b) / abs(agm[1]))
    rows = [["generator", "re_z1", "im_z1", "re_z2", "im_z2"]]
    for n, g in enumerate(L.generators, start=1):
        rows.append([f"g{n}", g[0].real, g[0].imag, g[1].real, g[1].imag])
    return payload, rows


def cmd_abel_fit(args):
    from .curves import curve_from_hk
    from .flows import integrate_pendulum
    from .jacobian import abel_flow_fit
    from .pendulum import integrals
    st = _state(args)
    H, K = integrals(st)
    curve = curve_from_hk(H, K)
    tr = integrate_pendulum(st, args.t, tol=args.tol, n_samples=args.samples)
    rep = abel_flow_fit(tr, curve)
    rows = [["t", "re_z1", "im_z1", "re_z2", "im_z2"]]
    for t, z in zip(rep.times, rep.z):
        rows.append([t, z[0].real, z[0].imag, z[1].real, z[1].imag])
    return rep.to_dict(), rows


def cmd_equivariance(args):
    from .curves import curve_from_hk, extended_lattice
    from .jacobian import symmetry_equivariance
    from .pendulum import integrals
    st = _state(args)
    H, K = integrals(st)
    curve = curve_from_hk(H, K)
    L = extended_lattice(curve)
    rows = [["theta", "dz1_residual", "re_dz2", "im_dz2"]]
    items = []
    for th in args.theta:
        r, dz2 = symmetry_equivariance(st, th, curve, lattice=L)
        rows.append([th, r, dz2.real, dz2.imag])
        items.append({"theta": th, "dz1_residual": r, "dz2": [dz2.real, dz2.imag]})
    return {"samples": items}, rows


def cmd_monodromy(args):
    from .monodromy import LoopSpec, continue_periods
    loop = LoopSpec(tuple(args.center), args.radius, args.steps, -1 if args.reverse else 1)
    res = continue_periods(loop)
    rows = [["matrix", "row", "entries"]]
    for name in ("M", "M_ext", "M_real"):
        mat = getattr(res, name)
        if mat is not None:
            for i, r in enumerate(mat):
                rows.append([name, i, " ".join(str(int(x)) for x in r)])
    return res.to_dict(), rows


def cmd_frequency(args):
    from .monodromy import frequency_jacobian, frequency_map
    rows = [["h", "k", "omega1", "omega2", "T_r", "Theta_r", "det_jacobian", "error"]]
    items = []
    for h in args.h:
        for k in args.k:
            try:
                fd = frequency_map(h, k)
                _, det = frequency_jacobian(h, k, step=args.jacobian_step)
                rows.append([h, k, fd.omega[0], fd.omega[1], fd.T_r, fd.Theta_r, det, ""])
                item = fd.to_dict()
                item["det_jacobian"] = det
            except LaxJacError as exc:
                rows.append([h, k, "", "", "", "", "", type(exc).__name__])
                item = {"h": h, "k": k, "error": type(exc).__name__, "message": str(exc)}
            items.append(item)
    return {"grid": items}, rows


def cmd_discriminant(args):
    from .monodromy import discriminant_locus
    lines, isolated = discriminant_locus(tuple(args.h_range), tuple(args.k_range),
                                         (args.grid, args.grid))
    rows = [["polyline", "h", "k"]]
    for n, pl in enumerate(lines):
        for h, k in pl:
            rows.append([n, h, k])
    for h, k in isolated:
        rows.append(["isolated", h, k])
    return {"polylines": [pl.tolist() for pl in lines], "isolated": isolated}, rows


def cmd_selftest(args):
    from .selftest import format_table, run_all
    results = run_all(seed=args.seed, only=args.only)
    print(format_table(results), file=sys.stderr)
    rows = [["criterion", "name", "passed", "seconds", "detail"]]
    for r in results:
        rows.append([r.number, r.name, r.passed, f"{r.seconds:.3f}", r.detail])
    payload = {"results": [r.to_dict() for r in results],
               "all_passed": all(r.passed for r in results)}
    return payload, rows


COMMANDS = {
    "simulate": cmd_simulate,
    "invariants": cmd_invariants,
    "curve": cmd_curve,
    "periods": cmd_periods,
    "abel-fit": cmd_abel_fit,
    "equivariance": cmd_equivariance,
    "monodromy": cmd_monodromy,
    "frequency": cmd_frequency,
    "discriminant": cmd_discriminant,
    "selftest": cmd_selftest,
}


def _header(args):
    cfg = {k: v for k, v in vars(args).items() if k != "output"}
    return {"program": "laxjac", "version": __version__, "config": cfg}


def _emit(args, payload, rows):
    header = _header(args)
    if args.format == "json" or rows is None:
        text = json.dumps({"header": header, **payload}, indent=2, default=_json_default) + "\n"
    else:
        buf = io.StringIO()
        for key, val in header["config"].items():
            buf.write(f"# {key}={val}\n")
        buf.write(f"# version={__version__}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerows(_csv_safe(rows))
        text = buf.getvalue()
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)


def _csv_safe(rows):
    for row in rows:
        yield [repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row]


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.tol is None:
            args.tol = _default_tol()
        if not TOL_RANGE[0] <= args.tol <= TOL_RANGE[1]:
            raise UsageError(f"tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}], got {args.tol:g}")
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    try:
        payload, rows = COMMANDS[args.command](args)
    except LaxJacError as exc:
        name = type(exc).__name__
        print(f"laxjac: {name}: {exc}", file=sys.stderr)
        _emit(args, {"error": name, "message": str(exc)},
              [["error", "message"], [name, str(exc)]])
        return 2
    except ValueError as exc:
        # parameter validation in the library (loop specs, sample counts)
        print(f"laxjac: invalid parameters: {exc}", file=sys.stderr)
        return 1
    _emit(args, payload, rows)
    if args.command == "selftest" and not payload["all_passed"]:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
