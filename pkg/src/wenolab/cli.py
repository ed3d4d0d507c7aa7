"""Benchmark command line: run problems, design schemes, tabulate curves.

Exit codes: 0 on success, 2 on usage errors (unknown problems, schemes or
malformed flags), 3 on numerical failure (positivity loss or divergence).
"""

import argparse
import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, bench, problems, riemann, solver, spectral
from .design import EmbeddingSpec, design_form1, design_form2, emit_tableau, verify_embedding
from .laws import PositivityError
from .tableau import ReconstructionTableau, WenoForm

USAGE_ERROR = 2
NUMERICAL_ERROR = 3


class UsageError(Exception):
    pass


def _version_string() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=Path(__file__).parent, capture_output=True, text=True, timeout=5)
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except OSError:
        pass
    return f"v{__version__}"


def _write_csv(path: Path, header: list[str], columns: list[np.ndarray]):
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _slug(name: str) -> str:
    return name.replace(":", "-").replace(",", "-").replace("/", "_")


def _tableau_metadata(t: ReconstructionTableau) -> dict:
    meta = {"form": t.form.value, "p": t.p, "eps": t.eps}
    if t.is_embedded:
        meta.update(c2=t.c2, c0=t.c0)
    if t.form is WenoForm.EMBEDDED_FORM2:
        meta["mu"] = t.mu
    return meta


def _cmd_run(args) -> int:
    try:
        case = problems.get_case(args.problem)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    if case.kind != "pde":
        raise UsageError(f"problem {args.problem!r} is a derivative test; "
                         "use the 'convergence' subcommand")
    try:
        tableau = bench.scheme_from_name(args.scheme, eps=args.eps, p=args.p, mu=args.mu)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    n = args.n if args.n is not None else case.default_n
    cfl = args.cfl if args.cfl is not None else case.default_cfl
    characteristic = args.characteristic == "on"
    stats = solver.RunStats()

    wall = time.perf_counter()
    snap = solver.run_simulation(
        case, tableau, n=n, cfl=cfl, t_final=args.t_final,
        characteristic=characteristic, n_steps=args.steps, stats=stats)
    wall = time.perf_counter() - wall

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    base = f"{case.name}_{_slug(args.scheme)}_n{snap.grid.n}"
    names = list(case.law.component_names)
    header = ["x"] + names
    columns = [snap.grid.centers()] + [snap.cells[:, k] for k in range(snap.cells.shape[1])]
    ref = problems.reference_profile(case, snap.grid, snap.t, expensive=args.reference)
    if ref is not None:
        header += [f"{nm}_ref" for nm in names[: ref.shape[1]]]
        columns += [ref[:, k] for k in range(ref.shape[1])]
    csv_path = outdir / f"{base}.csv"
    _write_csv(csv_path, header, columns)

    meta = {
        "problem": case.name,
        "scheme": args.scheme,
        "tableau": _tableau_metadata(tableau),
        "n": snap.grid.n,
        "cfl": cfl,
        "t_final": snap.t,
        "steps": stats.steps,
        "characteristic": characteristic,
        "wall_time_s": wall,
        "version": _version_string(),
    }
    json_path = outdir / f"{base}.json"
    with open(json_path, "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    print(f"wrote {csv_path} and {json_path} ({stats.steps} steps, {wall:.2f}s)")
    return 0


def _cmd_design(args) -> int:
    form = {1: WenoForm.EMBEDDED_FORM1, 2: WenoForm.EMBEDDED_FORM2}[args.form]
    free = None
    if args.free is not None:
        parts = args.free.split(",")
        if len(parts) != 4:
            raise UsageError("--free expects four comma-separated values: a01,a02,a20,a21")
        free = tuple(float(v) for v in parts)
    try:
        spec = EmbeddingSpec(c2=args.c2, c0=args.c0, form=form, p=args.p,
                             mu=args.mu, free=free)
        A = design_form1(spec) if form is WenoForm.EMBEDDED_FORM1 else design_form2(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    tableau = ReconstructionTableau(form=form, p=args.p, eps=args.eps,
                                    c2=args.c2, c0=args.c0, mu=args.mu, A=A)
    print(emit_tableau(tableau))
    if args.verify:
        report = verify_embedding(A, spec)
        print(f"consistency: {'ok' if report.consistency_ok else 'FAILED'}")
        print(f"embedding:   {'ok' if report.embedding_ok else 'FAILED'} "
              f"(limit errors {report.limit_errors[0]:.2e}, {report.limit_errors[1]:.2e})")
        for msg in report.messages:
            print(f"  - {msg}")
        if not report.ok:
            return NUMERICAL_ERROR
    return 0


def _parse_linear_scheme(name: str) -> spectral.LinearScheme:
    name = name.strip().lower()
    if name == "uw5":
        return spectral.uw5_scheme()
    if name.startswith("uw3:"):
        return spectral.uw3_scheme(int(name.split(":", 1)[1]))
    if name.startswith(("inner01:", "inner12:")):
        head, _, tail = name.partition(":")
        from .design import inner_weights_from_proportions
        c = bench._parse_proportion(tail)
        inner = inner_weights_from_proportions(c, c)
        return spectral.inner_scheme_weights(inner, "left" if head == "inner01" else "right")
    raise UsageError(
        f"unknown spectral scheme {name!r}; use uw5, uw3:<k>, inner01:<c2> or inner12:<c0>")


def _cmd_spectral(args) -> int:
    scheme = _parse_linear_scheme(args.scheme)
    curve = spectral.spectral_curves(scheme, sigma=args.cfl, n=args.samples)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / f"spectral_{_slug(args.scheme)}_cfl{args.cfl:g}.csv"
    _write_csv(path, ["phi", "kstar_re", "kstar_im", "amp", "phase"],
               [curve.phi, curve.kstar_re, curve.kstar_im, curve.amp, curve.phase])
    print(f"wrote {path}")
    return 0


def _cmd_convergence(args) -> int:
    try:
        case = problems.get_case(args.case)
    except KeyError as exc:
        raise UsageError(str(exc)) from None
    if case.kind != "derivative":
        raise UsageError(f"{args.case!r} is not a derivative test case")
    try:
        tableau = bench.scheme_from_name(args.scheme, eps=args.eps, p=args.p, mu=args.mu)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ns = [int(v) for v in args.ns.split(",")]
    table = bench.convergence_study(case, tableau, ns)
    print(table)
    if args.out is not None:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / f"convergence_{case.name}_{_slug(args.scheme)}.csv"
        orders = [r.order if r.order is not None else float("nan") for r in table.rows]
        _write_csv(path, ["n", "error", "order"],
                   [np.array([r.n for r in table.rows], dtype=float),
                    table.errors, np.array(orders)])
        print(f"wrote {path}")
    return 0


def _cmd_list(args) -> int:
    print("problems:")
    for name in problems.case_names():
        case = problems.PROBLEMS[name]
        extent = f"[{case.x_lo:g}, {case.x_hi:g}]"
        if case.kind == "pde":
            end = (f"t={case.t_final:g}" if case.t_final is not None
                   else f"{case.n_steps} steps")
            print(f"  {name:16s} {case.kind:10s} {extent:12s} {end:12s} "
                  f"reference={case.reference.value}")
        else:
            print(f"  {name:16s} {case.kind:10s} {extent:12s} {'':12s} reference=exact")
    print("\nschemes: linear, js, z, weno45, ejs:<c2>,<c0>[,<outer>], "
          "ez:<c2>,<c0>[,<outer>]")
    print("  outer picks the scheme the embedding correction multiplies "
          "(linear default; js/z for interacting strong shocks)")
    print("spectral schemes: uw5, uw3:<k>, inner01:<c2>, inner12:<c0>")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wenolab",
        description="Five-point WENO benchmark harness: solvers, scheme design, "
                    "spectral curves and convergence studies.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="integrate a registered problem and write CSV/JSON")
    run.add_argument("--problem", required=True)
    run.add_argument("--scheme", required=True)
    run.add_argument("--n", type=int, default=None, help="cell count (default per case)")
    run.add_argument("--cfl", type=float, default=None)
    run.add_argument("--t-final", dest="t_final", type=float, default=None)
    run.add_argument("--steps", type=int, default=None,
                     help="run a fixed number of steps instead of hitting t-final")
    run.add_argument("--eps", type=float, default=1e-12,
                     help="weight regularization (default 1e-12 for PDE runs)")
    run.add_argument("--p", type=float, default=None)
    run.add_argument("--mu", type=float, default=None)
    run.add_argument("--characteristic", choices=("on", "off"), default="on")
    run.add_argument("--out", default=".")
    run.add_argument("--reference", action="store_true",
                     help="also compute expensive fine-grid references")
    run.set_defaults(fn=_cmd_run)

    design = sub.add_parser("design", help="print an embedded-scheme tableau")
    design.add_argument("--form", type=int, choices=(1, 2), required=True)
    design.add_argument("--c2", type=float, required=True)
    design.add_argument("--c0", type=float, required=True)
    design.add_argument("--p", type=float, default=2.0)
    design.add_argument("--mu", type=float, default=0.25)
    design.add_argument("--eps", type=float, default=1e-6)
    design.add_argument("--free", default=None,
                        help="form-1 free parameters a01,a02,a20,a21")
    design.add_argument("--verify", action="store_true")
    design.set_defaults(fn=_cmd_design)

    spect = sub.add_parser("spectral", help="tabulate dissipation/dispersion curves")
    spect.add_argument("--scheme", required=True)
    spect.add_argument("--cfl", type=float, default=0.5)
    spect.add_argument("--samples", type=int, default=256)
    spect.add_argument("--out", default=".")
    spect.set_defaults(fn=_cmd_spectral)

    conv = sub.add_parser("convergence", help="differentiation convergence table")
    conv.add_argument("--case", required=True)
    conv.add_argument("--scheme", required=True)
    conv.add_argument("--ns", default="101,201,401,801,1601")
    conv.add_argument("--eps", type=float, default=1e-40,
                      help="weight regularization (default 1e-40 for convergence runs)")
    conv.add_argument("--p", type=float, default=None)
    conv.add_argument("--mu", type=float, default=None)
    conv.add_argument("--out", default=None)
    conv.set_defaults(fn=_cmd_convergence)

    lst = sub.add_parser("list", help="registered problems and scheme syntax")
    lst.set_defaults(fn=_cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return USAGE_ERROR
    except (PositivityError, FloatingPointError, riemann.VacuumError,
            riemann.NonConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
