"""Command-line entry point: ``qbell <subcommand> [options]``.

Exit codes: 0 success, 1 argument error, 2 numerical contract violation,
3 non-convergence under ``--strict``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .bell import (
    DEFAULT_SCHEME,
    maximize_bell,
    maximize_bell_all_schemes,
    portrait_schemes,
    sweep,
)
from .correlations import MODES, sweep_qp
from .dynamics import DEFAULT_PHASE, DynamicsParams, verify_schrodinger
from .kernels import ACTIVE_BACKEND
from .optimize import OptimizerConfig
from .qstate import ContractViolation, StateParams, build_max_entangled, build_state_phi_a, format_matrix

EXIT_OK, EXIT_ARGS, EXIT_NUMERIC, EXIT_NOCONV = 0, 1, 2, 3


class ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.15g}"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _config(args) -> OptimizerConfig:
    seed = args.seed
    env = os.environ.get("QBELL_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise ArgumentError(f"QBELL_SEED must be an integer, got {env!r}") from None
    return OptimizerConfig(starts=args.starts, max_evals=args.max_evals, tol=args.tol, seed=seed)


def _scheme(args):
    schemes = portrait_schemes()
    if not 0 <= args.scheme < len(schemes):
        raise ArgumentError(f"--scheme must be in 0..{len(schemes) - 1}")
    return schemes[args.scheme]


def _jobs(args) -> int:
    return args.jobs if args.jobs else (os.cpu_count() or 1)


class _Output:
    """Collects the subcommand's payload and whether every point converged."""

    def __init__(self, text: str, converged: bool = True, numeric_ok: bool = True):
        self.text = text
        self.converged = converged
        self.numeric_ok = numeric_ok


# --------------------------------------------------------------------------
# subcommands

def _bell_sweep(args, family) -> _Output:
    cfg = _config(args)
    kw = dict(scheme=_scheme(args), cfg=cfg, all_schemes=args.all_schemes, jobs=_jobs(args))
    if family == "phi":
        rows = sweep("phi", grid=args.grid, **kw)
        header, data = ["phi", "b_max", "converged"], [(r.phi, r.b_max, r.converged) for r in rows]
    elif family == "surface":
        rows = sweep("surface", grid=args.grid_phi, grid_a=args.grid_a, **kw)
        header = ["phi", "a", "b_max", "converged"]
        data = [(r.phi, r.a, r.b_max, r.converged) for r in rows]
    else:
        rows = sweep("slice", grid=args.grid, phi=args.phi, **kw)
        header, data = ["a", "b_max", "converged"], [(r.a, r.b_max, r.converged) for r in rows]
    return _Output(_csv_text(header, data), all(r.converged for r in rows))


def _state_from(args):
    if args.state == "max-entangled":
        return build_max_entangled()
    return build_state_phi_a(StateParams(args.phi, args.a))


def cmd_bell_point(args) -> _Output:
    cfg = _config(args)
    rho = _state_from(args)
    r = maximize_bell_all_schemes(rho, cfg) if args.all_schemes else maximize_bell(rho, _scheme(args), cfg)
    payload = {
        "phi": args.phi,
        "a": args.a,
        "state": args.state,
        "b_max": r.b_max,
        "converged": r.converged,
        "scheme": [r.scheme.group1, r.scheme.group2],
        "frames": [[f.theta, f.phi, f.chi] for f in r.frames],
        "starts_used": r.starts_used,
        "evals": r.evals,
    }
    if args.out:
        return _Output(json.dumps(payload, indent=2) + "\n", r.converged)
    lines = [f"b_max\t{_fmt(r.b_max)}", f"converged\t{_fmt(r.converged)}"]
    for name, f in zip("abcd", r.frames):
        lines.append(f"frame_{name}\t{_fmt(f.theta)}\t{_fmt(f.phi)}\t{_fmt(f.chi)}")
    return _Output("\n".join(lines) + "\n", r.converged)


def cmd_portrait_list(args) -> _Output:
    rows = [(i, s.group1, s.group2, s == DEFAULT_SCHEME) for i, s in enumerate(portrait_schemes())]
    return _Output(_csv_text(["index", "m1", "m2", "default"], rows))


def cmd_qmi_scan(args) -> _Output:
    rows = sweep_qp(grid=args.grid, phi=args.phi, cfg=_config(args), mode=args.mode, jobs=_jobs(args))
    data = [(r.a, r.s_ab, r.i_p_max, r.q_p, r.converged) for r in rows]
    return _Output(_csv_text(["a", "s_ab", "i_p_max", "q_p", "converged"], data),
                   all(r.converged for r in rows))


def cmd_dynamics_verify(args) -> _Output:
    params = DynamicsParams(omega0=args.omega0, omega=args.omega, phase=args.phase)
    if args.periods <= 0:
        raise ArgumentError("--periods must be positive")
    rep = verify_schrodinger(params, args.periods * params.period, args.steps)
    return _Output(json.dumps(rep.to_dict(), indent=2) + "\n", numeric_ok=rep.agreement)


def cmd_state_dump(args) -> _Output:
    return _Output(format_matrix(_state_from(args)))


def _add_optimizer(p):
    p.add_argument("--starts", type=int, default=32)
    p.add_argument("--max-evals", type=int, default=2000)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--seed", type=int, default=0, help="overridden by $QBELL_SEED")
    p.add_argument("--jobs", type=int, default=0, help="worker processes (default: all CPUs)")
    p.add_argument("--strict", action="store_true", help="exit 3 on non-convergence")


def _add_scheme(p):
    p.add_argument("--scheme", type=int, default=0, help="portrait index, see portrait-list")
    p.add_argument("--all-schemes", action="store_true", help="max over all 9 portraits")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qbell", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qbell {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--out", type=Path, default=None, help="output file (a manifest is written next to it)")
        return p

    p = add("bell-scan", lambda a: _bell_sweep(a, "phi"), "max Bell number over phi at a = 1")
    p.add_argument("--grid", type=int, default=64)
    _add_optimizer(p)
    _add_scheme(p)

    p = add("bell-surface", lambda a: _bell_sweep(a, "surface"), "max Bell number over the (phi, a) plane")
    p.add_argument("--grid-phi", type=int, default=32)
    p.add_argument("--grid-a", type=int, default=32)
    _add_optimizer(p)
    _add_scheme(p)

    p = add("bell-slice", lambda a: _bell_sweep(a, "slice"), "max Bell number over a at fixed phi")
    p.add_argument("--phi", type=float, default=DEFAULT_PHASE)
    p.add_argument("--grid", type=int, default=64)
    _add_optimizer(p)
    _add_scheme(p)

    p = add("bell-point", cmd_bell_point, "max Bell number of one state")
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--state", choices=["phi-a", "max-entangled"], default="phi-a")
    _add_optimizer(p)
    _add_scheme(p)

    add("portrait-list", cmd_portrait_list, "list the portrait schemes")

    p = add("qmi-scan", cmd_qmi_scan, "projective mutual-information deficit over a")
    p.add_argument("--phi", type=float, default=DEFAULT_PHASE)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--mode", choices=MODES, default="full")
    _add_optimizer(p)

    p = add("dynamics-verify", cmd_dynamics_verify, "check the propagator against RK4 and the exact trajectory")
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--omega0", type=float, default=1.0)
    p.add_argument("--phase", type=float, default=DEFAULT_PHASE)
    p.add_argument("--periods", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=20000)

    p = add("state-dump", cmd_state_dump, "print a density matrix (tab separated re+imi)")
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--state", choices=["phi-a", "max-entangled"], default="phi-a")

    p = sub.add_parser("replay", help="re-run the command recorded in a manifest")
    p.add_argument("manifest", type=Path)
    p.set_defaults(func=None)
    return parser


def _manifest_path(out: Path) -> Path:
    return out.with_name(out.name + ".manifest.json")


def _write_manifest(args, argv, duration):
    params = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items() if k != "func"}
    manifest = {
        "subcommand": args.command,
        "argv": list(argv),
        "parameters": params,
        "seed": _config(args).seed if hasattr(args, "seed") else None,
        "version": __version__,
        "backend": ACTIVE_BACKEND,
        "duration_s": duration,
    }
    _manifest_path(args.out).write_text(json.dumps(manifest, indent=2) + "\n")


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if args.command == "replay":
            recorded = json.loads(args.manifest.read_text())
            return run(recorded["argv"])
        t0 = time.perf_counter()
        result = args.func(args)
        duration = time.perf_counter() - t0
    except ArgumentError as exc:
        print(f"qbell: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except (ValueError, OSError, KeyError) as exc:
        print(f"qbell: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except ContractViolation as exc:
        print(f"qbell: numerical contract violation: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    if args.out:
        args.out.write_text(result.text)
        _write_manifest(args, argv, duration)
    else:
        sys.stdout.write(result.text)
    if not result.numeric_ok:
        print("qbell: numerical checks failed (see report)", file=sys.stderr)
        return EXIT_NUMERIC
    if not result.converged:
        print("qbell: warning: some optimizations did not converge", file=sys.stderr)
        if getattr(args, "strict", False):
            return EXIT_NOCONV
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
