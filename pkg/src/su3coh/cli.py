"""Command-line interface: ``su3coh {irrep, verify, sample, coherent, action}``.

Reports are printed as text unless ``--json`` is given; ``--output FILE``
writes the JSON report to a file.  Complex numbers are ``[re, im]`` pairs.
Settings come from (highest first) flags, the ``[su3coh]`` section of the
``--config`` INI file, then built-in defaults.  Exit codes: 0 all checks
pass, 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import __version__, coherent, irreps, manifold, path, verify
from .fock import enumerate_sector

SCHEMA = "su3coh.report/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULTS = {
    "seed": 0,
    "degree": None,
    "draws": None,
    "samples": 20000,
    "threads": None,
    "tol_algebraic": 1e-11,
    "tol_quadrature": 1e-9,
    "mc_sigma": 4.0,
}
_CASTS = {"seed": int, "degree": int, "draws": int, "samples": int, "threads": int,
          "tol_algebraic": float, "tol_quadrature": float, "mc_sigma": float}


class UsageError(Exception):
    pass


def _cx(x) -> list:
    """Complex scalar or array as nested ``[re, im]`` pairs."""
    arr = np.asarray(x, dtype=complex)
    if arr.ndim == 0:
        return [float(arr.real), float(arr.imag)]
    return [_cx(v) for v in arr]


def _finite(x: float) -> float | str:
    return float(x) if math.isfinite(x) else repr(float(x))


def load_config(path_: str | None) -> dict[str, Any]:
    if path_ is None:
        return {}
    parser = configparser.ConfigParser()
    try:
        with open(path_, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise UsageError(f"cannot read config {path_}: {exc}") from exc
    if not parser.has_section("su3coh"):
        return {}
    out = {}
    for key, raw in parser.items("su3coh"):
        key = key.replace("-", "_")
        if key not in _CASTS:
            raise UsageError(f"unknown config key {key!r}")
        try:
            out[key] = _CASTS[key](raw)
        except ValueError as exc:
            raise UsageError(f"bad value for {key}: {raw!r}") from exc
    return out


@dataclass(frozen=True)
class RunConfig:
    seed: int
    degree: int | None
    draws: int | None
    samples: int
    threads: int | None
    tol: verify.Tolerances

    @classmethod
    def resolve(cls, args: argparse.Namespace) -> "RunConfig":
        cfg = dict(DEFAULTS)
        cfg.update(load_config(args.config))
        for key in DEFAULTS:
            val = getattr(args, key, None)
            if val is not None:
                cfg[key] = val
        if cfg["threads"] is None and os.environ.get(manifold.THREADS_ENV):
            cfg["threads"] = manifold.default_workers()
        try:
            tol = verify.Tolerances(cfg["tol_algebraic"], cfg["tol_quadrature"], cfg["mc_sigma"])
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        if cfg["samples"] < 0 or (cfg["draws"] is not None and cfg["draws"] < 1):
            raise UsageError("samples must be >= 0 and draws >= 1")
        return cls(cfg["seed"], cfg["degree"], cfg["draws"], cfg["samples"], cfg["threads"], tol)

    def to_dict(self) -> dict:
        return {"seed": self.seed, "degree": self.degree, "draws": self.draws,
                "samples": self.samples,
                "tolerances": {"algebraic": self.tol.algebraic, "quadrature": self.tol.quadrature,
                               "mc_sigma": self.tol.mc_sigma}}


def _label(values) -> tuple[int, int]:
    N, M = values
    try:
        return tuple(irreps.check_label(N, M))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(report: dict, args: argparse.Namespace, text: str) -> None:
    blob = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(blob)
    if args.json:
        sys.stdout.write(blob)
    else:
        sys.stdout.write(text)


def _check_lines(checks) -> str:
    lines = []
    for c in checks:
        mark = "PASS" if c.passed else "FAIL"
        lines.append(f"{mark}  {c.name:<44s} residual={c.residual:.3e}  tol={c.tolerance:.1e}")
    return "\n".join(lines) + "\n"


def _report(command: str, checks, extra: dict, cfg: RunConfig | None) -> dict:
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": command,
        "config": cfg.to_dict() if cfg else None,
        "checks": [{**c.to_dict(), "residual": _finite(c.residual)} for c in checks],
        "passed": all(c.passed for c in checks),
        **extra,
    }


# -- subcommands -------------------------------------------------------------

def cmd_irrep(args) -> int:
    cfg = RunConfig.resolve(args)
    N, M = _label(args.label)
    basis = irreps.irrep_basis(N, M)
    states = [s.label() for s in enumerate_sector(N, M)]
    traceless = max(irreps.verify_tracelessness(irreps.traceless_state(o))
                    for o in enumerate_sector(N, M))
    G = irreps.generators_in_irrep(N, M)
    closure = verify.algebra.closure_residual(G)
    ortho = np.abs(basis.vectors.conj().T @ basis.vectors - np.eye(basis.dim)).max()
    checks = [
        verify.Check("dimension", "dimension formula (N+1)(M+1)(N+M+2)/2",
                     abs(basis.dim - irreps.dimension(N, M)), 0.5),
        verify.Check("tracelessness", "a.b annihilates every traceless state", traceless,
                     cfg.tol.algebraic),
        verify.Check("orthonormal basis", "orthonormal irrep basis", ortho, cfg.tol.algebraic),
        verify.Check("restricted closure", "restricted generators close", closure, 1e-10),
    ]
    extra = {
        "label": [N, M],
        "dimension": basis.dim,
        "occupations": states,
        "basis": [_cx(v) for v in basis.vectors.T],
        "generators": {str(a): _cx(G[a - 1]) for a in range(1, 9)} if args.generators else None,
    }
    report = _report("irrep", checks, extra, cfg)
    text = f"irrep ({N},{M})  dimension {basis.dim}\n" + _check_lines(checks)
    _emit(report, args, text)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_verify(args) -> int:
    cfg = RunConfig.resolve(args)
    labels = tuple(_label(lab) for lab in args.irrep) if args.irrep else None
    max_label = _label(args.max) if args.max else (3, 3)
    opts = verify.SuiteOptions(labels=labels, max_label=max_label, degree=cfg.degree,
                               draws=cfg.draws, samples=cfg.samples, seed=cfg.seed,
                               workers=cfg.threads, tol=cfg.tol)
    checks = []
    for suite in args.suite:
        checks += [verify.Check(f"{suite}: {c.name}", c.anchor, c.residual, c.tolerance)
                   for c in verify.run_suite(suite, opts)]
    report = _report("verify", checks, {"suites": list(args.suite)}, cfg)
    _emit(report, args, _check_lines(checks))
    return EXIT_OK if report["passed"] else EXIT_FAIL


def _sample_row(angles: np.ndarray) -> dict:
    p = manifold.CohParams.from_angles(angles)
    g = manifold.make_group_element(p)
    return {
        "angles": dict(zip(("theta", "phi", "chi", "alpha1", "alpha2", "alpha3", "beta1", "beta2"),
                           (float(a) for a in angles))),
        "z": _cx(p.z),
        "w": _cx(p.w),
        "S": _cx(g.S),
        "constraint_residual": float(p.constraint_residual()),
    }


def cmd_sample(args) -> int:
    cfg = RunConfig.resolve(args)
    if args.count < 0:
        raise UsageError("count must be non-negative")
    rng = np.random.default_rng(cfg.seed)
    angles = manifold.sample_angles(rng, args.count)
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    bad = 0
    try:
        for row in angles:
            rec = _sample_row(row)
            bad += rec["constraint_residual"] > 1e-12
            out.write(json.dumps(rec, sort_keys=True) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_FAIL if bad else EXIT_OK


def cmd_coherent(args) -> int:
    N, M = _label(args.label)
    states = [s.label() for s in enumerate_sector(N, M)]
    if args.family == "zw":
        if args.angles is None or len(args.angles) != 8:
            raise UsageError("the zw family needs --angles with 8 values")
        try:
            p = manifold.CohParams.from_angles(args.angles)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        vec = coherent.zw_amplitudes(p.z, p.w, N, M)
        residual = coherent.projector_residual(coherent.coherent_zw(p, N, M))
        params = {"angles": list(args.angles), "z": _cx(p.z), "w": _cx(p.w)}
    else:
        if args.angles is None or len(args.angles) != 5:
            raise UsageError("the zzbar family needs --angles theta phi a1 a2 a3")
        z = manifold.make_z(*args.angles[:5])
        state = coherent.coherent_zzbar(z, N, M)
        vec = state.vector.to_dense()
        residual = coherent.projector_residual(state)
        params = {"angles": list(args.angles[:5]), "z": _cx(z)}
    check = verify.Check("irrep projector", "coherent state lies in the irrep", residual, 1e-11)
    report = _report("coherent", [check], {
        "family": args.family, "label": [N, M], "params": params,
        "amplitudes": {s: _cx(a) for s, a in zip(states, vec) if abs(a) > 0},
        "norm": float(np.linalg.norm(vec)),
    }, None)
    lines = [f"{s}  {a.real:+.12f} {a.imag:+.12f}i" for s, a in zip(states, vec) if abs(a) > 0]
    _emit(report, args, "\n".join(lines) + "\n" + _check_lines([check]))
    return EXIT_OK if check.passed else EXIT_FAIL


def _load_trajectory(blob: dict):
    try:
        labels = [tuple(lab) for lab in blob["labels"]]
        slices = [[manifold.CohParams.from_angles(a) for a in row] for row in blob["slices"]]
        traj = path.Trajectory.from_params(slices, float(blob["T"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad trajectory file: {exc}") from exc
    energy = None
    ham = blob.get("hamiltonian")
    if ham:
        kind = ham.get("type")
        if kind == "heisenberg":
            energy = path.heisenberg_energy_functional(path.HeisenbergModel(labels, np.array(ham["J"])))
        elif kind == "linear":
            h = path.LinearHamiltonian(tuple(ham["c"]))

            def energy(z, w):
                return sum(float(np.dot(h.c, path.expectation_vector(z[x], w[x], *lab)))
                           for x, lab in enumerate(labels))
        else:
            raise UsageError(f"unknown hamiltonian type {kind!r}")
    return labels, traj, energy


def cmd_action(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            blob = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read trajectory {args.file}: {exc}") from exc
    try:
        labels, traj, energy = _load_trajectory(blob)
        for lab in labels:
            _label(lab)
        kinetic = path.kinetic_action(traj, labels)
        total = path.discretized_action(traj, labels, energy)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    check = verify.Check("kinetic term imaginary", "antisymmetrized kinetic term is imaginary",
                         abs(kinetic.real), 1e-11)
    report = _report("action", [check], {
        "labels": [list(lab) for lab in labels], "slices": traj.n_slices, "T": traj.T,
        "action": _cx(total), "kinetic": _cx(kinetic),
        "overlap_phase": path.overlap_phase(traj, labels),
    }, None)
    text = (f"action  {total.real:+.12e} {total.imag:+.12e}i\n"
            f"kinetic {kinetic.real:+.12e} {kinetic.imag:+.12e}i\n" + _check_lines([check]))
    _emit(report, args, text)
    return EXIT_OK if check.passed else EXIT_FAIL


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with a [su3coh] section")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("-o", "--output", help="write the JSON report (JSONL for sample) here")
    common.add_argument("--seed", type=int)

    tuning = argparse.ArgumentParser(add_help=False)
    tuning.add_argument("--degree", type=int, help="quadrature degree")
    tuning.add_argument("--draws", type=int, help="random draws per check")
    tuning.add_argument("--samples", type=int, help="Monte-Carlo sample count")
    tuning.add_argument("--threads", type=int, help=f"worker threads (env {manifold.THREADS_ENV})")
    tuning.add_argument("--tol-algebraic", dest="tol_algebraic", type=float)
    tuning.add_argument("--tol-quadrature", dest="tol_quadrature", type=float)
    tuning.add_argument("--mc-sigma", dest="mc_sigma", type=float)

    parser = argparse.ArgumentParser(prog="su3coh", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("irrep", parents=[common, tuning], help="build and check an irrep basis")
    p.add_argument("label", type=int, nargs=2, metavar=("N", "M"))
    p.add_argument("--generators", action="store_true", help="include restricted generators")
    p.set_defaults(func=cmd_irrep)

    p = sub.add_parser("verify", parents=[common, tuning], help="run invariant suites")
    p.add_argument("suite", nargs="+", choices=sorted(verify.SUITES))
    p.add_argument("--irrep", type=int, nargs=2, action="append", metavar=("N", "M"))
    p.add_argument("--max", type=int, nargs=2, metavar=("N", "M"), help="largest sector")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", parents=[common], help="Haar samples as JSON lines")
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("coherent", parents=[common], help="dump a coherent state")
    p.add_argument("label", type=int, nargs=2, metavar=("N", "M"))
    p.add_argument("--family", choices=("zw", "zzbar"), default="zw")
    p.add_argument("--angles", type=float, nargs="+",
                   help="theta phi chi a1 a2 a3 b1 b2 (zw) or theta phi a1 a2 a3 (zzbar)")
    p.set_defaults(func=cmd_coherent)

    p = sub.add_parser("action", parents=[common], help="evaluate a trajectory file")
    p.add_argument("file")
    p.set_defaults(func=cmd_action)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"su3coh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
