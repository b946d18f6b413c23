"""Command-line entry point: validate, lower, sim and resources.

Exit codes: 0 success, 1 domain failure or detected violation, 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import ConcatHarmful, HoloError, InvalidCircuit, ParseError, Unroutable

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunConfig:
    subcommand: str
    seed: int = 0
    jobs: int = 1
    fmt: Optional[str] = None
    out: Optional[str] = None
    params: dict = field(default_factory=dict)


class UsageError(Exception):
    pass


def parse_sweep(text: str) -> list[float]:
    """Comma list ``1e-3,2e-3`` or log-spaced range ``a:b:n``."""
    text = text.strip()
    try:
        if ":" in text:
            a, b, n = text.split(":")
            return [float(v) for v in np.logspace(np.log10(float(a)), np.log10(float(b)), int(n))]
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad sweep {text!r}") from None


def parse_seed(text: str) -> int:
    if text == "time":
        return time.time_ns() & (2 ** 63 - 1)
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError("seed must be an integer or 'time'") from None
    if not (-(2 ** 63) <= v < 2 ** 64):
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


class _Output:
    """Main document to --out or stdout; summaries to stderr."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self.parts: list[str] = []

    def write(self, text: str) -> None:
        self.parts.append(text if text.endswith("\n") else text + "\n")

    def close(self) -> None:
        doc = "".join(self.parts)
        if self.path:
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(doc)
        else:
            sys.stdout.write(doc)


def _note(text: str) -> None:
    sys.stderr.write(text + "\n")


# ---------------------------------------------------------------------------
# subcommands

def cmd_validate(args, out: _Output) -> int:
    from .ir.textio import parse_circuit, parse_physical
    from .ir.validate import validate
    text = _read(args.file)
    if text.lstrip().lower().startswith("qubits"):
        try:
            pc = parse_physical(text)
        except InvalidCircuit as exc:
            out.write(f"INVALID {exc}")
            return EXIT_FAIL
        out.write(f"OK physical {pc.n_qubits} qubits {len(pc.gates)} gates")
        return EXIT_OK
    report = validate(parse_circuit(text))
    if report.ok:
        out.write("OK")
        return EXIT_OK
    for v in report.violations:
        out.write(f"{v.rule} op {v.op_index}: {v.message}")
    return EXIT_FAIL


def cmd_lower(args, out: _Output) -> int:
    from .ir.expand import expand
    from .ir.lowering import lower_to_2d
    from .ir.model import Layout2D
    from .ir.textio import parse_circuit, parse_physical, serialize_physical
    text = _read(args.file)
    if text.lstrip().lower().startswith("qubits"):
        pc = parse_physical(text)
        plane = args.plane_size or (pc.layout.n_info if pc.layout else None)
    else:
        circ = parse_circuit(text)
        pc = expand(circ)
        plane = args.plane_size or circ.dims.nx * circ.dims.ny
    if args.target == "2d":
        if pc.layout is None and plane is None:
            raise UsageError("physical input needs --plane-size for the 2d target")
        layout = pc.layout if pc.layout is not None and args.plane_size is None else Layout2D(plane)
        pc = lower_to_2d(pc, layout)
    out.write(serialize_physical(pc))
    return EXIT_OK


def _sim_mirror(args, out, fmt) -> int:
    from .mirror import mirror_table
    r = mirror_table(args.nz, dense=args.nz <= 12, seed=args.seed)
    if fmt == "csv":
        out.write("nz,z,x_image,z_image,byproduct")
        for (z, xi, zi), b in zip(r.rows, r.byproducts()):
            out.write(f"{r.nz},{z},{xi},{zi},{b}")
    else:
        out.write(f"mirror nz={r.nz} pulses={r.nz + 1}")
        for (z, xi, zi), b in zip(r.rows, r.byproducts()):
            out.write(f"z={z} X->{xi} Z->{zi} byproduct={b}")
        out.write("PASS" if r.ok else "FAIL")
    _note(("PASS" if r.ok else "FAIL") + f" mirror nz={r.nz}")
    return EXIT_OK if r.ok else EXIT_FAIL


def _sim_memory(args, out, fmt) -> int:
    from .noise.fit import CSV_HEADER, crossing, fit_suppression, pseudo_threshold_ci
    from .noise.mc import run_memory_exrec
    from .noise.model import NoiseModel
    noise = NoiseModel(columnar=not args.independent, reset_state=args.reset_state)
    est = run_memory_exrec(args.code, args.level, noise, parse_sweep(args.p), args.trials, args.seed,
                           jobs=args.jobs)
    summary = []
    try:
        fit = fit_suppression(est)
        summary.append(f"fit exponent={fit.exponent:.4f} A={fit.coefficient:.6g} r2={fit.r_squared:.4f}")
        try:
            pt = crossing(fit)
            lo, hi = pseudo_threshold_ci(est, rng=np.random.default_rng(args.seed))
            summary.append(f"pseudo_threshold={pt:.6g} ci95=[{lo:.6g},{hi:.6g}]")
        except HoloError as exc:
            summary.append(f"pseudo_threshold=none ({exc})")
    except HoloError as exc:
        summary.append(f"fit=none ({exc})")
    if fmt == "csv":
        out.write(CSV_HEADER)
        for e in est:
            out.write(e.csv_row())
    else:
        for e in est:
            out.write(f"p={e.p:.6g} trials={e.trials} failures={e.failures} "
                      f"p_logical={e.p_logical:.6g} stderr={e.stderr:.6g}")
        for s in summary:
            out.write(s)
    for s in summary:
        _note(s)
    return EXIT_OK


def _sim_containment(args, out, fmt) -> int:
    from .noise.fit import CSV_HEADER, McEstimate
    from .noise.mc import run_column_containment
    r = run_column_containment(args.planes, "bs9", None, args.trials, args.seed,
                               exhaustive=args.exhaustive, jobs=args.jobs)
    total = int(sum(r["failures"]))
    if fmt == "csv":
        out.write(CSV_HEADER)
        e = McEstimate(0.0, r["runs"], min(total, r["runs"]), args.seed, "containment", "bs9", 1)
        out.write(e.csv_row())
    else:
        out.write(f"containment planes={r['planes']} runs={r['runs']} "
                  f"mode={'exhaustive' if args.exhaustive else 'random'}")
        for z, f in enumerate(r["failures"], 1):
            out.write(f"plane={z} failures={f}")
    _note(f"containment failures={total}")
    return EXIT_OK if total == 0 else EXIT_FAIL


def _sim_faultpaths(args, out, fmt) -> int:
    from .ir.model import LatticeDims
    from .noise.fit import CSV_HEADER, McEstimate
    from .noise.mc import run_t_fault_paths
    nx, ny, nz = (int(v) for v in args.dims.split(","))
    r = run_t_fault_paths(LatticeDims(nx, ny, nz))
    nv = len(r["violations"])
    if fmt == "csv":
        out.write(CSV_HEADER)
        out.write(McEstimate(0.0, r["faults"], nv, args.seed, "faultpaths", "column", 0).csv_row())
    else:
        out.write(f"faultpaths dims={nx},{ny},{nz} locations={r['locations']} faults={r['faults']}")
        out.write(f"max_per_plane={r['max_per_plane']} max_total={r['max_total']} violations={nv}")
        for src, k, w in r["per_location"]:
            out.write(f"location={src} support={k} max_per_plane={w}")
    _note(f"faultpaths violations={nv}")
    return EXIT_OK if nv == 0 else EXIT_FAIL


def _sim_inhomogeneity(args, out, fmt) -> int:
    from .ir.model import LatticeDims
    from .noise.mc import run_inhomogeneity
    from .noise.model import InhomogeneityModel
    model = InhomogeneityModel(args.generator, args.dist)
    rows = run_inhomogeneity(LatticeDims(3, 1, args.nz), model, parse_sweep(args.theta), args.seed)
    if fmt == "csv":
        out.write("experiment,generator,dist,nz,theta0,pre_infidelity,post_infidelity")
        for r in rows:
            out.write(f"inhomogeneity,{args.generator},{args.dist},{args.nz},{r['theta0']:.6g},"
                      f"{r['pre_infidelity']:.6e},{r['post_infidelity']:.6e}")
    else:
        for r in rows:
            out.write(f"theta0={r['theta0']:.6g} pre_infidelity={r['pre_infidelity']:.6e} "
                      f"post_infidelity={r['post_infidelity']:.6e}")
    return EXIT_OK


def cmd_sim(args, out: _Output) -> int:
    # the mirror check is a report, the other experiments are sweeps
    fmt = args.format or ("text" if args.experiment == "mirror" else "csv")
    handler = {"mirror": _sim_mirror, "memory": _sim_memory, "containment": _sim_containment,
               "faultpaths": _sim_faultpaths, "inhomogeneity": _sim_inhomogeneity}[args.experiment]
    return handler(args, out, fmt)


def cmd_resources(args, out: _Output) -> int:
    from .resources import CSV_HEADER, csv_row, params_from_mapping, report, shor_params
    if args.params:
        try:
            data = json.loads(_read(args.params))
            reports = [report(params_from_mapping(data))]
        except (json.JSONDecodeError, ValueError, TypeError) as exc:
            if isinstance(exc, ConcatHarmful):
                raise
            raise UsageError(f"bad params file: {exc}") from None
    else:
        reports = [report(shor_params(int(b))) for b in args.shor_bits.split(",")]
    fmt = args.format or "text"
    if fmt == "csv":
        out.write(CSV_HEADER)
        for r in reports:
            out.write(csv_row(r))
    else:
        for i, r in enumerate(reports):
            if i:
                out.write("")
            if r.params.bits is not None:
                out.write(f"bits={r.params.bits}")
            out.write(r.to_text())
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=parse_seed, default=d(0),
                        help="RNG seed (default 0); 'time' seeds from the clock")
    parser.add_argument("--jobs", type=int, default=d(1), help="worker processes")
    parser.add_argument("--format", choices=("csv", "text"), default=d(None))
    parser.add_argument("--out", default=d(None), help="write the main output here")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holoft", description=__doc__.splitlines()[0])
    _globals(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a program against the addressing rules")
    v.add_argument("file")
    _globals(v, True)

    lo = sub.add_parser("lower", help="expand to a physical gate list, optionally onto 2D lines")
    lo.add_argument("file")
    lo.add_argument("--target", choices=("physical", "2d"), default="physical")
    lo.add_argument("--plane-size", type=int, default=None,
                    help="info sites per plane for physical input")
    _globals(lo, True)

    s = sub.add_parser("sim", help="run an experiment")
    s.add_argument("experiment", choices=("mirror", "memory", "containment", "faultpaths",
                                          "inhomogeneity"))
    s.add_argument("--nz", type=int, default=4)
    s.add_argument("--code", choices=("bs9", "qr3"), default="bs9")
    s.add_argument("--level", type=int, default=1)
    s.add_argument("--p", default="1e-3,2e-3,5e-3,1e-2", help="comma list or a:b:n")
    s.add_argument("--trials", type=int, default=10000)
    s.add_argument("--independent", action="store_true",
                   help="per-qubit depolarizing instead of columnar correlated faults")
    s.add_argument("--reset-state", choices=("mixed", "random_pure", "one"), default="mixed")
    s.add_argument("--planes", type=int, default=2)
    s.add_argument("--exhaustive", action="store_true")
    s.add_argument("--dims", default="1,1,6", help="nx,ny,nz for faultpaths")
    s.add_argument("--generator", choices=("X", "Y", "Z"), default="X")
    s.add_argument("--dist", choices=("constant", "uniform", "linear"), default="constant")
    s.add_argument("--theta", default="0.01,0.02,0.04")
    _globals(s, True)

    r = sub.add_parser("resources", help="control counts and concatenation levels")
    g = r.add_mutually_exclusive_group(required=True)
    g.add_argument("--shor-bits", help="comma list of integer sizes")
    g.add_argument("--params", help="JSON file of ResourceParams fields")
    _globals(r, True)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Output(args.out)
    handler = {"validate": cmd_validate, "lower": cmd_lower, "sim": cmd_sim,
               "resources": cmd_resources}[args.command]
    try:
        code = handler(args, out)
    except (UsageError, ParseError) as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE
    except (Unroutable, ConcatHarmful, InvalidCircuit, HoloError) as exc:
        _note(f"error: {type(exc).__name__}: {exc}")
        out.close()
        return EXIT_FAIL
    except ValueError as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE
    out.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
