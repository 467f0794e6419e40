"""
Command-line experiment runner.

Subcommands:
  run             sweep dimensions, write one schema=1 CSV + JSON sidecar per N
  verify          run the acceptance battery (fast or full level)
  quantize-dump   dump a quantized map as CSV of re/im parts, row-major
  classical-orbit dump a classical trajectory as CSV (columns q,p)

Configuration for `run` comes from an optional config file (flat key=value
lines, or JSON) overridden by flags; flag wins. Reruns with the same config
and seed produce byte-identical CSV bodies except the wall-time column.

Exit codes: 0 success, 2 incompatible (partition, matrix, N) combination,
3 numerical failure (non-unitary quantization, trace drift).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

CSV_COLUMNS = "t,H,bound_env,bound_dim,bound_saturation,trace_drift,wall_ms"
SCHEMA_LINE = f"# schema=1 columns={CSV_COLUMNS}"

PARTITION_CHOICES = (
    "random", "r_symmetric", "w_symmetric",
    "pseudospin_z", "pseudospin_none", "commutant",
)

DEFAULTS = {
    "matrix": [2, 1, 3, 2],
    "kappa": 0.05,
    "dims": [8],
    "partition": "random",
    "kraus_k": 2,
    "mode": "sector_resolved",
    "steps": 20,
    "seed": 0,
    "log_base": "nats",
    "out": ".",
    "threads": None,
}


class GateError(Exception):
    """Incompatible (partition, matrix, N); message names the violated condition."""


def parse_config_file(path: str) -> dict:
    """Flat `key = value` lines (lists space/comma separated); JSON fallback."""
    text = open(path, encoding="utf-8").read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return json.loads(text)
    cfg = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        cfg[key] = value
    return cfg


def _as_int_list(value) -> list[int]:
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    return [int(tok) for tok in str(value).replace(",", " ").split()]


def resolve_config(args) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        raw = parse_config_file(args.config)
        for key, value in raw.items():
            if key == "matrix":
                cfg["matrix"] = _as_int_list(value)
            elif key in ("dims", "dim"):
                cfg["dims"] = _as_int_list(value)
            elif key in ("kappa",):
                cfg["kappa"] = float(value)
            elif key in ("kraus_k", "kraus"):
                cfg["kraus_k"] = int(value)
            elif key in ("steps", "seed", "threads"):
                cfg[key] = int(value)
            elif key in ("partition", "mode", "log_base", "out"):
                cfg[key] = str(value)
            else:
                raise ValueError(f"unknown config key {key!r}")
    for key, flag in (
        ("matrix", args.matrix), ("dims", args.dim), ("kappa", args.kappa),
        ("partition", args.partition), ("kraus_k", args.kraus),
        ("mode", args.mode), ("steps", args.steps), ("seed", args.seed),
        ("log_base", args.log_base), ("out", args.out), ("threads", args.threads),
    ):
        if flag is not None:
            cfg[key] = flag
    if len(cfg["matrix"]) != 4:
        raise ValueError("matrix needs exactly 4 integers")
    if cfg["partition"] not in PARTITION_CHOICES:
        raise ValueError(f"unknown partition {cfg['partition']!r}")
    if cfg["mode"] not in ("sector_resolved", "direct_sum"):
        raise ValueError(f"unknown mode {cfg['mode']!r}")
    if cfg["log_base"] not in ("nats", "bits"):
        raise ValueError(f"unknown log base {cfg['log_base']!r}")
    if cfg["steps"] < 0 or any(n < 2 for n in cfg["dims"]):
        raise ValueError("steps must be >= 0 and every dim >= 2")
    return cfg


def _build_partition(cfg, n, params, u):
    """Partition + saturation bound for one dimension; raises GateError."""
    from . import bounds as bd
    from . import partitions as pt
    from . import symmetry as sym

    base = "natural" if cfg["log_base"] == "nats" else "two"
    k = cfg["kraus_k"]
    seed = cfg["seed"]
    family = cfg["partition"]
    import numpy as np

    if family == "random":
        part = pt.random_projective(n, k, seed)
        return part, 2 * np.log(n) / (np.log(2) if base == "two" else 1.0), {}

    if family == "r_symmetric":
        s = params.shift_order
        if s < 2:
            raise GateError(f"shift symmetry is trivial for this matrix (s = {s})")
        if n % s != 0:
            raise GateError(f"{s} ∤ {n}")
        dec = sym.charge_decompose(sym.momentum_shift(n, s))
        part = pt.symmetric_partition(dec, k, seed, mode=cfg["mode"])
        bound = bd.abelian_saturation(n, dec.sector_dims, log_base=base)
        return part, bound, {"sector_dims": list(dec.sector_dims), "s": s}

    if family == "w_symmetric":
        if n % 4 != 0:
            raise GateError(f"4 ∤ {n}")
        dec = sym.charge_decompose(sym.inversion(n))
        part = pt.symmetric_partition(dec, k, seed, mode=cfg["mode"])
        bound = bd.abelian_saturation(n, dec.sector_dims, log_base=base)
        return part, bound, {"sector_dims": list(dec.sector_dims)}

    if family in ("pseudospin_z", "pseudospin_none"):
        if n % 2 != 0:
            raise GateError(f"2 ∤ {n}")
        if n % 4 == 0:
            raise GateError(f"4 | {n}: inversion commutes, no pseudospin structure")
        cls = sym.classify_inversion(params, n)
        if cls is not sym.CommutationClass.ANTICOMMUTE:
            raise GateError(f"inversion does not anticommute at N={n} ({cls.value})")
        frame = sym.pseudospin_decompose(u, sym.inversion(n))
        spin_mode = pt.MEASURE_Z if family == "pseudospin_z" else pt.IDENTITY_SPIN
        part = pt.tensor_partition(frame, spin_mode, k, seed)
        bound = bd.pseudospin_saturation(n, spin_mode, log_base=base)
        return part, bound, {"spin_mode": spin_mode}

    # commutant
    s = params.shift_order
    if s < 2:
        raise GateError(f"shift symmetry is trivial for this matrix (s = {s})")
    if n % s != 0:
        raise GateError(f"{s} ∤ {n}")
    if (n // s) % 4 != 0:
        raise GateError(f"4 ∤ M = {n}//{s} = {n // s}")
    alg = sym.shift_inversion_algebra(n, s)
    part = pt.commutant_partition(alg, k, seed)
    report = bd.commutant_saturation(alg, log_base=base)
    return part, report.value, {
        "block_dims": list(alg.block_dims), "s": s,
        "bound_ingredients": report.ingredients,
    }


def _write_csv(path, trace, bound_sat):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(SCHEMA_LINE + "\n")
        fh.write(CSV_COLUMNS + "\n")
        for i in range(len(trace.times)):
            fh.write(
                f"{int(trace.times[i])},{float(trace.entropies[i])!r},"
                f"{float(trace.bound_env[i])!r},{float(trace.bound_dim[i])!r},"
                f"{float(bound_sat)!r},{float(trace.trace_drift[i])!r},"
                f"{float(trace.wall_ms[i])!r}\n"
            )


def _out_paths(cfg, n):
    out = cfg["out"]
    if out.endswith(".csv") and len(cfg["dims"]) == 1:
        return out, out[:-4] + ".meta.json"
    os.makedirs(out, exist_ok=True)
    stem = os.path.join(out, f"trace_N{n}")
    return stem + ".csv", stem + ".meta.json"


def cmd_run(args) -> int:
    import numpy as np

    from . import __version__
    from .classical import CatMapParams
    from .engine import cumulative_afl_trace
    from .errors import NonUnitaryQuantization, TraceDrift
    from .quantize import quantize

    try:
        cfg = resolve_config(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    base = "natural" if cfg["log_base"] == "nats" else "two"
    a11, a12, a21, a22 = cfg["matrix"]
    try:
        params = CatMapParams(a11, a12, a21, a22, kappa=cfg["kappa"])
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    for n in cfg["dims"]:
        try:
            u = quantize(params, n)
            part, bound_sat, provenance = _build_partition(cfg, n, params, u)
        except GateError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        except NonUnitaryQuantization as exc:
            print(f"numerical failure: {exc}", file=sys.stderr)
            return 3
        try:
            trace = cumulative_afl_trace(
                np.eye(n) / n, u, part, cfg["steps"], log_base=base,
            )
        except TraceDrift as exc:
            print(f"numerical failure: {exc}", file=sys.stderr)
            return 3
        csv_path, meta_path = _out_paths(cfg, n)
        _write_csv(csv_path, trace, bound_sat)
        meta = {
            "schema": 1,
            "config": {key: cfg[key] for key in sorted(cfg) if key != "out"},
            "dim": n,
            "partition": {
                "family": part.family,
                "size": part.size,
                "seed": part.seed,
                **provenance,
            },
            "bounds": {
                "saturation": bound_sat,
                "dimensional": float(trace.bound_dim[0]),
            },
            "unitarity_defect": u.unitarity_defect,
            "versions": {
                "python": sys.version.split()[0],
                "numpy": np.__version__,
                "catafl": __version__,
            },
            "threads": {
                "requested": cfg["threads"],
                "omp": os.environ.get("OMP_NUM_THREADS"),
            },
        }
        with open(meta_path, "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"N={n}: wrote {csv_path} (H_final={trace.final_entropy:.4f}, "
              f"saturation bound {bound_sat:.4f})")
    return 0


def cmd_verify(args) -> int:
    from .verify import run_suite

    return 0 if run_suite(args.level) else 1


def cmd_quantize_dump(args) -> int:
    from .classical import CatMapParams
    from .errors import NonUnitaryQuantization
    from .quantize import quantize

    a11, a12, a21, a22 = args.matrix
    try:
        params = CatMapParams(a11, a12, a21, a22, kappa=args.kappa)
        u = quantize(params, args.dim)
    except NonUnitaryQuantization as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(f"# quantized map N={args.dim} matrix={args.matrix} "
                 f"kappa={args.kappa!r}; row-major re,im pairs\n")
        for row in u.matrix:
            fh.write(",".join(f"{float(val.real)!r},{float(val.imag)!r}" for val in row) + "\n")
    print(f"wrote {args.out} (unitarity defect {u.unitarity_defect:.2e})")
    return 0


def cmd_classical_orbit(args) -> int:
    from .classical import CatMapParams, TorusPoint, perturbed_step

    a11, a12, a21, a22 = args.matrix
    try:
        params = CatMapParams(a11, a12, a21, a22, kappa=args.kappa)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    x = TorusPoint(args.point[0], args.point[1])
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("q,p\n")
        fh.write(f"{x.q!r},{x.p!r}\n")
        for _ in range(args.steps):
            x = perturbed_step(x, params)
            fh.write(f"{x.q!r},{x.p!r}\n")
    print(f"wrote {args.out} ({args.steps} steps)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="catafl",
        description="Entropy-exchange experiments on quantized perturbed cat maps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment sweep and write CSVs")
    run.add_argument("--config", help="key=value or JSON config file")
    run.add_argument("--matrix", type=int, nargs=4, metavar=("A11", "A12", "A21", "A22"))
    run.add_argument("--kappa", type=float)
    run.add_argument("--dim", type=int, nargs="+", help="one or more dimensions N")
    run.add_argument("--partition", choices=PARTITION_CHOICES)
    run.add_argument("--kraus", type=int, help="cells per (sub)partition K")
    run.add_argument("--mode", choices=("sector_resolved", "direct_sum"))
    run.add_argument("--steps", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--log-base", choices=("nats", "bits"), dest="log_base")
    run.add_argument("--out", help="output directory (or .csv path for a single N)")
    run.add_argument("--threads", type=int)
    run.set_defaults(func=cmd_run)

    ver = sub.add_parser("verify", help="run the acceptance battery")
    ver.add_argument("--level", choices=("fast", "full"), default="fast")
    ver.set_defaults(func=cmd_verify)

    qd = sub.add_parser("quantize-dump", help="dump a quantized map to CSV")
    qd.add_argument("--matrix", type=int, nargs=4, required=True)
    qd.add_argument("--kappa", type=float, default=0.05)
    qd.add_argument("--dim", type=int, required=True)
    qd.add_argument("--out", required=True)
    qd.set_defaults(func=cmd_quantize_dump)

    co = sub.add_parser("classical-orbit", help="dump a classical trajectory to CSV")
    co.add_argument("--matrix", type=int, nargs=4, required=True)
    co.add_argument("--kappa", type=float, default=0.05)
    co.add_argument("--point", type=float, nargs=2, default=(0.1, 0.2), metavar=("Q", "P"))
    co.add_argument("--steps", type=int, default=50)
    co.add_argument("--out", required=True)
    co.set_defaults(func=cmd_classical_orbit)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    threads = getattr(args, "threads", None)
    if threads:
        # effective only if numpy is not yet imported in this process
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, str(threads))
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
