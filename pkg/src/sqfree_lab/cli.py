"""Command-line entry point: ``sqfree-lab <subcommand> ...``.

JSON is the canonical output and always carries a manifest (config echo,
version, timings, the constant C used).  CSV outputs embed the manifest as a
leading comment line.  Exit codes: 0 ok, 2 usage, 3 bad input, 4 I/O.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from typing import Any

import numpy as np

from . import __version__
from . import diophantine as dio
from .ap_variance import ap_variance
from .constants import DEFAULT_TRUNCATION, constant_C, constants_summary
from .interval_variance import interval_variance_sweep
from .main_term import sinc_main_term
from .sieve import mobius_segment, write_segment_csv
from .stochastic import KINDS, figure_data, hurst_estimate, path_sample
from .verify import run_all

EXIT_USAGE = 2
EXIT_PRECONDITION = 3
EXIT_IO = 4


@dataclass
class ExperimentConfig:
    subcommand: str
    params: dict[str, Any]
    workers: int = 1
    seed: int | None = None
    output_path: str | None = None
    format: str = "json"


@dataclass
class RunManifest:
    config: dict
    version: str = __version__
    constant_C: float | None = None
    C_truncation: int | None = None
    started_at: str | None = None
    wall_time_s: float | None = None
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self, timestamps: bool = True) -> dict:
        d = asdict(self)
        if not timestamps:
            for k in ("started_at", "wall_time_s", "timings"):
                d.pop(k)
        return d


def _json_default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o)}")


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default)


def parse_sweep(spec: str) -> list[int]:
    """'lo:hi:factor' -> [lo, lo*f, lo*f^2, ...] up to hi."""
    try:
        lo, hi, f = (int(v) for v in spec.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:factor, got {spec!r}")
    if lo < 1 or hi < lo or f < 2:
        raise argparse.ArgumentTypeError("need 1 <= lo <= hi and factor >= 2")
    out = []
    h = lo
    while h <= hi:
        out.append(h)
        h *= f
    return out


def _int_list(spec: str) -> list[int]:
    try:
        return [int(v) for v in spec.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {spec!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--output", "-o", default=None, help="write the result here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--no-timestamps", action="store_true", help="omit wall-clock data (byte-stable output)")

    p = argparse.ArgumentParser(prog="sqfree-lab", description="Squarefree variance laboratory.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("constants", parents=[common], help="C, 6/pi^2, zeta(3/2)",
                       description="Anchor: the variance constant C = zeta(3/2)/pi prod_p (1 - 3/p^2 + 2/p^3).")
    s.add_argument("--truncation", type=int, default=DEFAULT_TRUNCATION, help="largest prime in the Euler product")

    s = sub.add_parser("interval-variance", parents=[common], help="short-interval variance vs C sqrt(H)",
                       description="Anchor: short-interval variance theorem, variance ~ C sqrt(H) for H <= X^(6/11).")
    s.add_argument("--X", type=int, required=True)
    s.add_argument("--H", type=int, default=None)
    s.add_argument("--H-sweep", type=parse_sweep, default=None, help="lo:hi:factor geometric sweep of H")

    s = sub.add_parser("ap-variance", parents=[common], help="variance over residue classes mod a prime",
                       description="Anchor: progression variance theorem, ~ C prod_{p|q}(1+2/p)^-1 sqrt(x/q).")
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--dump-classes", default=None, help="CSV file for (a, count)")

    s = sub.add_parser("main-term", parents=[common], help="sinc double sum vs C sqrt(H)",
                       description="Anchor: sinc main-term lemma, 2H^2 sum mu mu/(d1^2 d2^2) sum S(H l/(d1^2,d2^2))^2 = C sqrt(H) + o.")
    s.add_argument("--H", type=float, required=True)
    s.add_argument("--z", type=float, required=True)
    s.add_argument("--rel-tol", type=float, default=1e-8)

    s = sub.add_parser("cf", parents=[common], help="continued fraction of sqrt(b/a)",
                       description="Anchor: partial-quotient bound 2 sqrt(ab) in the near-multiple counting lemma.")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--max-terms", type=int, default=10_000)

    s = sub.add_parser("count-near", parents=[common], help="count m ~ M with ||m sqrt(b/a)|| <= eta",
                       description="Anchor: near-multiple counting lemma, << eta M + sqrt(eta M)(ab)^(1/4) + 1.")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--M", type=int, required=True)
    s.add_argument("--eta", type=float, required=True)

    s = sub.add_parser("count-form", parents=[common], help="count |a m1^2 - b m2^2| <= b M2^2/T",
                       description="Anchor: binary-form box counting lemma.")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--b", type=int, required=True)
    s.add_argument("--M1", type=int, required=True)
    s.add_argument("--M2", type=int, required=True)
    s.add_argument("--T", type=float, required=True)

    s = sub.add_parser("pell", parents=[common], help="unit-orbit classes of n1 x^2 - n2 y^2 = rhs",
                       description="Anchor: Pell-form class structure, #T_m^+ = #T_1^+.")
    s.add_argument("--n1", type=int, required=True)
    s.add_argument("--n2", type=int, required=True)
    s.add_argument("--rhs", type=int, required=True)
    s.add_argument("--box", type=int, required=True)

    s = sub.add_parser("path", parents=[common], help="normalized partial-sum path (figure data)",
                       description="Anchor: squarefree and prime partial-sum processes (fBm with Hurst 1/4 vs 1/2).")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--x", type=int, required=True)
    s.add_argument("--H", type=int, required=True)
    s.add_argument("--t-max", type=float, default=10.0)
    s.add_argument("--steps", type=int, default=1000)

    s = sub.add_parser("hurst", parents=[common], help="variance-scaling Hurst estimate",
                       description="Anchor: Hurst parameter 1/4 (squarefree) vs 1/2 (primes).")
    s.add_argument("--kind", choices=KINDS, required=True)
    s.add_argument("--X", type=int, required=True)
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--H-values", type=_int_list)
    g.add_argument("--H-sweep", type=parse_sweep)
    s.add_argument("--trials", type=int, default=2000)
    s.add_argument("--seed", type=int, required=True)

    s = sub.add_parser("verify", parents=[common], help="run the property suite",
                       description="Anchor: orthogonality identity, Parseval anchor, CF bound, Pell classes, brute-force equivalences.")

    s = sub.add_parser("mobius", parents=[common], help="dump mu over [lo, hi) as CSV",
                       description="Anchor: mu^2(m) = sum_{n d^2 = m} mu(d) backbone.")
    s.add_argument("--lo", type=int, required=True)
    s.add_argument("--hi", type=int, required=True)
    return p


def _config(args: argparse.Namespace) -> ExperimentConfig:
    skip = {"subcommand", "workers", "output", "format", "no_timestamps", "seed"}
    params = {k: v for k, v in vars(args).items() if k not in skip}
    return ExperimentConfig(
        subcommand=args.subcommand,
        params=params,
        workers=args.workers,
        seed=getattr(args, "seed", None),
        output_path=args.output,
        format=args.format,
    )


def _validate(cfg: ExperimentConfig) -> None:
    if cfg.workers < 1:
        raise ValueError("--workers must be >= 1")
    p = cfg.params
    if cfg.subcommand == "interval-variance" and p["H"] is None and p["H_sweep"] is None:
        raise ValueError("give --H or --H-sweep")
    if cfg.subcommand in ("interval-variance",):
        Hs = p["H_sweep"] or [p["H"]]
        if p["X"] < 2 or any(h < 0 or h > p["X"] for h in Hs):
            raise ValueError("need X >= 2 and 0 <= H <= X")


def _run_subcommand(cfg: ExperimentConfig, timings: dict) -> tuple[Any, list[list] | None, list[str] | None]:
    """Returns (json payload, csv rows, csv header)."""
    p = cfg.params
    sc = cfg.subcommand
    t0 = time.perf_counter()
    rows = header = None
    if sc == "constants":
        result: Any = constants_summary(p["truncation"])
    elif sc == "interval-variance":
        Hs = p["H_sweep"] or [p["H"]]
        reps = interval_variance_sweep(p["X"], Hs, workers=cfg.workers)
        result = [r.to_dict() for r in reps]
        header = ["X", "H", "variance", "predicted", "ratio"]
        rows = [[r.X, r.H, r.variance, r.predicted, r.ratio] for r in reps]
    elif sc == "ap-variance":
        rep = ap_variance(p["x"], p["q"], workers=cfg.workers)
        result = rep.to_dict()
        if p["dump_classes"]:
            with open(p["dump_classes"], "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["a", "count"])
                w.writerows([a, int(c)] for a, c in enumerate(rep.class_counts, start=1))
        header = ["a", "count"]
        rows = [[a, int(c)] for a, c in enumerate(rep.class_counts, start=1)]
    elif sc == "main-term":
        result = sinc_main_term(p["H"], p["z"], p["rel_tol"]).to_dict()
    elif sc == "cf":
        qi = dio.cf_expand(p["a"], p["b"], p["max_terms"])
        result = {"a": qi.a, "b": qi.b, "a0": qi.cf_a0, "preperiod": list(qi.cf_preperiod),
                  "period": list(qi.cf_period), "bound_2_sqrt_ab": 2 * (qi.a * qi.b) ** 0.5}
    elif sc == "count-near":
        c = dio.count_near_multiples(p["a"], p["b"], p["M"], p["eta"])
        bound = dio.lattice_bound(p["a"], p["b"], p["M"], p["eta"])
        result = {"count": c, "bound": bound, "ratio": c / bound}
    elif sc == "count-form":
        c = dio.count_form_box(p["a"], p["b"], p["M1"], p["M2"], p["T"])
        bound = dio.form_box_bound(p["a"], p["b"], p["M1"], p["M2"], p["T"])
        result = {"count": c, "bound": bound, "ratio": c / bound}
    elif sc == "pell":
        result = dio.pell_classes(p["n1"], p["n2"], p["rhs"], p["box"]).to_dict()
    elif sc == "path":
        path = path_sample(p["kind"], p["x"], p["H"], p["t_max"], p["steps"])
        header = ["t", "value"]
        rows = [[t, v] for t, v in zip(path.t_grid.tolist(), path.values.tolist())]
        result = {"kind": path.kind, "x": path.x, "H": path.H, "t": path.t_grid, "values": path.values}
    elif sc == "hurst":
        Hs = p["H_values"] or p["H_sweep"]
        est = hurst_estimate(p["kind"], p["X"], Hs, p["trials"], seed=cfg.seed, workers=cfg.workers)
        result = est.to_dict()
        header = ["H", "variance"]
        rows = [[h, v] for h, v in zip(est.H_values, est.variances)]
    elif sc == "verify":
        checks = run_all()
        result = [asdict(c) for c in checks]
        header = ["check", "passed", "detail"]
        rows = [[c.name, c.passed, c.detail] for c in checks]
    elif sc == "mobius":
        seg = mobius_segment(p["lo"], p["hi"])
        header = ["n", "mu"]
        rows = [[p["lo"] + i, int(v)] for i, v in enumerate(seg.mu)]
        result = {"lo": seg.lo, "hi": seg.hi, "mu": seg.mu}
    else:  # argparse rejects unknown subcommands first
        raise ValueError(sc)
    timings[sc] = time.perf_counter() - t0
    return result, rows, header


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else 0
    started = datetime.now(timezone.utc).isoformat()
    t0 = time.perf_counter()
    cfg = _config(args)
    timings: dict[str, float] = {}
    try:
        _validate(cfg)
        result, rows, header = _run_subcommand(cfg, timings)
    except (ValueError, ArithmeticError) as e:
        print(f"sqfree-lab: error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as e:
        print(f"sqfree-lab: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    C = constant_C(DEFAULT_TRUNCATION)
    manifest = RunManifest(
        config=asdict(cfg),
        constant_C=C.value,
        C_truncation=C.truncation_prime,
        started_at=started,
        wall_time_s=time.perf_counter() - t0,
        timings=timings,
    ).to_dict(timestamps=not args.no_timestamps)

    if cfg.format == "csv" and rows is not None:
        buf = io.StringIO()
        buf.write("# manifest: " + json.dumps(manifest, sort_keys=True, default=_json_default) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = _dumps({"result": result, "manifest": manifest}) + "\n"
    try:
        if cfg.output_path:
            with open(cfg.output_path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        if cfg.subcommand == "verify" and not args.output:
            failed = [c for c in result if not c["passed"]]
            print(f"# verify: {len(result) - len(failed)}/{len(result)} checks passed", file=sys.stderr)
    except OSError as e:
        print(f"sqfree-lab: I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    if cfg.subcommand == "verify" and any(not c["passed"] for c in result):
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
