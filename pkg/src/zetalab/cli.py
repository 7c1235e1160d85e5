"""Command line front end.

Every subcommand writes CSV and JSON outputs plus a run manifest into the
--out directory.  All randomness flows from a single --seed (drawn from
entropy and recorded when absent); --threads changes wall time only, never
output bytes.  Exit codes: 0 success, 1 usage error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import secrets
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, distribution, hunter, moments, randmodel
from . import characters as chars
from .numkit import EXP_GAMMA, MomentSpec, constant_C, dz_prime_power, mertens_product, primes_upto


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


@dataclass
class RunManifest:
    subcommand: str
    parameters: dict
    master_seed: int
    version: str
    started: str
    finished: str = ""
    outputs: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def write_json(path: Path, obj):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="ascii")


def parse_grid(text: str) -> np.ndarray:
    """Grid syntax start:stop:step (inclusive stop), or a single value."""
    parts = text.split(":")
    if len(parts) == 1:
        return np.array([float(parts[0])])
    if len(parts) != 3:
        raise ValueError(f"bad grid {text!r}; expected start:stop:step")
    start, stop, step = (float(p) for p in parts)
    if step <= 0 or stop < start:
        raise ValueError(f"bad grid {text!r}; need step > 0 and stop >= start")
    n = int(math.floor((stop - start) / step + 1e-9))
    return start + step * np.arange(n + 1)


def _finish(manifest: RunManifest, out_dir: Path, paths: list[Path]) -> None:
    manifest.outputs = [str(p) for p in paths]
    manifest.finished = _now()
    mpath = out_dir / f"{manifest.subcommand.replace('-', '_')}_manifest.json"
    write_json(mpath, asdict(manifest))


def _dist_outputs(est, name, out_dir, manifest):
    csv_path = out_dir / f"{name}.csv"
    write_csv(csv_path, distribution.CSV_HEADER, est.csv_rows())
    json_path = out_dir / f"{name}.json"
    write_json(json_path, {"meta": est.meta, "n_samples": est.n_samples, "provenance": est.provenance})
    _finish(manifest, out_dir, [csv_path, json_path])


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_constant_c(args, out_dir, manifest):
    value = constant_C(args.tol)
    csv_path = out_dir / "constant_c.csv"
    write_csv(csv_path, ("name", "value", "tolerance"), [("C", value, args.tol)])
    json_path = out_dir / "constant_c.json"
    write_json(json_path, {"C": value, "tolerance": args.tol})
    _finish(manifest, out_dir, [csv_path, json_path])
    print(json.dumps({"C": value}))


def _cmd_local_factors(args, out_dir, manifest):
    spec = MomentSpec(k=args.k, delta=args.delta, y=args.y)
    rows = []
    for p in primes_upto(min(args.pmax, args.y)):
        lf = moments.local_factor(int(p), spec)
        b = moments.local_factor_bounds(int(p), spec)
        rows.append((int(p), lf.series_value, lf.quadrature_value, b.lower, b.upper, int(b.holds)))
    csv_path = out_dir / "local_factors.csv"
    write_csv(csv_path, ("p", "series", "quadrature", "lower", "upper", "holds"), rows)
    json_path = out_dir / "local_factors.json"
    write_json(json_path, {"k": args.k, "delta": args.delta, "y": args.y, "count": len(rows)})
    _finish(manifest, out_dir, [csv_path, json_path])


def _cmd_moments(args, out_dir, manifest):
    spec = MomentSpec(k=args.k, delta=args.delta, y=args.y)
    result: dict = {"k": args.k, "delta": args.delta, "y": args.y, "what": args.what}
    if args.what == "restricted-sum":
        result["log_value"] = moments.log_restricted_sum(spec)
        result["value"] = math.exp(result["log_value"]) if result["log_value"] < 700 else None
    elif args.what == "main-term":
        result["log_value"] = moments.log_moment_main_term(spec)
        result["value"] = math.exp(result["log_value"]) if result["log_value"] < 700 else None
    elif args.what == "discrepancy":
        result["value"] = moments.moment_discrepancy(spec)
        result["bound_shape"] = args.k / args.y + 1.0 / math.log(args.k)
    else:  # time-average
        est = moments.time_average_moment(spec, args.T, args.n, manifest.master_seed, args.threads)
        result.update({"value": est.value, "stderr": est.stderr, "n": est.n, "T": args.T})
    csv_path = out_dir / "moments.csv"
    keys = sorted(k for k, v in result.items() if v is not None)
    write_csv(csv_path, keys, [tuple(result[k] for k in keys)])
    json_path = out_dir / "moments.json"
    write_json(json_path, result)
    _finish(manifest, out_dir, [csv_path, json_path])
    print(json.dumps(result))


def _cmd_model_sample(args, out_dir, manifest):
    sample = randmodel.sample_L1X(args.y, manifest.master_seed, args.index)
    csv_path = out_dir / "model_sample.csv"
    write_csv(csv_path, ("p", "theta"), sorted(sample.angles.items()))
    json_path = out_dir / "model_sample.json"
    write_json(
        json_path,
        {
            "y": args.y,
            "index": args.index,
            "value_re": sample.value.real,
            "value_im": sample.value.imag,
            "abs": abs(sample.value),
        },
    )
    _finish(manifest, out_dir, [csv_path, json_path])


def _cmd_model_dist(args, out_dir, manifest):
    grid = parse_grid(args.tau)
    est = randmodel.model_distribution(grid, args.y, args.n, manifest.master_seed, args.threads)
    manifest.constants["C"] = constant_C()
    _dist_outputs(est, "model_dist", out_dir, manifest)


def _cmd_zeta_dist(args, out_dir, manifest):
    grid = parse_grid(args.tau)
    y = args.y if args.y is not None else distribution.default_product_cutoff(args.T)
    est = distribution.empirical_phi(args.T, grid, y, args.n, manifest.master_seed, args.threads)
    manifest.constants["C"] = constant_C()
    _dist_outputs(est, "zeta_dist", out_dir, manifest)


def _cmd_predict(args, out_dir, manifest):
    grid = parse_grid(args.tau)
    rows = [(float(tau), distribution.predict_phi(float(tau))) for tau in grid]
    csv_path = out_dir / "predict.csv"
    write_csv(csv_path, ("tau", "phi_pred"), rows)
    payload = {"C": constant_C(), "curve": {"tau": [r[0] for r in rows], "phi_pred": [r[1] for r in rows]}}
    if args.T is not None:
        payload["T"] = args.T
        payload["predicted_max_zeta"] = distribution.predicted_max(args.T, "zeta")
        payload["predicted_max_reciprocal"] = distribution.predicted_max(args.T, "reciprocal")
        payload["levinson_baseline"] = distribution.levinson_baseline(args.T)
    json_path = out_dir / "predict.json"
    write_json(json_path, payload)
    manifest.constants["C"] = constant_C()
    _finish(manifest, out_dir, [csv_path, json_path])
    print(json.dumps(payload if len(rows) > 1 else {"tau": rows[0][0], "phi_pred": rows[0][1]}))


def _cmd_hunt(args, out_dir, manifest):
    config = hunter.HuntConfig(
        T=args.T,
        B=args.B,
        y=args.y,
        delta=args.delta,
        m_max=args.m_max,
        L=args.L,
        P_max=args.P_max,
        start_mode=args.mode,
    )
    result = hunter.hunt(config, args.starts, manifest.master_seed)
    csv_path = out_dir / "hunt.csv"
    write_csv(
        csv_path,
        ("t0", "m", "n", "t", "zeta_abs", "score", "max_frac_part"),
        [(c.t0, c.m, c.n, c.t, c.zeta_abs, c.score, c.max_frac_part) for c in result.candidates],
    )
    json_path = out_dir / "hunt.json"
    write_json(
        json_path,
        {
            "config": {k: v for k, v in vars(config).items()},
            "meta": result.meta,
            "levinson_baseline": distribution.levinson_baseline(args.T),
            "predicted_max": distribution.predicted_max(args.T, "zeta"),
            "skipped": [asdict(s) for s in result.skipped],
            "best_score": result.candidates[0].score if result.candidates else None,
        },
    )
    manifest.constants["C"] = constant_C()
    _finish(manifest, out_dir, [csv_path, json_path])


def _cmd_char_build(args, out_dir, manifest):
    table = chars.build_table(args.q)
    csv_path = out_dir / "char_table.csv"
    write_csv(csv_path, ("n", "ind"), [(n, int(table.ind[n])) for n in range(1, args.q)])
    json_path = out_dir / "char_table.json"
    write_json(json_path, {"q": args.q, "g": table.g, "order": table.order})
    _finish(manifest, out_dir, [csv_path, json_path])


def _cmd_char_dist(args, out_dir, manifest):
    table = chars.build_table(args.q)
    grid = parse_grid(args.tau)
    est = chars.char_distribution(table, grid, method=args.method, y=args.y)
    manifest.constants["C"] = constant_C()
    _dist_outputs(est, "char_dist", out_dir, manifest)


def _cmd_char_hunt(args, out_dir, manifest):
    table = chars.build_table(args.q)
    result = chars.char_hunt(table, args.A)
    csv_path = out_dir / "char_hunt.csv"
    write_csv(csv_path, ("j", "abs_L"), result.top)
    json_path = out_dir / "char_hunt.json"
    write_json(
        json_path,
        {
            "q": args.q,
            "A": args.A,
            "count": result.count,
            "threshold": result.threshold,
            "q_power_bound": result.q_power_bound,
            "ratio": result.ratio,
        },
    )
    _finish(manifest, out_dir, [csv_path, json_path])
    print(json.dumps({"count": result.count, "threshold": result.threshold, "ratio": result.ratio}))


def _cmd_char_dyadic(args, out_dir, manifest):
    spec = MomentSpec(k=args.k, delta=args.delta, y=args.y)
    value = chars.dyadic_moment(args.Q, spec)
    main_term = moments.moment_main_term(MomentSpec(k=args.k, delta=args.delta, y=args.y)) if args.k >= 2 else None
    payload = {"Q": args.Q, "k": args.k, "delta": args.delta, "y": args.y, "value": value, "main_term": main_term}
    csv_path = out_dir / "char_dyadic_moment.csv"
    write_csv(csv_path, ("Q", "k", "delta", "y", "value"), [(args.Q, args.k, args.delta, args.y, value)])
    json_path = out_dir / "char_dyadic_moment.json"
    write_json(json_path, payload)
    _finish(manifest, out_dir, [csv_path, json_path])
    print(json.dumps(payload))


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="zetalab", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None, help="master seed; drawn from entropy if absent")
        p.add_argument("--threads", type=int, default=1, help="worker cap; output is independent of it")
        p.add_argument("--out", type=str, default=".", help="output directory")

    p = sub.add_parser("constant-c", help="the growth constant C")
    p.add_argument("--tol", type=float, default=1e-10)
    common(p)
    p.set_defaults(handler=_cmd_constant_c)

    p = sub.add_parser("local-factors", help="per-prime moment factors with sandwich bounds")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=int, choices=(1, -1), default=1)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--pmax", type=float, default=100.0)
    common(p)
    p.set_defaults(handler=_cmd_local_factors)

    p = sub.add_parser("moments", help="restricted sums, main terms, discrepancies, time averages")
    p.add_argument("--what", choices=("restricted-sum", "main-term", "discrepancy", "time-average"), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=int, choices=(1, -1), default=1)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--T", type=float, default=1e6)
    p.add_argument("--n", type=int, default=10**5)
    common(p)
    p.set_defaults(handler=_cmd_moments)

    p = sub.add_parser("model-sample", help="one draw of the random Euler product")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--index", type=int, default=0)
    common(p)
    p.set_defaults(handler=_cmd_model_sample)

    p = sub.add_parser("model-dist", help="Monte Carlo tails of the random model")
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=str, required=True, help="grid start:stop:step or a single value")
    common(p)
    p.set_defaults(handler=_cmd_model_dist)

    p = sub.add_parser("zeta-dist", help="empirical tails of the short product over [T, 2T]")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--y", type=float, default=None, help="defaults to e^2 log T")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tau", type=str, required=True)
    common(p)
    p.set_defaults(handler=_cmd_zeta_dist)

    p = sub.add_parser("predict", help="predicted tail curve and extreme sizes")
    p.add_argument("--tau", type=str, required=True)
    p.add_argument("--T", type=float, default=None)
    common(p)
    p.set_defaults(handler=_cmd_predict)

    p = sub.add_parser("hunt", help="constructive search for large |zeta(1+it)|")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--B", type=float, default=5.0)
    p.add_argument("--y", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--m-max", dest="m_max", type=int, default=10**6)
    p.add_argument("--L", type=int, default=None)
    p.add_argument("--P-max", dest="P_max", type=float, default=1e6)
    p.add_argument("--mode", choices=("random", "grid"), default="random")
    p.add_argument("--starts", type=int, default=100)
    common(p)
    p.set_defaults(handler=_cmd_hunt)

    p = sub.add_parser("char-build", help="character index table mod a prime")
    p.add_argument("--q", type=int, required=True)
    common(p)
    p.set_defaults(handler=_cmd_char_build)

    p = sub.add_parser("char-dist", help="tail proportions of |L(1,chi)| over all characters")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--tau", type=str, required=True)
    p.add_argument("--method", choices=("exact", "euler"), default="exact")
    p.add_argument("--y", type=float, default=None)
    common(p)
    p.set_defaults(handler=_cmd_char_dist)

    p = sub.add_parser("char-hunt", help="exhaustive scan for extreme |L(1,chi)|")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--A", type=float, default=10.0)
    common(p)
    p.set_defaults(handler=_cmd_char_hunt)

    p = sub.add_parser("char-dyadic-moment", help="character-average moment over a dyadic prime range")
    p.add_argument("--Q", type=float, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--delta", type=int, choices=(1, -1), default=1)
    p.add_argument("--y", type=float, required=True)
    common(p)
    p.set_defaults(handler=_cmd_char_dyadic)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    seed = args.seed if args.seed is not None else secrets.randbits(62)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    params = {k: v for k, v in vars(args).items() if k not in ("handler", "seed", "out") and v is not None}
    manifest = RunManifest(
        subcommand=args.subcommand,
        parameters={k: (v if not isinstance(v, float) or math.isfinite(v) else str(v)) for k, v in params.items()},
        master_seed=seed,
        version=__version__,
        started=_now(),
    )
    try:
        args.handler(args, out_dir, manifest)
    except ValueError as exc:
        print(f"zetalab {args.subcommand}: error: {exc}", file=sys.stderr)
        return 1
    except (RuntimeError, OverflowError, FloatingPointError) as exc:
        print(f"zetalab {args.subcommand}: numeric failure: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
