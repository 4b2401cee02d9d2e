"""``graphfair`` command line: solve, check, gen, bench.

Exit codes: 0 success, 2 unreadable input or bad arguments, 3 an
algorithm's precondition does not hold for the instance.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import sys
import time
from fractions import Fraction
from typing import Callable

from . import ef1, mms
from .core import (
    Allocation,
    Instance,
    allocation_from_dict,
    allocation_to_dict,
    as_weight,
    dumps_instance,
    format_weight,
    instance_from_dict,
    social_welfare,
    utility,
)
from .generators import FAMILIES, FamilySpec, GateError
from .oracle import InstanceTooLargeError, exact_mms, max_social_welfare_matching

log = logging.getLogger("graphfair")

EXIT_INPUT = 2
EXIT_PRECONDITION = 3


class PreconditionError(Exception):
    pass


def _require(ok: bool, message: str) -> None:
    if not ok:
        raise PreconditionError(message)


def _needs_homogeneous(inst: Instance) -> None:
    _require(inst.homogeneous, "instance must be homogeneous (identical agents)")


def _needs_two(inst: Instance) -> None:
    _require(inst.n == 2, f"algorithm needs exactly 2 agents, instance has {inst.n}")


def _pre_mms(inst: Instance) -> None:
    _needs_homogeneous(inst)
    _require(
        all(w == 0 or w >= 1 for w in inst.profiles[0]),
        "every positive edge weight must be at least 1",
    )


def _pre_maxmin(inst: Instance) -> None:
    _needs_two(inst)
    _needs_homogeneous(inst)


def _pre_binary(inst: Instance) -> None:
    _require(inst.is_binary, "every edge weight must be 0 or 1")


def _run_envy_cycle(inst: Instance):
    start = Allocation.empty(inst.n, inst.graph.vertex_count)
    return ef1.envy_cycle_elimination(inst, start), None


ALGORITHMS: dict[str, tuple[Callable[[Instance], None], Callable]] = {
    "mms-n": (_pre_mms, mms.alg1_mms_homogeneous),
    "maxmin-2": (_pre_maxmin, mms.alg2_maxmin_two),
    "ef1-het": (lambda inst: None, ef1.alg3_ef1_heterogeneous_traced),
    "ef1-bin": (_pre_binary, ef1.alg4_ef1_binary_traced),
    "ef1-2": (_needs_two, ef1.alg5_ef1_two_traced),
    "ef1-hom": (_needs_homogeneous, ef1.alg6_ef1_homogeneous_traced),
    "envy-cycle": (lambda inst: None, _run_envy_cycle),
}


# -- serialization ---------------------------------------------------------------


def to_jsonable(obj):
    """Convert traces and results to JSON types; rationals become strings."""
    if isinstance(obj, Fraction):
        return format_weight(obj)
    if isinstance(obj, Allocation):
        return allocation_to_dict(obj)
    if isinstance(obj, Instance):
        return None
    if isinstance(obj, (frozenset, set)):
        return sorted(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: to_jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
            if not isinstance(getattr(obj, f.name), Instance)
        }
    if isinstance(obj, dict):
        return {
            (",".join(map(str, k)) if isinstance(k, tuple) else str(k)): to_jsonable(v)
            for k, v in obj.items()
        }
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return obj


def _ratio(num: Fraction, den: Fraction) -> Fraction:
    # 0/0 counts as fully satisfied.
    if den == 0:
        return Fraction(1)
    return Fraction(num) / den


def mms_ratio(instance: Instance, allocation: Allocation) -> Fraction | None:
    """``min_i u_i(X_i) / MMS_i``, or None when the oracle size guard trips."""
    try:
        shares = [exact_mms(instance, i) for i in range(instance.n)]
    except InstanceTooLargeError:
        return None
    return min(
        _ratio(utility(instance, i, b), s)
        for i, (b, s) in enumerate(zip(allocation.bundles, shares))
    )


@dataclasses.dataclass
class RunReport:
    algorithm: str
    utilities: list[Fraction]
    welfare: Fraction
    sw_star: Fraction
    welfare_ratio: Fraction
    ef1: bool
    mms_ratio: Fraction | None
    wall_time: float
    allocation: Allocation
    trace: object = None

    def to_dict(self, with_float: bool = False) -> dict:
        out = to_jsonable(self)
        if with_float:
            out["float_non_authoritative"] = {
                "welfare": float(self.welfare),
                "sw_star": float(self.sw_star),
                "welfare_ratio": float(self.welfare_ratio),
                "mms_ratio": None if self.mms_ratio is None else float(self.mms_ratio),
            }
        return out


def solve(instance: Instance, algorithm: str, with_trace: bool = False) -> RunReport:
    precondition, run = ALGORITHMS[algorithm]
    precondition(instance)
    t0 = time.perf_counter()
    allocation, trace = run(instance)
    elapsed = time.perf_counter() - t0
    allocation.validate(instance)
    utils = [utility(instance, i, b) for i, b in enumerate(allocation.bundles)]
    welfare = sum(utils, Fraction(0))
    sw = max_social_welfare_matching(instance)
    return RunReport(
        algorithm=algorithm,
        utilities=utils,
        welfare=welfare,
        sw_star=sw,
        welfare_ratio=_ratio(welfare, sw),
        ef1=ef1.is_ef1(instance, allocation).holds,
        mms_ratio=mms_ratio(instance, allocation) if instance.homogeneous else None,
        wall_time=elapsed,
        allocation=allocation,
        trace=trace if with_trace else None,
    )


# -- subcommands ------------------------------------------------------------------


def _read_json(path: str) -> dict:
    with (sys.stdin if path == "-" else open(path)) as fh:
        return json.load(fh)


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_instance(path: str) -> Instance:
    return instance_from_dict(_read_json(path))


def cmd_solve(args) -> int:
    inst = _load_instance(args.input)
    report = solve(inst, args.alg, with_trace=args.trace)
    _emit(json.dumps(report.to_dict(args.float), indent=2) + "\n", args.out)
    return 0


def check_property(instance: Instance, allocation: Allocation, prop: str) -> dict:
    if allocation.n != instance.n:
        raise ValueError(f"allocation has {allocation.n} bundles, instance has {instance.n} agents")
    allocation.validate(instance)
    if prop == "ef1":
        return ef1.is_ef1(instance, allocation).to_dict()
    if prop == "mms-ratio":
        r = mms_ratio(instance, allocation)
        return {"property": prop, "value": None if r is None else format_weight(r)}
    welfare = social_welfare(instance, allocation)
    sw = max_social_welfare_matching(instance)
    return {
        "property": prop,
        "welfare": format_weight(welfare),
        "sw_star": format_weight(sw),
        "value": format_weight(_ratio(welfare, sw)),
    }


def cmd_check(args) -> int:
    inst = _load_instance(args.input)
    data = _read_json(args.alloc)
    # accept a bare allocation or a full ``solve`` report
    if isinstance(data, dict) and "allocation" in data:
        data = data["allocation"]
    alloc = allocation_from_dict(data)
    verdict = check_property(inst, alloc, args.property)
    _emit(json.dumps(verdict, indent=2) + "\n", args.out)
    return 0


def _family_params(args) -> dict:
    params = {
        "n": args.n,
        "k": args.k,
        "eps": None if args.eps is None else as_weight(args.eps),
        "delta": None if args.delta is None else as_weight(args.delta),
        "vertices": args.vertices,
        "edge_prob": args.edge_prob,
        "binary": args.binary,
        "homogeneous": args.homogeneous,
        "seed": args.seed,
    }
    if args.weight_range:
        lo, hi = args.weight_range.split(":")
        params["weight_range"] = (as_weight(lo), as_weight(hi))
    return {k: v for k, v in params.items() if v is not None}


def cmd_gen(args) -> int:
    inst = FamilySpec(args.family, _family_params(args)).build()
    _emit(dumps_instance(inst) + "\n", args.out)
    return 0


BENCH_COLUMNS = ["seed", "algorithm", "welfare_ratio", "mms_ratio", "ef1", "runtime_s"]


def bench_rows(family: str, params: dict, algorithms: list[str], trials: int, seed: int):
    rows = []
    for t in range(trials):
        s = seed + t
        inst = FamilySpec(family, {**params, "seed": s}).build()
        for alg in algorithms:
            rep = solve(inst, alg)
            rows.append({
                "seed": s,
                "algorithm": alg,
                "welfare_ratio": rep.welfare_ratio,
                "mms_ratio": rep.mms_ratio,
                "ef1": rep.ef1,
                "runtime_s": rep.wall_time,
            })
    rows.sort(key=lambda r: (r["seed"], r["algorithm"]))
    return rows


def cmd_bench(args) -> int:
    algorithms = args.alg or ["ef1-het"]
    params = _family_params(args)
    params.pop("seed", None)
    params.setdefault("n", 2)
    params.setdefault("vertices", 8)
    rows = bench_rows(args.family, params, algorithms, args.trials, args.seed)
    columns = BENCH_COLUMNS + (["welfare_ratio_float"] if args.float else [])
    out = sys.stdout if not args.out or args.out == "-" else open(args.out, "w", newline="")
    try:
        w = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        for r in rows:
            line = {
                **r,
                "welfare_ratio": format_weight(r["welfare_ratio"]),
                "mms_ratio": "" if r["mms_ratio"] is None else format_weight(r["mms_ratio"]),
                "ef1": str(r["ef1"]).lower(),
                "runtime_s": f"{r['runtime_s']:.6f}",
            }
            if args.float:
                line["welfare_ratio_float"] = f"{float(r['welfare_ratio']):.6f}"
            w.writerow(line)
        for alg in algorithms:
            mine = [r for r in rows if r["algorithm"] == alg]
            if not mine:
                continue
            mms_vals = [r["mms_ratio"] for r in mine if r["mms_ratio"] is not None]
            line = {
                "seed": "summary",
                "algorithm": alg,
                "welfare_ratio": format_weight(min(r["welfare_ratio"] for r in mine)),
                "mms_ratio": format_weight(min(mms_vals)) if mms_vals else "",
                "ef1": str(all(r["ef1"] for r in mine)).lower(),
                "runtime_s": f"{sum(r['runtime_s'] for r in mine):.6f}",
            }
            if args.float:
                line["welfare_ratio_float"] = f"{float(min(r['welfare_ratio'] for r in mine)):.6f}"
            w.writerow(line)
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


# -- parser -------------------------------------------------------------------------


def _add_family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=FAMILIES, default="random")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--eps", help="rational, e.g. 1/9")
    p.add_argument("--delta", help="rational heavy-edge weight")
    p.add_argument("--vertices", type=int)
    p.add_argument("--edge-prob", type=float)
    p.add_argument("--weight-range", help="lo:hi, rationals")
    p.add_argument("--binary", action="store_true", default=None)
    p.add_argument("--homogeneous", action="store_true", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphfair", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run an allocation algorithm on an instance")
    p.add_argument("--alg", choices=sorted(ALGORITHMS), required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--float", action="store_true", help="add non-authoritative float fields")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", help="check a property of an allocation")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--alloc", required=True)
    p.add_argument("--property", choices=["ef1", "mms-ratio", "welfare-ratio"], required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="generate an instance")
    _add_family_args(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="ratio table over seeded trials (CSV)")
    _add_family_args(p)
    p.add_argument("--alg", choices=sorted(ALGORITHMS), action="append")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--float", action="store_true", help="add a non-authoritative float column")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except PreconditionError as exc:
        print(f"graphfair: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (OSError, json.JSONDecodeError, ValueError, TypeError, GateError) as exc:
        print(f"graphfair: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
