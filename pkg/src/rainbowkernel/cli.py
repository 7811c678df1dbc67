"""Command-line front end: kernelize, solve, verify, gen, bench."""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import exact
from .errors import InvalidSolution, ParseError, TooLarge
from .graphs import (Tournament, enumerate_induced_p3, enumerate_triangles,
                     is_induced_p3, is_triangle)
from .instances import (GRAPH_PROBLEMS, PACKING_PROBLEMS, PROBLEMS,
                        GeneratorConfig, InstanceSpec, generate_instance,
                        parse_instance, serialize_instance)
from .p3 import kernelize_p3
from .report import BenchRecord, Decided, KernelOutput
from .tournament import kernelize_tournament


def _read_instance(path: str) -> InstanceSpec:
    return parse_instance(Path(path).read_text())


def _kernelize(spec: InstanceSpec, epsilon: float, delta, validate_run: bool):
    if spec.problem in GRAPH_PROBLEMS:
        return kernelize_p3(spec.payload, spec.k, epsilon=epsilon,
                            problem=spec.problem, validate=validate_run)
    return kernelize_tournament(spec.payload, spec.k, delta=delta,
                                problem=spec.problem, validate=validate_run)


def _generator_from_args(args) -> GeneratorConfig:
    return GeneratorConfig(problem=args.problem, family=args.family, n=args.n,
                           k=args.k, planted=args.planted, filler=args.filler,
                           edge_prob=args.edge_prob)


def _load_or_generate(args) -> InstanceSpec:
    if args.input:
        return _read_instance(args.input)
    if not args.family:
        raise SystemExit("either --input or a generator --family is required")
    return generate_instance(_generator_from_args(args), args.seed)


def cmd_kernelize(args) -> int:
    spec = _load_or_generate(args)
    result = _kernelize(spec, args.epsilon, args.delta, not args.no_validate)
    report = result.report
    if isinstance(result, KernelOutput) and args.verify:
        try:
            before = exact.exact_answer(spec, args.oracle_limit)
            kernel_payload = spec.payload.induced(result.kept)
            after = exact.exact_answer(
                InstanceSpec(spec.problem, kernel_payload, spec.k), args.oracle_limit)
            report.equivalent = before == after
        except TooLarge:
            report.equivalent = None
    if args.output and isinstance(result, KernelOutput):
        kernel_payload = spec.payload.induced(result.kept)
        Path(args.output).write_text(
            serialize_instance(InstanceSpec(spec.problem, kernel_payload, spec.k)))
    if args.report:
        Path(args.report).write_text(report.to_json() + "\n")
    else:
        print(report.to_json())
    if isinstance(result, Decided):
        print(f"answer: {'yes' if result.answer else 'no'}")
        return 0
    print(f"kernel_size: {len(result.kept)} (bound {report.bound:g})")
    if report.equivalent is False:
        print("equivalent: false", file=sys.stderr)
        return 1
    if args.verify and report.equivalent:
        print("equivalent: true")
    return 0


def cmd_solve(args) -> int:
    spec = _read_instance(args.input)
    answer = exact.exact_answer(spec, args.oracle_limit)
    if spec.problem == "TPT":
        opt = exact.max_triangle_packing(spec.payload, args.oracle_limit)
    elif spec.problem == "FVST":
        opt = exact.min_fvs_tournament(spec.payload, args.oracle_limit)
    elif spec.problem == "I2PP":
        opt = exact.max_induced_p3_packing(spec.payload, args.oracle_limit)
    else:
        opt = exact.min_p3_hitting_set(spec.payload, args.oracle_limit)
    print(f"problem: {spec.problem}")
    print(f"optimum: {opt.value}")
    print(f"answer: {'yes' if answer else 'no'}")
    if args.witness:
        for item in opt.witness:
            if isinstance(item, tuple):
                print(" ".join(str(v) for v in item))
            else:
                print(item)
    return 0


def _parse_solution(text: str):
    lines = [ln for ln in text.splitlines()]
    if not lines or not lines[0].strip():
        raise ParseError(1, "missing solution header")
    parts = lines[0].split()
    if len(parts) != 3 or parts[0] != "solution" or parts[1] not in ("packing", "hitting"):
        raise ParseError(1, f"expected 'solution <packing|hitting> <count>', got {lines[0]!r}")
    kind, count = parts[1], int(parts[2])
    items = []
    for i in range(count):
        lineno = i + 2
        if lineno > len(lines):
            raise ParseError(len(lines) + 1, f"expected {count} solution lines")
        toks = lines[lineno - 1].split()
        if kind == "packing":
            if len(toks) != 3:
                raise ParseError(lineno, "packing lines carry three vertex ids")
            items.append(tuple(int(x) for x in toks))
        else:
            if len(toks) != 1:
                raise ParseError(lineno, "hitting lines carry one vertex id")
            items.append(int(toks[0]))
    for i in range(count + 2, len(lines) + 1):
        if lines[i - 1].strip():
            raise ParseError(i, f"trailing garbage {lines[i - 1]!r}")
    return kind, items


def _check_solution(spec: InstanceSpec, kind: str, items) -> bool:
    payload = spec.payload
    if kind == "packing":
        used: set[int] = set()
        for tri in items:
            if set(tri) & used:
                return False
            used.update(tri)
            if isinstance(payload, Tournament):
                if not is_triangle(payload, tri):
                    return False
            elif not is_induced_p3(payload, tri):
                return False
        return len(items) >= spec.k
    removed = set(items)
    if len(removed) > spec.k:
        return False
    survivors = [v for v in range(payload.n) if v not in removed]
    if isinstance(payload, Tournament):
        return not enumerate_triangles(payload, survivors)
    return not enumerate_induced_p3(payload, survivors)


def cmd_verify(args) -> int:
    spec = _read_instance(args.input)
    if args.solution:
        kind, items = _parse_solution(Path(args.solution).read_text())
        expected = "packing" if spec.problem in PACKING_PROBLEMS else "hitting"
        if kind != expected:
            print(f"valid: false (need a {expected} for {spec.problem})")
            return 1
        ok = _check_solution(spec, kind, items)
        print(f"valid: {'true' if ok else 'false'}")
        return 0 if ok else 1
    if args.kernel:
        other = _read_instance(args.kernel)
        if other.problem != spec.problem:
            print("equivalent: false (different problems)")
            return 1
        try:
            a = exact.exact_answer(spec, args.oracle_limit)
            b = exact.exact_answer(other, args.oracle_limit)
        except TooLarge as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        ok = a == b
        print(f"equivalent: {'true' if ok else 'false'}")
        return 0 if ok else 1
    raise SystemExit("verify needs --solution or --kernel")


def cmd_gen(args) -> int:
    spec = generate_instance(_generator_from_args(args), args.seed)
    text = serialize_instance(spec)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_bench(args) -> int:
    rows = []
    failures = 0
    for k in range(args.k_min, args.k_max + 1):
        for i in range(args.per_k):
            seed = args.seed + 1000 * k + i
            cfg = GeneratorConfig(problem=args.problem, family=args.family,
                                  n=args.n, k=k, planted=args.planted,
                                  filler=args.filler, edge_prob=args.edge_prob)
            spec = generate_instance(cfg, seed)
            start = time.perf_counter()
            result = _kernelize(spec, args.epsilon, args.delta, not args.no_validate)
            wall = time.perf_counter() - start
            report = result.report
            cases = {"case1": 0, "case2": 0, "matching": 0}
            for rec in report.rounds:
                cases[rec.case] = cases.get(rec.case, 0) + 1
            verified = "skipped"
            if isinstance(result, KernelOutput):
                if report.kernel_size > report.bound + 1e-9:
                    failures += 1
                if args.verify:
                    try:
                        before = exact.exact_answer(spec, args.oracle_limit)
                        after = exact.exact_answer(
                            InstanceSpec(spec.problem,
                                         spec.payload.induced(result.kept), spec.k),
                            args.oracle_limit)
                        verified = "true" if before == after else "false"
                        if verified == "false":
                            failures += 1
                    except TooLarge:
                        verified = "skipped"
            rows.append(BenchRecord(
                instance_id=f"{args.problem}-{args.family}-k{k}-s{seed}",
                problem=args.problem, n=spec.payload.n, k=k, seed=seed,
                status=report.status, kernel_size=report.kernel_size,
                bound=report.bound, rounds=len(report.rounds),
                case1=cases["case1"], case2=cases["case2"],
                matching=cases["matching"], wall_time=round(wall, 6),
                verified=verified))
    out = BenchRecord.csv_header() + "\n" + "".join(r.to_csv_row() + "\n" for r in rows)
    if args.output:
        path = Path(args.output)
        if path.exists():
            with path.open("a") as fh:
                for r in rows:
                    fh.write(r.to_csv_row() + "\n")
        else:
            path.write_text(out)
    else:
        sys.stdout.write(out)
    return 1 if failures else 0


def _add_generator_args(sub, require_family: bool):
    sub.add_argument("--family", choices=("uniform", "gnp", "planted"),
                     required=require_family)
    sub.add_argument("--n", type=int, default=None)
    sub.add_argument("--planted", type=int, default=None)
    sub.add_argument("--filler", type=int, default=0)
    sub.add_argument("--edge-prob", dest="edge_prob", type=float, default=0.5)


def _add_common(sub):
    sub.add_argument("--epsilon", type=float, default=1.0)
    sub.add_argument("--delta", type=float, default=None,
                     help="exponent in (1,2]; omit for the k-dependent choice")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--oracle-limit", dest="oracle_limit", type=int, default=None)
    sub.add_argument("--no-validate", dest="no_validate", action="store_true",
                     help="skip per-round invariant validation")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rainbowkernel",
        description="Kernel preprocessing for TPT, FVST, I2PP and I2PHS")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("kernelize", help="shrink an instance to an equivalent kernel")
    p.add_argument("--input", help="instance file (omit to generate)")
    p.add_argument("--problem", choices=PROBLEMS, default="TPT")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--output", help="kernel instance file")
    p.add_argument("--report", help="report JSON file (default: stdout)")
    p.add_argument("--verify", action="store_true",
                   help="confirm equivalence with the exact solvers")
    _add_generator_args(p, require_family=False)
    _add_common(p)
    p.set_defaults(func=cmd_kernelize)

    p = subs.add_parser("solve", help="run the exact solver on an instance")
    p.add_argument("--input", required=True)
    p.add_argument("--witness", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = subs.add_parser("verify", help="check a solution file or a kernel pair")
    p.add_argument("--input", required=True)
    p.add_argument("--solution")
    p.add_argument("--kernel")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = subs.add_parser("gen", help="write a generated instance")
    p.add_argument("--problem", choices=PROBLEMS, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--output")
    _add_generator_args(p, require_family=True)
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = subs.add_parser("bench", help="sweep k over a generator family")
    p.add_argument("--problem", choices=PROBLEMS, required=True)
    p.add_argument("--k-min", dest="k_min", type=int, default=1)
    p.add_argument("--k-max", dest="k_max", type=int, default=4)
    p.add_argument("--per-k", dest="per_k", type=int, default=5)
    p.add_argument("--output", help="CSV path; appends when the file exists")
    p.add_argument("--verify", action="store_true")
    _add_generator_args(p, require_family=True)
    _add_common(p)
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InvalidSolution, TooLarge, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
